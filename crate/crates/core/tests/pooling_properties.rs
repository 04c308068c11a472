mod common;

use common::{coherent, gap, profile};
use credpool::fixing::fix_gkl;
use credpool::pooling::{agg_d1, geometric_pool, geometric_pool_unnormalized, linear_pool};
use credpool::{Agenda, Credence, Generator, Profile, WeightVector};
use proptest::prelude::*;

fn perturb_except(p: &Profile, keep: usize, shift: f64) -> Profile {
    p.try_map(|c| {
        let v = c.iter().enumerate().map(|(j, &x)| if j == keep { x } else { (x + shift).fract() }).collect();
        Credence::new(v)
    })
    .unwrap()
}

proptest! {
    #[test]
    fn pools_are_proposition_wise(p in profile(false, 1e-3), shift in 0.1f64..0.9) {
        for keep in 0..p.agenda().num_propositions() {
            let q = perturb_except(&p, keep, shift);
            prop_assert_eq!(linear_pool(&p)[keep], linear_pool(&q)[keep]);
            prop_assert_eq!(geometric_pool_unnormalized(&p)[keep], geometric_pool_unnormalized(&q)[keep]);
        }
    }

    #[test]
    fn unanimous_profiles_pool_to_the_shared_credence(
        c in (2usize..=4).prop_flat_map(coherent),
        n in 1usize..=3,
    ) {
        let p = Profile::from_credences(Agenda::partition(c.len()), vec![c.clone(); n], WeightVector::uniform(n))
            .unwrap();
        prop_assert!(gap(&linear_pool(&p), &c) <= 1e-12);
        prop_assert!(gap(&geometric_pool(&p).unwrap(), &c) <= 1e-12);
        prop_assert!(gap(&geometric_pool_unnormalized(&p), &c) <= 1e-12);
    }

    #[test]
    fn zero_weight_agents_are_ignored(
        (p, extra) in profile(false, 1e-3)
            .prop_flat_map(|p| { let m = p.agenda().num_propositions(); (Just(p), common::credence(m, 0.0)) })
    ) {
        let mut creds: Vec<Credence> = p.credences().cloned().collect();
        creds.push(extra);
        let mut w = p.weights().values().to_vec();
        w.push(0.0);
        let q = Profile::from_credences(p.agenda().clone(), creds, WeightVector::new(w).unwrap()).unwrap();
        prop_assert!(gap(&linear_pool(&p), &linear_pool(&q)) <= 1e-15);
        prop_assert_eq!(geometric_pool_unnormalized(&p), geometric_pool_unnormalized(&q));
        prop_assert_eq!(geometric_pool(&p).unwrap(), geometric_pool(&q).unwrap());
        for gen in common::builtins() {
            prop_assert!(gap(&agg_d1(&gen, &p).unwrap(), &agg_d1(&gen, &q).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn normalized_geometric_pool_is_kl_fixed_unnormalized_pool(p in profile(false, 1e-3)) {
        let direct = geometric_pool(&p).unwrap();
        let via_fix = fix_gkl(p.agenda(), &geometric_pool_unnormalized(&p)).unwrap();
        prop_assert!(gap(&direct, &via_fix) <= 1e-10);
    }

    #[test]
    fn shifted_euclidean_aggregate_is_the_linear_pool(p in profile(false, 0.0)) {
        let gen = Generator::affine_shifted(Generator::Sed, 0.7, -0.2);
        prop_assert!(gap(&agg_d1(&gen, &p).unwrap(), &linear_pool(&p)) <= 1e-9);
    }
}

#[test]
fn cubic_aggregate_is_neither_linear_nor_geometric() {
    let p = Profile::from_credences(
        Agenda::partition(2),
        vec![Credence::new(vec![0.5, 0.1]).unwrap(), Credence::new(vec![0.2, 0.6]).unwrap()],
        WeightVector::new(vec![0.4, 0.6]).unwrap(),
    )
    .unwrap();
    let a = agg_d1(&Generator::Power(3.0), &p).unwrap();
    assert!(gap(&a, &linear_pool(&p)) > 1e-4);
    assert!(gap(&a, &geometric_pool_unnormalized(&p)) > 1e-4);
}
