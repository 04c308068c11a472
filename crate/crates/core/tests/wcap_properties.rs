mod common;

use common::{builtins, gap, profile};
use credpool::fixing::{fix_d1, fix_d2, fix_gkl, fix_sed};
use credpool::pooling::{agg_d1, agg_d2, geometric_pool, linear_pool};
use credpool::theoremlab::certify::{amira_benito, in_shift_regime};
use credpool::theoremlab::random_general_profile;
use credpool::wcap::{pool_on_worlds, wcap_d1, wcap_d2, wcap_general, WorldPool};
use credpool::{Direction, Generator, Profile};
use proptest::prelude::*;

fn fixed(p: &Profile, f: impl Fn(&credpool::Credence) -> credpool::Result<credpool::Credence>) -> Profile {
    p.try_map(|c| f(c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn approximation_is_fix_after_aggregate(p in profile(false, 1e-3)) {
        for gen in builtins() {
            let w = wcap_d1(&gen, &p).unwrap().argmin;
            let a = fix_d1(&gen, p.agenda(), &agg_d1(&gen, &p).unwrap()).unwrap().argmin;
            prop_assert!(gap(&w, &a) <= 1e-6, "{gen}: {w:?} {a:?}");
        }
    }

    #[test]
    fn approximation_is_aggregate_after_fix(p in profile(false, 1e-3)) {
        for gen in builtins() {
            let w = wcap_d1(&gen, &p).unwrap().argmin;
            let f = fixed(&p, |c| Ok(fix_d1(&gen, p.agenda(), c)?.argmin));
            let b = agg_d1(&gen, &f).unwrap();
            prop_assert!(gap(&w, &b) <= 1e-6, "{gen}: {w:?} {b:?}");
        }
    }

    #[test]
    fn euclidean_approximation_is_linear_pool_and_fix(p in profile(false, 0.0)) {
        prop_assume!(in_shift_regime(&p));
        let a = p.agenda();
        let w = wcap_d1(&Generator::Sed, &p).unwrap().argmin;
        let fix_after = fix_sed(a, &linear_pool(&p)).unwrap();
        let pool_after = linear_pool(&fixed(&p, |c| fix_sed(a, c)));
        prop_assert!(gap(&w, &fix_after) <= 1e-9);
        prop_assert!(gap(&w, &pool_after) <= 1e-9);
    }

    #[test]
    fn kl_approximation_is_geometric_pool_and_fix(p in profile(false, 1e-3)) {
        let a = p.agenda();
        let w = wcap_d1(&Generator::Gkl, &p).unwrap().argmin;
        let gp = geometric_pool(&p).unwrap();
        let gp_after = geometric_pool(&fixed(&p, |c| fix_gkl(a, c))).unwrap();
        let fix_after = fix_gkl(a, &gp).unwrap();
        prop_assert!(gap(&w, &gp) <= 1e-9);
        prop_assert!(gap(&w, &gp_after) <= 1e-9);
        prop_assert!(gap(&w, &fix_after) <= 1e-9);
    }

    #[test]
    fn second_direction_kl_approximation_normalizes_the_linear_pool(p in profile(false, 1e-3)) {
        let gen = Generator::Gkl;
        let w = wcap_d2(&gen, &p).unwrap().argmin;
        let f = fix_gkl(p.agenda(), &agg_d2(&gen, &p)).unwrap();
        prop_assert!(gap(&w, &f) <= 1e-9);
    }

    #[test]
    fn coherent_agents_commute_in_the_second_direction(p in profile(true, 0.0)) {
        let mut gens = builtins();
        gens.push(Generator::Power(1.5));
        for gen in gens {
            let a = p.agenda();
            let w = wcap_d2(&gen, &p).unwrap().argmin;
            let fix_after = fix_d2(&gen, a, &linear_pool(&p)).unwrap().argmin;
            let pool_after = linear_pool(&fixed(&p, |c| Ok(fix_d2(&gen, a, c)?.argmin)));
            prop_assert!(gap(&w, &fix_after) <= 1e-6, "{gen}");
            prop_assert!(gap(&w, &pool_after) <= 1e-6, "{gen}");
        }
    }
}

#[test]
fn second_direction_kl_approximation_is_not_the_geometric_pool() {
    let p = amira_benito();
    let w = wcap_d2(&Generator::Gkl, &p).unwrap().argmin;
    assert!(gap(&w, &geometric_pool(&p).unwrap()) > 1e-3);
}

#[test]
fn second_direction_kl_aggregate_after_fix_differs() {
    let p = amira_benito();
    let gen = Generator::Gkl;
    let w = wcap_d2(&gen, &p).unwrap().argmin;
    let f = fixed(&p, |c| fix_gkl(p.agenda(), c));
    assert!(gap(&w, &agg_d2(&gen, &f)) > 1e-4);
}

#[test]
fn three_linear_methods_agree_on_general_agendas() {
    for seed in 0..500 {
        let p = random_general_profile(seed, 2 + (seed % 2) as usize);
        let lp2 = linear_pool(&p);
        let lp1 = pool_on_worlds(&p, WorldPool::Linear).unwrap();
        let lp3 = wcap_general(&Generator::Sed, &p, Direction::From).unwrap().argmin;
        assert!(gap(&lp1, &lp2) <= 1e-12, "seed {seed}");
        assert!(gap(&lp3, &lp2) <= 1e-6, "seed {seed}");
    }
}
