mod common;

use common::{gap, profile};
use credpool::fixing::{fix_gkl, fix_sed};
use credpool::oracle::{grid_minimize, Domain};
use credpool::pooling::{agg_d1, geometric_pool_unnormalized, linear_pool};
use credpool::theoremlab::certify::weighted_divergence;
use credpool::wcap::{wcap_d1, wcap_d2};
use credpool::{bregman, Agenda, Credence, Direction, Generator, Profile, WeightVector};
use proptest::prelude::*;

const RES: f64 = 1e-2;

/// The oracle's acceptance band: ten lattice steps of the final refinement.
fn band(spacing: f64) -> f64 {
    (10.0 * spacing).max(1e-4)
}

fn small_profile() -> impl Strategy<Value = Profile> {
    profile(false, 0.05).prop_filter("m <= 3", |p| p.agenda().num_propositions() <= 3)
}

fn single(c: &Credence) -> Profile {
    Profile::from_credences(Agenda::partition(c.len()), vec![c.clone()], WeightVector::uniform(1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_fixes_match_the_grid(c in (2usize..=3).prop_flat_map(|m| common::credence(m, 0.05))) {
        let a = Agenda::partition(c.len());
        let p = single(&c);
        let m = c.len();
        for (gen, x) in [(Generator::Sed, fix_sed(&a, &c).unwrap()), (Generator::Gkl, fix_gkl(&a, &c).unwrap())] {
            let g = grid_minimize(|y| weighted_divergence(&gen, &p, y, Direction::From), Domain::Simplex(m), RES).unwrap();
            prop_assert!(gap(&g.point, &x) <= band(g.spacing), "{gen}: {:?} vs {x:?}", g.point);
        }
    }

    #[test]
    fn closed_form_aggregates_match_the_grid(p in small_profile()) {
        let m = p.agenda().num_propositions();
        for (gen, x) in [
            (Generator::Sed, linear_pool(&p)),
            (Generator::Gkl, geometric_pool_unnormalized(&p)),
        ] {
            let g = grid_minimize(|y| weighted_divergence(&gen, &p, y, Direction::From), Domain::Box(m), RES).unwrap();
            prop_assert!(gap(&g.point, &x) <= band(g.spacing), "{gen}: {:?} vs {x:?}", g.point);
            prop_assert!(gap(&agg_d1(&gen, &p).unwrap(), &x) <= 1e-9);
        }
    }

    #[test]
    fn approximations_match_the_grid(p in small_profile()) {
        let m = p.agenda().num_propositions();
        for gen in [Generator::Sed, Generator::Gkl, Generator::Power(3.0)] {
            for dir in [Direction::From, Direction::To] {
                let x = match dir {
                    Direction::From => wcap_d1(&gen, &p).unwrap().argmin,
                    Direction::To => wcap_d2(&gen, &p).unwrap().argmin,
                };
                let g = grid_minimize(|y| weighted_divergence(&gen, &p, y, dir), Domain::Simplex(m), RES).unwrap();
                prop_assert!(gap(&g.point, &x) <= band(g.spacing), "{gen} {dir}: {:?} vs {x:?}", g.point);
            }
        }
    }

    #[test]
    fn finer_grids_never_do_worse(c in common::credence(3, 0.0), d in common::credence(3, 0.0)) {
        let f = |y: &[f64]| bregman(&Generator::Power(3.0), y, &c).unwrap() + bregman(&Generator::Sed, &d, y).unwrap();
        let coarse = grid_minimize(f, Domain::Simplex(3), 0.1).unwrap();
        let fine = grid_minimize(f, Domain::Simplex(3), 0.05).unwrap();
        prop_assert!(f(&fine.point) <= f(&coarse.point) + 1e-15);
    }
}
