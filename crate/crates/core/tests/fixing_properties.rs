mod common;

use common::{builtins, gap, partition_credence};
use credpool::fixing::{fix_d1, fix_d2, fix_gkl, fix_sed};
use credpool::{bregman, Agenda, Direction, Generator};
use proptest::prelude::*;

fn fix(gen: &Generator, dir: Direction, a: &Agenda, c: &credpool::Credence) -> Vec<f64> {
    match dir {
        Direction::From => fix_d1(gen, a, c).unwrap().argmin.into_vec(),
        Direction::To => fix_d2(gen, a, c).unwrap().argmin.into_vec(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fixing_is_idempotent_and_coherent(c in partition_credence(1e-3)) {
        let a = Agenda::partition(c.len());
        for gen in builtins() {
            for dir in [Direction::From, Direction::To] {
                let once = fix(&gen, dir, &a, &c);
                let once_c = credpool::Credence::new(once.clone()).unwrap();
                prop_assert!(a.is_coherent(&once_c, 1e-8).unwrap(), "{gen} {dir}: {once:?}");
                let twice = fix(&gen, dir, &a, &once_c);
                prop_assert!(gap(&once, &twice) <= 1e-9, "{gen} {dir}: {once:?} {twice:?}");
            }
        }
    }

    #[test]
    fn euclidean_fix_adds_a_constant(c in partition_credence(0.0)) {
        let x = fix_sed(&Agenda::partition(c.len()), &c).unwrap();
        if x.iter().all(|v| *v > 0.0 && *v < 1.0) {
            let d0 = x[0] - c[0];
            for j in 1..c.len() {
                prop_assert!((x[j] - c[j] - d0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn kl_fix_rescales(c in partition_credence(0.0)) {
        prop_assume!(c.iter().any(|v| *v > 0.0));
        let x = fix_gkl(&Agenda::partition(c.len()), &c).unwrap();
        let (j0, c0) = c.iter().enumerate().find(|(_, v)| **v > 0.0).unwrap();
        let r = x[j0] / c0;
        for (j, &cj) in c.iter().enumerate() {
            if cj > 0.0 {
                prop_assert!((x[j] / cj - r).abs() <= 1e-10 * r.max(1.0));
            } else {
                prop_assert_eq!(x[j], 0.0);
            }
        }
    }

    #[test]
    fn both_directions_agree_for_sed_and_gkl(c in partition_credence(1e-3)) {
        let a = Agenda::partition(c.len());
        for gen in [Generator::Sed, Generator::Gkl] {
            let d1 = fix(&gen, Direction::From, &a, &c);
            let d2 = fix(&gen, Direction::To, &a, &c);
            prop_assert!(gap(&d1, &d2) <= 1e-9, "{gen}: {d1:?} {d2:?}");
        }
    }

    #[test]
    fn first_direction_fix_dominates(c in partition_credence(0.0)) {
        let a = Agenda::partition(c.len());
        prop_assume!(!a.is_coherent(&c, 1e-9).unwrap());
        for gen in builtins() {
            let x = fix_d1(&gen, &a, &c).unwrap().argmin;
            for t in 0..a.num_worlds() {
                let v = a.omniscient(t).unwrap();
                let before = bregman(&gen, &v, &c).unwrap();
                let after = bregman(&gen, &v, &x).unwrap();
                prop_assert!(after < before || before.is_infinite(), "{gen}: world {t}: {after} vs {before}");
            }
        }
    }

    #[test]
    fn two_cell_euclidean_fix_is_orthogonal_to_the_diagonal(
        c in common::credence(2, 0.0)
    ) {
        let x = fix_sed(&Agenda::partition(2), &c).unwrap();
        if x.iter().all(|v| *v > 0.0 && *v < 1.0) {
            prop_assert!(((x[0] - c[0]) - (x[1] - c[1])).abs() <= 1e-12);
        }
    }
}
