//! Seeded random profiles.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha` 0.3) using `rand` 0.8's `gen::<f64>()`, which is uniform on
//! `[0, 1)`. Draws are consumed in a fixed order:
//!
//! 1. for each agent in order, one credence (see [`random_credence`]);
//! 2. one raw weight per agent, uniform on `[0, 1)`, then normalized.
//!
//! An incoherent credence takes one uniform draw per cell. A coherent one
//! takes one draw `u` per cell, maps it to an exponential variate
//! `−ln(1 − u)` and normalizes, which gives a uniform point of the simplex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agenda::{Agenda, Credence, Profile, WeightVector};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A distribution over `m` cells drawn uniformly from the simplex.
pub fn random_distribution<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

pub fn random_credence<R: Rng>(rng: &mut R, m: usize, coherent: bool) -> Credence {
    let values =
        if coherent { random_distribution(rng, m) } else { (0..m).map(|_| rng.gen::<f64>()).collect() };
    Credence::clamped(values)
}

fn random_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    WeightVector::normalized(raw).unwrap_or_else(|_| WeightVector::uniform(n))
}

/// `n` agents on the `m`-cell partition.
pub fn random_profile(seed: u64, m: usize, n: usize, coherent: bool) -> Profile {
    assert!(m >= 2 && n >= 1, "need m >= 2 and n >= 1");
    let mut rng = rng_for(seed);
    let credences = (0..n).map(|_| random_credence(&mut rng, m, coherent)).collect();
    let weights = random_weights(&mut rng, n);
    Profile::from_credences(Agenda::partition(m), credences, weights)
        .expect("generated profile is well formed")
}

/// Coherent agents on a random non-partition agenda.
///
/// The agenda has `w ∈ {2, 3, 4}` atoms and one to three further
/// propositions, each the disjunction of a random set of at least two atoms.
/// Agents draw a distribution over atoms as in [`random_distribution`].
pub fn random_general_profile(seed: u64, n: usize) -> Profile {
    let mut rng = rng_for(seed);
    let w: usize = rng.gen_range(2..=4);
    let extra: usize = rng.gen_range(1..=3);
    let mut table: Vec<Vec<u8>> = (0..w).map(|i| (0..w).map(|t| u8::from(i == t)).collect()).collect();
    for _ in 0..extra {
        let mask = loop {
            let mask: u32 = rng.gen_range(1..(1u32 << w));
            if mask.count_ones() >= 2 {
                break mask;
            }
        };
        table.push((0..w).map(|t| u8::from(mask & (1 << t) != 0)).collect());
    }
    let agenda = Agenda::from_truth_table(&table).expect("atoms make worlds distinct");
    let credences = (0..n)
        .map(|_| {
            let q = random_distribution(&mut rng, w);
            agenda.credence_from_worlds(&q).expect("one weight per world")
        })
        .collect();
    let weights = random_weights(&mut rng, n);
    Profile::from_credences(agenda, credences, weights).expect("generated profile is well formed")
}
