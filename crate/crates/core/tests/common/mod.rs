#![allow(dead_code)]

use credpool::{Agenda, Credence, Generator, Profile, WeightVector};
use proptest::collection::vec;
use proptest::prelude::*;

pub fn builtins() -> Vec<Generator> {
    vec![Generator::Sed, Generator::Gkl, Generator::Power(3.0)]
}

pub fn gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Credences on `m` cells, bounded away from zero when `lo > 0`.
pub fn credence(m: usize, lo: f64) -> impl Strategy<Value = Credence> {
    vec(lo..=1.0, m).prop_map(|v| Credence::new(v).unwrap())
}

pub fn coherent(m: usize) -> impl Strategy<Value = Credence> {
    vec(0.01f64..1.0, m).prop_map(|v| {
        let total: f64 = v.iter().sum();
        Credence::new(v.iter().map(|x| x / total).collect()).unwrap()
    })
}

pub fn partition_credence(lo: f64) -> impl Strategy<Value = Credence> {
    (2usize..=4).prop_flat_map(move |m| credence(m, lo))
}

/// Partition profiles with 1 to 3 agents and positive weights.
pub fn profile(coherent_agents: bool, lo: f64) -> impl Strategy<Value = Profile> {
    (2usize..=4, 1usize..=3)
        .prop_flat_map(move |(m, n)| {
            let agent = if coherent_agents { coherent(m).boxed() } else { credence(m, lo).boxed() };
            (Just(m), vec(agent, n), vec(0.05f64..1.0, n))
        })
        .prop_map(|(m, creds, raw)| {
            Profile::from_credences(Agenda::partition(m), creds, WeightVector::normalized(raw).unwrap())
                .unwrap()
        })
}
