//! Commutation and dominance checks.

use serde::Serialize;

use crate::agenda::{Agenda, Credence, Profile, DEFAULT_COHERENCE_TOL};
use crate::divergence::{bregman, Direction, Generator};
use crate::error::{Error, Result};
use crate::fixing::{fix_d1, fix_d2, fix_gkl, fix_sed};
use crate::pooling::{agg_d1, agg_d2, geometric_pool, geometric_pool_unnormalized, linear_pool};
use crate::wcap::{wcap_d1, wcap_d2};

/// A pooling rule, as a map from profiles to credences.
#[derive(Debug, Clone, PartialEq)]
pub enum PoolMethod {
    Linear,
    Geometric,
    GeometricUnnormalized,
    Agg(Generator, Direction),
    Wcap(Generator, Direction),
}

impl PoolMethod {
    pub fn apply(&self, profile: &Profile) -> Result<Credence> {
        match self {
            PoolMethod::Linear => Ok(linear_pool(profile)),
            PoolMethod::Geometric => geometric_pool(profile),
            PoolMethod::GeometricUnnormalized => Ok(geometric_pool_unnormalized(profile)),
            PoolMethod::Agg(g, Direction::From) => agg_d1(g, profile),
            PoolMethod::Agg(g, Direction::To) => Ok(agg_d2(g, profile)),
            PoolMethod::Wcap(g, Direction::From) => Ok(wcap_d1(g, profile)?.argmin),
            PoolMethod::Wcap(g, Direction::To) => Ok(wcap_d2(g, profile)?.argmin),
        }
    }
}

/// A fixing rule on a partition.
#[derive(Debug, Clone, PartialEq)]
pub enum FixMethod {
    Sed,
    Gkl,
    Bregman(Generator, Direction),
}

impl FixMethod {
    pub fn apply(&self, agenda: &Agenda, c: &Credence) -> Result<Credence> {
        match self {
            FixMethod::Sed => fix_sed(agenda, c),
            FixMethod::Gkl => fix_gkl(agenda, c),
            FixMethod::Bregman(g, Direction::From) => Ok(fix_d1(g, agenda, c)?.argmin),
            FixMethod::Bregman(g, Direction::To) => Ok(fix_d2(g, agenda, c)?.argmin),
        }
    }
}

/// `pool ∘ fix` applied to a profile: fix every agent, then pool.
pub fn pool_after_fix(pool: &PoolMethod, fix: &FixMethod, profile: &Profile) -> Result<Credence> {
    let fixed = profile.try_map(|c| fix.apply(profile.agenda(), c))?;
    pool.apply(&fixed)
}

/// `fix ∘ pool` applied to a profile.
pub fn fix_after_pool(pool: &PoolMethod, fix: &FixMethod, profile: &Profile) -> Result<Credence> {
    fix.apply(profile.agenda(), &pool.apply(profile)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutationReport {
    /// `pool ∘ fix`.
    pub left: Credence,
    /// `fix ∘ pool`.
    pub right: Credence,
    pub max_gap: f64,
    pub pass: bool,
}

/// Compares pooling the fixed agents with fixing the pooled credence.
pub fn check_commutation(
    pool: &PoolMethod,
    fix: &FixMethod,
    profile: &Profile,
    tol: f64,
) -> Result<CommutationReport> {
    let left = pool_after_fix(pool, fix, profile)?;
    let right = fix_after_pool(pool, fix, profile)?;
    let max_gap = left.max_gap(&right);
    Ok(CommutationReport { pass: max_gap <= tol, left, right, max_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub fixed: Credence,
    /// `D(v_i, c)` per world.
    pub before: Vec<f64>,
    /// `D(v_i, fixed)` per world.
    pub after: Vec<f64>,
    /// `min_i (before_i − after_i)`; zero when both sides are infinite.
    pub margin: f64,
    pub pass: bool,
}

/// Checks that the first-direction fix of an incoherent credence on a
/// partition is strictly closer to every omniscient credence.
pub fn check_dominance(gen: &Generator, c: &Credence) -> Result<DominanceReport> {
    let agenda = Agenda::partition(c.len());
    if agenda.is_coherent(c, DEFAULT_COHERENCE_TOL)? {
        return Err(Error::Precondition("dominance is only claimed for incoherent credences".into()));
    }
    let fixed = fix_d1(gen, &agenda, c)?.argmin;
    let mut before = Vec::with_capacity(c.len());
    let mut after = Vec::with_capacity(c.len());
    let mut margin = f64::INFINITY;
    for i in 0..agenda.num_worlds() {
        let v = agenda.omniscient(i)?;
        let b = bregman(gen, &v, c)?;
        let a = bregman(gen, &v, &fixed)?;
        let gap = if b.is_infinite() && a.is_infinite() { 0.0 } else { b - a };
        margin = margin.min(gap);
        before.push(b);
        after.push(a);
    }
    Ok(DominanceReport { fixed, before, after, pass: margin > 0.0, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agenda::WeightVector;

    fn amira_benito() -> Profile {
        Profile::from_credences(
            Agenda::partition(2),
            vec![Credence::new(vec![0.5, 0.1]).unwrap(), Credence::new(vec![0.2, 0.6]).unwrap()],
            WeightVector::new(vec![0.4, 0.6]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn linear_pool_commutes_with_euclidean_fix() {
        let r = check_commutation(&PoolMethod::Linear, &FixMethod::Sed, &amira_benito(), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn linear_pool_does_not_commute_with_kl_fix() {
        let r = check_commutation(&PoolMethod::Linear, &FixMethod::Gkl, &amira_benito(), 1e-3).unwrap();
        assert!(!r.pass);
        assert!(r.max_gap > 1e-3);
    }

    #[test]
    fn geometric_pool_commutes_with_kl_fix() {
        let r = check_commutation(&PoolMethod::Geometric, &FixMethod::Gkl, &amira_benito(), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn dominance_examples() {
        let amira = Credence::new(vec![0.5, 0.1]).unwrap();
        let r = check_dominance(&Generator::Sed, &amira).unwrap();
        assert!(r.pass);
        assert!((r.after[0] - 0.18).abs() < 1e-12);
        assert!((r.before[0] - 0.26).abs() < 1e-12);
        assert!((r.after[1] - 0.98).abs() < 1e-12);
        assert!((r.before[1] - 1.06).abs() < 1e-12);
        let benito = Credence::new(vec![0.2, 0.6]).unwrap();
        assert!(check_dominance(&Generator::Gkl, &benito).unwrap().pass);
        let coherent = Credence::new(vec![0.3, 0.7]).unwrap();
        assert!(matches!(check_dominance(&Generator::Sed, &coherent), Err(Error::Precondition(_))));
    }
}
