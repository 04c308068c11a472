//! Pooling rules: linear and geometric pooling and the divergence-based
//! aggregates that need not produce coherent output.

use serde::Serialize;

use crate::agenda::{Credence, Profile, DEFAULT_COHERENCE_TOL};
use crate::divergence::{bregman, phi_prime_inverse, Direction, Generator};
use crate::error::{Error, Result};
use crate::simplex::{mirror_descent, MirrorDescentOptions};

/// Weighted arithmetic mean, coordinatewise. Works on any agenda.
pub fn linear_pool(profile: &Profile) -> Credence {
    let m = profile.agenda().num_propositions();
    let mut out = vec![0.0; m];
    for (agent, &w) in profile.agents().iter().zip(profile.weights().values()) {
        for (o, &v) in out.iter_mut().zip(agent.credence.iter()) {
            *o += w * v;
        }
    }
    Credence::clamped(out)
}

/// `Σ_k α_k ln c_kj` per coordinate, skipping zero weights (`0^0 = 1`).
fn log_geometric(profile: &Profile) -> Vec<f64> {
    let m = profile.agenda().num_propositions();
    let mut out = vec![0.0; m];
    for (agent, &w) in profile.agents().iter().zip(profile.weights().values()) {
        if w == 0.0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(agent.credence.iter()) {
            *o += w * v.ln();
        }
    }
    out
}

/// Weighted geometric mean without normalization, `Π_k c_kj^{α_k}`.
pub fn geometric_pool_unnormalized(profile: &Profile) -> Credence {
    Credence::clamped(log_geometric(profile).into_iter().map(f64::exp).collect())
}

/// Normalized weighted geometric mean on a partition.
///
/// Computed in the log domain. Fails with [`Error::DegenerateProfile`] when
/// every cell gets pooled credence zero and with
/// [`Error::GeneralNormalization`] on agendas that are not partitions.
pub fn geometric_pool(profile: &Profile) -> Result<Credence> {
    if !profile.agenda().is_partition() {
        return Err(Error::GeneralNormalization);
    }
    let logs = log_geometric(profile);
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::DegenerateProfile(
            "every cell has pooled credence zero, so the geometric pool cannot be normalized".into(),
        ));
    }
    let scaled: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = scaled.iter().sum();
    Ok(Credence::clamped(scaled.into_iter().map(|v| v / total).collect()))
}

/// `φ̄_j = Σ_k α_k φ′(c_kj)`; zero-weight agents are skipped.
pub(crate) fn weighted_phi_prime(gen: &Generator, profile: &Profile) -> Vec<f64> {
    let m = profile.agenda().num_propositions();
    let mut out = vec![0.0; m];
    for (agent, &w) in profile.agents().iter().zip(profile.weights().values()) {
        if w == 0.0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(agent.credence.iter()) {
            *o += w * gen.phi_prime(v);
        }
    }
    out
}

/// `argmin_x Σ_k α_k D(x, c_k)` over all credences (coherent or not):
/// `x_j = (φ′)⁻¹(φ̄_j)`.
pub fn agg_d1(gen: &Generator, profile: &Profile) -> Result<Credence> {
    let values = weighted_phi_prime(gen, profile)
        .into_iter()
        .map(|t| phi_prime_inverse(gen, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Credence::clamped(values))
}

/// `argmin_x Σ_k α_k D(c_k, x)` over all credences. For every Bregman
/// divergence this is the linear pool.
pub fn agg_d2(_gen: &Generator, profile: &Profile) -> Credence {
    linear_pool(profile)
}

/// Weighted geometric mean of divergences, `Π_k D(x, c_k)^{α_k}` (or with
/// arguments swapped for `Direction::To`). Zero weights contribute `1`.
pub fn geometric_objective(
    gen: &Generator,
    profile: &Profile,
    x: &[f64],
    direction: Direction,
) -> Result<f64> {
    let mut log_sum = 0.0;
    let mut any_zero = false;
    for (agent, &w) in profile.agents().iter().zip(profile.weights().values()) {
        if w == 0.0 {
            continue;
        }
        let d = match direction {
            Direction::From => bregman(gen, x, &agent.credence)?,
            Direction::To => bregman(gen, &agent.credence, x)?,
        };
        if d == 0.0 {
            any_zero = true;
        } else {
            log_sum += w * d.ln();
        }
    }
    Ok(if any_zero { 0.0 } else { log_sum.exp() })
}

/// Result of minimizing the geometric mean of divergences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DictatorOutcome {
    /// Index of the selected agent, when the minimizer is an agent's credence.
    pub agent: Option<usize>,
    pub credence: Credence,
    pub objective: f64,
    /// `false` when no eligible agent exists and the returned point comes
    /// from a numeric search.
    pub dictatorship: bool,
}

/// Minimizes `Π_k D(x, c_k)^{α_k}` over all credences (`constrained =
/// false`) or over coherent credences (`constrained = true`).
///
/// The minimum is `0`, attained at any positive-weight agent's credence that
/// is admissible; the lowest such index is returned. With `constrained` and
/// no coherent positive-weight agent, a numeric search over the coherent
/// credences is run instead and the outcome is flagged as not a
/// dictatorship.
pub fn dictator_select(
    gen: &Generator,
    profile: &Profile,
    constrained: bool,
    direction: Direction,
) -> Result<DictatorOutcome> {
    let agenda = profile.agenda();
    for (k, (agent, &w)) in profile.agents().iter().zip(profile.weights().values()).enumerate() {
        if w <= 0.0 {
            continue;
        }
        if constrained && !agenda.is_coherent(&agent.credence, DEFAULT_COHERENCE_TOL)? {
            continue;
        }
        return Ok(DictatorOutcome {
            agent: Some(k),
            credence: agent.credence.clone(),
            objective: geometric_objective(gen, profile, &agent.credence, direction)?,
            dictatorship: true,
        });
    }
    if !constrained {
        return Err(Error::InvalidWeights("no agent has positive weight".into()));
    }
    numeric_geometric_minimum(gen, profile, direction)
}

/// Minimizes `Σ_k α_k ln D` over coherent credences by mirror descent from
/// several starting points (each world's vertex mixed with the barycenter).
fn numeric_geometric_minimum(
    gen: &Generator,
    profile: &Profile,
    direction: Direction,
) -> Result<DictatorOutcome> {
    let agenda = profile.agenda();
    let worlds = agenda.world_vectors();
    let w = worlds.len();
    let m = agenda.num_propositions();
    let to_credence = |q: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; m];
        for (col, &p) in worlds.iter().zip(q) {
            for (cj, &v) in c.iter_mut().zip(col) {
                *cj += p * v;
            }
        }
        c.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        c
    };
    let log_objective = |q: &[f64]| -> f64 {
        match geometric_objective(gen, profile, &to_credence(q), direction) {
            Ok(v) if v > 0.0 => v.ln(),
            Ok(_) => f64::NEG_INFINITY,
            Err(_) => f64::INFINITY,
        }
    };
    let gradient = |q: &[f64]| -> Vec<f64> {
        let x = to_credence(q);
        let mut dx = vec![0.0; m];
        for (agent, &a) in profile.agents().iter().zip(profile.weights().values()) {
            if a == 0.0 {
                continue;
            }
            let d = match direction {
                Direction::From => bregman(gen, &x, &agent.credence),
                Direction::To => bregman(gen, &agent.credence, &x),
            }
            .unwrap_or(f64::INFINITY);
            if !(d > 0.0 && d.is_finite()) {
                continue;
            }
            for j in 0..m {
                let (xj, cj) = (x[j], agent.credence[j]);
                let g = match direction {
                    Direction::From => gen.phi_prime(xj) - gen.phi_prime(cj),
                    Direction::To if xj == cj => 0.0,
                    Direction::To => gen.phi_double_prime(xj) * (xj - cj),
                };
                dx[j] += a * g / d;
            }
        }
        worlds
            .iter()
            .map(|col| {
                let g: f64 = col.iter().zip(&dx).filter(|(&v, _)| v > 0.0).map(|(_, d)| d).sum();
                if g.is_finite() {
                    g
                } else {
                    0.0
                }
            })
            .collect()
    };
    let opts = MirrorDescentOptions { tol: 1e-10, max_iter: 20_000 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let starts = (0..=w).map(|s| {
        (0..w)
            .map(|t| {
                let base = 1.0 / w as f64;
                if s == w {
                    base
                } else if t == s {
                    0.5 + 0.5 * base
                } else {
                    0.5 * base
                }
            })
            .collect::<Vec<f64>>()
    });
    for init in starts {
        let out = mirror_descent(init, log_objective, gradient, opts);
        if best.as_ref().is_none_or(|(v, _)| out.value < *v) {
            best = Some((out.value, out.q));
        }
    }
    let (_, q) = best.expect("at least one start");
    let x = Credence::clamped(to_credence(&q));
    Ok(DictatorOutcome {
        agent: None,
        objective: geometric_objective(gen, profile, &x, direction)?,
        credence: x,
        dictatorship: false,
    })
}
