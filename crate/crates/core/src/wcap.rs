//! Weighted coherent approximation: the coherent credence minimizing the
//! weighted average divergence from (or to) the agents.

use crate::agenda::{Agenda, Credence, Profile, SolveReport, WeightVector, DEFAULT_COHERENCE_TOL};
use crate::divergence::{bregman, Direction, Generator};
use crate::error::{Error, Result};
use crate::fixing::{fix_d2, fix_sed, shift_residual, solve_shift};
use crate::hull::solve_dense;
use crate::pooling::{geometric_pool, linear_pool, weighted_phi_prime};
use crate::simplex::{minimize_weighted_divergence, MirrorDescentOptions};

fn objective(gen: &Generator, profile: &Profile, x: &[f64], direction: Direction) -> Result<f64> {
    let mut total = 0.0;
    for (agent, &w) in profile.agents().iter().zip(profile.weights().values()) {
        if w == 0.0 {
            continue;
        }
        let d = match direction {
            Direction::From => bregman(gen, x, &agent.credence)?,
            Direction::To => bregman(gen, &agent.credence, x)?,
        };
        total += w * d;
    }
    Ok(total)
}

/// `argmin_{x coherent} Σ_k α_k D(x, c_k)` on a partition.
///
/// Solves `φ′(x_j) = φ̄_j + K` with `φ̄_j` the weighted average of `φ′(c_kj)`
/// by bisection on `K`. SED and GKL use their closed forms (the Euclidean
/// fix of the linear pool, and the geometric pool).
pub fn wcap_d1(gen: &Generator, profile: &Profile) -> Result<SolveReport> {
    let agenda = profile.agenda();
    agenda.require_partition()?;
    let targets = weighted_phi_prime(gen, profile);
    let argmin = match gen {
        Generator::Sed => fix_sed(agenda, &linear_pool(profile))?,
        Generator::Gkl => geometric_pool(profile)?,
        _ => {
            let sol = solve_shift(gen, &targets).ok_or_else(|| {
                Error::DegenerateProfile("every cell is pinned at zero by some agent".into())
            })??;
            Credence::clamped(sol.x)
        }
    };
    Ok(SolveReport {
        objective: objective(gen, profile, &argmin, Direction::From)?,
        residual: shift_residual(gen, &argmin, &targets),
        iterations: 0,
        argmin,
    })
}

/// `argmin_{x coherent} Σ_k α_k D(c_k, x)` on a partition, computed as the
/// second-direction fix of the linear pool.
pub fn wcap_d2(gen: &Generator, profile: &Profile) -> Result<SolveReport> {
    let agenda = profile.agenda();
    agenda.require_partition()?;
    let fixed = fix_d2(gen, agenda, &linear_pool(profile))?;
    Ok(SolveReport { objective: objective(gen, profile, &fixed.argmin, Direction::To)?, ..fixed })
}

/// Weighted coherent approximation on any agenda, by mirror descent over
/// distributions on worlds. Partitions are dispatched to [`wcap_d1`] and
/// [`wcap_d2`].
pub fn wcap_general(gen: &Generator, profile: &Profile, direction: Direction) -> Result<SolveReport> {
    if profile.agenda().is_partition() {
        return match direction {
            Direction::From => wcap_d1(gen, profile),
            Direction::To => wcap_d2(gen, profile),
        };
    }
    wcap_general_with(gen, profile, direction, MirrorDescentOptions::default())
}

/// [`wcap_general`] with explicit solver options; always uses mirror descent.
pub fn wcap_general_with(
    gen: &Generator,
    profile: &Profile,
    direction: Direction,
    opts: MirrorDescentOptions,
) -> Result<SolveReport> {
    let targets: Vec<(&[f64], f64)> = profile
        .agents()
        .iter()
        .zip(profile.weights().values())
        .map(|(a, &w)| (a.credence.values(), w))
        .collect();
    minimize_weighted_divergence(gen, profile.agenda(), &targets, direction, opts)
}

/// How to pool world distributions in [`pool_on_worlds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldPool {
    Linear,
    Geometric,
}

/// Pools the agents' distributions over worlds and maps the result back to
/// the agenda.
///
/// Every agent must be coherent, and the worlds of the agenda must be
/// affinely independent so that each coherent credence determines a unique
/// distribution over worlds.
pub fn pool_on_worlds(profile: &Profile, rule: WorldPool) -> Result<Credence> {
    let agenda = profile.agenda();
    let dists = profile.credences().map(|c| world_distribution(agenda, c)).collect::<Result<Vec<_>>>()?;
    let worlds = Agenda::partition(agenda.num_worlds());
    let fine = Profile::from_credences(
        worlds,
        dists.into_iter().map(Credence::clamped).collect(),
        WeightVector::new(profile.weights().values().to_vec())?,
    )?;
    let pooled = match rule {
        WorldPool::Linear => linear_pool(&fine),
        WorldPool::Geometric => geometric_pool(&fine)?,
    };
    agenda.credence_from_worlds(&pooled)
}

/// The distribution over worlds inducing the coherent credence `c`.
pub fn world_distribution(agenda: &Agenda, c: &Credence) -> Result<Vec<f64>> {
    if !affinely_independent(&agenda.world_vectors()) {
        return Err(Error::Precondition(
            "worlds are affinely dependent, so a coherent credence does not determine a \
             unique distribution over worlds"
                .into(),
        ));
    }
    let proj = agenda.coherent_projection(c)?;
    let gap = proj.point.iter().zip(c.iter()).map(|(p, v)| (p - v).abs()).fold(0.0, f64::max);
    if gap > DEFAULT_COHERENCE_TOL {
        return Err(Error::Precondition(format!(
            "credence is incoherent (distance {gap:.3e} from the coherent set)"
        )));
    }
    Ok(proj.weights)
}

/// Whether the points, lifted by a constant coordinate, are linearly
/// independent (checked through the Gram matrix).
fn affinely_independent(points: &[Vec<f64>]) -> bool {
    let n = points.len();
    let lifted: Vec<Vec<f64>> =
        points.iter().map(|p| p.iter().copied().chain(std::iter::once(1.0)).collect()).collect();
    let mut gram = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = lifted[i].iter().zip(&lifted[j]).map(|(a, b)| a * b).sum();
        }
    }
    solve_dense(gram, 1e-9).is_some()
}
