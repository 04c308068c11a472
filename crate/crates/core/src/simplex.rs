//! Optimization over the probability simplex.

use crate::agenda::{Agenda, Credence, SolveReport};
use crate::divergence::{Direction, Generator};
use crate::error::{Error, Result};

/// Euclidean projection onto `{x ≥ 0, Σx = 1}` by the sort-based KKT method.
pub fn project_euclidean(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumulative += uj;
        let t = (cumulative - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Optimality gap accepted when the objective can no longer be decreased in
/// floating point. The gap bounds the suboptimality, which at this size is
/// below the resolution of the objective itself.
const STALL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct MirrorDescentOptions {
    /// Stop once the Frank-Wolfe gap `⟨g, q⟩ − min g` falls below
    /// `tol · (1 + |F|)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MirrorDescentOptions {
    fn default() -> Self {
        MirrorDescentOptions { tol: 1e-13, max_iter: 100_000 }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MirrorDescentOutcome {
    pub q: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub gap: f64,
    pub converged: bool,
}

/// Entropic mirror descent (exponentiated gradient) on the simplex.
///
/// Coordinates that start at zero stay at zero. The step starts at
/// `1/(1 + L)` for the initial gradient spread `L`, halves whenever the
/// objective would increase, and grows after accepted steps.
pub(crate) fn mirror_descent<F, G>(
    init: Vec<f64>,
    objective: F,
    gradient: G,
    opts: MirrorDescentOptions,
) -> MirrorDescentOutcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let support: Vec<usize> = (0..init.len()).filter(|&t| init[t] > 0.0).collect();
    let mut q = init;
    let mut value = objective(&q);
    let mut grad = gradient(&q);
    let spread = |g: &[f64]| {
        let (lo, hi) = support
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(g[t]), hi.max(g[t])));
        (lo, hi)
    };
    let (lo, hi) = spread(&grad);
    let mut step = 1.0 / (1.0 + (hi - lo).abs().min(1e12));
    let mut gap = fw_gap(&q, &grad, &support);
    let mut iterations = 0;
    let mut candidate = vec![0.0; q.len()];

    while iterations < opts.max_iter {
        if gap <= opts.tol * (1.0 + value.abs()) {
            break;
        }
        iterations += 1;
        let (gmin, _) = spread(&grad);
        let mut accepted = false;
        for _ in 0..60 {
            let mut total = 0.0;
            for &t in &support {
                let v = q[t] * (-step * (grad[t] - gmin)).exp();
                candidate[t] = v;
                total += v;
            }
            if total > 0.0 && total.is_finite() {
                for &t in &support {
                    candidate[t] /= total;
                }
                let cand_value = objective(&candidate);
                if cand_value < value {
                    std::mem::swap(&mut q, &mut candidate);
                    value = cand_value;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // Function values no longer resolve the remaining decrease;
            // finish with derivative-driven pairwise steps.
            let polished = pairwise_polish(&mut q, &gradient, &support, opts, &mut iterations);
            grad = gradient(&q);
            gap = fw_gap(&q, &grad, &support);
            value = objective(&q);
            let converged =
                gap <= opts.tol * (1.0 + value.abs()) || (polished && gap <= STALL_TOL * (1.0 + value.abs()));
            return MirrorDescentOutcome { q, value, iterations, gap, converged };
        }
        step = (step * 1.5).min(1e12);
        grad = gradient(&q);
        gap = fw_gap(&q, &grad, &support);
    }
    let converged = gap <= opts.tol * (1.0 + value.abs());
    MirrorDescentOutcome { q, value, iterations, gap, converged }
}

/// Pairwise Frank-Wolfe steps with an exact line search on the directional
/// derivative: mass moves from the support coordinate with the largest
/// gradient to the one with the smallest. Returns `false` if a step could not
/// be taken before the gap met the tolerance.
fn pairwise_polish<G>(
    q: &mut [f64],
    gradient: &G,
    support: &[usize],
    opts: MirrorDescentOptions,
    iterations: &mut usize,
) -> bool
where
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut grad = gradient(q);
    let mut trial = q.to_vec();
    while *iterations < opts.max_iter {
        let gap = fw_gap(q, &grad, support);
        if gap <= opts.tol {
            return true;
        }
        *iterations += 1;
        let mut from = None;
        let mut to = support[0];
        for &t in support {
            if grad[t] < grad[to] {
                to = t;
            }
            if q[t] > 0.0 && from.is_none_or(|f: usize| grad[t] > grad[f]) {
                from = Some(t);
            }
        }
        let Some(from) = from else { return false };
        if from == to || grad[from].partial_cmp(&grad[to]) != Some(std::cmp::Ordering::Greater) {
            return false;
        }
        let slope_at = |t: f64, trial: &mut Vec<f64>| -> f64 {
            trial.copy_from_slice(q);
            trial[from] = (q[from] - t).max(0.0);
            trial[to] = q[to] + (q[from] - trial[from]);
            let g = gradient(trial);
            g[to] - g[from]
        };
        let (mut lo, mut hi) = (0.0, q[from]);
        if slope_at(hi, &mut trial) > 0.0 {
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if slope_at(mid, &mut trial) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        } else {
            lo = hi;
        }
        if lo <= 0.0 {
            return false;
        }
        let moved = (q[from] - lo).max(0.0);
        q[to] += q[from] - moved;
        q[from] = moved;
        grad = gradient(q);
    }
    false
}

fn fw_gap(q: &[f64], g: &[f64], support: &[usize]) -> f64 {
    let inner: f64 = support.iter().map(|&t| q[t] * g[t]).sum();
    let gmin = support.iter().map(|&t| g[t]).fold(f64::INFINITY, f64::min);
    (inner - gmin).max(0.0)
}

/// Minimizes `Σ_k α_k D(c′, c_k)` (direction `From`) or `Σ_k α_k D(c_k, c′)`
/// (direction `To`) over the coherent credences `c′ = V·q` of an agenda.
pub(crate) fn minimize_weighted_divergence(
    gen: &Generator,
    agenda: &Agenda,
    targets: &[(&[f64], f64)],
    direction: Direction,
    opts: MirrorDescentOptions,
) -> Result<SolveReport> {
    let m = agenda.num_propositions();
    let w = agenda.num_worlds();
    let truth: Vec<Vec<usize>> = (0..w).map(|t| (0..m).filter(|&j| agenda.truth(j, t)).collect()).collect();
    let active: Vec<(&[f64], f64)> = targets.iter().copied().filter(|(_, a)| *a > 0.0).collect();

    // Propositions whose weighted φ′-average is −∞ must receive credence 0 in
    // direction `From`, so worlds making them true are excluded up front.
    let mut allowed = vec![true; w];
    if direction == Direction::From {
        for j in 0..m {
            let forbidden = active.iter().any(|(c, _)| gen.phi_prime(c[j]) == f64::NEG_INFINITY);
            if forbidden {
                for (t, props) in truth.iter().enumerate() {
                    if props.contains(&j) {
                        allowed[t] = false;
                    }
                }
            }
        }
    }
    let support = allowed.iter().filter(|&&a| a).count();
    if support == 0 {
        return Err(Error::solver("every world forces positive credence where the objective is infinite"));
    }
    let init: Vec<f64> = allowed.iter().map(|&a| if a { 1.0 / support as f64 } else { 0.0 }).collect();

    let credence_of = |q: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; m];
        for (props, &p) in truth.iter().zip(q) {
            for &j in props {
                c[j] += p;
            }
        }
        c.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        c
    };
    let objective = |q: &[f64]| -> f64 {
        let c = credence_of(q);
        active
            .iter()
            .map(|(ck, a)| {
                let d: f64 = match direction {
                    Direction::From => c.iter().zip(ck.iter()).map(|(&x, &y)| gen.term(x, y)).sum(),
                    Direction::To => c.iter().zip(ck.iter()).map(|(&x, &y)| gen.term(y, x)).sum(),
                };
                a * d
            })
            .sum()
    };
    let gradient = |q: &[f64]| -> Vec<f64> {
        let c = credence_of(q);
        let dc: Vec<f64> = (0..m)
            .map(|j| {
                let x = c[j];
                active
                    .iter()
                    .map(|(ck, a)| {
                        let y = ck[j];
                        let g = match direction {
                            Direction::From => gen.phi_prime(x) - gen.phi_prime(y),
                            Direction::To => {
                                if x == y {
                                    0.0
                                } else {
                                    gen.phi_double_prime(x) * (x - y)
                                }
                            }
                        };
                        a * g
                    })
                    .sum()
            })
            .collect();
        truth
            .iter()
            .map(|props| props.iter().map(|&j| dc[j]).sum::<f64>())
            .map(|g: f64| if g.is_nan() { 0.0 } else { g })
            .collect()
    };

    let outcome = mirror_descent(init, objective, gradient, opts);
    let report = SolveReport {
        argmin: Credence::clamped(credence_of(&outcome.q)),
        objective: outcome.value,
        iterations: outcome.iterations,
        residual: outcome.gap,
    };
    if outcome.converged {
        Ok(report)
    } else {
        Err(Error::solver_with_best(
            format!(
                "mirror descent stopped after {} iterations with optimality gap {:.3e}",
                outcome.iterations, outcome.gap
            ),
            report,
        ))
    }
}
