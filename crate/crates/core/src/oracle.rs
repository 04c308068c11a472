//! Brute-force reference minimizers and derivative checks.
//!
//! These are deliberately simple and independent of the solvers they are
//! used to check.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`grid_minimize`].
pub const MAX_GRID_DIM: usize = 4;

/// Largest number of lattice points scanned in the coarse pass.
pub const MAX_GRID_POINTS: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `{x ∈ [0,1]^m : Σx = 1}`.
    Simplex(usize),
    /// `[0,1]^m`.
    Box(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match *self {
            Domain::Simplex(m) | Domain::Box(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    /// Lattice spacing of the final refinement round.
    pub spacing: f64,
}

/// Exhaustive lattice scan at spacing `1/round(1/resolution)`, followed by
/// two rounds of 10× refinement around the incumbent.
///
/// Points are visited in lexicographic order of their free coordinates
/// (for the simplex, all but the last) and only a strictly smaller value
/// replaces the incumbent, so ties go to the first lattice point.
pub fn grid_minimize<F>(objective: F, domain: Domain, resolution: f64) -> Result<GridMinimum>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let m = domain.dim();
    if m == 0 || m > MAX_GRID_DIM {
        return Err(Error::Scale(format!("dimension {m} outside 1..={MAX_GRID_DIM}")));
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::Scale(format!("resolution {resolution} must lie in (0, 1]")));
    }
    let n = (1.0 / resolution).round().max(1.0) as u64;
    let free = match domain {
        Domain::Simplex(m) => m - 1,
        Domain::Box(m) => m,
    };
    let count = (n + 1).checked_pow(free as u32).unwrap_or(u64::MAX);
    if count > MAX_GRID_POINTS {
        return Err(Error::Scale(format!("{count} lattice points exceed the limit of {MAX_GRID_POINTS}")));
    }
    let spacing = 1.0 / n as f64;

    let complete = |head: &[f64]| -> Option<Vec<f64>> {
        match domain {
            Domain::Box(_) => Some(head.to_vec()),
            Domain::Simplex(_) => {
                let used: f64 = head.iter().sum();
                let last = 1.0 - used;
                if last < -1e-12 {
                    None
                } else {
                    let mut p = head.to_vec();
                    p.push(last.max(0.0));
                    Some(p)
                }
            }
        }
    };

    // Coarse scan: chunk on the first free coordinate, keep the first
    // strict minimum per chunk, then merge in chunk order.
    let chunk_best = |first: u64| -> Option<(f64, Vec<f64>)> {
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut idx = vec![0u64; free];
        if free > 0 {
            idx[0] = first;
        }
        loop {
            let head: Vec<f64> = idx.iter().map(|&i| i as f64 * spacing).collect();
            let within = match domain {
                Domain::Simplex(_) => idx.iter().sum::<u64>() <= n,
                Domain::Box(_) => true,
            };
            if within {
                if let Some(p) = complete(&head) {
                    let v = objective(&p);
                    if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                        best = Some((v, p));
                    }
                }
            }
            // Advance the trailing coordinates, odometer style.
            let mut pos = free;
            loop {
                if pos <= 1 {
                    return best;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] <= n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    };
    let firsts: Vec<u64> = if free == 0 { vec![0] } else { (0..=n).collect() };
    let per_chunk: Vec<Option<(f64, Vec<f64>)>> = firsts.par_iter().map(|&f| chunk_best(f)).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in per_chunk.into_iter().flatten() {
        if best.as_ref().is_none_or(|(bv, _)| cand.0 < *bv) {
            best = Some(cand);
        }
    }
    let (mut value, mut point) =
        best.ok_or_else(|| Error::Scale("lattice contains no feasible point".into()))?;

    let mut step = spacing;
    for _ in 0..2 {
        step /= 10.0;
        let center: Vec<f64> = point[..free].to_vec();
        let width = 10i64;
        let side = (2 * width + 1) as usize;
        let total = side.pow(free as u32);
        for flat in 0..total {
            let mut rest = flat;
            let mut head = Vec::with_capacity(free);
            let mut ok = true;
            for &c0 in &center {
                let off = (rest % side) as i64 - width;
                rest /= side;
                let v = c0 + off as f64 * step;
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    ok = false;
                    break;
                }
                head.push(v.clamp(0.0, 1.0));
            }
            if !ok {
                continue;
            }
            if let Some(p) = complete(&head) {
                let v = objective(&p);
                if v < value {
                    value = v;
                    point = p;
                }
            }
        }
    }
    Ok(GridMinimum { point, value, spacing: step })
}

/// Step used by [`finite_diff_check`].
pub const FD_STEP: f64 = 1e-6;

/// Largest relative error between `f_prime` and a central difference of `f`
/// over `points`. Relative errors are taken against `max(|f′(x)|, 1e-6)`.
pub fn finite_diff_check<F, G>(f: F, f_prime: G, points: &[f64]) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    points
        .iter()
        .map(|&x| {
            let fd = (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP);
            let exact = f_prime(x);
            (fd - exact).abs() / exact.abs().max(1e-6)
        })
        .fold(0.0, f64::max)
}
