//! Nearest point of a convex hull (Wolfe's minimum-norm-point algorithm).
//!
//! Used for coherence membership on general agendas and for recovering a
//! world distribution behind a coherent credence. The algorithm is finite and
//! exact up to rounding, which matters because membership tests run at
//! tolerances down to `1e-12`.

/// Euclidean projection of a target onto `conv{points}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullProjection {
    /// The nearest point of the hull.
    pub point: Vec<f64>,
    /// Barycentric weights over the input points (one per point, summing to 1).
    pub weights: Vec<f64>,
    /// Euclidean distance from the target to `point`.
    pub distance: f64,
}

const MAX_MAJOR: usize = 10_000;
const MAX_MINOR: usize = 10_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projects `target` onto the convex hull of `points`.
///
/// All points and the target must share one dimension; `points` must be
/// nonempty.
pub fn project_onto_hull(points: &[Vec<f64>], target: &[f64]) -> HullProjection {
    assert!(!points.is_empty(), "hull needs at least one point");
    let dim = target.len();
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            debug_assert_eq!(p.len(), dim);
            p.iter().zip(target).map(|(a, b)| a - b).collect()
        })
        .collect();
    let scale = shifted.iter().map(|p| dot(p, p)).fold(1e-300_f64, f64::max);

    let first = (0..shifted.len())
        .min_by(|&a, &b| dot(&shifted[a], &shifted[a]).total_cmp(&dot(&shifted[b], &shifted[b])))
        .unwrap_or(0);
    let mut active = vec![first];
    let mut lambda = vec![1.0];
    let mut x = shifted[first].clone();

    for _ in 0..MAX_MAJOR {
        let xx = dot(&x, &x);
        if xx <= 1e-32 * scale {
            break;
        }
        let (entering, xp) = (0..shifted.len())
            .map(|t| (t, dot(&x, &shifted[t])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if xx - xp <= 1e-15 * scale || active.contains(&entering) {
            break;
        }
        active.push(entering);
        lambda.push(0.0);

        let mut minor = 0;
        loop {
            minor += 1;
            let Some(mu) = affine_min_norm(&shifted, &active, scale) else {
                // Numerically dependent set: undo the insertion and stop.
                active.pop();
                lambda.pop();
                let total: f64 = lambda.iter().sum();
                lambda.iter_mut().for_each(|l| *l /= total);
                break;
            };
            if mu.iter().all(|&m| m > 1e-15) || minor > MAX_MINOR {
                lambda = mu;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut leaving = 0;
            for (i, (&l, &m)) in lambda.iter().zip(&mu).enumerate() {
                if m <= 1e-15 {
                    let t = if l - m > 0.0 { l / (l - m) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        leaving = i;
                    }
                }
            }
            let theta = theta.min(1.0);
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            lambda[leaving] = 0.0;
            let mut i = 0;
            while i < active.len() {
                if lambda[i] <= 1e-15 && active.len() > 1 {
                    active.remove(i);
                    lambda.remove(i);
                } else {
                    i += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(&shifted, &active, &lambda, dim);
    }

    let mut weights = vec![0.0; points.len()];
    for (&t, &l) in active.iter().zip(&lambda) {
        weights[t] = l;
    }
    let offset = combine(&shifted, &active, &lambda, dim);
    let point: Vec<f64> = offset.iter().zip(target).map(|(d, t)| d + t).collect();
    HullProjection { distance: dot(&offset, &offset).sqrt(), point, weights }
}

fn combine(points: &[Vec<f64>], active: &[usize], lambda: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&t, &l) in active.iter().zip(lambda) {
        for (xi, pi) in x.iter_mut().zip(&points[t]) {
            *xi += l * pi;
        }
    }
    x
}

/// Minimum-norm point of the affine hull of the active points, as affine
/// coefficients. Solves the bordered Gram system `[G 1; 1ᵀ 0]`.
fn affine_min_norm(points: &[Vec<f64>], active: &[usize], scale: f64) -> Option<Vec<f64>> {
    let k = active.len();
    let n = k + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&points[active[i]], &points[active[j]]);
        }
        a[i][k] = 1.0;
        a[k][i] = 1.0;
    }
    a[k][n] = 1.0;
    let sol = solve_dense(a, 1e-13 * scale.min(1.0))?;
    Some(sol[..k].to_vec())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, pivot_tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= pivot_tol {
            return None;
        }
        a.swap(col, pivot);
        let (top, bottom) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for r in bottom.iter_mut() {
            let factor = r[col] / pivot_row[col];
            if factor != 0.0 {
                for (x, p) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Some(x)
}
