//! Additive Bregman divergences on credence functions.
//!
//! A strictly convex generator `φ` on `[0, 1]` induces the divergence
//!
//! ```text
//! D(c, d) = Σ_i φ(c_i) − φ(d_i) − φ′(d_i)(c_i − d_i)
//! ```
//!
//! Values are extended reals: a term is `+∞` when `φ′(d_i)` diverges and
//! `c_i ≠ d_i` (GKL with `d_i = 0 < c_i`). `0·log 0` is taken to be `0`.

use std::fmt;
use std::str::FromStr;

use crate::agenda::check_len;
use crate::error::{Error, Result};

/// Extended nonnegative real (`+∞` allowed).
pub type DivergenceValue = f64;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `φ(x) = x²`, squared Euclidean distance.
    Sed,
    /// `φ(x) = x log x − x`, generalized Kullback-Leibler divergence.
    Gkl,
    /// `φ(x) = x^p` for `p > 1`.
    Power(f64),
    /// `φ(x) + slope·x + intercept`; generates the same divergence as `base`.
    AffineShifted { base: Box<Generator>, slope: f64, intercept: f64 },
}

impl Generator {
    pub fn power(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Generator::Power(p))
        } else {
            Err(Error::InvalidGenerator(format!("power exponent must exceed 1, got {p}")))
        }
    }

    pub fn affine_shifted(base: Generator, slope: f64, intercept: f64) -> Self {
        Generator::AffineShifted { base: Box::new(base), slope, intercept }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn phi(&self, x: f64) -> f64 {
        match self {
            Generator::Sed => x * x,
            Generator::Gkl => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln() - x
                }
            }
            Generator::Power(p) => x.powf(*p),
            Generator::AffineShifted { base, slope, intercept } => base.phi(x) + slope * x + intercept,
        }
    }

    /// `φ′(x)`, with one-sided limits at the endpoints (possibly `−∞`).
    pub fn phi_prime(&self, x: f64) -> f64 {
        match self {
            Generator::Sed => 2.0 * x,
            Generator::Gkl => x.ln(),
            Generator::Power(p) => p * x.powf(p - 1.0),
            Generator::AffineShifted { base, slope, .. } => base.phi_prime(x) + slope,
        }
    }

    pub fn phi_double_prime(&self, x: f64) -> f64 {
        match self {
            Generator::Sed => 2.0,
            Generator::Gkl => 1.0 / x,
            Generator::Power(p) => p * (p - 1.0) * x.powf(p - 2.0),
            Generator::AffineShifted { base, .. } => base.phi_double_prime(x),
        }
    }

    /// Scalar divergence term `φ(x) − φ(y) − φ′(y)(x − y)`.
    pub fn term(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return 0.0;
        }
        let slope = self.phi_prime(y);
        if slope == f64::NEG_INFINITY {
            // x > y here because y sits at the lower end of the domain.
            return f64::INFINITY;
        }
        if slope == f64::INFINITY {
            return f64::INFINITY;
        }
        (self.phi(x) - self.phi(y) - slope * (x - y)).max(0.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sed => write!(f, "sed"),
            Generator::Gkl => write!(f, "gkl"),
            Generator::Power(p) => write!(f, "power:{p}"),
            Generator::AffineShifted { base, slope, intercept } => {
                write!(f, "affine:{base}:{slope}:{intercept}")
            }
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Parses `sed`, `gkl` or `power:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sed" => Ok(Generator::Sed),
            "gkl" => Ok(Generator::Gkl),
            other => match other.strip_prefix("power:") {
                Some(p) => {
                    let p: f64 =
                        p.parse().map_err(|_| Error::InvalidGenerator(format!("bad exponent in {s:?}")))?;
                    Generator::power(p)
                }
                None => Err(Error::InvalidGenerator(format!(
                    "unknown divergence {s:?} (expected sed, gkl or power:<p>)"
                ))),
            },
        }
    }
}

/// Which argument of the divergence the optimization variable occupies.
///
/// `From` minimizes `D(x, c)` (the candidate is the first argument), `To`
/// minimizes `D(c, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    From,
    To,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::From => "from",
            Direction::To => "to",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "from" | "1" => Ok(Direction::From),
            "to" | "2" => Ok(Direction::To),
            _ => Err(Error::InvalidGenerator(format!("unknown direction {s:?} (expected from or to)"))),
        }
    }
}

/// Additive Bregman divergence `D(c, d)` generated by `gen`.
pub fn bregman(gen: &Generator, c: &[f64], d: &[f64]) -> Result<DivergenceValue> {
    check_len(c.len(), d.len())?;
    Ok(c.iter().zip(d).map(|(&x, &y)| gen.term(x, y)).sum())
}

/// Squared Euclidean distance.
pub fn sed(c: &[f64], d: &[f64]) -> Result<DivergenceValue> {
    check_len(c.len(), d.len())?;
    Ok(c.iter().zip(d).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Generalized Kullback-Leibler divergence `Σ c log(c/d) − c + d`.
pub fn gkl(c: &[f64], d: &[f64]) -> Result<DivergenceValue> {
    check_len(c.len(), d.len())?;
    Ok(c.iter()
        .zip(d)
        .map(|(&x, &y)| {
            if x == 0.0 {
                y
            } else if y == 0.0 {
                f64::INFINITY
            } else {
                x * (x / y).ln() - x + y
            }
        })
        .sum())
}

/// Solves `φ′(x) = y` for `x ∈ [0, 1]` by bisection.
///
/// Values at or beyond the one-sided limits of `φ′` clamp to `0` or `1`;
/// `NaN` is a [`Error::Range`].
pub fn phi_prime_inverse(gen: &Generator, y: f64) -> Result<f64> {
    if y.is_nan() {
        return Err(Error::Range(y));
    }
    if y <= gen.phi_prime(0.0) {
        return Ok(0.0);
    }
    if y >= gen.phi_prime(1.0) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = gen.phi_prime(mid);
        if v == y {
            return Ok(mid);
        }
        if v < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let err_lo = (gen.phi_prime(lo) - y).abs();
    let err_hi = (gen.phi_prime(hi) - y).abs();
    Ok(if err_lo <= err_hi { lo } else { hi })
}
