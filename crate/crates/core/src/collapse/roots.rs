use nalgebra::DMatrix;
use serde::Serialize;

use super::CollapseProfile;
use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest one are treated as zero.
pub const COEFFICIENT_FLOOR: f64 = 1e-10;
/// Companion eigenvalues with `|im| < IMAG_TOL·(1 + |re|)` count as real.
pub const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Values of `f > 0` where the profile changes sign, and its sign as `f → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub critical_f: Vec<f64>,
    pub asymptotic_sign: Sign,
}

impl Thresholds {
    pub fn max_threshold(&self) -> Option<f64> {
        self.critical_f.last().copied()
    }
}

/// Solves `q4 u³ + q2 u² + q0 u + qm2 = 0` for `u = f²` and returns the
/// positive real roots as `f = √u`, sorted.
pub fn sign_thresholds(p: &CollapseProfile) -> Result<Thresholds> {
    let raw = p.coefficients();
    if raw.iter().any(|q| !q.is_finite()) {
        return Err(Error::InvalidArgument(format!("profile is not finite: {p:?}")));
    }
    let scale = raw.iter().fold(0.0f64, |m, q| m.max(q.abs()));
    let coeffs: Vec<f64> = raw
        .iter()
        .map(|&q| if q.abs() <= COEFFICIENT_FLOOR * scale { 0.0 } else { q })
        .collect();
    let asymptotic_sign = coeffs
        .iter()
        .find(|q| **q != 0.0)
        .map_or(Sign::Zero, |q| Sign::of(*q));

    // Highest degree first; drop leading zeros and factors of u.
    let mut poly: &[f64] = &coeffs;
    while poly.first() == Some(&0.0) {
        poly = &poly[1..];
    }
    while poly.last() == Some(&0.0) {
        poly = &poly[..poly.len() - 1];
    }
    if poly.len() < 2 {
        return Ok(Thresholds {
            critical_f: Vec::new(),
            asymptotic_sign,
        });
    }

    let deg = poly.len() - 1;
    let lead = poly[0];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if i == 0 {
            -poly[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eval = |u: f64| poly.iter().fold(0.0, |acc, q| acc * u + q);
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < IMAG_TOL * (1.0 + z.re.abs()) && z.re > 0.0)
        .map(|z| polish(&eval, z.re))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    Ok(Thresholds {
        critical_f: roots.into_iter().map(f64::sqrt).collect(),
        asymptotic_sign,
    })
}

/// Bisection on a small bracket around `u0`; returns `u0` if no sign change
/// is found (an even-multiplicity root).
fn polish(eval: &impl Fn(f64) -> f64, u0: f64) -> f64 {
    let mut width = 1e-6 * u0.max(1e-12);
    for _ in 0..8 {
        let (mut lo, mut hi) = ((u0 - width).max(0.0), u0 + width);
        let (flo, fhi) = (eval(lo), eval(hi));
        if flo == 0.0 {
            return lo;
        }
        if fhi == 0.0 {
            return hi;
        }
        if flo.signum() != fhi.signum() {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = eval(mid);
                if fm == 0.0 {
                    return mid;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        width *= 10.0;
    }
    u0
}
