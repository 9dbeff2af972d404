//! Reproducible low-discrepancy sample points over a box.
//!
//! Points come from a Halton sequence with a random Cranley–Patterson
//! shift drawn from a seeded ChaCha stream, so equal seeds give equal
//! points on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Interval, Point};

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in base `b`.
fn radical_inverse(mut index: u64, b: u32) -> f64 {
    let base = b as f64;
    let mut inv = 1.0 / base;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b as u64) as f64 * inv;
        index /= b as u64;
        inv /= base;
    }
    out
}

/// `count` points inside `bounds`, deterministic in `seed`.
pub fn sample_box(bounds: &[Interval], count: usize, seed: u64) -> Result<Vec<Point>> {
    let dim = bounds.len();
    if dim > PRIMES.len() {
        return Err(Error::InvalidArgument(format!(
            "sampling supports at most {} coordinates, got {dim}",
            PRIMES.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    (0..count)
        .map(|k| {
            let coords = bounds
                .iter()
                .zip(&shift)
                .zip(PRIMES)
                .map(|((iv, s), b)| {
                    let u = (radical_inverse(k as u64 + 1, b) + s).fract();
                    iv.lo + u * (iv.hi - iv.lo)
                })
                .collect();
            Point::new(coords)
        })
        .collect()
}
