use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `TM = X ⊕ Y`: the first `r` frame vectors span `X`, the last `s` span `Y`.
///
/// Indices below `r` are called horizontal (written `i, j, k`), the rest
/// vertical (written `α, β, γ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub r: usize,
    pub s: usize,
}

impl SplitSpec {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("the collapsed block Y must be non-empty".into()));
        }
        Ok(Self { r, s })
    }

    /// Split of an `n`-dimensional frame with `r` horizontal vectors.
    pub fn with_rank(n: usize, r: usize) -> Result<Self> {
        if r >= n {
            return Err(Error::InvalidArgument(format!(
                "split rank r = {r} must be below the dimension {n}"
            )));
        }
        Self::new(r, n - r)
    }

    pub fn dim(&self) -> usize {
        self.r + self.s
    }

    pub fn horizontal(&self) -> Range<usize> {
        0..self.r
    }

    pub fn vertical(&self) -> Range<usize> {
        self.r..self.r + self.s
    }

    #[inline]
    pub fn is_vertical(&self, a: usize) -> bool {
        a >= self.r
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: self.dim(),
            });
        }
        Ok(())
    }
}
