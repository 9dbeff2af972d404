use serde::Serialize;

use super::SplitSpec;
use crate::curvature::block_scalar;
use crate::error::{Error, Result};
use crate::structure::{FrameSource, StructureJet};

/// Scalar curvature of the collapsed metric at a point as a Laurent
/// polynomial in the constant factor `f`:
/// `S(f) = q4 f⁴ + q2 f² + q0 + qm2 / f²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CollapseProfile {
    pub q4: f64,
    pub q2: f64,
    pub q0: f64,
    pub qm2: f64,
}

impl CollapseProfile {
    pub fn new(q4: f64, q2: f64, q0: f64, qm2: f64) -> Self {
        Self { q4, q2, q0, qm2 }
    }

    pub fn evaluate(&self, f: f64) -> Result<f64> {
        evaluate_profile(self, f)
    }

    /// Coefficients from highest to lowest power.
    pub fn coefficients(&self) -> [f64; 4] {
        [self.q4, self.q2, self.q0, self.qm2]
    }

    pub fn max_abs_diff(&self, other: &CollapseProfile) -> f64 {
        self.coefficients()
            .iter()
            .zip(other.coefficients())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn evaluate_profile(p: &CollapseProfile, f: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::InvalidArgument(format!("f must be positive, got {f}")));
    }
    let f2 = f * f;
    Ok(p.q4 * f2 * f2 + p.q2 * f2 + p.q0 + p.qm2 / f2)
}

pub(super) fn jet_for(source: &dyn FrameSource, split: SplitSpec, point: &[f64]) -> Result<StructureJet> {
    split.check_dim(source.dim())?;
    source.jet(point)
}

/// `(S₁, S₂)`: the scalar-curvature sum with all indices in `X`, resp. `Y`.
pub fn restricted_scalars_from_jet(jet: &StructureJet, split: SplitSpec) -> (f64, f64) {
    let h: Vec<usize> = split.horizontal().collect();
    let v: Vec<usize> = split.vertical().collect();
    (block_scalar(jet, &h), block_scalar(jet, &v))
}

pub fn restricted_scalars(
    source: &dyn FrameSource,
    split: SplitSpec,
    point: &[f64],
) -> Result<(f64, f64)> {
    Ok(restricted_scalars_from_jet(&jet_for(source, split, point)?, split))
}

/// Index sums shared by the profile and the NPB indicator.
pub(super) struct Terms<'a> {
    pub(super) jet: &'a StructureJet,
    pub(super) split: SplitSpec,
}

impl Terms<'_> {
    pub(super) fn c(&self, k: usize, i: usize, j: usize) -> f64 {
        self.jet.c.get(k, i, j)
    }

    pub(super) fn h(&self) -> std::ops::Range<usize> {
        self.split.horizontal()
    }

    pub(super) fn v(&self) -> std::ops::Range<usize> {
        self.split.vertical()
    }

    /// `Σ_k c^k_{ak}` over horizontal `k`.
    pub(super) fn htrace(&self, a: usize) -> f64 {
        self.h().map(|k| self.c(k, a, k)).sum()
    }

    /// `Σ_β c^β_{aβ}` over vertical `β`.
    pub(super) fn vtrace(&self, a: usize) -> f64 {
        self.v().map(|b| self.c(b, a, b)).sum()
    }

    /// `Σ 2 e_γ(c^j_{γj})`
    pub(super) fn dv_htrace(&self) -> f64 {
        let mut s = 0.0;
        for g in self.v() {
            for j in self.h() {
                s += 2.0 * self.jet.deriv(g, j, g, j);
            }
        }
        s
    }

    /// `Σ 2 e_k(c^β_{kβ})`
    pub(super) fn dh_vtrace(&self) -> f64 {
        let mut s = 0.0;
        for k in self.h() {
            for b in self.v() {
                s += 2.0 * self.jet.deriv(k, b, k, b);
            }
        }
        s
    }

    /// `Σ c^k_{αk} c^j_{αj}`
    pub(super) fn htrace_sq(&self) -> f64 {
        self.v().map(|a| self.htrace(a).powi(2)).sum()
    }

    /// `Σ c^k_{αk} c^β_{αβ}`
    pub(super) fn htrace_vtrace_v(&self) -> f64 {
        self.v().map(|a| self.htrace(a) * self.vtrace(a)).sum()
    }

    /// `Σ c^γ_{iγ} c^β_{iβ}`
    pub(super) fn vtrace_sq(&self) -> f64 {
        self.h().map(|i| self.vtrace(i).powi(2)).sum()
    }

    /// `Σ c^γ_{iγ} c^j_{ij}`
    pub(super) fn vtrace_htrace_h(&self) -> f64 {
        self.h().map(|i| self.vtrace(i) * self.htrace(i)).sum()
    }

    /// `Σ c^k_{iβ} c^i_{kβ}`
    pub(super) fn hh_v_cross(&self) -> f64 {
        let mut s = 0.0;
        for k in self.h() {
            for i in self.h() {
                for b in self.v() {
                    s += self.c(k, i, b) * self.c(i, k, b);
                }
            }
        }
        s
    }

    /// `Σ c^α_{γj} c^γ_{αj}`
    pub(super) fn vv_h_cross(&self) -> f64 {
        let mut s = 0.0;
        for a in self.v() {
            for g in self.v() {
                for j in self.h() {
                    s += self.c(a, g, j) * self.c(g, a, j);
                }
            }
        }
        s
    }

    /// `Σ c^i_{γβ} c^γ_{iβ}`
    pub(super) fn hvv_cross(&self) -> f64 {
        let mut s = 0.0;
        for i in self.h() {
            for g in self.v() {
                for b in self.v() {
                    s += self.c(i, g, b) * self.c(g, i, b);
                }
            }
        }
        s
    }

    /// `Σ c^i_{γj} c^γ_{ij}`
    pub(super) fn hvh_cross(&self) -> f64 {
        let mut s = 0.0;
        for i in self.h() {
            for g in self.v() {
                for j in self.h() {
                    s += self.c(i, g, j) * self.c(g, i, j);
                }
            }
        }
        s
    }

    /// `Σ (c^i_{γβ})²`: the part of `[Y, Y]` leaving `Y`.
    pub(super) fn sq_h_vv(&self) -> f64 {
        self.sum_sq(self.h(), self.v(), self.v())
    }

    /// `Σ (c^i_{γj})²`
    pub(super) fn sq_h_vh(&self) -> f64 {
        self.sum_sq(self.h(), self.v(), self.h())
    }

    /// `Σ (c^α_{kβ})²`
    pub(super) fn sq_v_hv(&self) -> f64 {
        self.sum_sq(self.v(), self.h(), self.v())
    }

    /// `Σ (c^α_{kj})²`: the part of `[X, X]` landing in `Y`.
    pub(super) fn sq_v_hh(&self) -> f64 {
        self.sum_sq(self.v(), self.h(), self.h())
    }

    pub(super) fn sum_sq(
        &self,
        ks: std::ops::Range<usize>,
        is: std::ops::Range<usize>,
        js: std::ops::Range<usize>,
    ) -> f64 {
        let mut s = 0.0;
        for k in ks {
            for i in is.clone() {
                for j in js.clone() {
                    s += self.c(k, i, j).powi(2);
                }
            }
        }
        s
    }
}

/// The four Laurent coefficients from structure functions and their
/// derivatives in the unrescaled frame.
pub fn profile_from_jet(jet: &StructureJet, split: SplitSpec) -> Result<CollapseProfile> {
    split.check_dim(jet.dim())?;
    let (s1, s2) = restricted_scalars_from_jet(jet, split);
    let t = Terms { jet, split };
    let q4 = -0.25 * t.sq_h_vv();
    let q2 = s2 + t.dv_htrace()
        - t.htrace_sq()
        - 2.0 * t.htrace_vtrace_v()
        - 0.5 * t.hh_v_cross()
        - t.hvv_cross()
        - 0.5 * t.sq_h_vh();
    let q0 = s1 + t.dh_vtrace()
        - t.vtrace_sq()
        - 2.0 * t.vtrace_htrace_h()
        - 0.5 * t.vv_h_cross()
        - t.hvh_cross()
        - 0.5 * t.sq_v_hv();
    let qm2 = -0.25 * t.sq_v_hh();
    Ok(CollapseProfile { q4, q2, q0, qm2 })
}

pub fn collapse_profile(
    source: &dyn FrameSource,
    split: SplitSpec,
    point: &[f64],
) -> Result<CollapseProfile> {
    profile_from_jet(&jet_for(source, split, point)?, split)
}

/// `S₂ + 2e_γ(c^j_{γj}) − c^k_{αk}c^j_{αj} − ½c^k_{iβ}c^i_{kβ} − ½(c^i_{γj})²`.
pub fn npb_from_jet(jet: &StructureJet, split: SplitSpec) -> Result<f64> {
    split.check_dim(jet.dim())?;
    let (_, s2) = restricted_scalars_from_jet(jet, split);
    let t = Terms { jet, split };
    Ok(s2 + t.dv_htrace() - t.htrace_sq() - 0.5 * t.hh_v_cross() - 0.5 * t.sq_h_vh())
}

pub fn npb_indicator(source: &dyn FrameSource, split: SplitSpec, point: &[f64]) -> Result<f64> {
    npb_from_jet(&jet_for(source, split, point)?, split)
}
