//! Shorter forms of the collapse profile under extra hypotheses on the split.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::{jet_for, restricted_scalars_from_jet, Terms};
use super::{CollapseProfile, SplitSpec};
use crate::error::{Error, Result};
use crate::structure::{FrameSource, StructureJet};

/// Structure functions below this magnitude count as zero in hypothesis checks.
pub const HYPOTHESIS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// `X` is one-dimensional (`r = 1`).
    Codim1,
    /// `Y` is one-dimensional (`s = 1`), hence involutive.
    OneDimFoliation,
    /// `s = 1` and the frame is bundle-like: `c^k_{αj} = 0` near the point.
    BundleLikeOneDim,
    /// `Y` involutive: `c^i_{γβ} = 0`.
    Involutive,
    /// `Y` involutive and the frame bundle-like.
    BundleLike,
}

impl Reduction {
    pub const ALL: [Reduction; 5] = [
        Reduction::Codim1,
        Reduction::OneDimFoliation,
        Reduction::BundleLikeOneDim,
        Reduction::Involutive,
        Reduction::BundleLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Reduction::Codim1 => "codim-1",
            Reduction::OneDimFoliation => "one-dim-foliation",
            Reduction::BundleLikeOneDim => "bundle-like-one-dim",
            Reduction::Involutive => "involutive",
            Reduction::BundleLike => "bundle-like",
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Check<'a> {
    case: Reduction,
    source: &'a dyn FrameSource,
    jet: &'a StructureJet,
    split: SplitSpec,
}

impl Check<'_> {
    fn fail(&self, entry: String, value: f64) -> Error {
        Error::Hypothesis {
            case: self.case.name().into(),
            entry,
            value,
        }
    }

    fn entry(&self, k: usize, i: usize, j: usize) -> String {
        let l = |a| self.source.label(a);
        format!("c^{}_{{{},{}}}", l(k), l(i), l(j))
    }

    fn rank(&self, name: &str, got: usize, want: usize) -> Result<()> {
        if got == want {
            Ok(())
        } else {
            Err(self.fail(name.into(), got as f64))
        }
    }

    /// `c^i_{γβ} = 0`.
    fn involutive(&self) -> Result<()> {
        for i in self.split.horizontal() {
            for g in self.split.vertical() {
                for b in self.split.vertical() {
                    let v = self.jet.c.get(i, g, b);
                    if v.abs() > HYPOTHESIS_TOL {
                        return Err(self.fail(self.entry(i, g, b), v));
                    }
                }
            }
        }
        Ok(())
    }

    /// `c^k_{αj} = 0` together with every frame derivative of those entries.
    fn bundle_like(&self) -> Result<()> {
        let n = self.jet.dim();
        for k in self.split.horizontal() {
            for a in self.split.vertical() {
                for j in self.split.horizontal() {
                    let v = self.jet.c.get(k, a, j);
                    if v.abs() > HYPOTHESIS_TOL {
                        return Err(self.fail(self.entry(k, a, j), v));
                    }
                    for d in 0..n {
                        let dv = self.jet.deriv(d, k, a, j);
                        if dv.abs() > HYPOTHESIS_TOL {
                            let entry = format!("{}({})", self.source.label(d), self.entry(k, a, j));
                            return Err(self.fail(entry, dv));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Profile from the reduced formula for `case`, after checking its
/// hypotheses at `point`.
pub fn specialized_profile(
    case: Reduction,
    source: &dyn FrameSource,
    split: SplitSpec,
    point: &[f64],
) -> Result<CollapseProfile> {
    let jet = jet_for(source, split, point)?;
    let check = Check {
        case,
        source,
        jet: &jet,
        split,
    };
    match case {
        Reduction::Codim1 => check.rank("r", split.r, 1)?,
        Reduction::OneDimFoliation => {
            check.rank("s", split.s, 1)?;
            check.involutive()?;
        }
        Reduction::BundleLikeOneDim => {
            check.rank("s", split.s, 1)?;
            check.involutive()?;
            check.bundle_like()?;
        }
        Reduction::Involutive => check.involutive()?,
        Reduction::BundleLike => {
            check.involutive()?;
            check.bundle_like()?;
        }
    }
    Ok(reduced(case, &jet, split))
}

fn reduced(case: Reduction, jet: &StructureJet, split: SplitSpec) -> CollapseProfile {
    let t = Terms { jet, split };
    let c = |k, i, j| jet.c.get(k, i, j);
    let (s1, s2) = restricted_scalars_from_jet(jet, split);
    match case {
        Reduction::Codim1 => {
            let h = 0;
            let mut q2 = s2;
            let mut q4 = 0.0;
            for g in split.vertical() {
                q2 += 2.0 * jet.deriv(g, h, g, h);
                q2 -= 2.0 * c(h, g, h).powi(2);
                q2 -= 2.0 * c(h, g, h) * t.vtrace(g);
                for b in split.vertical() {
                    q4 -= 0.25 * c(h, g, b).powi(2);
                    q2 -= c(h, g, b) * c(g, h, b);
                }
            }
            let mut q0 = -t.vtrace(h).powi(2);
            for a in split.vertical() {
                q0 += 2.0 * jet.deriv(h, a, h, a);
                for g in split.vertical() {
                    q0 -= 0.5 * c(a, g, h) * c(g, a, h);
                    q0 -= 0.5 * c(a, h, g).powi(2);
                }
            }
            CollapseProfile::new(q4, q2, q0, 0.0)
        }
        Reduction::OneDimFoliation | Reduction::BundleLikeOneDim => {
            let g = split.r;
            let mut q0 = s1;
            let mut qm2 = 0.0;
            for i in split.horizontal() {
                q0 += 2.0 * jet.deriv(i, g, i, g);
                q0 -= 2.0 * c(g, i, g).powi(2);
                q0 -= 2.0 * c(g, i, g) * t.htrace(i);
                for j in split.horizontal() {
                    q0 -= c(i, g, j) * c(g, i, j);
                    qm2 -= 0.25 * c(g, i, j).powi(2);
                }
            }
            let q2 = if case == Reduction::OneDimFoliation {
                let mut q2 = -t.htrace(g).powi(2);
                for j in split.horizontal() {
                    q2 += 2.0 * jet.deriv(g, j, g, j);
                    for i in split.horizontal() {
                        q2 -= 0.5 * c(j, i, g) * c(i, j, g);
                        q2 -= 0.5 * c(i, g, j).powi(2);
                    }
                }
                q2
            } else {
                0.0
            };
            CollapseProfile::new(0.0, q2, q0, qm2)
        }
        Reduction::Involutive | Reduction::BundleLike => {
            let q0 = s1 + t.dh_vtrace()
                - t.vtrace_sq()
                - 2.0 * t.vtrace_htrace_h()
                - 0.5 * t.vv_h_cross()
                - t.hvh_cross()
                - 0.5 * t.sq_v_hv();
            let qm2 = -0.25 * t.sq_v_hh();
            let q2 = if case == Reduction::Involutive {
                s2 + t.dv_htrace()
                    - t.htrace_sq()
                    - 2.0 * t.htrace_vtrace_v()
                    - 0.5 * t.hh_v_cross()
                    - t.hvv_cross()
                    - 0.5 * t.sq_h_vh()
            } else {
                s2
            };
            CollapseProfile::new(0.0, q2, q0, qm2)
        }
    }
}
