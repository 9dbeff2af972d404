use rayon::prelude::*;
use serde::Serialize;

use super::profile::{npb_from_jet, restricted_scalars_from_jet};
use super::SplitSpec;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::structure::{FrameSource, StructureJet};

/// Magnitudes below this are zero.
pub const ZERO_TOL: f64 = 1e-8;
/// Magnitudes above this are non-zero; values in between are indeterminate.
pub const NONZERO_TOL: f64 = 1e-6;

/// Frame-relative verdict: "yes" is proven by this frame, a "no" only says
/// this frame does not show it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Yes,
    NotForThisFrame,
}

impl Certificate {
    fn from_bool(holds: bool) -> Self {
        if holds {
            Certificate::Yes
        } else {
            Certificate::NotForThisFrame
        }
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Certificate::Yes => "yes",
            Certificate::NotForThisFrame => "not-for-this-frame",
        })
    }
}

/// A structure function (or indicator) value observed at a sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point_id: usize,
    pub point: Vec<f64>,
    pub entry: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub samples: usize,
    pub involutive: bool,
    /// At every sample some `c^i_{γβ}` is non-zero.
    pub everywhere_noninvolutive: bool,
    /// At every sample every `c^i_{γβ}` with `γ ≠ β` is non-zero.
    pub everywhere_noninvolutive_all_entries: bool,
    pub bundle_like_certificate: Certificate,
    pub npb_certificate: Certificate,
    pub npb_min: f64,
    pub npb_max: f64,
    /// Largest `|c^i_{γβ}|` over all samples.
    pub involutivity_witness: Witness,
    /// Sample where the largest `|c^i_{γβ}|` is smallest.
    pub weakest_noninvolutive_witness: Witness,
    /// Largest `|c^k_{αj}|` over all samples.
    pub bundle_like_witness: Witness,
    /// Sample with the smallest indicator.
    pub npb_witness: Witness,
    pub s1_range: (f64, f64),
    pub s2_range: (f64, f64),
    pub warnings: Vec<String>,
}

/// Largest-magnitude entry of a block of structure functions.
#[derive(Default)]
struct Extreme {
    magnitude: f64,
    value: f64,
    entry: String,
}

impl Extreme {
    fn offer(&mut self, value: f64, entry: impl FnOnce() -> String) {
        if value.abs() > self.magnitude || self.entry.is_empty() {
            *self = Extreme {
                magnitude: value.abs(),
                value,
                entry: entry(),
            };
        }
    }
}

struct PointFacts {
    /// Largest `|c^i_{γβ}|`.
    escape: Extreme,
    /// Smallest `|c^i_{γβ}|` over `γ ≠ β`.
    escape_min: f64,
    /// Largest `|c^k_{αj}|`.
    bundle: Extreme,
    npb: f64,
    s1: f64,
    s2: f64,
}

fn entry(source: &dyn FrameSource, k: usize, i: usize, j: usize) -> String {
    format!("c^{}_{{{},{}}}", source.label(k), source.label(i), source.label(j))
}

fn facts(source: &dyn FrameSource, split: SplitSpec, jet: &StructureJet) -> Result<PointFacts> {
    let c = &jet.c;
    let mut escape = Extreme::default();
    let mut escape_min = f64::INFINITY;
    for i in split.horizontal() {
        for g in split.vertical() {
            for b in split.vertical() {
                if g == b {
                    continue;
                }
                let v = c.get(i, g, b);
                escape_min = escape_min.min(v.abs());
                escape.offer(v, || entry(source, i, g, b));
            }
        }
    }
    let mut bundle = Extreme::default();
    for k in split.horizontal() {
        for a in split.vertical() {
            for j in split.horizontal() {
                bundle.offer(c.get(k, a, j), || entry(source, k, a, j));
            }
        }
    }
    let (s1, s2) = restricted_scalars_from_jet(jet, split);
    Ok(PointFacts {
        escape,
        escape_min,
        bundle,
        npb: npb_from_jet(jet, split)?,
        s1,
        s2,
    })
}

/// Involutivity, non-involutivity and the two frame certificates over a
/// sample set. Per-point work runs in parallel; the reduction is in sample
/// order.
pub fn classify(
    source: &dyn FrameSource,
    split: SplitSpec,
    samples: &[Point],
) -> Result<ClassificationReport> {
    split.check_dim(source.dim())?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("classification needs at least one sample".into()));
    }
    let per_point: Vec<PointFacts> = samples
        .par_iter()
        .map(|p| facts(source, split, &source.jet(p)?))
        .collect::<Result<_>>()?;

    let witness = |id: usize, e: &Extreme| Witness {
        point_id: id,
        point: samples[id].to_vec(),
        entry: if e.entry.is_empty() { "none".into() } else { e.entry.clone() },
        value: e.value,
    };

    let argmax = |key: &dyn Fn(&PointFacts) -> f64| {
        (0..per_point.len()).fold(0, |best, id| {
            if key(&per_point[id]) > key(&per_point[best]) {
                id
            } else {
                best
            }
        })
    };
    let argmin = |key: &dyn Fn(&PointFacts) -> f64| argmax(&|f| -key(f));

    let esc_max_id = argmax(&|f| f.escape.magnitude);
    let esc_weak_id = argmin(&|f| f.escape.magnitude);
    let bundle_id = argmax(&|f| f.bundle.magnitude);
    let npb_min_id = argmin(&|f| f.npb);
    let npb_max_id = argmax(&|f| f.npb);

    let involutive = per_point[esc_max_id].escape.magnitude < ZERO_TOL;
    let everywhere_noninvolutive = per_point[esc_weak_id].escape.magnitude > NONZERO_TOL;
    let everywhere_noninvolutive_all_entries =
        split.s >= 2 && per_point.iter().all(|f| f.escape_min > NONZERO_TOL);
    let bundle_like = per_point[bundle_id].bundle.magnitude < ZERO_TOL;
    let npb = per_point[npb_min_id].npb > 0.0;

    let mut warnings = Vec::new();
    for (id, f) in per_point.iter().enumerate() {
        if (ZERO_TOL..=NONZERO_TOL).contains(&f.escape.magnitude) {
            warnings.push(format!(
                "indeterminate involutivity at sample {id}: |{}| = {:e}",
                f.escape.entry, f.escape.magnitude
            ));
        }
        if (ZERO_TOL..=NONZERO_TOL).contains(&f.bundle.magnitude) {
            warnings.push(format!(
                "indeterminate bundle-like entry at sample {id}: |{}| = {:e}",
                f.bundle.entry, f.bundle.magnitude
            ));
        }
    }

    let range = |key: &dyn Fn(&PointFacts) -> f64| {
        per_point.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
            (lo.min(key(f)), hi.max(key(f)))
        })
    };

    Ok(ClassificationReport {
        samples: samples.len(),
        involutive,
        everywhere_noninvolutive,
        everywhere_noninvolutive_all_entries,
        bundle_like_certificate: Certificate::from_bool(bundle_like),
        npb_certificate: Certificate::from_bool(npb),
        npb_min: per_point[npb_min_id].npb,
        npb_max: per_point[npb_max_id].npb,
        involutivity_witness: witness(esc_max_id, &per_point[esc_max_id].escape),
        weakest_noninvolutive_witness: witness(esc_weak_id, &per_point[esc_weak_id].escape),
        bundle_like_witness: witness(bundle_id, &per_point[bundle_id].bundle),
        npb_witness: Witness {
            point_id: npb_min_id,
            point: samples[npb_min_id].to_vec(),
            entry: "npb".into(),
            value: per_point[npb_min_id].npb,
        },
        s1_range: range(&|f| f.s1),
        s2_range: range(&|f| f.s2),
        warnings,
    })
}
