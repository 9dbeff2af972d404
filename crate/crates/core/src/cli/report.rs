//! Report types and their CSV / JSON rendering.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::collapse::{ClassificationReport, CollapseProfile, Sign, SplitSpec, Thresholds};
use crate::error::{Error, Result};
use crate::geometry::DerivativeMode;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub point_id: usize,
    pub point: Vec<f64>,
    pub scalar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<CollapseProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub npb_indicator: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point_id: usize,
    pub f: f64,
    pub s_direct: f64,
    pub s_profile: f64,
    pub profile: CollapseProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SignCounts {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl SignCounts {
    pub fn add(&mut self, s: Sign) {
        match s {
            Sign::Negative => self.negative += 1,
            Sign::Zero => self.zero += 1,
            Sign::Positive => self.positive += 1,
        }
    }
}

/// Sign-change thresholds over all sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSummary {
    /// Largest critical `f` at any point; past it every point has its
    /// asymptotic sign.
    pub largest_critical_f: Option<f64>,
    pub smallest_critical_f: Option<f64>,
    pub points_with_thresholds: usize,
    pub asymptotic_signs: SignCounts,
    /// Largest `|S_direct − S_profile| / (1 + |S_direct|)` over the sweep.
    pub max_profile_residual: f64,
}

/// Where a suite's largest residual occurred.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offender {
    pub point_id: usize,
    pub point: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub tolerance: f64,
    pub checks: usize,
    pub max_residual: f64,
    pub passed: bool,
    pub worst: Option<Offender>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub manifold: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub coords: Vec<String>,
    pub engine: DerivativeMode,
    pub seed: u64,
    pub split: Option<SplitSpec>,
    pub points: Vec<PointRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

/// 17 significant digits, `.` decimal point, independent of locale.
/// Negative zero is written as zero.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub const SWEEP_HEADER: &str = "point_id,f,S_direct,S_profile,q4,q2,q0,qm2";

impl Report {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Io(e.to_string()))
    }

    /// The sweep table for `collapse`, otherwise one row per sample point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.command == "collapse" {
            out.push_str(SWEEP_HEADER);
            out.push('\n');
            for r in &self.sweep {
                let p = &r.profile;
                let _ = write!(out, "{},{}", r.point_id, fmt_f64(r.f));
                for v in [r.s_direct, r.s_profile, p.q4, p.q2, p.q0, p.qm2] {
                    let _ = write!(out, ",{}", fmt_f64(v));
                }
                out.push('\n');
            }
            return out;
        }
        let with_profile = self.points.iter().any(|p| p.profile.is_some());
        out.push_str("point_id");
        for c in &self.coords {
            let _ = write!(out, ",{c}");
        }
        out.push_str(",S");
        if with_profile {
            out.push_str(",q4,q2,q0,qm2,npb_indicator");
        }
        out.push('\n');
        for rec in &self.points {
            let _ = write!(out, "{}", rec.point_id);
            for x in &rec.point {
                let _ = write!(out, ",{}", fmt_f64(*x));
            }
            let _ = write!(out, ",{}", fmt_f64(rec.scalar));
            if let (Some(p), Some(npb)) = (&rec.profile, rec.npb_indicator) {
                for v in [p.q4, p.q2, p.q0, p.qm2, npb] {
                    let _ = write!(out, ",{}", fmt_f64(v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_outputs(&self, csv: Option<&Path>, json: Option<&Path>) -> Result<()> {
        if let Some(path) = csv {
            write_file(path, &self.to_csv())?;
        }
        if let Some(path) = json {
            write_file(path, &self.to_json()?)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, -2.0, 1.0 / 3.0, 6.000000000000001, 1e-300, -7.5e12] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_f64(-0.0), fmt_f64(0.0));
    }
}
