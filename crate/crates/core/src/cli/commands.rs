use rayon::prelude::*;

use super::config::Resolved;
use super::report::{
    Offender, PointRecord, Report, SignCounts, SuiteResult, SweepRow, ThresholdSummary, Verification,
};
use crate::collapse::{
    classify as classify_frame, profile_from_jet, rescale_constant, rescale_constants,
    rescale_frame, sign_thresholds, npb_from_jet, transform_structure_functions, RescaleFactor,
    SplitSpec,
};
use crate::curvature::{scalar_curvature_from_jet, scalar_curvature_frame, scalar_curvature_oracle};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{Point, ChartManifold};
use crate::structure::{FrameSource, LieFrame};
use crate::zoo::{Geometry, ZooEntry};

/// Relative tolerance of the frame formula against the coordinate oracle.
pub const ORACLE_TOL: f64 = 1e-5;
/// Absolute tolerance of transformed against direct structure functions.
pub const TRANSFORM_TOL: f64 = 1e-6;
/// Relative tolerance of the profile against the direct rescaled scalar.
pub const DECOMPOSITION_TOL: f64 = 1e-5;
/// Absolute tolerance of the frame metric against a declared metric.
pub const METRIC_TOL: f64 = 1e-8;
/// Relative tolerance of `S` against a declared constant value.
pub const EXPECTED_SCALAR_TOL: f64 = 1e-6;

pub const DECOMPOSITION_F: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn empty_report(command: &str, r: &Resolved) -> Report {
    let source = r.entry.source(r.engine);
    let coords = r
        .entry
        .chart()
        .map(|m| m.coord_names().to_vec())
        .unwrap_or_default();
    Report {
        command: command.to_string(),
        manifold: r.entry.id.clone(),
        dim: r.entry.dim(),
        labels: (0..source.dim()).map(|a| source.label(a)).collect(),
        coords,
        engine: r.engine.mode,
        seed: r.seed,
        split: r.split,
        points: Vec::new(),
        sweep: Vec::new(),
        thresholds: None,
        classification: None,
        verification: None,
    }
}

/// Per-point records, computed in parallel and kept in sample order.
fn point_records(r: &Resolved, with_thresholds: bool) -> Result<Vec<PointRecord>> {
    let source = r.entry.source(r.engine);
    let source: &dyn FrameSource = source.as_ref();
    r.samples
        .par_iter()
        .enumerate()
        .map(|(point_id, p)| {
            let jet = source.jet(p)?;
            let scalar = scalar_curvature_from_jet(&jet);
            let (profile, npb, thresholds) = match r.split {
                Some(split) => {
                    let profile = profile_from_jet(&jet, split)?;
                    let thresholds = if with_thresholds {
                        Some(sign_thresholds(&profile)?)
                    } else {
                        None
                    };
                    (Some(profile), Some(npb_from_jet(&jet, split)?), thresholds)
                }
                None => (None, None, None),
            };
            Ok(PointRecord {
                point_id,
                point: p.coords().to_vec(),
                scalar,
                profile,
                npb_indicator: npb,
                thresholds,
            })
        })
        .collect()
}

pub fn curvature(r: &Resolved) -> Result<Report> {
    let mut report = empty_report("curvature", r);
    report.points = point_records(r, false)?;
    Ok(report)
}

/// The entry with its vertical block multiplied by the constant `f`.
fn rescaled_entry(entry: &ZooEntry, split: SplitSpec, f: f64) -> Result<ZooEntry> {
    let geometry = match &entry.geometry {
        Geometry::Chart(m) => Geometry::Chart(rescale_constant(m, split, f)?),
        Geometry::Lie(l) => Geometry::Lie(LieFrame::new(
            format!("{}[f={f}]", l.name),
            rescale_constants(&l.constants, split, f)?,
        )?),
    };
    Ok(ZooEntry {
        id: format!("{}[f={f}]", entry.id),
        geometry,
        default_split: Some(split),
        expected: Vec::new(),
    })
}

pub fn collapse(r: &Resolved) -> Result<Report> {
    let split = r.require_split()?;
    let f_values = r.require_sweep()?;
    let mut report = empty_report("collapse", r);
    report.points = point_records(r, true)?;
    let rescaled = f_values
        .iter()
        .map(|&f| rescaled_entry(&r.entry, split, f))
        .collect::<Result<Vec<_>>>()?;
    let sources: Vec<Box<dyn FrameSource + '_>> =
        rescaled.iter().map(|e| e.source(r.engine)).collect();
    let rows: Vec<Vec<SweepRow>> = report
        .points
        .par_iter()
        .map(|rec| {
            let profile = rec.profile.expect("split present");
            f_values
                .iter()
                .zip(&sources)
                .map(|(&f, src)| {
                    Ok(SweepRow {
                        point_id: rec.point_id,
                        f,
                        s_direct: scalar_curvature_frame(src.as_ref(), &rec.point)?,
                        s_profile: profile.evaluate(f)?,
                        profile,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    report.sweep = rows.into_iter().flatten().collect();

    let mut summary = ThresholdSummary {
        largest_critical_f: None,
        smallest_critical_f: None,
        points_with_thresholds: 0,
        asymptotic_signs: SignCounts::default(),
        max_profile_residual: 0.0,
    };
    for rec in &report.points {
        let t = rec.thresholds.as_ref().expect("computed above");
        summary.asymptotic_signs.add(t.asymptotic_sign);
        if let (Some(&lo), Some(&hi)) = (t.critical_f.first(), t.critical_f.last()) {
            summary.points_with_thresholds += 1;
            summary.largest_critical_f = Some(summary.largest_critical_f.map_or(hi, |m| m.max(hi)));
            summary.smallest_critical_f = Some(summary.smallest_critical_f.map_or(lo, |m| m.min(lo)));
        }
    }
    summary.max_profile_residual = report
        .sweep
        .iter()
        .map(|row| (row.s_direct - row.s_profile).abs() / (1.0 + row.s_direct.abs()))
        .fold(0.0, f64::max);
    report.thresholds = Some(summary);
    Ok(report)
}

pub fn classify(r: &Resolved) -> Result<Report> {
    let split = r.require_split()?;
    let mut report = empty_report("classify", r);
    report.points = point_records(r, false)?;
    let source = r.entry.source(r.engine);
    report.classification = Some(classify_frame(source.as_ref(), split, &r.samples)?);
    Ok(report)
}

/// Accumulates the largest residual of one suite.
struct Suite {
    name: String,
    tolerance: f64,
    checks: usize,
    max_residual: f64,
    worst: Option<Offender>,
}

impl Suite {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            checks: 0,
            max_residual: 0.0,
            worst: None,
        }
    }

    fn record(&mut self, residual: f64, point_id: usize, point: &Point, detail: impl FnOnce() -> String) {
        self.checks += 1;
        // NaN counts as the worst possible residual.
        let worse = residual.is_nan() || residual > self.max_residual || self.worst.is_none();
        if worse && !self.max_residual.is_nan() {
            self.max_residual = residual;
            self.worst = Some(Offender {
                point_id,
                point: point.coords().to_vec(),
                detail: detail(),
            });
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            passed: self.max_residual <= self.tolerance,
            name: self.name,
            tolerance: self.tolerance,
            checks: self.checks,
            max_residual: self.max_residual,
            worst: self.worst,
        }
    }
}

/// Evaluates `check` at every sample in parallel and folds the residuals
/// in sample order.
fn run_suite<F>(suite: &mut Suite, samples: &[Point], check: F) -> Result<()>
where
    F: Fn(&Point) -> Result<Vec<(f64, String)>> + Sync,
{
    let results: Vec<Vec<(f64, String)>> = samples.par_iter().map(&check).collect::<Result<_>>()?;
    for (id, (p, rs)) in samples.iter().zip(results).enumerate() {
        for (residual, detail) in rs {
            suite.record(residual, id, p, || detail);
        }
    }
    Ok(())
}

fn oracle_suite(m: &ChartManifold, r: &Resolved) -> Result<SuiteResult> {
    let source = r.entry.source(r.engine);
    let source = source.as_ref();
    let mut suite = Suite::new("oracle", ORACLE_TOL);
    run_suite(&mut suite, &r.samples, |p| {
        let frame = scalar_curvature_frame(source, p)?;
        let oracle = scalar_curvature_oracle(m, &r.engine, p)?;
        Ok(vec![(
            (frame - oracle).abs() / (1.0 + oracle.abs()),
            format!("frame S = {frame}, coordinate S = {oracle}"),
        )])
    })?;
    Ok(suite.finish())
}

fn transform_suite(r: &Resolved, split: SplitSpec) -> Result<SuiteResult> {
    let mut suite = Suite::new("transform", TRANSFORM_TOL);
    match &r.entry.geometry {
        Geometry::Chart(m) => {
            let x0 = &m.coord_names()[0];
            let field = m.parse_expr(&format!("1 + {x0}^2/4"))?;
            let factors = [
                RescaleFactor::Constant(0.5),
                RescaleFactor::Constant(2.0),
                RescaleFactor::Field(field),
            ];
            for f in &factors {
                let scaled = rescale_frame(m, split, f)?;
                let base = crate::structure::ChartFrame::new(m, r.engine);
                let direct = crate::structure::ChartFrame::new(&scaled, r.engine);
                run_suite(&mut suite, &r.samples, |p| {
                    let c = base.structure(p)?;
                    let grad = f.frame_gradient(m, &r.engine, p)?;
                    let predicted = transform_structure_functions(&c, split, f.value(p)?, &grad)?;
                    let actual = direct.structure(p)?;
                    let residual = predicted.max_abs_diff(&actual);
                    Ok(vec![(residual, format!("f = {}", describe(f)))])
                })?;
            }
        }
        Geometry::Lie(l) => {
            let origin = Point::new(Vec::new())?;
            for f in [0.5, 2.0] {
                let predicted =
                    transform_structure_functions(&l.constants, split, f, &vec![0.0; l.dim()])?;
                let actual = rescale_constants(&l.constants, split, f)?;
                suite.record(predicted.max_abs_diff(&actual), 0, &origin, || format!("f = {f}"));
            }
        }
    }
    Ok(suite.finish())
}

fn describe(f: &RescaleFactor) -> String {
    match f {
        RescaleFactor::Constant(v) => v.to_string(),
        RescaleFactor::Field(e) => e.to_string(),
    }
}

fn decomposition_suite(r: &Resolved, split: SplitSpec) -> Result<SuiteResult> {
    let mut suite = Suite::new("decomposition", DECOMPOSITION_TOL);
    let source = r.entry.source(r.engine);
    let source = source.as_ref();
    let rescaled = DECOMPOSITION_F
        .iter()
        .map(|&f| rescaled_entry(&r.entry, split, f))
        .collect::<Result<Vec<_>>>()?;
    let sources: Vec<Box<dyn FrameSource + '_>> =
        rescaled.iter().map(|e| e.source(r.engine)).collect();
    run_suite(&mut suite, &r.samples, |p| {
        let profile = profile_from_jet(&source.jet(p)?, split)?;
        DECOMPOSITION_F
            .iter()
            .zip(&sources)
            .map(|(&f, src)| {
                let direct = scalar_curvature_frame(src.as_ref(), p)?;
                let predicted = profile.evaluate(f)?;
                Ok((
                    (direct - predicted).abs() / (1.0 + direct.abs()),
                    format!("f = {f}: direct S = {direct}, profile S = {predicted}"),
                ))
            })
            .collect()
    })?;
    Ok(suite.finish())
}

fn metric_suite(m: &ChartManifold, declared: &[Vec<Expr>], r: &Resolved) -> Result<SuiteResult> {
    let mut suite = Suite::new("metric", METRIC_TOL);
    run_suite(&mut suite, &r.samples, |p| {
        let g = m.metric_from_frame(p)?;
        let mut worst = (0.0f64, String::new());
        for (i, row) in declared.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = e.eval(p)?;
                let d = (g.get(i, j) - want).abs();
                if d >= worst.0 || worst.1.is_empty() {
                    worst = (d, format!("g[{i}][{j}] = {} from the frame, declared {want}", g.get(i, j)));
                }
            }
        }
        Ok(vec![worst])
    })?;
    Ok(suite.finish())
}

fn expected_scalar_suite(expected: f64, r: &Resolved) -> Result<SuiteResult> {
    let source = r.entry.source(r.engine);
    let source = source.as_ref();
    let mut suite = Suite::new("expected-scalar", EXPECTED_SCALAR_TOL);
    run_suite(&mut suite, &r.samples, |p| {
        let s = scalar_curvature_frame(source, p)?;
        Ok(vec![(
            (s - expected).abs() / (1.0 + expected.abs()),
            format!("S = {s}, expected {expected}"),
        )])
    })?;
    Ok(suite.finish())
}

/// Oracle, transform and decomposition suites, plus declared-metric and
/// expected-scalar checks when the configuration provides them.
pub fn verify(r: &Resolved) -> Result<Report> {
    let mut report = empty_report("verify", r);
    report.points = point_records(r, false)?;
    let mut suites = Vec::new();
    if let Some(m) = r.entry.chart() {
        suites.push(oracle_suite(m, r)?);
    }
    if let Some(split) = r.split {
        suites.push(transform_suite(r, split)?);
        suites.push(decomposition_suite(r, split)?);
    }
    if let (Some(m), Some(declared)) = (r.entry.chart(), &r.declared_metric) {
        suites.push(metric_suite(m, declared, r)?);
    }
    if let Some(s) = r.expected_scalar {
        suites.push(expected_scalar_suite(s, r)?);
    }
    if suites.is_empty() {
        return Err(Error::Config(format!("nothing to verify for `{}`", r.entry.id)));
    }
    report.verification = Some(Verification {
        passed: suites.iter().all(|s| s.passed),
        suites,
    });
    Ok(report)
}
