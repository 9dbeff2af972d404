//! Acceptance run: one `[PASS]` / `[FAIL]` line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};

use framecurv::collapse::{
    classify, collapse_profile, evaluate_profile, npb_indicator, rescale_constant, rescale_frame,
    restricted_scalars, sign_thresholds, specialized_profile, transform_structure_functions,
    Certificate, RescaleFactor, Reduction, SplitSpec,
};
use framecurv::curvature::{scalar_curvature_frame, scalar_curvature_lie, scalar_curvature_oracle};
use framecurv::error::Error;
use framecurv::geometry::{ChartManifold, DerivativeEngine, Point};
use framecurv::structure::{structure_derivatives_along, structure_tensor, ChartFrame, StructureTensor};
use framecurv::zoo::{self, ZooEntry};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ad() -> DerivativeEngine {
    DerivativeEngine::dual()
}

fn entry(id: &str) -> ZooEntry {
    zoo::lookup(id, None).expect("fixture")
}

fn chart(e: &ZooEntry) -> &ChartManifold {
    e.chart().expect("chart fixture")
}

fn pts(e: &ZooEntry, n: usize, seed: u64) -> Vec<Point> {
    e.sample_points(n, seed).expect("samples")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

/// Triple loop over the three sums of the constant-structure formula.
fn brute_force_lie(c: &StructureTensor) -> f64 {
    let n = c.dim();
    let (mut trace, mut cross, mut square) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                trace += c.get(k, i, k) * c.get(j, i, j);
                cross += c.get(i, k, j) * c.get(k, i, j);
                square += c.get(i, k, j) * c.get(i, k, j);
            }
        }
    }
    -trace - 0.5 * cross - 0.25 * square
}

fn criterion_1() -> Outcome {
    let s3 = entry("s3");
    let src = s3.source(ad());
    let mut worst = 0.0f64;
    for p in pts(&s3, 100, 1) {
        let s = scalar_curvature_frame(src.as_ref(), &p).map_err(e2s)?;
        worst = worst.max((s - 6.0).abs());
    }
    ensure(worst <= 1e-6, || format!("chart S off by {worst:e}"))?;
    let lie = scalar_curvature_lie(&zoo::su2_constants());
    ensure((lie - 6.0).abs() <= 4.0 * f64::EPSILON * 6.0, || format!("constants give {lie}"))?;
    Ok(format!("max |S - 6| = {worst:.1e} over 100 points; constants give {lie}"))
}

fn criterion_2() -> Outcome {
    let s3 = entry("s3");
    let m = chart(&s3);
    let split = SplitSpec::with_rank(3, 1).map_err(e2s)?;
    let src = s3.source(ad());
    let want = [-2.0, 8.0, 0.0, 0.0];
    let mut coeff_err = 0.0f64;
    let mut eval_err = 0.0f64;
    let mut root_err = 0.0f64;
    let points = pts(&s3, 100, 2);
    for p in &points {
        let prof = collapse_profile(src.as_ref(), split, p).map_err(e2s)?;
        for (a, b) in prof.coefficients().iter().zip(want) {
            coeff_err = coeff_err.max((a - b).abs());
        }
        for f in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let v = evaluate_profile(&prof, f).map_err(e2s)?;
            eval_err = eval_err.max((v - (-2.0 * f.powi(4) + 8.0 * f * f)).abs());
        }
        let t = sign_thresholds(&prof).map_err(e2s)?;
        ensure(t.critical_f.len() == 1, || format!("thresholds {:?}", t.critical_f))?;
        root_err = root_err.max((t.critical_f[0] - 2.0).abs());
    }
    ensure(coeff_err <= 1e-7, || format!("profile off by {coeff_err:e}"))?;
    ensure(eval_err <= 1e-6, || format!("evaluation off by {eval_err:e}"))?;
    ensure(root_err <= 1e-9, || format!("threshold off by {root_err:e}"))?;
    let mut largest = f64::NEG_INFINITY;
    for f in [2.5, 3.0, 4.0] {
        let scaled = rescale_constant(m, split, f).map_err(e2s)?;
        let fsrc = ChartFrame::new(&scaled, ad());
        for p in points.iter().take(20) {
            let s = scalar_curvature_frame(&fsrc, p).map_err(e2s)?;
            largest = largest.max(s);
        }
    }
    ensure(largest < 0.0, || format!("S = {largest} past the threshold"))?;
    Ok(format!(
        "coefficients {coeff_err:.1e}, evaluation {eval_err:.1e}, threshold {root_err:.1e}; largest S for f>2 is {largest:.3}"
    ))
}

fn criterion_3() -> Outcome {
    let entries = [
        zoo::flat(2).map_err(e2s)?,
        zoo::flat(7).map_err(e2s)?,
        zoo::sphere2(),
        zoo::sphere3(),
        zoo::seven_manifold(zoo::DEFAULT_K_H).map_err(e2s)?,
        zoo::hyperbolic(zoo::DEFAULT_K_H).map_err(e2s)?,
    ];
    let mut worst = (0.0f64, String::new());
    for e in &entries {
        let m = chart(e);
        let src = e.source(ad());
        for p in pts(e, 100, 3) {
            let s = scalar_curvature_frame(src.as_ref(), &p).map_err(e2s)?;
            let o = scalar_curvature_oracle(m, &ad(), &p).map_err(e2s)?;
            let r = (s - o).abs() / (1.0 + s.abs());
            if r > worst.0 {
                worst = (r, e.id.clone());
            }
        }
    }
    ensure(worst.0 <= 1e-5, || format!("{} residual {:e}", worst.1, worst.0))?;
    Ok(format!("6 charts x 100 points, max relative residual {:.1e}", worst.0))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for e in [zoo::sphere3(), zoo::seven_manifold(zoo::DEFAULT_K_H).map_err(e2s)?] {
        let m = chart(&e);
        let split = e.default_split.expect("split");
        let x0 = &m.coord_names()[0];
        let factors = [
            RescaleFactor::Constant(0.5),
            RescaleFactor::Constant(2.0),
            RescaleFactor::Field(m.parse_expr(&format!("1 + {x0}^2/4")).map_err(e2s)?),
        ];
        for f in &factors {
            let scaled = rescale_frame(m, split, f).map_err(e2s)?;
            for p in pts(&e, 50, 4) {
                let c = structure_tensor(m, &ad(), &p).map_err(e2s)?;
                let grad = f.frame_gradient(m, &ad(), &p).map_err(e2s)?;
                let fv = f.value(&p).map_err(e2s)?;
                let predicted = transform_structure_functions(&c, split, fv, &grad).map_err(e2s)?;
                let direct = structure_tensor(&scaled, &ad(), &p).map_err(e2s)?;
                worst = worst.max(predicted.max_abs_diff(&direct));
                checks += 1;
            }
        }
    }
    ensure(worst <= 1e-6, || format!("max entry difference {worst:e}"))?;
    Ok(format!("{checks} frames compared, max entry difference {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut cases = 0;
    for e in zoo::all() {
        let points = pts(&e, 20, 5);
        let src = e.source(ad());
        for split in e.admissible_splits() {
            let rescaled: Vec<ZooEntry> = [0.5, 1.0, 2.0, 5.0]
                .iter()
                .map(|&f| {
                    let geometry = match &e.geometry {
                        zoo::Geometry::Chart(m) => zoo::Geometry::Chart(rescale_constant(m, split, f)?),
                        zoo::Geometry::Lie(l) => zoo::Geometry::Lie(framecurv::structure::LieFrame::new(
                            "scaled",
                            framecurv::collapse::rescale_constants(&l.constants, split, f)?,
                        )?),
                    };
                    Ok(ZooEntry {
                        id: format!("{}[f={f}]", e.id),
                        geometry,
                        default_split: None,
                        expected: Vec::new(),
                    })
                })
                .collect::<Result<_, Error>>()
                .map_err(e2s)?;
            for p in &points {
                let prof = collapse_profile(src.as_ref(), split, p).map_err(e2s)?;
                for (f, re) in [0.5, 1.0, 2.0, 5.0].iter().zip(&rescaled) {
                    let direct = scalar_curvature_frame(re.source(ad()).as_ref(), p).map_err(e2s)?;
                    let predicted = prof.evaluate(*f).map_err(e2s)?;
                    let r = (direct - predicted).abs() / (1.0 + direct.abs());
                    if r > worst.0 {
                        worst = (r, format!("{} r={} f={f}", e.id, split.r));
                    }
                    cases += 1;
                }
            }
        }
    }
    ensure(worst.0 <= 1e-5, || format!("{} residual {:e}", worst.1, worst.0))?;
    Ok(format!("{} entries, every split, {cases} evaluations, max relative residual {:.1e}", zoo::IDS.len(), worst.0))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for k_h in [zoo::DEFAULT_K_H, -2.0] {
        let e = zoo::seven_manifold(k_h).map_err(e2s)?;
        let split = e.default_split.expect("split");
        let src = e.source(ad());
        // q0 reference: the coordinate computation on the hyperbolic factor alone.
        let h = zoo::hyperbolic(k_h).map_err(e2s)?;
        let hp = pts(&h, 1, 0).remove(0);
        let q0_ref = scalar_curvature_oracle(chart(&h), &ad(), &hp).map_err(e2s)?;
        ensure((q0_ref - 2.0 * k_h).abs() <= 1e-8, || format!("hyperbolic oracle gives {q0_ref}"))?;
        for p in pts(&e, 50, 6) {
            let (_, s2) = restricted_scalars(src.as_ref(), split, &p).map_err(e2s)?;
            let npb = npb_indicator(src.as_ref(), split, &p).map_err(e2s)?;
            let q = collapse_profile(src.as_ref(), split, &p).map_err(e2s)?;
            ensure((s2 - 2.0).abs() <= 1e-6, || format!("S2 = {s2}"))?;
            ensure((npb - 1.5).abs() <= 1e-6, || format!("npb = {npb}"))?;
            ensure(q.q4.abs() <= 1e-9 && q.qm2.abs() <= 1e-9, || format!("q4 = {}, qm2 = {}", q.q4, q.qm2))?;
            ensure((q.q2 - 1.5).abs() <= 1e-6, || format!("q2 = {}", q.q2))?;
            ensure((q.q0 - q0_ref).abs() <= 1e-5, || format!("q0 = {} vs {q0_ref}", q.q0))?;
        }
        lines.push(format!("K_H={k_h}: q0={q0_ref}"));
    }
    Ok(format!(
        "S2=2, npb=1.5, q4=qm2=0, q2=1.5 at 50 points; {}; at K_H=-2 the profile is 3/2 f^2 - 4",
        lines.join(", ")
    ))
}

fn criterion_7() -> Outcome {
    let s3 = entry("s3");
    let r = classify(s3.source(ad()).as_ref(), SplitSpec::with_rank(3, 1).map_err(e2s)?, &pts(&s3, 100, 7))
        .map_err(e2s)?;
    ensure(r.everywhere_noninvolutive && !r.involutive, || "s3 not flagged non-involutive".into())?;

    let seven = entry("seven");
    let split = seven.default_split.expect("split");
    let r = classify(seven.source(ad()).as_ref(), split, &pts(&seven, 100, 7)).map_err(e2s)?;
    ensure(r.involutive, || "seven not involutive".into())?;
    ensure(r.bundle_like_certificate == Certificate::NotForThisFrame, || {
        format!("seven bundle-like {}", r.bundle_like_certificate)
    })?;
    let w = &r.bundle_like_witness;
    ensure(w.entry == "c^e2_{e1,e3}" && (w.value.abs() - 1.0).abs() <= 1e-9, || {
        format!("witness {} = {}", w.entry, w.value)
    })?;
    ensure(r.npb_certificate == Certificate::Yes, || format!("seven npb {}", r.npb_certificate))?;

    let mut flat_cases = 0;
    for n in [2, 7] {
        let f = zoo::flat(n).map_err(e2s)?;
        for split in f.admissible_splits() {
            let r = classify(f.source(ad()).as_ref(), split, &pts(&f, 30, 7)).map_err(e2s)?;
            ensure(r.involutive && r.bundle_like_certificate == Certificate::Yes, || {
                format!("flat{n} r={} misclassified", split.r)
            })?;
            flat_cases += 1;
        }
    }
    Ok(format!(
        "s3 everywhere non-involutive; seven involutive, bundle-like not-for-this-frame ({} = {}), NPB yes; {flat_cases} flat splits bundle-like",
        w.entry, w.value
    ))
}

fn criterion_8() -> Outcome {
    let cases: [(&str, usize, Reduction); 9] = [
        ("s3", 1, Reduction::Codim1),
        ("seven", 4, Reduction::Involutive),
        ("seven", 6, Reduction::OneDimFoliation),
        ("seven", 6, Reduction::BundleLikeOneDim),
        ("flat7", 6, Reduction::OneDimFoliation),
        ("flat7", 6, Reduction::BundleLikeOneDim),
        ("flat7", 3, Reduction::BundleLike),
        ("flat7", 3, Reduction::Involutive),
        ("flat2", 1, Reduction::Codim1),
    ];
    let mut worst = 0.0f64;
    for (id, r, case) in cases {
        let e = entry(id);
        let split = SplitSpec::with_rank(e.dim(), r).map_err(e2s)?;
        let src = e.source(ad());
        for p in pts(&e, 20, 8) {
            let special = specialized_profile(case, src.as_ref(), split, &p)
                .map_err(|err| format!("{id} r={r} {case}: {err}"))?;
            let full = collapse_profile(src.as_ref(), split, &p).map_err(e2s)?;
            worst = worst.max(special.max_abs_diff(&full));
        }
    }
    ensure(worst <= 1e-9, || format!("specialised profiles differ by {worst:e}"))?;

    let seven = entry("seven");
    let p = pts(&seven, 1, 8).remove(0);
    match specialized_profile(Reduction::BundleLike, seven.source(ad()).as_ref(), seven.default_split.unwrap(), &p) {
        Err(Error::Hypothesis { case, entry, value }) => ensure(
            case == "bundle-like" && entry == "c^e2_{e1,e3}" && (value.abs() - 1.0).abs() < 1e-9,
            || format!("unexpected violation {case} {entry} {value}"),
        )?,
        other => return Err(format!("seven bundle-like accepted: {other:?}")),
    }
    let s3 = entry("s3");
    let p = pts(&s3, 1, 8).remove(0);
    let s3_src = s3.source(ad());
    for (r, case) in [(1, Reduction::Involutive), (2, Reduction::Codim1)] {
        let split = SplitSpec::with_rank(3, r).map_err(e2s)?;
        match specialized_profile(case, s3_src.as_ref(), split, &p) {
            Err(Error::Hypothesis { .. }) => {}
            other => return Err(format!("s3 r={r} {case} accepted: {other:?}")),
        }
    }
    Ok(format!("9 admissible cases agree to {worst:.1e}; 3 violating inputs rejected with the hypothesis error"))
}

fn criterion_9() -> Outcome {
    let realizations = [("su2", "s3"), ("heisenberg", "nil3"), ("abelian3", "flat3")];
    let mut chart_err = 0.0f64;
    for (lie, chart_id) in realizations {
        let e = zoo::lie_fixture(lie).map_err(e2s)?;
        let c = &e.lie().expect("lie").constants;
        let a = scalar_curvature_lie(c);
        let b = brute_force_lie(c);
        ensure((a - b).abs() <= 4.0 * f64::EPSILON * (1.0 + a.abs()), || {
            format!("{lie}: {a} vs brute force {b}")
        })?;
        let ce = entry(chart_id);
        let src = ce.source(ad());
        for p in pts(&ce, 50, 9) {
            let s = scalar_curvature_frame(src.as_ref(), &p).map_err(e2s)?;
            chart_err = chart_err.max((s - a).abs());
        }
    }
    ensure(chart_err <= 1e-6, || format!("charts differ by {chart_err:e}"))?;
    Ok(format!("su2, heisenberg, abelian3 match the triple loop; charts agree to {chart_err:.1e}"))
}

fn criterion_10() -> Outcome {
    let fd = DerivativeEngine::central();
    let mut worst = (0.0f64, String::new());
    for e in zoo::all() {
        let Some(m) = e.chart() else { continue };
        for p in pts(&e, 50, 10) {
            for a in 0..m.dim() {
                let x = structure_derivatives_along(m, &ad(), a, &p).map_err(e2s)?;
                let y = structure_derivatives_along(m, &fd, a, &p).map_err(e2s)?;
                let d = x.max_abs_diff(&y);
                if d > worst.0 {
                    worst = (d, e.id.clone());
                }
            }
        }
    }
    ensure(worst.0 <= 1e-5, || format!("{}: {:e}", worst.1, worst.0))?;
    Ok(format!("every chart entry x 50 points, max |AD - FD| = {:.1e} ({})", worst.0, worst.1))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/s3.toml");
    let mut runs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("run{i}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_framecurv"))
            .args(["collapse", "--config"])
            .arg(&cfg)
            .args(["--seed", "42", "--csv"])
            .arg(&csv)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        runs.push(std::fs::read(&csv).map_err(|e| e.to_string())?);
    }
    ensure(runs[0] == runs[1], || "CSV outputs differ".into())?;
    Ok(format!("two runs, {} identical bytes", runs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("S3 scalar curvature", criterion_1),
        ("S3 collapse profile and threshold", criterion_2),
        ("frame formula vs coordinate computation", criterion_3),
        ("rescaled structure functions", criterion_4),
        ("collapse decomposition identity", criterion_5),
        ("seven-dimensional fixture", criterion_6),
        ("classification", criterion_7),
        ("special-case profiles", criterion_8),
        ("constant-structure formula", criterion_9),
        ("dual vs central derivatives", criterion_10),
        ("deterministic sweep output", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
