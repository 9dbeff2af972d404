//! End-to-end runs of the `framecurv` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framecurv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

/// Runs `command` and returns the CSV rows (without header) as numbers.
fn csv_rows(command: &str, cfg: &Path, extra: &[&str]) -> (Vec<String>, Vec<Vec<f64>>) {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let mut args = vec![command, "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json(command: &str, cfg: &Path, extra: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut args = vec![command, "--config", cfg.to_str().unwrap(), "--json", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    let v = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    (code(&out), v)
}

#[test]
fn curvature_values() {
    for (cfg, want) in [("s3.toml", 6.0), ("flat2.toml", 0.0), ("s2.toml", 2.0), ("seven.toml", -6.5)] {
        let (header, rows) = csv_rows("curvature", &config(cfg), &[]);
        let s_col = header.iter().position(|h| h == "S").unwrap();
        assert!(!rows.is_empty());
        for r in rows {
            assert!((r[s_col] - want).abs() <= 1e-6, "{cfg}: {}", r[s_col]);
        }
    }
}

#[test]
fn verify_exit_codes() {
    for (cfg, want) in [
        ("s3.toml", 0),
        ("seven.toml", 0),
        ("flat2.toml", 0),
        ("su2.toml", 0),
        ("heisenberg.toml", 0),
        ("heisenberg-flipped.toml", 1),
    ] {
        let out = run(&["verify", "--config", config(cfg).to_str().unwrap(), "--points", "20"]);
        assert_eq!(code(&out), want, "{cfg}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&["verify", "--config", config("heisenberg-flipped.toml").to_str().unwrap()]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("suite `metric`") && err.contains("at point"), "{err}");
}

#[test]
fn verify_report_has_residuals() {
    let (c, v) = json("verify", &config("seven.toml"), &["--points", "10"]);
    assert_eq!(c, 0);
    let suites = v["verification"]["suites"].as_array().unwrap();
    let names: Vec<&str> = suites.iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["oracle", "transform", "decomposition", "expected-scalar"]);
    for s in suites {
        assert!(s["max_residual"].as_f64().unwrap() <= s["tolerance"].as_f64().unwrap());
        assert!(s["checks"].as_u64().unwrap() > 0);
    }
}

#[test]
fn s3_sweep_changes_sign_at_two() {
    let (header, rows) = csv_rows("collapse", &config("s3.toml"), &["--points", "10"]);
    assert_eq!(header.join(","), "point_id,f,S_direct,S_profile,q4,q2,q0,qm2");
    assert_eq!(rows.len(), 10 * 36);
    for r in &rows {
        let (f, s) = (r[1], r[2]);
        assert!((s - (-2.0 * f.powi(4) + 8.0 * f * f)).abs() <= 1e-6 * (1.0 + s.abs()));
        if f < 2.0 - 1e-9 {
            assert!(s > 0.0);
        } else if f > 2.0 + 1e-9 {
            assert!(s < 0.0);
        }
    }
}

#[test]
fn seven_sweep_increases_and_turns_positive() {
    let (_, rows) = csv_rows("collapse", &config("seven.toml"), &["--points", "5"]);
    for point in rows.chunks(8) {
        for w in point.windows(2) {
            assert!(w[1][2] > w[0][2]);
        }
        let threshold = (8.0f64 / 1.5).sqrt();
        for r in point.iter().filter(|r| r[1] > threshold) {
            assert!(r[2] > 0.0);
        }
    }
    let out = run(&["collapse", "--config", config("seven.toml").to_str().unwrap(), "--points", "3"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("positive 3"), "{text}");
}

#[test]
fn flat_sweep_is_zero() {
    let (_, rows) = csv_rows("collapse", &config("flat2.toml"), &[]);
    assert!(rows.iter().all(|r| r[2..].iter().all(|v| *v == 0.0)));
}

#[test]
fn classification_reports() {
    let (c, v) = json("classify", &config("s3.toml"), &["--points", "20"]);
    assert_eq!(c, 0);
    assert_eq!(v["classification"]["everywhere_noninvolutive"], true);
    let (_, v) = json("classify", &config("seven.toml"), &["--points", "20"]);
    let cl = &v["classification"];
    assert_eq!(cl["involutive"], true);
    assert_eq!(cl["bundle_like_certificate"], "not-for-this-frame");
    assert_eq!(cl["bundle_like_witness"]["entry"], "c^e2_{e1,e3}");
    assert_eq!(cl["npb_certificate"], "yes");
    let (_, v) = json("classify", &config("flat7.toml"), &["--points", "20"]);
    assert_eq!(v["classification"]["involutive"], true);
    assert_eq!(v["classification"]["bundle_like_certificate"], "yes");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("s3.toml");
    let mut outputs = Vec::new();
    for (i, seed) in ["7", "7", "8"].iter().enumerate() {
        let csv = dir.path().join(format!("{i}.csv"));
        let js = dir.path().join(format!("{i}.json"));
        let out = run(&[
            "collapse",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            seed,
            "--csv",
            csv.to_str().unwrap(),
            "--json",
            js.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        outputs.push((std::fs::read(csv).unwrap(), std::fs::read(js).unwrap(), out.stdout));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0].0, outputs[2].0);
}

#[test]
fn overrides_apply() {
    let (_, rows) = csv_rows(
        "collapse",
        &config("s3.toml"),
        &["--points", "3", "--f-min", "1", "--f-max", "2", "--steps", "2", "--engine", "fd"],
    );
    assert_eq!(rows.len(), 9);
    assert_eq!(rows.iter().map(|r| r[1]).take(3).collect::<Vec<_>>(), [1.0, 1.5, 2.0]);
    let (_, v) = json("curvature", &config("s3.toml"), &["--points", "4", "--engine", "fd"]);
    assert_eq!(v["engine"], "central");
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "[manifold]\nid = \"s3\"\n[split]\nr = 3\n",
        "[manifold]\nid = \"s3\"\n[samples]\ncout = 5\n",
        "[manifold]\nid = \"torus\"\n",
        "[manifold.custom]\nname = \"c\"\ncoords = [\"x\"]\nframe = [[\"1 + \"]]\nbox = [[0.0, 1.0]]\n",
        "[manifold.custom]\nname = \"c\"\ncoords = [\"x\"]\nframe = [[\"z\"]]\nbox = [[0.0, 1.0]]\n",
        "not toml at all [",
    ];
    for text in cases {
        let cfg = write_config(dir.path(), text);
        let out = run(&["curvature", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{text}\n{}", String::from_utf8_lossy(&out.stderr));
    }
    // Collapse without a sweep, classify without a split.
    let out = run(&["collapse", "--config", config("flat7.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let out = run(&["classify", "--config", config("s2.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&run(&["curvature"])), 2);
    assert_eq!(code(&run(&["shrink", "--config", "x"])), 2);
    assert_eq!(code(&run(&["curvature", "--config", "/nonexistent.toml"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[manifold.custom]\nname = \"half\"\ncoords = [\"x\", \"y\"]\n\
         frame = [[\"sqrt(x)\", \"0\"], [\"0\", \"1\"]]\nbox = [[-1.0, 3.0], [0.0, 1.0]]\n",
    );
    let out = run(&["curvature", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}
