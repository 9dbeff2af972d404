//! The `framecurv` command line.
//!
//! ```text
//! framecurv <curvature|verify|collapse|classify> --config <path>
//!     [--points N] [--seed S] [--engine ad|fd] [--csv <path>] [--json <path>]
//!     [--f-min F --f-max F --steps N]
//! ```
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical degeneracy.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::geometry::DerivativeMode;
pub use config::{Overrides, Resolved, RunConfig};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "framecurv", version, about = "Scalar curvature from frame structure functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Curvature,
    Verify,
    Collapse,
    Classify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scalar curvature at each sample point
    Curvature(RunArgs),
    /// Check the frame formula, the rescaling rules and the collapse profile
    Verify(RunArgs),
    /// Sweep the collapse factor f and report sign thresholds
    Collapse(RunArgs),
    /// Involutivity and the bundle-like / NPB certificates for the split
    Classify(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Ad,
    Fd,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub f_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub f_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

impl RunArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            points: self.points,
            seed: self.seed,
            engine: self.engine.map(|e| match e {
                EngineArg::Ad => DerivativeMode::Dual,
                EngineArg::Fd => DerivativeMode::Central,
            }),
            csv: self.csv.clone(),
            json: self.json.clone(),
            f_min: self.f_min,
            f_max: self.f_max,
            steps: self.steps,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Loads the configuration, applies the overrides and runs one command.
pub fn execute(command: &str, config: &RunConfig, overrides: &Overrides) -> Result<(Report, Resolved), Error> {
    let mut config = config.clone();
    config.apply(overrides);
    let resolved = config.resolve()?;
    let report = match command {
        "curvature" => commands::curvature(&resolved)?,
        "verify" => commands::verify(&resolved)?,
        "collapse" => commands::collapse(&resolved)?,
        "classify" => commands::classify(&resolved)?,
        other => return Err(Error::InvalidArgument(format!("unknown command `{other}`"))),
    };
    Ok((report, resolved))
}

/// Parses `args` (including the program name), runs the command, prints a
/// summary to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let (name, args) = match &cli.command {
        Command::Curvature(a) => ("curvature", a),
        Command::Verify(a) => ("verify", a),
        Command::Collapse(a) => ("collapse", a),
        Command::Classify(a) => ("classify", a),
    };
    let result = RunConfig::load(&args.config)
        .and_then(|c| execute(name, &c, &args.overrides()))
        .and_then(|(report, resolved)| {
            report.write_outputs(resolved.csv.as_deref(), resolved.json.as_deref())?;
            Ok(report)
        });
    match result {
        Ok(report) => {
            let _ = out.write_all(summary(&report).as_bytes());
            match &report.verification {
                Some(v) if !v.passed => {
                    for s in v.suites.iter().filter(|s| !s.passed) {
                        if let Some(w) = &s.worst {
                            let _ = writeln!(
                                err,
                                "verification failed: suite `{}` residual {:e} > {:e} at point {} {:?}: {}",
                                s.name, s.max_residual, s.tolerance, w.point_id, w.point, w.detail
                            );
                        }
                    }
                    EXIT_VERIFY_FAILED
                }
                _ => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Compact display: fixed point for ordinary magnitudes, exponent otherwise.
fn num(v: f64) -> String {
    let v = v + 0.0;
    if v == 0.0 || (1e-3..1e6).contains(&v.abs()) {
        format!("{v:.9}")
    } else {
        format!("{v:.3e}")
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Human-readable summary printed on stdout.
pub fn summary(r: &Report) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} on {} (dim {}, {} points, engine {}, seed {})",
        r.command,
        r.manifold,
        r.dim,
        r.points.len(),
        match r.engine {
            DerivativeMode::Dual => "ad",
            DerivativeMode::Central => "fd",
        },
        r.seed
    );
    if let Some(split) = r.split {
        let _ = writeln!(s, "split: r = {}, s = {}", split.r, split.s);
    }
    let (lo, hi) = range(r.points.iter().map(|p| p.scalar));
    let _ = writeln!(s, "S: min {} max {}", num(lo), num(hi));
    if r.points.iter().any(|p| p.npb_indicator.is_some()) {
        let (lo, hi) = range(r.points.iter().filter_map(|p| p.npb_indicator));
        let _ = writeln!(s, "npb indicator: min {} max {}", num(lo), num(hi));
    }
    if let Some(t) = &r.thresholds {
        match t.largest_critical_f {
            Some(fc) => {
                let _ = writeln!(
                    s,
                    "sign thresholds: {} of {} points, f* in [{}, {}]",
                    t.points_with_thresholds,
                    r.points.len(),
                    num(t.smallest_critical_f.unwrap_or(fc)),
                    num(fc)
                );
            }
            None => {
                let _ = writeln!(s, "sign thresholds: none");
            }
        }
        let c = t.asymptotic_signs;
        let _ = writeln!(
            s,
            "asymptotic sign (f -> inf): negative {}, zero {}, positive {}",
            c.negative, c.zero, c.positive
        );
        let _ = writeln!(s, "max |S_direct - S_profile| / (1 + |S|): {:e}", t.max_profile_residual);
    }
    if let Some(c) = &r.classification {
        let _ = writeln!(s, "involutive: {}", c.involutive);
        let _ = writeln!(
            s,
            "everywhere non-involutive: {} (every entry: {})",
            c.everywhere_noninvolutive, c.everywhere_noninvolutive_all_entries
        );
        let _ = writeln!(
            s,
            "bundle-like certificate: {} (witness {} = {})",
            c.bundle_like_certificate,
            c.bundle_like_witness.entry,
            num(c.bundle_like_witness.value)
        );
        let _ = writeln!(
            s,
            "NPB certificate: {} (indicator in [{}, {}])",
            c.npb_certificate,
            num(c.npb_min),
            num(c.npb_max)
        );
        let _ = writeln!(
            s,
            "escape witness: {} = {} at point {}",
            c.involutivity_witness.entry,
            num(c.involutivity_witness.value),
            c.involutivity_witness.point_id
        );
        for w in &c.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
    }
    if let Some(v) = &r.verification {
        for suite in &v.suites {
            let _ = writeln!(
                s,
                "[{}] {}: {} checks, max residual {:e} (tol {:e})",
                if suite.passed { "ok" } else { "FAIL" },
                suite.name,
                suite.checks,
                suite.max_residual,
                suite.tolerance
            );
        }
        let _ = writeln!(s, "verification {}", if v.passed { "passed" } else { "failed" });
    }
    s
}
