//! Charts, frame fields, and the derivative engine.
//!
//! A [`ChartManifold`] is a single coordinate chart carrying an orthonormal
//! frame `e_1..e_n` written as expressions. The Riemannian metric is not
//! stored: it is whatever metric makes the frame orthonormal, recovered by
//! [`ChartManifold::metric_from_frame`].

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::dual::{seed_axis, Dual, Real};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::linalg::{mul_transpose, Lu};

/// Frames with `|det E|` at or below this are rejected.
pub const SINGULAR_DET: f64 = 1e-10;

/// A point of a chart; all coordinates finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate {bad} in point"
            )));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// How first derivatives are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMode {
    /// Forward-mode dual numbers.
    #[default]
    #[serde(alias = "ad")]
    Dual,
    /// Central finite differences.
    #[serde(alias = "fd")]
    Central,
}

/// Derivative configuration shared by every geometric operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeEngine {
    pub mode: DerivativeMode,
    /// Step for first derivatives in central mode.
    pub fd_step: f64,
    /// Step for the outer level of nested derivatives in central mode.
    pub nested_step: f64,
}

impl Default for DerivativeEngine {
    fn default() -> Self {
        Self {
            mode: DerivativeMode::Dual,
            fd_step: 1e-5,
            nested_step: 1e-4,
        }
    }
}

impl DerivativeEngine {
    pub fn dual() -> Self {
        Self::default()
    }

    pub fn central() -> Self {
        Self {
            mode: DerivativeMode::Central,
            ..Self::default()
        }
    }

    pub fn new(mode: DerivativeMode, fd_step: f64, nested_step: f64) -> Result<Self> {
        for (name, h) in [("fd_step", fd_step), ("nested_step", nested_step)] {
            if !(h > 0.0 && h < 1e-2) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in (0, 1e-2), got {h}"
                )));
            }
        }
        Ok(Self {
            mode,
            fd_step,
            nested_step,
        })
    }

    /// `d/dt field(point + t·direction)` at `t = 0`.
    pub fn directional_derivative(
        &self,
        field: &dyn ScalarField,
        point: &[f64],
        direction: &[f64],
    ) -> Result<f64> {
        if direction.len() != point.len() {
            return Err(Error::Dimension {
                expected: point.len(),
                got: direction.len(),
            });
        }
        if self.mode == DerivativeMode::Dual {
            if let Some(d) = field.dual_derivative(point, direction) {
                return d;
            }
        }
        central_difference(|x| field.value(x), point, direction, self.fd_step)
    }
}

/// `(f(x + h·d) − f(x − h·d)) / 2h`.
pub fn central_difference(
    f: impl Fn(&[f64]) -> Result<f64>,
    x: &[f64],
    d: &[f64],
    h: f64,
) -> Result<f64> {
    let (plus, minus) = shifted(x, d, h);
    Ok((f(&plus)? - f(&minus)?) / (2.0 * h))
}

/// Central difference of a vector-valued function.
pub fn central_difference_vec(
    f: impl Fn(&[f64]) -> Result<Vec<f64>>,
    x: &[f64],
    d: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let (plus, minus) = shifted(x, d, h);
    let a = f(&plus)?;
    let b = f(&minus)?;
    Ok(a.iter().zip(&b).map(|(p, m)| (p - m) / (2.0 * h)).collect())
}

fn shifted(x: &[f64], d: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let plus = x.iter().zip(d).map(|(a, b)| a + h * b).collect();
    let minus = x.iter().zip(d).map(|(a, b)| a - h * b).collect();
    (plus, minus)
}

/// A scalar function on a chart.
pub trait ScalarField: Sync {
    fn value(&self, x: &[f64]) -> Result<f64>;

    /// Exact directional derivative, when the field supports it.
    fn dual_derivative(&self, _x: &[f64], _direction: &[f64]) -> Option<Result<f64>> {
        None
    }
}

impl ScalarField for Expr {
    fn value(&self, x: &[f64]) -> Result<f64> {
        self.eval(x)
    }

    fn dual_derivative(&self, x: &[f64], direction: &[f64]) -> Option<Result<f64>> {
        Some(self.eval_dual(x, direction).map(|d| d.tangent))
    }
}

/// Wraps a closure as a [`ScalarField`] (always differentiated numerically).
pub struct FnField<F>(pub F);

impl<F: Fn(&[f64]) -> Result<f64> + Sync> ScalarField for FnField<F> {
    fn value(&self, x: &[f64]) -> Result<f64> {
        (self.0)(x)
    }
}

/// One coordinate chart with an orthonormal frame written as expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartManifold {
    name: String,
    coord_names: Vec<String>,
    /// `frame[a][i]` is the `i`-th coordinate component of `e_a`.
    frame: Vec<Vec<Expr>>,
    labels: Vec<String>,
    sample_box: Vec<Interval>,
}

impl ChartManifold {
    pub fn new(
        name: impl Into<String>,
        coord_names: Vec<String>,
        frame: Vec<Vec<Expr>>,
        sample_box: Vec<Interval>,
    ) -> Result<Self> {
        let n = coord_names.len();
        if n == 0 {
            return Err(Error::InvalidArgument("chart needs at least one coordinate".into()));
        }
        for (k, c) in coord_names.iter().enumerate() {
            if expr::is_reserved(c) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate name `{c}` collides with a function or constant"
                )));
            }
            if coord_names[..k].contains(c) {
                return Err(Error::InvalidArgument(format!("duplicate coordinate `{c}`")));
            }
        }
        if frame.len() != n || frame.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument(format!("frame must be {n}x{n}")));
        }
        if frame
            .iter()
            .flatten()
            .any(|e| e.max_var_index().is_some_and(|i| i >= n))
        {
            return Err(Error::InvalidArgument("frame references an unknown coordinate".into()));
        }
        if sample_box.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: sample_box.len(),
            });
        }
        let labels = (1..=n).map(|a| format!("e{a}")).collect();
        Ok(Self {
            name: name.into(),
            coord_names,
            frame,
            labels,
            sample_box,
        })
    }

    /// Builds a chart from expression text, one row of components per frame vector.
    pub fn parse(
        name: impl Into<String>,
        coords: &[&str],
        frame: &[Vec<String>],
        sample_box: Vec<Interval>,
    ) -> Result<Self> {
        let parsed = frame
            .iter()
            .map(|row| row.iter().map(|s| expr::parse(s, coords)).collect())
            .collect::<Result<Vec<Vec<Expr>>>>()?;
        Self::new(
            name,
            coords.iter().map(|s| s.to_string()).collect(),
            parsed,
            sample_box,
        )
    }

    /// Replaces the default `e1..en` labels used in reports.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coord_names.len()
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn coord_refs(&self) -> Vec<&str> {
        self.coord_names.iter().map(String::as_str).collect()
    }

    pub fn frame(&self) -> &[Vec<Expr>] {
        &self.frame
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn sample_box(&self) -> &[Interval] {
        &self.sample_box
    }

    /// Parses an expression over this chart's coordinates.
    pub fn parse_expr(&self, source: &str) -> Result<Expr> {
        expr::parse(source, &self.coord_refs())
    }

    /// Centre of the sample box.
    pub fn center(&self) -> Point {
        Point(self.sample_box.iter().map(Interval::mid).collect())
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Frame matrix `E` (row-major, `E[i][a] = e_a^i`) over any scalar type.
    pub fn frame_values<T: Real>(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        let mut e = vec![T::zero(); n * n];
        for (a, row) in self.frame.iter().enumerate() {
            for (i, ex) in row.iter().enumerate() {
                e[i * n + a] = ex.eval_real(x)?;
            }
        }
        Ok(e)
    }

    /// `E` and its coordinate Jacobians by forward-mode differentiation.
    /// `jac[(a*n + i)*n + j] = ∂_j e_a^i`.
    pub fn frame_jet<T: Real>(&self, x: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let n = self.dim();
        let mut values = vec![T::zero(); n * n];
        let mut jac = vec![T::zero(); n * n * n];
        for j in 0..n {
            let xd = seed_axis(x, j);
            for (a, row) in self.frame.iter().enumerate() {
                for (i, ex) in row.iter().enumerate() {
                    let d: Dual<T> = ex.eval_real(&xd)?;
                    values[i * n + a] = d.re;
                    jac[(a * n + i) * n + j] = d.eps;
                }
            }
        }
        Ok((values, jac))
    }

    /// Jacobians by central differences of the frame components.
    pub fn frame_jacobian_fd(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut jac = vec![0.0; n * n * n];
        let mut axis = vec![0.0; n];
        for j in 0..n {
            axis.iter_mut().for_each(|v| *v = 0.0);
            axis[j] = 1.0;
            let d = central_difference_vec(|y| self.frame_values::<f64>(y), x, &axis, h)?;
            for a in 0..n {
                for i in 0..n {
                    jac[(a * n + i) * n + j] = d[i * n + a];
                }
            }
        }
        Ok(jac)
    }

    /// LU of `E`, rejecting near-singular frames.
    pub(crate) fn factor_frame<T: Real>(&self, e: &[T], x: &[T]) -> Result<Lu<T>> {
        let singular = || Error::SingularFrame {
            point: x.iter().map(|v| v.value()).collect(),
            det: 0.0,
        };
        let lu = Lu::new(e, self.dim()).ok_or_else(singular)?;
        let det = lu.det().value();
        if det.abs() <= SINGULAR_DET {
            return Err(Error::SingularFrame {
                point: x.iter().map(|v| v.value()).collect(),
                det: det.abs(),
            });
        }
        Ok(lu)
    }

    /// Coordinate components of every frame vector at `point`.
    pub fn frame_matrix(&self, point: &[f64]) -> Result<Mat> {
        self.check_point(point)?;
        let e = self.frame_values(point)?;
        self.factor_frame(&e, point)?;
        Ok(Mat {
            n: self.dim(),
            data: e,
        })
    }

    /// Metric `g = (E Eᵀ)⁻¹` over any scalar type.
    pub fn metric_real<T: Real>(&self, x: &[T]) -> Result<Vec<T>> {
        let e = self.frame_values(x)?;
        self.factor_frame(&e, x)?;
        let inv_metric = mul_transpose(&e, &e, self.dim());
        let lu = Lu::new(&inv_metric, self.dim()).ok_or_else(|| Error::SingularFrame {
            point: x.iter().map(|v| v.value()).collect(),
            det: 0.0,
        })?;
        Ok(lu.inverse())
    }

    /// The metric in which the frame is orthonormal.
    pub fn metric_from_frame(&self, point: &[f64]) -> Result<Mat> {
        self.check_point(point)?;
        Ok(Mat {
            n: self.dim(),
            data: self.metric_real(point)?,
        })
    }

    /// `(i, j)` entry is `∂_j` of the `i`-th component of `e_a`.
    pub fn jacobian(&self, engine: &DerivativeEngine, a: usize, point: &[f64]) -> Result<Mat> {
        self.check_point(point)?;
        let n = self.dim();
        if a >= n {
            return Err(Error::InvalidArgument(format!("frame index {a} out of range")));
        }
        let jac = match engine.mode {
            DerivativeMode::Dual => self.frame_jet(point)?.1,
            DerivativeMode::Central => self.frame_jacobian_fd(point, engine.fd_step)?,
        };
        Ok(Mat::from_fn(n, |i, j| jac[(a * n + i) * n + j]))
    }

    /// Applies `e_a` (as a derivation) to an expression-backed field at `point`.
    pub fn apply_frame(
        &self,
        engine: &DerivativeEngine,
        a: usize,
        field: &dyn ScalarField,
        point: &[f64],
    ) -> Result<f64> {
        let e = self.frame_matrix(point)?;
        engine.directional_derivative(field, point, &e.column(a))
    }
}

impl fmt::Display for ChartManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.name, self.coord_names.join(", "))?;
        for (label, row) in self.labels.iter().zip(&self.frame) {
            let parts: Vec<String> = row
                .iter()
                .zip(&self.coord_names)
                .filter(|(e, _)| **e != Expr::Num(0.0))
                .map(|(e, c)| format!("({e}) d_{c}"))
                .collect();
            let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            writeln!(f, "  {label} = {body}")?;
        }
        Ok(())
    }
}
