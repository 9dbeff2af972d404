//! Lie brackets of frame fields and their structure functions.
//!
//! Index convention, used everywhere in the crate (0-based):
//! `c[k][i][j]` is the `e_k` coefficient of `[e_i, e_j]`, so
//! `[e_i, e_j] = Σ_k c[k][i][j] e_k`.

use serde::Serialize;

use crate::dual::{seed, Dual, Real};
use crate::error::{Error, Result};
use crate::geometry::{central_difference_vec, ChartManifold, DerivativeEngine, DerivativeMode};

/// Values `c[k][i][j]` at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureTensor {
    n: usize,
    data: Vec<f64>,
}

impl StructureTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    /// From raw `(k*n + i)*n + j` ordered data.
    pub fn from_raw(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::Dimension {
                expected: n * n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    /// Builds constants from `(k, i, j, value)` entries, filling in
    /// `c[k][j][i] = -value`. Indices are 0-based.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = Self::zeros(n);
        for &(k, i, j, v) in entries {
            if k >= n || i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "structure index ({k},{i},{j}) out of range for n = {n}"
                )));
            }
            if i == j && v != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "c[{k}][{i}][{i}] must vanish"
                )));
            }
            c.set(k, i, j, v);
            c.set(k, j, i, -v);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        self.data[(k * self.n + i) * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `max |c[k][i][j] + c[k][j][i]|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((self.get(k, i, j) + self.get(k, j, i)).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &StructureTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Non-zero entries `(k, i, j, value)` with `i < j`.
    pub fn independent_nonzero(&self, tol: f64) -> Vec<(usize, usize, usize, f64)> {
        let n = self.n;
        let mut out = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let v = self.get(k, i, j);
                    if v.abs() > tol {
                        out.push((k, i, j, v));
                    }
                }
            }
        }
        out
    }
}

/// Structure functions and their frame derivatives at one point:
/// `d[a]` holds `e_a` applied to every entry of `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureJet {
    pub c: StructureTensor,
    pub d: Vec<StructureTensor>,
}

impl StructureJet {
    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `e_a(c[k][i][j])`.
    #[inline]
    pub fn deriv(&self, a: usize, k: usize, i: usize, j: usize) -> f64 {
        self.d[a].get(k, i, j)
    }

    /// A jet with vanishing derivatives.
    pub fn constant(c: StructureTensor) -> Self {
        let n = c.dim();
        Self {
            c,
            d: vec![StructureTensor::zeros(n); n],
        }
    }
}

/// Anything that can report structure functions of an orthonormal frame.
pub trait FrameSource: Sync {
    fn dim(&self) -> usize;

    fn name(&self) -> &str;

    /// Human-readable label of frame vector `a`.
    fn label(&self, a: usize) -> String {
        format!("e{}", a + 1)
    }

    fn structure(&self, point: &[f64]) -> Result<StructureTensor>;

    fn jet(&self, point: &[f64]) -> Result<StructureJet>;
}

/// A chart paired with the derivative engine used to differentiate it.
#[derive(Debug, Clone, Copy)]
pub struct ChartFrame<'m> {
    pub manifold: &'m ChartManifold,
    pub engine: DerivativeEngine,
}

impl<'m> ChartFrame<'m> {
    pub fn new(manifold: &'m ChartManifold, engine: DerivativeEngine) -> Self {
        Self { manifold, engine }
    }
}

impl FrameSource for ChartFrame<'_> {
    fn dim(&self) -> usize {
        self.manifold.dim()
    }

    fn name(&self) -> &str {
        self.manifold.name()
    }

    fn label(&self, a: usize) -> String {
        self.manifold.labels()[a].clone()
    }

    fn structure(&self, point: &[f64]) -> Result<StructureTensor> {
        structure_tensor(self.manifold, &self.engine, point)
    }

    fn jet(&self, point: &[f64]) -> Result<StructureJet> {
        let c = structure_tensor(self.manifold, &self.engine, point)?;
        let d = (0..self.dim())
            .map(|a| structure_derivatives_along(self.manifold, &self.engine, a, point))
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureJet { c, d })
    }
}

/// Left-invariant frame on a Lie group: constant structure functions.
#[derive(Debug, Clone, PartialEq)]
pub struct LieFrame {
    pub name: String,
    pub constants: StructureTensor,
}

impl LieFrame {
    pub fn new(name: impl Into<String>, constants: StructureTensor) -> Result<Self> {
        let defect = constants.antisymmetry_defect();
        if defect > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "structure constants are not antisymmetric (defect {defect:e})"
            )));
        }
        Ok(Self {
            name: name.into(),
            constants,
        })
    }
}

impl FrameSource for LieFrame {
    fn dim(&self) -> usize {
        self.constants.dim()
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn structure(&self, _point: &[f64]) -> Result<StructureTensor> {
        Ok(self.constants.clone())
    }

    fn jet(&self, _point: &[f64]) -> Result<StructureJet> {
        Ok(StructureJet::constant(self.constants.clone()))
    }
}

/// Coordinate components of `[e_I, e_J]` from frame values and Jacobians.
fn bracket<T: Real>(n: usize, e: &[T], jac: &[T], i: usize, j: usize) -> Vec<T> {
    (0..n)
        .map(|p| {
            let mut s = T::zero();
            for q in 0..n {
                s = s + jac[(j * n + p) * n + q] * e[q * n + i]
                    - jac[(i * n + p) * n + q] * e[q * n + j];
            }
            s
        })
        .collect()
}

fn extract<T: Real>(m: &ChartManifold, x: &[T], e: &[T], jac: &[T]) -> Result<Vec<T>> {
    let n = m.dim();
    let lu = m.factor_frame(e, x)?;
    let mut c = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let coeffs = lu.solve(&bracket(n, e, jac, i, j));
            for (k, v) in coeffs.into_iter().enumerate() {
                c[(k * n + i) * n + j] = v;
                c[(k * n + j) * n + i] = -v;
            }
        }
    }
    Ok(c)
}

/// Structure functions over any scalar type, Jacobians by dual numbers.
pub fn structure_real<T: Real>(m: &ChartManifold, x: &[T]) -> Result<Vec<T>> {
    let (e, jac) = m.frame_jet(x)?;
    extract(m, x, &e, &jac)
}

fn structure_fd(m: &ChartManifold, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let e = m.frame_values(x)?;
    let jac = m.frame_jacobian_fd(x, h)?;
    extract(m, x, &e, &jac)
}

/// Coordinate components of `[e_i, e_j]` at `point`.
pub fn lie_bracket(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    i: usize,
    j: usize,
    point: &[f64],
) -> Result<Vec<f64>> {
    m.check_point(point)?;
    let n = m.dim();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!("frame index out of range: ({i}, {j})")));
    }
    if i == j {
        return Ok(vec![0.0; n]);
    }
    let (e, jac) = match engine.mode {
        DerivativeMode::Dual => m.frame_jet(point)?,
        DerivativeMode::Central => (
            m.frame_values(point)?,
            m.frame_jacobian_fd(point, engine.fd_step)?,
        ),
    };
    Ok(bracket(n, &e, &jac, i, j))
}

/// Solves `E c[·][i][j] = [e_i, e_j]` for every pair.
pub fn structure_tensor(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    point: &[f64],
) -> Result<StructureTensor> {
    m.check_point(point)?;
    let data = match engine.mode {
        DerivativeMode::Dual => structure_real(m, point)?,
        DerivativeMode::Central => structure_fd(m, point, engine.fd_step)?,
    };
    StructureTensor::from_raw(m.dim(), data)
}

/// `e_a` applied to every structure function: the whole extraction pipeline
/// is differentiated along the straight line through `point` in direction
/// `E_a(point)`.
pub fn structure_derivatives_along(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    a: usize,
    point: &[f64],
) -> Result<StructureTensor> {
    m.check_point(point)?;
    let n = m.dim();
    if a >= n {
        return Err(Error::InvalidArgument(format!("frame index {a} out of range")));
    }
    let direction = m.frame_matrix(point)?.column(a);
    let data = match engine.mode {
        DerivativeMode::Dual => {
            let xd = seed(point, &direction);
            let c: Vec<Dual<f64>> = structure_real(m, &xd)?;
            c.into_iter().map(|v| v.eps).collect()
        }
        DerivativeMode::Central => central_difference_vec(
            |y| structure_fd(m, y, engine.fd_step),
            point,
            &direction,
            engine.nested_step,
        )?,
    };
    StructureTensor::from_raw(n, data)
}

/// `e_a(c[k][i][j])` at `point`.
pub fn structure_derivative(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    a: usize,
    (k, i, j): (usize, usize, usize),
    point: &[f64],
) -> Result<f64> {
    Ok(structure_derivatives_along(m, engine, a, point)?.get(k, i, j))
}
