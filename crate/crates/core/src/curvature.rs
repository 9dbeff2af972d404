//! Scalar curvature from structure functions, and an independent
//! coordinate-based check.
//!
//! With `c[k][i][j]` the `e_k` coefficient of `[e_i, e_j]` (orthonormal
//! frame), the scalar curvature is
//!
//! ```text
//! S = Σ_{k,j} 2 e_k(c[j][k][j])
//!   + Σ_{i,j,k} ( −c[k][i][k]·c[j][i][j] − ½ c[i][k][j]·c[k][i][j] − ¼ c[i][k][j]² )
//! ```
//!
//! The frame Christoffel symbols are `Γ[k][i][j] = ⟨∇_{e_i} e_j, e_k⟩
//! = ½(c[k][i][j] − c[i][j][k] + c[j][k][i])`, the connection form is
//! `ω[j][i][p] = Γ[j][p][i]` (coefficient of `e^p` in `ω^j_i`) and the
//! curvature form is `Ω[k][j][m][p] = Ω^k_j(e_m, e_p)`.

use serde::Serialize;

use crate::dual::{seed_axis, Dual, Real};
use crate::error::{Error, Result};
use crate::geometry::{central_difference_vec, ChartManifold, DerivativeEngine, DerivativeMode};
use crate::structure::{FrameSource, StructureJet, StructureTensor};

/// `Γ[k][i][j]`, the `e_k` component of `∇_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameChristoffel {
    n: usize,
    data: Vec<f64>,
}

impl FrameChristoffel {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    /// Torsion-freeness: rebuilds `c[k][i][j] = Γ[k][i][j] − Γ[k][j][i]`.
    pub fn torsion_structure(&self) -> StructureTensor {
        let n = self.n;
        let mut c = StructureTensor::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    c.set(k, i, j, self.get(k, i, j) - self.get(k, j, i));
                }
            }
        }
        c
    }
}

/// `ω[j][i][p]`: coefficient of `e^p` in `ω^j_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionForm {
    n: usize,
    data: Vec<f64>,
}

impl ConnectionForm {
    #[inline]
    pub fn get(&self, j: usize, i: usize, p: usize) -> f64 {
        self.data[(j * self.n + i) * self.n + p]
    }

    /// `max |ω[j][i][p] + ω[i][j][p]|`; zero for a metric connection.
    pub fn skew_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                for p in 0..n {
                    worst = worst.max((self.get(j, i, p) + self.get(i, j, p)).abs());
                }
            }
        }
        worst
    }
}

/// `Ω[k][j][m][p] = Ω^k_j(e_m, e_p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureForm {
    n: usize,
    data: Vec<f64>,
}

impl CurvatureForm {
    #[inline]
    fn idx(&self, k: usize, j: usize, m: usize, p: usize) -> usize {
        ((k * self.n + j) * self.n + m) * self.n + p
    }

    #[inline]
    pub fn get(&self, k: usize, j: usize, m: usize, p: usize) -> f64 {
        self.data[self.idx(k, j, m, p)]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `S = Σ_{k,j} Ω^k_j(e_k, e_j)`.
    pub fn scalar(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for k in 0..n {
            for j in 0..n {
                s += self.get(k, j, k, j);
            }
        }
        s
    }

    /// `max |Ω[k][j][m][p] + Ω[k][j][p][m]|`.
    pub fn form_antisymmetry_defect(&self) -> f64 {
        self.defect(|f, k, j, m, p| f.get(k, j, m, p) + f.get(k, j, p, m))
    }

    /// `max |Ω[k][j][m][p] + Ω[j][k][m][p]|`.
    pub fn skew_defect(&self) -> f64 {
        self.defect(|f, k, j, m, p| f.get(k, j, m, p) + f.get(j, k, m, p))
    }

    fn defect(&self, f: impl Fn(&Self, usize, usize, usize, usize) -> f64) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for k in 0..n {
            for j in 0..n {
                for m in 0..n {
                    for p in 0..n {
                        worst = worst.max(f(self, k, j, m, p).abs());
                    }
                }
            }
        }
        worst
    }
}

#[inline]
fn christoffel_of(c: &StructureTensor, k: usize, i: usize, j: usize) -> f64 {
    0.5 * (c.get(k, i, j) - c.get(i, j, k) + c.get(j, k, i))
}

pub fn frame_christoffel(c: &StructureTensor) -> FrameChristoffel {
    let n = c.dim();
    let mut data = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                data.push(christoffel_of(c, k, i, j));
            }
        }
    }
    FrameChristoffel { n, data }
}

pub fn connection_form(gamma: &FrameChristoffel) -> ConnectionForm {
    let n = gamma.n;
    let mut data = Vec::with_capacity(n * n * n);
    for j in 0..n {
        for i in 0..n {
            for p in 0..n {
                data.push(gamma.get(j, p, i));
            }
        }
    }
    ConnectionForm { n, data }
}

/// Curvature 2-form assembled from the three pieces `dΓ ∧ e`, `Γ de` and
/// `ω ∧ ω`, with `de^i(e_m, e_p) = −c[i][m][p]`.
pub fn curvature_form_from_jet(jet: &StructureJet) -> CurvatureForm {
    let n = jet.dim();
    let c = &jet.c;
    let gamma = frame_christoffel(c);
    // e_a(Γ[k][i][j])
    let dgamma = |a: usize, k: usize, i: usize, j: usize| {
        0.5 * (jet.deriv(a, k, i, j) - jet.deriv(a, i, j, k) + jet.deriv(a, j, k, i))
    };
    let mut data = vec![0.0; n * n * n * n];
    for k in 0..n {
        for j in 0..n {
            for m in 0..n {
                for p in 0..n {
                    let mut v = dgamma(m, k, p, j) - dgamma(p, k, m, j);
                    for i in 0..n {
                        v -= gamma.get(k, i, j) * c.get(i, m, p);
                    }
                    for l in 0..n {
                        v += gamma.get(k, m, l) * gamma.get(l, p, j)
                            - gamma.get(k, p, l) * gamma.get(l, m, j);
                    }
                    data[((k * n + j) * n + m) * n + p] = v;
                }
            }
        }
    }
    CurvatureForm { n, data }
}

pub fn curvature_two_form(source: &dyn FrameSource, point: &[f64]) -> Result<CurvatureForm> {
    Ok(curvature_form_from_jet(&source.jet(point)?))
}

/// The scalar-curvature sum with every index restricted to `block`.
/// With the full index range this is the scalar curvature.
pub fn block_scalar(jet: &StructureJet, block: &[usize]) -> f64 {
    let c = &jet.c;
    let mut s = 0.0;
    for &k in block {
        for &j in block {
            s += 2.0 * jet.deriv(k, j, k, j);
        }
    }
    for &i in block {
        let t: f64 = block.iter().map(|&k| c.get(k, i, k)).sum();
        s -= t * t;
    }
    for &i in block {
        for &k in block {
            for &j in block {
                let cikj = c.get(i, k, j);
                s -= 0.5 * cikj * c.get(k, i, j) + 0.25 * cikj * cikj;
            }
        }
    }
    s
}

pub fn scalar_curvature_from_jet(jet: &StructureJet) -> f64 {
    let all: Vec<usize> = (0..jet.dim()).collect();
    block_scalar(jet, &all)
}

/// Scalar curvature of the metric in which the source's frame is orthonormal.
pub fn scalar_curvature_frame(source: &dyn FrameSource, point: &[f64]) -> Result<f64> {
    Ok(scalar_curvature_from_jet(&source.jet(point)?))
}

/// Scalar curvature for constant structure functions (no derivative term).
pub fn scalar_curvature_lie(constants: &StructureTensor) -> f64 {
    let n = constants.dim();
    let c = |k, i, j| constants.get(k, i, j);
    // trace vector t_i = Σ_k c[k][i][k]
    let trace: Vec<f64> = (0..n).map(|i| (0..n).map(|k| c(k, i, k)).sum()).collect();
    let mut s = -trace.iter().map(|t| t * t).sum::<f64>();
    let mut cross = 0.0;
    let mut square = 0.0;
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                cross += c(i, k, j) * c(k, i, j);
                square += c(i, k, j) * c(i, k, j);
            }
        }
    }
    s -= 0.5 * cross + 0.25 * square;
    s
}

/// Coordinate Christoffel symbols `Γ^a_{bc}` (flattened `(a*n + b)*n + c`)
/// of the metric recovered from the frame, with metric derivatives by
/// forward-mode differentiation.
pub fn coordinate_christoffel_real<T: Real>(m: &ChartManifold, x: &[T]) -> Result<Vec<T>> {
    let n = m.dim();
    let e = m.frame_values(x)?;
    // g^{-1} = E Eᵀ
    let inv = crate::linalg::mul_transpose(&e, &e, n);
    let mut dg = Vec::with_capacity(n);
    for c in 0..n {
        let g: Vec<Dual<T>> = m.metric_real(&seed_axis(x, c))?;
        dg.push(g.into_iter().map(|v| v.eps).collect::<Vec<T>>());
    }
    Ok(christoffel_from_metric_derivatives(n, &inv, &dg))
}

fn christoffel_from_metric_derivatives<T: Real>(n: usize, inv: &[T], dg: &[Vec<T>]) -> Vec<T> {
    let mut gamma = vec![T::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut s = T::zero();
                for d in 0..n {
                    let term = dg[b][d * n + c] + dg[c][d * n + b] - dg[d][b * n + c];
                    s = s + inv[a * n + d] * term;
                }
                gamma[(a * n + b) * n + c] = s.scale(0.5);
            }
        }
    }
    gamma
}

fn coordinate_christoffel_fd(m: &ChartManifold, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = m.dim();
    let e = m.frame_values(x)?;
    let inv = crate::linalg::mul_transpose(&e, &e, n);
    let mut axis = vec![0.0; n];
    let mut dg = Vec::with_capacity(n);
    for c in 0..n {
        axis.iter_mut().for_each(|v| *v = 0.0);
        axis[c] = 1.0;
        dg.push(central_difference_vec(|y| m.metric_real::<f64>(y), x, &axis, h)?);
    }
    Ok(christoffel_from_metric_derivatives(n, &inv, &dg))
}

/// Coordinate Christoffel symbols at `point` using `engine`.
pub fn coordinate_christoffel(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    point: &[f64],
) -> Result<Vec<f64>> {
    m.check_point(point)?;
    match engine.mode {
        DerivativeMode::Dual => coordinate_christoffel_real(m, point),
        DerivativeMode::Central => coordinate_christoffel_fd(m, point, engine.fd_step),
    }
}

fn scalar_from_christoffel(n: usize, inv: &[f64], gamma: &[f64], dgamma: &[Vec<f64>]) -> f64 {
    let g = |a: usize, b: usize, c: usize| gamma[(a * n + b) * n + c];
    // d_c Γ^a_{db}
    let dg = |c: usize, a: usize, d: usize, b: usize| dgamma[c][(a * n + d) * n + b];
    let mut s = 0.0;
    for b in 0..n {
        for d in 0..n {
            // Ric_{bd} = R^a_{bad}
            let mut ric = 0.0;
            for a in 0..n {
                ric += dg(a, a, d, b) - dg(d, a, a, b);
                for e in 0..n {
                    ric += g(a, a, e) * g(e, d, b) - g(a, d, e) * g(e, a, b);
                }
            }
            s += inv[b * n + d] * ric;
        }
    }
    s
}

/// Relative step-halving disagreement above which the nested-difference
/// oracle is reported as degenerate.
pub const ORACLE_DEGENERACY: f64 = 1e-4;

/// Scalar curvature computed the classical way: metric from the frame,
/// coordinate Christoffel symbols, Riemann tensor, Ricci contraction and
/// metric trace. Shares no code with the structure-function path.
pub fn scalar_curvature_oracle(
    m: &ChartManifold,
    engine: &DerivativeEngine,
    point: &[f64],
) -> Result<f64> {
    m.check_point(point)?;
    let n = m.dim();
    let e = m.frame_values(point)?;
    let inv = crate::linalg::mul_transpose(&e, &e, n);
    let s = match engine.mode {
        DerivativeMode::Dual => {
            let gamma = coordinate_christoffel_real::<f64>(m, point)?;
            let mut dgamma = Vec::with_capacity(n);
            for c in 0..n {
                let g: Vec<Dual<f64>> = coordinate_christoffel_real(m, &seed_axis(point, c))?;
                dgamma.push(g.into_iter().map(|v| v.eps).collect::<Vec<f64>>());
            }
            scalar_from_christoffel(n, &inv, &gamma, &dgamma)
        }
        DerivativeMode::Central => {
            let gamma = coordinate_christoffel_fd(m, point, engine.fd_step)?;
            let at_step = |h: f64| -> Result<f64> {
                let mut axis = vec![0.0; n];
                let mut dgamma = Vec::with_capacity(n);
                for c in 0..n {
                    axis.iter_mut().for_each(|v| *v = 0.0);
                    axis[c] = 1.0;
                    dgamma.push(central_difference_vec(
                        |y| coordinate_christoffel_fd(m, y, engine.fd_step),
                        point,
                        &axis,
                        h,
                    )?);
                }
                Ok(scalar_from_christoffel(n, &inv, &gamma, &dgamma))
            };
            let coarse = at_step(engine.nested_step)?;
            let fine = at_step(0.5 * engine.nested_step)?;
            let disagreement = (coarse - fine).abs();
            if disagreement > ORACLE_DEGENERACY * fine.abs().max(1.0) {
                return Err(Error::Degeneracy(format!(
                    "nested differences disagree by {disagreement:e} at {point:?} \
                     (S ≈ {fine}); fewer than 4 significant digits survive"
                )));
            }
            coarse
        }
    };
    if !s.is_finite() {
        return Err(Error::Degeneracy(format!("non-finite curvature at {point:?}")));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;
    use crate::structure::{ChartFrame, LieFrame};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn su2() -> StructureTensor {
        StructureTensor::from_entries(3, &[(2, 0, 1, -2.0), (1, 0, 2, 2.0), (0, 1, 2, -2.0)])
            .unwrap()
    }

    fn s2() -> ChartManifold {
        ChartManifold::parse(
            "s2",
            &["p", "q"],
            &[
                vec!["1".into(), "0".into()],
                vec!["0".into(), "csc(p)".into()],
            ],
            vec![
                Interval::new(0.2, PI - 0.2).unwrap(),
                Interval::new(0.2, 2.0 * PI - 0.2).unwrap(),
            ],
        )
        .unwrap()
    }

    fn hyperbolic() -> ChartManifold {
        ChartManifold::parse(
            "h2",
            &["u", "v"],
            &[
                vec!["2*v".into(), "0".into()],
                vec!["0".into(), "2*v".into()],
            ],
            vec![Interval::new(-1.0, 1.0).unwrap(), Interval::new(0.25, 2.0).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn zero_structure_zero_everything() {
        let c = StructureTensor::zeros(3);
        let g = frame_christoffel(&c);
        assert!(g.data.iter().all(|v| *v == 0.0));
        assert_eq!(scalar_curvature_lie(&c), 0.0);
    }

    #[test]
    fn christoffel_reproduces_structure() {
        let c = su2();
        let g = frame_christoffel(&c);
        assert_eq!(g.torsion_structure(), c);
        // ∇_X Y = ½[X, Y] = −Z for a bi-invariant metric
        assert_relative_eq!(g.get(2, 0, 1), -1.0);
        assert!(connection_form(&g).skew_defect() < 1e-15);
    }

    #[test]
    fn lie_values() {
        assert_eq!(scalar_curvature_lie(&su2()), 6.0);
        let f = 2.0;
        let scaled =
            StructureTensor::from_entries(3, &[(2, 0, 1, -2.0 * f * f), (1, 0, 2, 2.0), (0, 1, 2, -2.0)])
                .unwrap();
        assert_relative_eq!(scalar_curvature_lie(&scaled), 0.0);
        let heis = StructureTensor::from_entries(3, &[(2, 0, 1, 1.0)]).unwrap();
        assert_eq!(scalar_curvature_lie(&heis), -0.5);
    }

    #[test]
    fn sphere_frame_formula_and_form() {
        let m = s2();
        let src = ChartFrame::new(&m, DerivativeEngine::dual());
        for p in [0.3, 1.0, PI / 2.0, 2.5] {
            let s = scalar_curvature_frame(&src, &[p, 1.0]).unwrap();
            assert_relative_eq!(s, 2.0, epsilon = 1e-10);
            let omega = curvature_two_form(&src, &[p, 1.0]).unwrap();
            assert_relative_eq!(omega.scalar(), 2.0, epsilon = 1e-10);
            // Ω^2_1(e2, e1) = ⟨R(e2, e1)e1, e2⟩ = K = 1
            assert_relative_eq!(omega.get(1, 0, 1, 0), 1.0, epsilon = 1e-10);
            assert_relative_eq!(omega.get(1, 0, 0, 1), -1.0, epsilon = 1e-10);
            assert!(omega.skew_defect() < 1e-10);
            assert_eq!(omega.form_antisymmetry_defect(), 0.0);
        }
    }

    #[test]
    fn oracle_flat_sphere_hyperbolic() {
        let flat = ChartManifold::parse(
            "flat",
            &["x", "y"],
            &[vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]],
            vec![Interval::new(-1.0, 1.0).unwrap(); 2],
        )
        .unwrap();
        for engine in [DerivativeEngine::dual(), DerivativeEngine::central()] {
            assert!(scalar_curvature_oracle(&flat, &engine, &[0.1, 0.2]).unwrap().abs() < 1e-6);
            let s = scalar_curvature_oracle(&s2(), &engine, &[1.0, 1.0]).unwrap();
            assert_relative_eq!(s, 2.0, epsilon = 1e-5);
            let h = scalar_curvature_oracle(&hyperbolic(), &engine, &[0.3, 0.7]).unwrap();
            assert_relative_eq!(h, -8.0, epsilon = 1e-5 * 9.0);
        }
    }

    #[test]
    fn lie_frame_source() {
        let lie = LieFrame::new("su2", su2()).unwrap();
        assert_eq!(scalar_curvature_frame(&lie, &[]).unwrap(), 6.0);
    }
}
