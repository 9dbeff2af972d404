use super::SplitSpec;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{ChartManifold, DerivativeEngine};
use crate::sampling::sample_box;
use crate::structure::StructureTensor;

/// Number of box samples used to check that a field factor stays positive.
const POSITIVITY_SAMPLES: usize = 256;

/// The collapse factor `f`: the new metric is `g_X ⊕ g_Y / f²`.
#[derive(Debug, Clone, PartialEq)]
pub enum RescaleFactor {
    Constant(f64),
    /// A positive function of the chart coordinates.
    Field(Expr),
}

impl RescaleFactor {
    pub fn value(&self, point: &[f64]) -> Result<f64> {
        match self {
            RescaleFactor::Constant(f) => Ok(*f),
            RescaleFactor::Field(e) => e.eval(point),
        }
    }

    /// `e_a(f)` for every frame vector of `m` (unrescaled frame).
    pub fn frame_gradient(
        &self,
        m: &ChartManifold,
        engine: &DerivativeEngine,
        point: &[f64],
    ) -> Result<Vec<f64>> {
        match self {
            RescaleFactor::Constant(_) => Ok(vec![0.0; m.dim()]),
            RescaleFactor::Field(e) => (0..m.dim())
                .map(|a| m.apply_frame(engine, a, e, point))
                .collect(),
        }
    }

    fn as_expr(&self) -> Expr {
        match self {
            RescaleFactor::Constant(f) => Expr::num(*f),
            RescaleFactor::Field(e) => e.clone(),
        }
    }

    /// Checks `f > 0` at the box centre and on a fixed sample of the box.
    pub fn check_positive(&self, m: &ChartManifold) -> Result<()> {
        match self {
            RescaleFactor::Constant(f) => check_positive(*f, &[]),
            RescaleFactor::Field(e) => {
                let mut pts = vec![m.center()];
                pts.extend(sample_box(m.sample_box(), POSITIVITY_SAMPLES, 0)?);
                for p in &pts {
                    check_positive(e.eval(p)?, p)
                        .map_err(|_| Error::InvalidArgument(format!(
                            "rescale factor `{e}` is not positive at {:?}",
                            p.coords()
                        )))?;
                }
                Ok(())
            }
        }
    }
}

fn check_positive(f: f64, at: &[f64]) -> Result<()> {
    if f > 0.0 && f.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "rescale factor must be positive, got {f} at {at:?}"
        )))
    }
}

/// Frame of `g_X ⊕ g_Y / f²`: the vertical vectors are multiplied by `f`.
pub fn rescale_frame(m: &ChartManifold, split: SplitSpec, f: &RescaleFactor) -> Result<ChartManifold> {
    split.check_dim(m.dim())?;
    f.check_positive(m)?;
    let factor = f.as_expr();
    let frame = m
        .frame()
        .iter()
        .enumerate()
        .map(|(a, row)| {
            if split.is_vertical(a) {
                row.iter().map(|c| c.clone().times(&factor)).collect()
            } else {
                row.clone()
            }
        })
        .collect();
    let name = match f {
        RescaleFactor::Constant(v) => format!("{}[f={v}]", m.name()),
        RescaleFactor::Field(e) => format!("{}[f={e}]", m.name()),
    };
    ChartManifold::new(name, m.coord_names().to_vec(), frame, m.sample_box().to_vec())?
        .with_labels(m.labels().to_vec())
}

/// Structure functions of the rescaled frame `{e_i, f e_α}` from those of
/// `{e_i, e_α}`, the value of `f` and `grad_f[a] = e_a(f)`.
pub fn transform_structure_functions(
    c: &StructureTensor,
    split: SplitSpec,
    f: f64,
    grad_f: &[f64],
) -> Result<StructureTensor> {
    let n = c.dim();
    split.check_dim(n)?;
    check_positive(f, &[])?;
    if grad_f.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: grad_f.len(),
        });
    }
    let v = |a: usize| split.is_vertical(a);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut out = StructureTensor::zeros(n);
    // Horizontal indices precede vertical ones, so for a < b the pair is
    // (i, j), (i, α) or (α, β).
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..n {
                let old = c.get(k, a, b);
                let new = match (v(a), v(b), v(k)) {
                    (false, false, false) => old,
                    (false, false, true) => old / f,
                    (false, true, false) => f * old,
                    (false, true, true) => old + delta(k, b) * grad_f[a] / f,
                    (true, true, false) => f * f * old,
                    (true, true, true) => {
                        f * old + delta(k, b) * grad_f[a] - delta(k, a) * grad_f[b]
                    }
                    (true, false, _) => unreachable!("vertical index before horizontal"),
                };
                out.set(k, a, b, new);
                out.set(k, b, a, -new);
            }
        }
    }
    Ok(out)
}

/// Constants of the left-invariant frame `{e_i, f e_α}` for constant `f`.
pub fn rescale_constants(c: &StructureTensor, split: SplitSpec, f: f64) -> Result<StructureTensor> {
    split.check_dim(c.dim())?;
    check_positive(f, &[])?;
    let n = c.dim();
    let scale: Vec<f64> = (0..n).map(|a| if split.is_vertical(a) { f } else { 1.0 }).collect();
    let mut out = StructureTensor::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                out.set(k, i, j, scale[i] * scale[j] / scale[k] * c.get(k, i, j));
            }
        }
    }
    Ok(out)
}

/// Convenience: the rescaled chart for a constant factor.
pub fn rescale_constant(m: &ChartManifold, split: SplitSpec, f: f64) -> Result<ChartManifold> {
    rescale_frame(m, split, &RescaleFactor::Constant(f))
}
