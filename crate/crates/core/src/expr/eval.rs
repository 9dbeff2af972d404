use super::{BinOp, Expr, Func};
use crate::dual::{seed, Dual, Real};
use crate::error::{Error, Result};

/// |sin| or |cos| below this counts as a pole of csc/cot or sec/tan.
const POLE_EPS: f64 = 1e-14;

/// Primal value and directional derivative.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DualValue {
    pub primal: f64,
    pub tangent: f64,
}

impl Expr {
    /// Plain IEEE evaluation.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.eval_real(point)
    }

    /// Value and derivative along `direction` at `point`.
    pub fn eval_dual(&self, point: &[f64], direction: &[f64]) -> Result<DualValue> {
        if direction.len() != point.len() {
            return Err(Error::Dimension {
                expected: point.len(),
                got: direction.len(),
            });
        }
        let d: Dual<f64> = self.eval_real(&seed(point, direction))?;
        Ok(DualValue {
            primal: d.re,
            tangent: d.eps,
        })
    }

    /// Evaluation over any [`Real`]; domain checks look at the primal part.
    pub fn eval_real<T: Real>(&self, point: &[T]) -> Result<T> {
        if let Some(i) = self.max_var_index() {
            if i >= point.len() {
                return Err(Error::Dimension {
                    expected: i + 1,
                    got: point.len(),
                });
            }
        }
        self.walk(point).map_err(|message| Error::Domain {
            message,
            point: point.iter().map(|v| v.value()).collect(),
        })
    }

    fn walk<T: Real>(&self, x: &[T]) -> std::result::Result<T, String> {
        let out = match self {
            Expr::Num(v) => T::cst(*v),
            Expr::Const(c) => T::cst(c.value()),
            Expr::Var { index, .. } => x[*index],
            Expr::Neg(e) => -e.walk(x)?,
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.walk(x)?;
                match op {
                    BinOp::Add => a + rhs.walk(x)?,
                    BinOp::Sub => a - rhs.walk(x)?,
                    BinOp::Mul => a * rhs.walk(x)?,
                    BinOp::Div => {
                        let b = rhs.walk(x)?;
                        if b.value() == 0.0 {
                            return Err("division by zero".into());
                        }
                        a / b
                    }
                    BinOp::Pow => power(a, rhs, x)?,
                }
            }
            Expr::Call { func, arg } => apply(*func, arg.walk(x)?)?,
        };
        if !out.all_finite() {
            return Err(format!("non-finite result in `{self}`"));
        }
        Ok(out)
    }
}

fn power<T: Real>(base: T, exponent: &Expr, x: &[T]) -> std::result::Result<T, String> {
    if exponent.is_constant() {
        let p = exponent.walk::<f64>(&[])?;
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            if p < 0.0 && base.value() == 0.0 {
                return Err("zero raised to a negative power".into());
            }
            return Ok(base.powi(p as i32));
        }
        if base.value() < 0.0 {
            return Err("negative base with non-integer exponent".into());
        }
        return Ok(base.powf(p));
    }
    let p = exponent.walk(x)?;
    if base.value() <= 0.0 {
        return Err("non-positive base with variable exponent".into());
    }
    Ok((p * base.ln()).exp())
}

fn apply<T: Real>(func: Func, a: T) -> std::result::Result<T, String> {
    let v = a.value();
    Ok(match func {
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Tan | Func::Sec if v.cos().abs() < POLE_EPS => {
            return Err(format!("{} at a pole", func.name()));
        }
        Func::Tan => a.tan(),
        Func::Sec => T::one() / a.cos(),
        Func::Cot | Func::Csc if v.sin().abs() < POLE_EPS => {
            return Err(format!("{} at a pole", func.name()));
        }
        Func::Cot => a.cos() / a.sin(),
        Func::Csc => T::one() / a.sin(),
        Func::Exp => a.exp(),
        Func::Log if v <= 0.0 => return Err("log of a non-positive value".into()),
        Func::Log => a.ln(),
        Func::Sqrt if v < 0.0 => return Err("sqrt of a negative value".into()),
        Func::Sqrt => a.sqrt(),
        Func::Sinh => a.sinh(),
        Func::Cosh => a.cosh(),
        Func::Tanh => a.tanh(),
    })
}
