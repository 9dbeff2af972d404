//! The expression language used to write frame components.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          -- right associative
//! primary := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names resolve to a chart coordinate, the constants `pi` and `e`, or one of
//! the functions in [`Func`]. Evaluation is generic over [`crate::dual::Real`]
//! so the same tree yields values and exact directional derivatives.

mod eval;
mod parse;

use std::fmt;

pub use eval::DualValue;
pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Sec,
    Csc,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Sec,
        Func::Csc,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sec => "sec",
            Func::Csc => "csc",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn from_name(name: &str) -> Option<Constant> {
        match name {
            "pi" => Some(Constant::Pi),
            "e" => Some(Constant::E),
            _ => None,
        }
    }
}

/// True if `name` is a function or constant of the language and therefore
/// cannot be used as a coordinate name.
pub fn is_reserved(name: &str) -> bool {
    Func::from_name(name).is_some() || Constant::from_name(name).is_some()
}

/// Expression tree. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    /// Coordinate `index` of the owning chart.
    Var { index: usize, name: String },
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call { func: Func, arg: Box<Expr> },
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(index: usize, name: impl Into<String>) -> Expr {
        Expr::Var {
            index,
            name: name.into(),
        }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call {
            func,
            arg: Box::new(arg),
        }
    }

    /// `self * other`, folding multiplication by the literals 0 and 1.
    pub fn times(self, other: &Expr) -> Expr {
        match (&self, other) {
            (Expr::Num(a), _) if *a == 1.0 => other.clone(),
            (_, Expr::Num(b)) if *b == 1.0 => self,
            (Expr::Num(a), _) | (_, Expr::Num(a)) if *a == 0.0 => Expr::Num(0.0),
            _ => Expr::binary(BinOp::Mul, self, other.clone()),
        }
    }

    /// Whether the tree references no coordinate.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Var { .. } => false,
            Expr::Neg(e) => e.is_constant(),
            Expr::Binary { lhs, rhs, .. } => lhs.is_constant() && rhs.is_constant(),
            Expr::Call { arg, .. } => arg.is_constant(),
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Num(_) | Expr::Const(_) => None,
            Expr::Var { index, .. } => Some(*index),
            Expr::Neg(e) | Expr::Call { arg: e, .. } => e.max_var_index(),
            Expr::Binary { lhs, rhs, .. } => lhs.max_var_index().max(rhs.max_var_index()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary { op, .. } => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimum parentheses needed for `parse` to rebuild the
/// same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v:?})")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_wrapped(f, e, e.precedence() < 3)
            }
            Expr::Call { func, arg } => write!(f, "{}({arg})", func.name()),
            Expr::Binary { op, lhs, rhs } => {
                let p = op.precedence();
                if *op == BinOp::Pow {
                    write_wrapped(f, lhs, lhs.precedence() <= p)?;
                    f.write_str("^")?;
                    write_wrapped(f, rhs, rhs.precedence() < 3)
                } else {
                    write_wrapped(f, lhs, lhs.precedence() < p)?;
                    write!(f, " {} ", op.symbol())?;
                    write_wrapped(f, rhs, rhs.precedence() <= p)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<&'static str> {
        vec!["x", "y", "t"]
    }

    #[test]
    fn printing_keeps_structure() {
        for src in [
            "x - (y - t)",
            "x / (y * t)",
            "-x^2",
            "(-x)^2",
            "x^y^t",
            "(x^y)^t",
            "2^-x",
            "sin(x) * -cos(y)",
            "--x",
            "csc(x)^2 - cot(x)^2",
        ] {
            let e = parse(src, &vars()).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed, &vars()).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn times_folds_units() {
        let x = Expr::var(0, "x");
        assert_eq!(Expr::num(1.0).times(&x), x);
        assert_eq!(x.clone().times(&Expr::num(0.0)), Expr::num(0.0));
        assert!(matches!(
            Expr::num(2.0).times(&x),
            Expr::Binary { op: BinOp::Mul, .. }
        ));
    }

    #[test]
    fn reserved_names() {
        assert!(is_reserved("pi"));
        assert!(is_reserved("csc"));
        assert!(!is_reserved("p"));
    }
}
