use super::{BinOp, Constant, Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.src.as_bytes().get(self.pos + k).copied()
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>> {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            b'0'..=b'9' | b'.' => self.number()?,
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        Ok(Some((start, tok)))
    }

    fn digits(&mut self) -> usize {
        let s = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - s
    }

    fn number(&mut self) -> Result<Tok> {
        let start = self.pos;
        let mut n = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += self.digits();
        }
        if n == 0 {
            return Err(syntax(start, "malformed number".into()));
        }
        // Exponent only when digits follow; `2e` leaves `e` for the identifier rule.
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let has_exp = match self.peek_at(1) {
                Some(b'0'..=b'9') => true,
                Some(b'+' | b'-') => matches!(self.peek_at(2), Some(b'0'..=b'9')),
                _ => false,
            };
            if has_exp {
                self.pos += 2;
                self.digits();
            }
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text
            .parse()
            .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(syntax(start, format!("number `{text}` out of range")));
        }
        Ok(Tok::Num(v))
    }
}

fn syntax(offset: usize, message: String) -> Error {
    Error::Syntax { offset, message }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let off = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(syntax(off, format!("expected {what}, found {t:?}"))),
            None => Err(syntax(off, format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(index) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::Var { index, name });
                }
                if let Some(c) = Constant::from_name(&name) {
                    return Ok(Expr::Const(c));
                }
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::call(func, arg));
                }
                Err(Error::UnknownIdentifier { name, offset: off })
            }
            Some(t) => Err(syntax(off, format!("unexpected {t:?}"))),
            None => Err(syntax(off, "unexpected end of input".into())),
        }
    }
}

/// Parses `source` with the given coordinate names in chart order.
pub fn parse(source: &str, vars: &[&str]) -> Result<Expr> {
    let toks = Lexer::tokens(source)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: source.len(),
        vars,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let off = p.offset();
        return Err(syntax(off, "trailing input".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize, n: &str) -> Expr {
        Expr::var(i, n)
    }

    #[test]
    fn literal_zero() {
        assert_eq!(parse("0", &[]).unwrap(), Expr::Num(0.0));
    }

    #[test]
    fn cosecant_call() {
        let e = parse("csc(p)", &["p", "q"]).unwrap();
        assert_eq!(e, Expr::call(Func::Csc, v(0, "p")));
    }

    #[test]
    fn negated_coordinate() {
        let e = parse("-x4", &["x1", "x2", "x3", "x4"]).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(v(3, "x4"))));
    }

    #[test]
    fn precedence_and_associativity() {
        let vars = ["a", "b", "c"];
        let a = || v(0, "a");
        let b = || v(1, "b");
        let c = || v(2, "c");
        assert_eq!(
            parse("a - b - c", &vars).unwrap(),
            Expr::binary(BinOp::Sub, Expr::binary(BinOp::Sub, a(), b()), c())
        );
        assert_eq!(
            parse("a ^ b ^ c", &vars).unwrap(),
            Expr::binary(BinOp::Pow, a(), Expr::binary(BinOp::Pow, b(), c()))
        );
        assert_eq!(
            parse("-a^2", &vars).unwrap(),
            Expr::Neg(Box::new(Expr::binary(BinOp::Pow, a(), Expr::Num(2.0))))
        );
        assert_eq!(
            parse("a + b*c", &vars).unwrap(),
            Expr::binary(BinOp::Add, a(), Expr::binary(BinOp::Mul, b(), c()))
        );
        assert_eq!(
            parse("-a*b", &vars).unwrap(),
            Expr::binary(BinOp::Mul, Expr::Neg(Box::new(a())), b())
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3", &[]).unwrap(), Expr::Num(1.5e-3));
        assert_eq!(parse(".25", &[]).unwrap(), Expr::Num(0.25));
        assert_eq!(parse("2E+2", &[]).unwrap(), Expr::Num(200.0));
        assert_eq!(
            parse("2*e", &[]).unwrap(),
            Expr::binary(BinOp::Mul, Expr::Num(2.0), Expr::Const(Constant::E))
        );
        assert!(matches!(parse("1e999", &[]), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("0x1p3", &[]), Err(Error::Syntax { .. })));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse("1 + zz", &["x"]),
            Err(Error::UnknownIdentifier {
                name: "zz".into(),
                offset: 4
            })
        );
        assert!(matches!(parse("(1 + 2", &[]), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("1 2", &[]), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("", &[]), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("3 $ 4", &[]), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("sin x", &["x"]), Err(Error::Syntax { offset: 4, .. })));
    }

    #[test]
    fn whitespace_insignificant() {
        let vars = ["t"];
        assert_eq!(
            parse("  1+t ^ 2 ", &vars).unwrap(),
            parse("1+t^2", &vars).unwrap()
        );
    }
}
