//! Rational-function expressions in named parameters, with a small
//! recursive-descent parser and a printer whose output parses back to the
//! same tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Poly, RatFunc, Scalar};
use crate::error::{Error, Result};

/// Assignment of rational values to parameter names.
pub type Binding = BTreeMap<String, Scalar>;

/// Expression tree over rational literals and parameter identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamExpr {
    Num(Scalar),
    Var(String),
    Neg(Box<ParamExpr>),
    Add(Box<ParamExpr>, Box<ParamExpr>),
    Sub(Box<ParamExpr>, Box<ParamExpr>),
    Mul(Box<ParamExpr>, Box<ParamExpr>),
    Div(Box<ParamExpr>, Box<ParamExpr>),
    Pow(Box<ParamExpr>, i32),
}

impl ParamExpr {
    pub fn int(n: i64) -> Self {
        ParamExpr::Num(Scalar::from_integer(BigInt::from(n)))
    }

    pub fn num(q: Scalar) -> Self {
        ParamExpr::Num(q)
    }

    pub fn var(name: &str) -> Self {
        ParamExpr::Var(name.to_string())
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(Error::parse(1, t.col, format!("unexpected `{}`", t.kind)));
        }
        Ok(e)
    }

    /// Identifiers occurring in the expression.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            ParamExpr::Num(_) => {}
            ParamExpr::Var(v) => {
                out.insert(v.clone());
            }
            ParamExpr::Neg(a) | ParamExpr::Pow(a, _) => a.collect_vars(out),
            ParamExpr::Add(a, b)
            | ParamExpr::Sub(a, b)
            | ParamExpr::Mul(a, b)
            | ParamExpr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Evaluate at a binding that covers every identifier.
    pub fn eval(&self, b: &Binding) -> Result<Scalar> {
        Ok(match self {
            ParamExpr::Num(q) => q.clone(),
            ParamExpr::Var(v) => b
                .get(v)
                .cloned()
                .ok_or_else(|| Error::MissingParameter(v.clone()))?,
            ParamExpr::Neg(a) => -a.eval(b)?,
            ParamExpr::Add(x, y) => x.eval(b)? + y.eval(b)?,
            ParamExpr::Sub(x, y) => x.eval(b)? - y.eval(b)?,
            ParamExpr::Mul(x, y) => {
                let l = x.eval(b)?;
                if l.is_zero() {
                    // still evaluate the right side so missing parameters surface
                    y.eval(b)?;
                    return Ok(l);
                }
                l * y.eval(b)?
            }
            ParamExpr::Div(x, y) => {
                let d = y.eval(b)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero(self.to_string()));
                }
                x.eval(b)? / d
            }
            ParamExpr::Pow(a, e) => {
                let base = a.eval(b)?;
                if *e < 0 {
                    if base.is_zero() {
                        return Err(Error::DivisionByZero(self.to_string()));
                    }
                    num_traits::pow(base.recip(), e.unsigned_abs() as usize)
                } else {
                    num_traits::pow(base, *e as usize)
                }
            }
        })
    }

    /// Normal form as a ratio of polynomials. Fails when a divisor is
    /// identically zero.
    pub fn normalize(&self) -> Result<RatFunc> {
        Ok(match self {
            ParamExpr::Num(q) => RatFunc::constant(q.clone()),
            ParamExpr::Var(v) => RatFunc::from_poly(Poly::var(v)),
            ParamExpr::Neg(a) => a.normalize()?.neg(),
            ParamExpr::Add(x, y) => x.normalize()?.add(&y.normalize()?),
            ParamExpr::Sub(x, y) => x.normalize()?.sub(&y.normalize()?),
            ParamExpr::Mul(x, y) => x.normalize()?.mul(&y.normalize()?),
            ParamExpr::Div(x, y) => {
                let d = y.normalize()?;
                if d.is_zero() {
                    return Err(Error::IdenticallyZeroDivisor(y.to_string()));
                }
                x.normalize()?.div(&d)?
            }
            ParamExpr::Pow(a, e) => {
                let base = a.normalize()?;
                if *e < 0 && base.is_zero() {
                    return Err(Error::IdenticallyZeroDivisor(a.to_string()));
                }
                base.powi(*e)?
            }
        })
    }

    /// Symbolic equality of the normal forms.
    pub fn equivalent(&self, other: &ParamExpr) -> Result<bool> {
        Ok(self.normalize()?.equals(&other.normalize()?))
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self, ParamExpr::Num(q) if q.is_zero())
    }

    pub fn as_literal(&self) -> Option<&Scalar> {
        match self {
            ParamExpr::Num(q) => Some(q),
            _ => None,
        }
    }

    /// Replace identifiers by expressions.
    pub fn substitute(&self, map: &BTreeMap<String, ParamExpr>) -> ParamExpr {
        use ParamExpr::*;
        let bx = |e: &ParamExpr| Box::new(e.substitute(map));
        match self {
            Num(q) => Num(q.clone()),
            Var(v) => map.get(v).cloned().unwrap_or_else(|| Var(v.clone())),
            Neg(a) => Neg(bx(a)),
            Add(a, b) => Add(bx(a), bx(b)),
            Sub(a, b) => Sub(bx(a), bx(b)),
            Mul(a, b) => Mul(bx(a), bx(b)),
            Div(a, b) => Div(bx(a), bx(b)),
            Pow(a, e) => Pow(bx(a), *e),
        }
    }

    /// Multiply, dropping literal zeros and ones.
    pub fn times(self, other: ParamExpr) -> ParamExpr {
        match (self.as_literal(), other.as_literal()) {
            (Some(a), _) if a.is_zero() => ParamExpr::zero(),
            (_, Some(b)) if b.is_zero() => ParamExpr::zero(),
            (Some(a), Some(b)) => ParamExpr::Num(a * b),
            (Some(a), _) if a.is_one() => other,
            (_, Some(b)) if b.is_one() => self,
            _ => ParamExpr::Mul(Box::new(self), Box::new(other)),
        }
    }

    /// Add, dropping literal zeros.
    pub fn plus(self, other: ParamExpr) -> ParamExpr {
        match (self.as_literal(), other.as_literal()) {
            (Some(a), Some(b)) => ParamExpr::Num(a + b),
            (Some(a), _) if a.is_zero() => other,
            (_, Some(b)) if b.is_zero() => self,
            _ => ParamExpr::Add(Box::new(self), Box::new(other)),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8, leading: bool) -> fmt::Result {
        use ParamExpr::*;
        match self {
            Num(q) => {
                let integral = q.is_integer();
                let neg = q.is_negative();
                let bare = (integral && (!neg || (leading && ctx <= 1)))
                    || (!integral && ctx <= 1 && (!neg || leading));
                if bare {
                    write!(f, "{q}")
                } else {
                    write!(f, "({q})")
                }
            }
            Var(v) => write!(f, "{v}"),
            Neg(a) => {
                let paren = !(leading && ctx <= 3);
                if paren {
                    write!(f, "(")?;
                }
                write!(f, "-")?;
                a.fmt_prec(f, 4, false)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Add(a, b) | Sub(a, b) => {
                let paren = ctx > 1;
                let lead = leading || paren;
                if paren {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1, lead)?;
                if matches!(self, Add(..)) {
                    write!(f, " + ")?;
                    b.fmt_prec(f, 2, false)?;
                } else {
                    write!(f, " - ")?;
                    b.fmt_prec(f, 2, false)?;
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Mul(a, b) | Div(a, b) => {
                let paren = ctx > 2;
                let lead = leading || paren;
                if paren {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2, lead)?;
                write!(f, "{}", if matches!(self, Mul(..)) { "*" } else { "/" })?;
                b.fmt_prec(f, 4, false)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Pow(a, e) => {
                a.fmt_prec(f, 5, false)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
        }
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, true)
    }
}

impl From<Scalar> for ParamExpr {
    fn from(q: Scalar) -> Self {
        ParamExpr::Num(q)
    }
}

impl From<i64> for ParamExpr {
    fn from(n: i64) -> Self {
        ParamExpr::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for ParamExpr {
            type Output = ParamExpr;
            fn $method(self, rhs: ParamExpr) -> ParamExpr {
                ParamExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for ParamExpr {
    type Output = ParamExpr;
    fn neg(self) -> ParamExpr {
        match self {
            ParamExpr::Num(q) => ParamExpr::Num(-q),
            ParamExpr::Neg(inner) => *inner,
            other => ParamExpr::Neg(Box::new(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Ident(String),
    Op(char),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Int(n) => write!(f, "{n}"),
            Kind::Ident(s) => write!(f, "{s}"),
            Kind::Op(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    col: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                kind: Kind::Int(s.parse().expect("digits")),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                kind: Kind::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                kind: Kind::Op(c),
                col,
            });
            i += 1;
        } else {
            return Err(Error::parse(1, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: Kind::Op(c), .. }) if *c == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end_col(&self) -> usize {
        self.tokens.last().map(|t| t.col + 1).unwrap_or(1)
    }

    fn expr(&mut self) -> Result<ParamExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ParamExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = match (&lhs, &rhs) {
                    (ParamExpr::Num(a), ParamExpr::Num(b)) if !b.is_zero() => {
                        ParamExpr::Num(a / b)
                    }
                    _ => lhs / rhs,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ParamExpr> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(match inner {
                ParamExpr::Num(q) => ParamExpr::Num(-q),
                other => -other,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamExpr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let tok = self.peek().cloned();
        let e = match tok {
            Some(Token {
                kind: Kind::Int(n), ..
            }) => {
                self.pos += 1;
                i32::try_from(n).map_err(|_| Error::parse(1, self.end_col(), "exponent too large"))?
            }
            Some(t) => return Err(Error::parse(1, t.col, "expected integer exponent")),
            None => return Err(Error::parse(1, self.end_col(), "expected integer exponent")),
        };
        if paren && !self.eat(')') {
            return Err(Error::parse(1, self.end_col(), "expected `)`"));
        }
        Ok(ParamExpr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<ParamExpr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::parse(1, self.end_col(), "unexpected end of expression"));
        };
        self.pos += 1;
        match tok.kind {
            Kind::Int(n) => Ok(ParamExpr::Num(Scalar::from_integer(n))),
            Kind::Ident(s) => Ok(ParamExpr::Var(s)),
            Kind::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    let col = self.peek().map(|t| t.col).unwrap_or_else(|| self.end_col());
                    return Err(Error::parse(1, col, "expected `)`"));
                }
                Ok(e)
            }
            Kind::Op(c) => Err(Error::parse(1, tok.col, format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int};

    fn bind(pairs: &[(&str, Scalar)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn parses_and_evaluates() {
        let e = ParamExpr::parse("(4*lambda-1)/(5-2*lambda)").unwrap();
        assert_eq!(e.eval(&bind(&[("lambda", int(2))])).unwrap(), int(7));
        assert!(matches!(
            e.eval(&bind(&[("lambda", frac(5, 2))])),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(e.eval(&Binding::new()), Err(Error::MissingParameter(_))));
        let p = ParamExpr::parse("-x^2 + 2/3*x^(-1)").unwrap();
        assert_eq!(p.eval(&bind(&[("x", int(2))])).unwrap(), frac(-11, 3));
    }

    #[test]
    fn literal_folding() {
        assert_eq!(ParamExpr::parse("-2/3").unwrap(), ParamExpr::Num(frac(-2, 3)));
        assert_eq!(ParamExpr::parse("(1/3)").unwrap(), ParamExpr::Num(frac(1, 3)));
    }

    #[test]
    fn identically_zero_divisor_is_rejected() {
        let e = ParamExpr::parse("1/(x - x)").unwrap();
        assert!(matches!(e.normalize(), Err(Error::IdenticallyZeroDivisor(_))));
        // vanishing only at x = 1 is fine symbolically
        assert!(ParamExpr::parse("1/(x - 1)").unwrap().normalize().is_ok());
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "a - (b - c)",
            "-x^2",
            "(-x)^2",
            "2/3*a",
            "a*(2/3)",
            "a/(b*c)",
            "a + (-3)",
            "-2/3 + x",
            "x^(-2)",
            "(a + b)*(a - b)/(1 - a)",
            "-(a + b)",
            "a*(-b)",
            "(2*lambda^2 + 5*lambda - 1)/6",
        ] {
            let e = ParamExpr::parse(s).unwrap();
            let printed = e.to_string();
            let again = ParamExpr::parse(&printed).unwrap();
            assert_eq!(e, again, "{s} -> {printed}");
        }
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match ParamExpr::parse("1 + * 2") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        assert!(ParamExpr::parse("(1 + 2").is_err());
        assert!(ParamExpr::parse("x # y").is_err());
    }
}
