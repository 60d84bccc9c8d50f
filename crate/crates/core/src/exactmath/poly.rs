//! Multivariate polynomials and rational functions with rational coefficients.
//! These give `ParamExpr` a decidable normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Binding, ParamExpr, Scalar};
use crate::error::{Error, Result};

/// A power product of named variables, sorted by name, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(other.0.iter()) {
            *out.entry(v.as_str()).or_default() += e;
        }
        Monomial(out.into_iter().map(|(v, e)| (v.to_string(), e)).collect())
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        let theirs: BTreeMap<&str, u32> = other.0.iter().map(|(v, e)| (v.as_str(), *e)).collect();
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| theirs.get(v.as_str()).map(|f| (v.clone(), (*e).min(*f))))
                .collect(),
        )
    }

    /// `self / other`, assuming divisibility.
    fn div(&self, other: &Monomial) -> Monomial {
        let theirs: BTreeMap<&str, u32> = other.0.iter().map(|(v, e)| (v.as_str(), *e)).collect();
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let r = e - theirs.get(v.as_str()).copied().unwrap_or(0);
                    (r > 0).then(|| (v.clone(), r))
                })
                .collect(),
        )
    }
}

/// Polynomial as a sparse map monomial -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(name), Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Scalar::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, binding: &Binding) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = binding
                    .get(v)
                    .ok_or_else(|| Error::MissingParameter(v.clone()))?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.div(m), c.clone())).collect(),
        }
    }

    pub fn to_expr(&self) -> ParamExpr {
        if self.terms.is_empty() {
            return ParamExpr::Num(Scalar::zero());
        }
        let mut out: Option<ParamExpr> = None;
        // highest-degree terms first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (m, c) in terms {
            let negative = c.is_negative();
            let mag = c.abs();
            let mut factors: Vec<ParamExpr> = Vec::new();
            // p/q * m prints as p*m/q
            let den = (!m.is_one() && !mag.is_integer()).then(|| mag.denom().clone());
            let mag = match &den {
                Some(_) => Scalar::from_integer(mag.numer().clone()),
                None => mag,
            };
            if !mag.is_one() || m.is_one() {
                factors.push(ParamExpr::Num(mag));
            }
            for (v, e) in &m.0 {
                let base = ParamExpr::Var(v.clone());
                factors.push(if *e == 1 {
                    base
                } else {
                    ParamExpr::Pow(Box::new(base), *e as i32)
                });
            }
            let term = factors
                .into_iter()
                .reduce(|a, b| ParamExpr::Mul(Box::new(a), Box::new(b)))
                .expect("nonempty term");
            let term = match den {
                Some(d) => ParamExpr::Div(Box::new(term), Box::new(ParamExpr::Num(Scalar::from_integer(d)))),
                None => term,
            };
            out = Some(match (out, negative) {
                (None, false) => term,
                (None, true) => -term,
                (Some(acc), false) => ParamExpr::Add(Box::new(acc), Box::new(term)),
                (Some(acc), true) => ParamExpr::Sub(Box::new(acc), Box::new(term)),
            });
        }
        out.expect("nonzero polynomial")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Ratio of polynomials with nonzero denominator, kept with a monic-leading
/// denominator and no common monomial factor.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::IdenticallyZeroDivisor(den.to_string()));
        }
        Ok(RatFunc { num, den }.tidy())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::constant(Scalar::one()),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    fn tidy(self) -> Self {
        let RatFunc { mut num, mut den } = self;
        if num.is_zero() {
            return RatFunc::constant(Scalar::zero());
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        let lead = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        let d = self.den.as_constant()?;
        let n = self.num.as_constant()?;
        Some(n / d)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            }
            .tidy();
        }
        RatFunc {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .tidy()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
        .tidy()
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::IdenticallyZeroDivisor(o.to_string()));
        }
        Ok(RatFunc {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        }
        .tidy())
    }

    pub fn powi(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 {
            RatFunc::constant(Scalar::one()).div(self)?
        } else {
            self.clone()
        };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        }
        .tidy())
    }

    /// Exact equality of rational functions (cross multiplication).
    pub fn equals(&self, o: &RatFunc) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn eval(&self, binding: &Binding) -> Result<Scalar> {
        let d = self.den.eval(binding)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero(self.den.to_string()));
        }
        Ok(self.num.eval(binding)? / d)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn to_expr(&self) -> ParamExpr {
        match self.den.as_constant() {
            Some(d) if d.is_one() => self.num.to_expr(),
            _ => ParamExpr::Div(Box::new(self.num.to_expr()), Box::new(self.den.to_expr())),
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;

    #[test]
    fn rational_function_arithmetic() {
        let l = RatFunc::from_poly(Poly::var("l"));
        let one = RatFunc::constant(int(1));
        // (l^2 - 1) / (l - 1) == l + 1
        let a = l.mul(&l).sub(&one).div(&l.sub(&one)).unwrap();
        assert!(a.equals(&l.add(&one)));
        assert!(one.div(&l.sub(&l)).is_err());
        let x = a.eval(&Binding::from([("l".to_string(), int(3))])).unwrap();
        assert_eq!(x, int(4));
    }

    #[test]
    fn monomial_content_is_cancelled() {
        let l = Poly::var("l");
        let r = RatFunc::new(l.mul(&l), l.scale(&int(2))).unwrap();
        assert_eq!(r.to_string(), "l/2");
    }
}
