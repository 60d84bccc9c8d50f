//! Exact rational arithmetic: scalars, parameter expressions, dense matrices
//! and subspaces in canonical (reduced row-echelon) form.

mod expr;
mod matrix;
mod poly;
mod subspace;

pub use expr::{Binding, ParamExpr};
pub use matrix::{fraction_free_rank, Matrix};
pub use poly::{Monomial, Poly, RatFunc};
pub use subspace::{kernel, quotient_coords, Subspace};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms.
pub type Scalar = BigRational;

/// Dense vector of scalars.
pub type Vector = Vec<Scalar>;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Parse `a`, `-a` or `a/b` into a scalar.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero(s.to_string()));
    }
    Ok(Scalar::new(n, d))
}

/// Bit length of the larger of numerator and denominator.
pub fn height(x: &Scalar) -> u64 {
    x.numer().abs().bits().max(x.denom().bits())
}

pub(crate) fn axpy(acc: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (t, s) in acc.iter_mut().zip(x) {
        if !s.is_zero() {
            *t += a * s;
        }
    }
}

/// Field operations shared by `Scalar` and `RatFunc`, so elimination code
/// can run numerically or over the parameter function field.
pub trait Field: Clone + std::fmt::Debug {
    fn zero_el() -> Self;
    fn one_el() -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// `None` on division by zero.
    fn over(&self, o: &Self) -> Option<Self>;
    /// Nonzero and free of parameters.
    fn is_constant_unit(&self) -> bool;
}

impl Field for Scalar {
    fn zero_el() -> Self {
        <Scalar as Zero>::zero()
    }
    fn one_el() -> Self {
        <Scalar as One>::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn is_constant_unit(&self) -> bool {
        !Zero::is_zero(self)
    }
}

impl Field for RatFunc {
    fn zero_el() -> Self {
        RatFunc::constant(<Scalar as Zero>::zero())
    }
    fn one_el() -> Self {
        RatFunc::constant(<Scalar as One>::one())
    }
    fn vanishes(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn over(&self, o: &Self) -> Option<Self> {
        RatFunc::div(self, o).ok()
    }
    fn is_constant_unit(&self) -> bool {
        self.as_constant().is_some_and(|c| !Zero::is_zero(&c))
    }
}

/// Small random rational `p/q` with `|p| <= max_num`, `1 <= q <= max_den`.
pub fn random_scalar<R: rand::Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Scalar {
    frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// Random rational vector of length `n`.
pub fn random_vec<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, max_num: i64, max_den: i64) -> Vector {
    (0..n).map(|_| random_scalar(rng, max_num, max_den)).collect()
}

/// Format a vector as `(a, b, c)`.
pub fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_are_reduced() {
        let x = parse_scalar("6/-4").unwrap();
        assert_eq!(x, frac(-3, 2));
        assert!(x.denom().is_positive());
        assert_eq!(parse_scalar(" 7 ").unwrap(), int(7));
        assert!(matches!(parse_scalar("1/0"), Err(Error::DivisionByZero(_))));
        assert!(parse_scalar("x").is_err());
    }
}
