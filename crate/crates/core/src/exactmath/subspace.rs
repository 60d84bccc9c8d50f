//! Subspaces of Q^n kept in canonical reduced row-echelon form, so equal
//! subspaces compare equal structurally.

use num_traits::{One, Zero};

use super::{is_zero_vec, Matrix, Scalar, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// RREF rows, sorted by pivot.
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            s.insert(&super::unit_vec(ambient, i)).expect("length");
        }
        s
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace vector",
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Residue of `v` after eliminating the current pivots.
    fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        self.check_len(v)?;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        Ok(true)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.check_len(v)?;
        Ok(is_zero_vec(&self.reduce(v)))
    }

    /// Coordinates of `v` in the canonical basis, if it lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Result<Option<Vector>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b)?;
        }
        Ok(s)
    }

    /// Annihilator under the standard dot product.
    pub fn orthogonal(&self) -> Subspace {
        let n = self.ambient;
        let mut out = Subspace::zero(n);
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for f in (0..n).filter(|&f| !is_pivot[f]) {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                v[p] = -row[f].clone();
            }
            out.insert(&v).expect("length");
        }
        out
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Ok(self.orthogonal().sum(&other.orthogonal())?.orthogonal())
    }

    /// Standard unit vectors at the non-pivot positions; they span a
    /// complement.
    pub fn standard_complement(&self) -> Vec<Vector> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| super::unit_vec(self.ambient, c))
            .collect()
    }
}

/// Null space of a matrix.
pub fn kernel(m: &Matrix) -> Subspace {
    let mut rows = Subspace::zero(m.cols());
    for i in 0..m.rows() {
        rows.insert(m.row(i)).expect("row length");
    }
    rows.orthogonal()
}

/// Coefficients `c` with `v - sum c_i reps_i` in `sub`. Fails with
/// `NotComplement` when the representatives are dependent modulo `sub`, and
/// `NotInSpan` when `v` is outside `span(reps) + sub`.
pub fn quotient_coords(v: &[Scalar], sub: &Subspace, reps: &[Vector]) -> Result<Vector> {
    let n = sub.ambient();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            context: "quotient coordinates",
            expected: n,
            found: v.len(),
        });
    }
    let mut cols: Vec<Vector> = Vec::with_capacity(reps.len() + sub.dim());
    for r in reps {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                context: "quotient representative",
                expected: n,
                found: r.len(),
            });
        }
        cols.push(r.clone());
    }
    cols.extend(sub.basis().iter().cloned());
    if cols.is_empty() {
        return if is_zero_vec(v) {
            Ok(Vec::new())
        } else {
            Err(Error::NotInSpan)
        };
    }
    let m = Matrix::from_cols(cols)?;
    if m.rank() < m.cols() {
        return Err(Error::NotComplement);
    }
    match m.solve(v)? {
        Some(x) => Ok(x[..reps.len()].to_vec()),
        None => Err(Error::NotInSpan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.orthogonal().basis(), &[v(&[1, -1, 1])]);
    }

    #[test]
    fn quotient_coordinates() {
        let sub = Subspace::span(3, &[v(&[0, 0, 1])]).unwrap();
        let reps = vec![v(&[1, 0, 0]), v(&[0, 1, 5])];
        let c = quotient_coords(&v(&[2, 3, 9]), &sub, &reps).unwrap();
        assert_eq!(c, vec![int(2), int(3)]);
        assert_eq!(
            quotient_coords(&v(&[1, 0, 0]), &sub, &[v(&[0, 0, 1])]),
            Err(Error::NotComplement)
        );
        assert_eq!(
            quotient_coords(&v(&[0, 1, 0]), &sub, &[v(&[1, 0, 0])]),
            Err(Error::NotInSpan)
        );
        assert!(matches!(
            Subspace::zero(2).sum(&Subspace::zero(3)),
            Err(Error::AmbientMismatch(2, 3))
        ));
    }

    fn vecs() -> impl Strategy<Value = Vec<Vector>> {
        prop::collection::vec(prop::collection::vec((-2i64..3, 1i64..3), 4), 0..4)
            .prop_map(|vs| vs.into_iter().map(|r| r.into_iter().map(|(n, d)| frac(n, d)).collect()).collect())
    }

    proptest! {
        #[test]
        fn dimension_formula(a in vecs(), b in vecs()) {
            let u = Subspace::span(4, &a).unwrap();
            let w = Subspace::span(4, &b).unwrap();
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            prop_assert!(i.is_subspace_of(&u).unwrap());
            prop_assert!(i.is_subspace_of(&w).unwrap());
            prop_assert_eq!(u.orthogonal().orthogonal(), u.clone());
        }

        #[test]
        fn kernel_is_annihilated(a in vecs()) {
            prop_assume!(!a.is_empty());
            let m = Matrix::from_rows(a).unwrap();
            let k = kernel(&m);
            prop_assert_eq!(k.dim() + m.rank(), 4);
            for b in k.basis() {
                prop_assert!(is_zero_vec(&m.mul_vec(b).unwrap()));
            }
        }
    }
}
