//! Cocycles, coboundaries and the second cohomology space of an algebra
//! with trivial one-dimensional coefficients.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactmath::{quotient_coords, unit_vec, Matrix, Scalar, Subspace, Vector};

/// Scalar bilinear form; entry `(i, j)` is the coefficient of `Δ_{i+1,j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle(Matrix);

impl Cocycle {
    pub fn zero(n: usize) -> Self {
        Cocycle(Matrix::zeros(n, n))
    }

    /// `Δ_{i+1, j+1}` (0-based arguments).
    pub fn delta(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = Scalar::one();
        Cocycle(m)
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "cocycle matrix",
                expected: m.rows(),
                found: m.cols(),
            });
        }
        Ok(Cocycle(m))
    }

    /// Sum of `c * Δ_{i+1, j+1}` over 0-based triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, Scalar)]) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for (i, j, c) in triples {
            if *i >= n || *j >= n {
                return Err(Error::Invalid(format!(
                    "Δ{}{} out of range for dimension {n}",
                    i + 1,
                    j + 1
                )));
            }
            m[(*i, *j)] += c;
        }
        Ok(Cocycle(m))
    }

    /// Row-major: `Δ_ij` sits at `(i-1) n + (j-1)`.
    pub fn from_flat(n: usize, v: &[Scalar]) -> Result<Self> {
        if v.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "flattened cocycle",
                expected: n * n,
                found: v.len(),
            });
        }
        let rows = v.chunks(n).map(<[Scalar]>::to_vec).collect();
        Ok(Cocycle(Matrix::from_rows(rows)?))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.0[(i, j)]
    }

    pub fn flatten(&self) -> Vector {
        self.0.to_rows().concat()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `θ(x, y) = x^T M y`.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let n = self.dim();
        let mut acc = Scalar::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let m = &self.0[(i, j)];
                if !m.is_zero() && !y[j].is_zero() {
                    acc += &x[i] * m * &y[j];
                }
            }
        }
        acc
    }

    pub fn add(&self, o: &Cocycle) -> Result<Cocycle> {
        Ok(Cocycle(self.0.add(&o.0)?))
    }

    pub fn scale(&self, c: &Scalar) -> Cocycle {
        Cocycle(self.0.scale(c))
    }

    /// Nonzero entries as 0-based `(i, j, c)`.
    pub fn triples(&self) -> Vec<(usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = &self.0[(i, j)];
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    /// `(1,3,1) (2,2,-3)` form with 1-based indices.
    pub fn to_triples_string(&self) -> String {
        let t = self.triples();
        if t.is_empty() {
            return "0".into();
        }
        t.iter()
            .map(|(i, j, c)| format!("({},{},{})", i + 1, j + 1, c))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `{x : θ(x, A) + θ(A, x) = 0}`.
    pub fn annihilator(&self) -> Subspace {
        let m = &self.0;
        let mut rows = m.transpose().to_rows();
        rows.extend(m.to_rows());
        let mut rs = Subspace::zero(self.dim());
        for r in &rows {
            rs.insert(r).expect("length");
        }
        rs.orthogonal()
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Scalar)> = self
            .triples()
            .into_iter()
            .map(|(i, j, c)| (format!("Δ{}{}", i + 1, j + 1), c))
            .collect();
        let s = crate::algebra::linear_combination(terms.iter().map(|(n, c)| (n.clone(), c)));
        write!(f, "{s}")
    }
}

pub fn ann_of_cocycle(th: &Cocycle) -> Subspace {
    th.annihilator()
}

/// The pairs `(sign, u, v)` such that the defining identity at `(a,b,x,y)`
/// reads `sum sign * θ(u, v) = 0`.
fn defect_terms(alg: &Algebra, ps: &Algebra, [a, b, x, y]: [&[Scalar]; 4]) -> Vec<(i8, Vector, Vector)> {
    let m = |u: &[Scalar], v: &[Scalar]| alg.mul(u, v);
    let xy = m(x, y);
    let ax = m(a, x);
    let ay = m(a, y);
    let bx = m(b, x);
    let by = m(b, y);
    let mut inner = m(a, &xy);
    for (t, s) in inner.iter_mut().zip(m(&ax, y)) {
        *t -= s;
    }
    for (t, s) in inner.iter_mut().zip(m(x, &ay)) {
        *t -= s;
    }
    let p = ps.mul(a, b);
    vec![
        (1, b.to_vec(), inner),
        (-1, a.to_vec(), m(&bx, y)),
        (1, m(a, &bx), y.to_vec()),
        (1, bx.clone(), ay),
        (-1, a.to_vec(), m(x, &by)),
        (1, ax, by.clone()),
        (1, x.to_vec(), m(a, &by)),
        (1, p.clone(), xy),
        (-1, m(&p, x), y.to_vec()),
        (-1, x.to_vec(), m(&p, y)),
    ]
}

fn check_shape(alg: &Algebra, th: &Cocycle) -> Result<()> {
    if th.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            context: "cocycle",
            expected: alg.dim(),
            found: th.dim(),
        });
    }
    Ok(())
}

/// LHS minus RHS of the cocycle identity at basis indices `(a, b, x, y)`.
pub fn cocycle_defect(alg: &Algebra, th: &Cocycle, q: [usize; 4]) -> Result<Scalar> {
    check_shape(alg, th)?;
    let n = alg.dim();
    if let Some(bad) = q.iter().find(|&&i| i >= n) {
        return Err(Error::Invalid(format!("basis index e{} out of range", bad + 1)));
    }
    let e: Vec<Vector> = q.iter().map(|&i| unit_vec(n, i)).collect();
    let ps = alg.pstar();
    let mut acc = Scalar::zero();
    for (s, u, v) in defect_terms(alg, &ps, [&e[0], &e[1], &e[2], &e[3]]) {
        let t = th.eval(&u, &v);
        if s > 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc)
}

/// First basis quadruple where `th` violates the cocycle identity.
pub fn cocycle_witness(alg: &Algebra, th: &Cocycle) -> Result<Option<([usize; 4], Scalar)>> {
    check_shape(alg, th)?;
    let n = alg.dim();
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let d = cocycle_defect(alg, th, [a, b, x, y])?;
                    if !d.is_zero() {
                        return Ok(Some(([a, b, x, y], d)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Coefficient rows over the flattened Δ basis, one per basis quadruple,
/// grouped by first index in deterministic order.
fn defect_rows(alg: &Algebra) -> Vec<Vector> {
    let n = alg.dim();
    let ps = alg.pstar();
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let chunks: Vec<Vec<Vector>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut rows = Vec::new();
            for b in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        let mut row = vec![Scalar::zero(); n * n];
                        let terms = defect_terms(alg, &ps, [&basis[a], &basis[b], &basis[x], &basis[y]]);
                        for (s, u, v) in terms {
                            for (i, ui) in u.iter().enumerate() {
                                if ui.is_zero() {
                                    continue;
                                }
                                for (j, vj) in v.iter().enumerate() {
                                    if vj.is_zero() {
                                        continue;
                                    }
                                    let t = ui * vj;
                                    if s > 0 {
                                        row[i * n + j] += t;
                                    } else {
                                        row[i * n + j] -= t;
                                    }
                                }
                            }
                        }
                        if row.iter().any(|c| !c.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
            rows
        })
        .collect();
    chunks.concat()
}

/// `Z²` as a subspace of the flattened n²-dimensional form space.
pub fn z2_basis(alg: &Algebra) -> Subspace {
    let n = alg.dim();
    let mut rs = Subspace::zero(n * n);
    for r in defect_rows(alg) {
        rs.insert(&r).expect("row length");
    }
    rs.orthogonal()
}

/// `B²`, spanned by the slices `(M_k)_ij = c_ij^k`.
pub fn b2_basis(alg: &Algebra) -> Subspace {
    let n = alg.dim();
    let mut s = Subspace::zero(n * n);
    for k in 0..n {
        let slice: Vector = (0..n * n).map(|ij| alg.coeff(ij / n, ij % n, k).clone()).collect();
        s.insert(&slice).expect("length");
    }
    s
}

/// `δf(x, y) = f(xy)` for a functional `f` given by its values on the basis.
pub fn coboundary(alg: &Algebra, f: &[Scalar]) -> Result<Cocycle> {
    let n = alg.dim();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            context: "functional",
            expected: n,
            found: f.len(),
        });
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Scalar::zero();
            for (k, c) in alg.basis_product(i, j) {
                acc += c * &f[*k];
            }
            m[(i, j)] = acc;
        }
    }
    Ok(Cocycle(m))
}

/// `Z²` split as `B²` plus representatives of a basis of `H²`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    n: usize,
    z2: Subspace,
    b2: Subspace,
    reps: Vec<Cocycle>,
    rep_vecs: Vec<Vector>,
}

impl CohomologyBasis {
    pub fn z2(&self) -> &Subspace {
        &self.z2
    }

    pub fn b2(&self) -> &Subspace {
        &self.b2
    }

    pub fn reps(&self) -> &[Cocycle] {
        &self.reps
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    /// `dim H²`.
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn contains(&self, th: &Cocycle) -> bool {
        th.dim() == self.n && self.z2.contains(&th.flatten()).expect("length")
    }

    /// Coordinates of `[θ]` in the representative basis.
    pub fn class_coords(&self, th: &Cocycle) -> Result<Vector> {
        if th.dim() != self.n {
            return Err(Error::DimensionMismatch {
                context: "cocycle",
                expected: self.n,
                found: th.dim(),
            });
        }
        if !self.contains(th) {
            return Err(Error::NotCocycle(th.to_string()));
        }
        quotient_coords(&th.flatten(), &self.b2, &self.rep_vecs)
    }

    /// `sum coords_i * reps_i`.
    pub fn combine(&self, coords: &[Scalar]) -> Result<Cocycle> {
        if coords.len() != self.reps.len() {
            return Err(Error::DimensionMismatch {
                context: "class coordinates",
                expected: self.reps.len(),
                found: coords.len(),
            });
        }
        let mut m = Matrix::zeros(self.n, self.n);
        for (c, r) in coords.iter().zip(&self.reps) {
            if !c.is_zero() {
                m = m.add(&r.matrix().scale(c))?;
            }
        }
        Ok(Cocycle(m))
    }
}

/// Compute `Z²`, `B²` and representatives. Preferred representatives are
/// used when they are cocycles whose classes form a basis of `H²`;
/// otherwise the earliest canonical `Z²` basis vectors outside `B²` are
/// taken.
pub fn h2(alg: &Algebra, preferred: Option<&[Cocycle]>) -> Result<CohomologyBasis> {
    let n = alg.dim();
    let z2 = z2_basis(alg);
    let b2 = b2_basis(alg);
    let need = z2.dim() - b2.dim();
    let reps: Vec<Cocycle> = match preferred {
        Some(ps) => {
            let mut acc = b2.clone();
            for th in ps {
                check_shape(alg, th)?;
                if !z2.contains(&th.flatten())? {
                    return Err(Error::NotCocycle(th.to_string()));
                }
                if !acc.insert(&th.flatten())? {
                    return Err(Error::DependentClasses);
                }
            }
            if ps.len() != need {
                return Err(Error::IncompleteClasses { got: ps.len(), need });
            }
            ps.to_vec()
        }
        None => {
            let mut acc = b2.clone();
            let mut out = Vec::new();
            for v in z2.basis() {
                if acc.insert(v)? {
                    out.push(Cocycle::from_flat(n, v)?);
                }
            }
            out
        }
    };
    let rep_vecs = reps.iter().map(Cocycle::flatten).collect();
    Ok(CohomologyBasis {
        n,
        z2,
        b2,
        reps,
        rep_vecs,
    })
}

/// Standalone helper: coordinates of `[θ]` in `cb`.
pub fn class_coords(cb: &CohomologyBasis, th: &Cocycle) -> Result<Vector> {
    cb.class_coords(th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int};

    fn t3_01() -> Algebra {
        Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))]).unwrap()
    }

    fn t3_02(l: Scalar) -> Algebra {
        Algebra::from_entries("T3_02", 3, &[(0, 0, 1, int(1)), (0, 1, 2, l), (1, 0, 2, int(1))]).unwrap()
    }

    fn d(i: usize, j: usize) -> Cocycle {
        Cocycle::delta(3, i - 1, j - 1)
    }

    fn lin(terms: &[(i64, i64, usize, usize)]) -> Cocycle {
        let t: Vec<_> = terms.iter().map(|&(p, q, i, j)| (i - 1, j - 1, frac(p, q))).collect();
        Cocycle::from_triples(3, &t).unwrap()
    }

    #[test]
    fn t3_01_cohomology() {
        let a = t3_01();
        let z = z2_basis(&a);
        let expected = Subspace::span(
            9,
            &[d(1, 1), d(1, 2), d(1, 3), d(2, 1), lin(&[(1, 1, 2, 2), (-3, 1, 3, 1)])]
                .iter()
                .map(Cocycle::flatten)
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(z, expected);
        assert_eq!(b2_basis(&a), Subspace::span(9, &[d(1, 1).flatten(), d(1, 2).flatten()]).unwrap());
        assert_eq!(cocycle_defect(&a, &d(1, 3), [0, 0, 0, 0]).unwrap(), int(0));
        assert!(cocycle_witness(&a, &d(3, 1)).unwrap().is_some());
        assert!(cocycle_witness(&a, &d(1, 3)).unwrap().is_none());

        let reps = vec![d(1, 3), d(2, 1), lin(&[(1, 1, 2, 2), (-3, 1, 3, 1)])];
        let cb = h2(&a, Some(&reps)).unwrap();
        assert_eq!(cb.dim(), 3);
        assert!(matches!(h2(&a, Some(&[d(1, 1)])), Err(Error::DependentClasses)));
        assert!(matches!(h2(&a, Some(&[d(3, 1)])), Err(Error::NotCocycle(_))));
        assert!(matches!(h2(&a, Some(&reps[..2])), Err(Error::IncompleteClasses { got: 2, need: 3 })));

        // Δ22 alone is not a cocycle; Δ22 - 3Δ31 + Δ12 is, with class (0, 0, 1)
        assert!(cb.class_coords(&d(2, 2)).is_err());
        let th = lin(&[(1, 1, 2, 2), (-3, 1, 3, 1), (5, 1, 1, 2)]);
        assert_eq!(cb.class_coords(&th).unwrap(), vec![int(0), int(0), int(1)]);
        assert_eq!(cb.class_coords(&d(1, 1)).unwrap(), vec![int(0); 3]);
    }

    #[test]
    fn t3_02_cohomology() {
        let a = t3_02(int(0));
        let z = z2_basis(&a);
        assert_eq!(z.dim(), 6);
        assert!(z.contains(&d(2, 3).flatten()).unwrap());
        let reps = vec![
            d(1, 2),
            lin(&[(1, 1, 1, 3), (1, 1, 2, 2)]),
            lin(&[(1, 3, 2, 2), (1, 1, 3, 1)]),
            d(2, 3),
        ];
        assert_eq!(h2(&a, Some(&reps)).unwrap().dim(), 4);

        let b = t3_02(int(2));
        let b2 = b2_basis(&b);
        let expected = Subspace::span(9, &[d(1, 1).flatten(), lin(&[(2, 1, 1, 2), (1, 1, 2, 1)]).flatten()]).unwrap();
        assert_eq!(b2, expected);
        assert_eq!(z2_basis(&b).dim(), 5);
    }

    #[test]
    fn annihilator_of_cocycle() {
        assert_eq!(d(1, 3).annihilator(), Subspace::span(3, &[unit_vec(3, 1)]).unwrap());
        assert_eq!(Cocycle::zero(3).annihilator(), Subspace::full(3));
        let th = lin(&[(1, 1, 2, 2), (-3, 1, 3, 1)]);
        // brute force: e_i is in Ann(θ) iff row i and column i vanish
        let ann = th.annihilator();
        for i in 0..3 {
            let free = (0..3).all(|j| th.get(i, j).is_zero() && th.get(j, i).is_zero());
            assert_eq!(ann.contains(&unit_vec(3, i)).unwrap(), free);
        }
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let a = t3_02(frac(1, 2));
        let z = z2_basis(&a);
        let db = coboundary(&a, &[int(1), int(-2), frac(3, 4)]).unwrap();
        assert!(z.contains(&db.flatten()).unwrap());
        assert!(b2_basis(&a).is_subspace_of(&z).unwrap());
    }
}
