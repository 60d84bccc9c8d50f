//! Finite-dimensional algebras given by structure constants.
//!
//! Basis indices are 0-based in the API; `e1` in text formats is index 0.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{
    random_vec, unit_vec, zero_vec, Binding, Matrix, ParamExpr, Scalar,
    Subspace, Vector,
};

/// Algebra over Q with `c[i][j][k]` = coefficient of `e_k` in `e_i e_j`.
#[derive(Clone, Debug)]
pub struct Algebra {
    name: String,
    dim: usize,
    c: Vec<Scalar>,
    // nonzero (k, coeff) for each basis pair, indexed by i * dim + j
    sparse: Vec<Vec<(usize, Scalar)>>,
    binding: Binding,
}

impl PartialEq for Algebra {
    /// Equality of structure constants; names and bindings are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.c == other.c
    }
}

impl Algebra {
    /// Build from a dense tensor laid out as `c[(i * n + j) * n + k]`.
    pub fn from_tensor(name: &str, dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "structure tensor",
                expected: dim * dim * dim,
                found: c.len(),
            });
        }
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter(|&k| !c[ij * dim + k].is_zero())
                    .map(|k| (k, c[ij * dim + k].clone()))
                    .collect()
            })
            .collect();
        Ok(Algebra {
            name: name.to_string(),
            dim,
            c,
            sparse,
            binding: Binding::new(),
        })
    }

    /// Build from `(i, j, k, coeff)` entries, summing repeats.
    pub fn from_entries(name: &str, dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            for &x in [i, j, k] {
                if x >= dim {
                    return Err(Error::Invalid(format!(
                        "basis index e{} out of range for dimension {dim}",
                        x + 1
                    )));
                }
            }
            c[(i * dim + j) * dim + k] += v;
        }
        Self::from_tensor(name, dim, c)
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_tensor("zero", dim, vec![Scalar::zero(); dim * dim * dim]).expect("shape")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn binding(&self) -> &Binding {
        &self.binding
    }

    pub(crate) fn with_binding(mut self, b: Binding) -> Self {
        self.binding = b;
        self
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero terms of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.sparse[i * self.dim + j]
    }

    pub fn tensor(&self) -> &[Scalar] {
        &self.c
    }

    fn check(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "algebra element",
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Product without shape checks.
    pub(crate) fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let terms = &self.sparse[i * self.dim + j];
                if terms.is_empty() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in terms {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    pub fn is_zero_product(&self) -> bool {
        self.sparse.iter().all(Vec::is_empty)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Span of all products `u_i w_j`.
    pub fn product_space(&self, u: &Subspace, w: &Subspace) -> Result<Subspace> {
        for s in [u, w] {
            if s.ambient() != self.dim {
                return Err(Error::AmbientMismatch(s.ambient(), self.dim));
            }
        }
        let mut out = Subspace::zero(self.dim);
        for a in u.basis() {
            for b in w.basis() {
                out.insert(&self.mul(a, b))?;
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Subspace {
        let full = Subspace::full(self.dim);
        self.product_space(&full, &full).expect("ambient")
    }

    /// Powers `A^1, ..., A^k` with `A^k = sum_{i+j=k} A^i A^j`, computed
    /// until they reach zero or provably stop changing: once
    /// `A^m = A^{m+1} = ... = A^{2m}` every later power equals `A^m`.
    /// Equal neighbours alone do not imply this.
    pub fn powers(&self) -> Vec<Subspace> {
        let mut pw = vec![Subspace::full(self.dim)];
        // start of the current run of equal powers (1-based)
        let mut run = 1;
        loop {
            let k = pw.len() + 1;
            let mut next = Subspace::zero(self.dim);
            for i in 1..k {
                let p = self.product_space(&pw[i - 1], &pw[k - i - 1]).expect("ambient");
                next = next.sum(&p).expect("ambient");
            }
            if &next != pw.last().expect("nonempty") {
                run = k;
            }
            let zero = next.is_zero();
            pw.push(next);
            if zero || k >= 2 * run {
                return pw;
            }
        }
    }

    /// Distinct members of the power filtration, strictly decreasing; the
    /// last one is the limit (zero exactly for nilpotent algebras).
    pub fn power_chain(&self) -> Vec<Subspace> {
        let mut chain: Vec<Subspace> = Vec::new();
        for p in self.powers() {
            if chain.last() != Some(&p) {
                chain.push(p);
            }
        }
        chain
    }

    pub fn is_nilpotent(&self) -> bool {
        self.power_chain().last().is_some_and(Subspace::is_zero)
    }

    /// Operator matrices of left multiplications, stacked: rows indexed by
    /// (j, k), column x gives coefficient of e_k in e_x e_j.
    fn left_rows(&self) -> Vec<Vector> {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|x| self.coeff(x, j, k).clone()).collect());
            }
        }
        rows
    }

    fn right_rows(&self) -> Vec<Vector> {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|x| self.coeff(i, x, k).clone()).collect());
            }
        }
        rows
    }

    fn kernel_of(&self, rows: Vec<Vector>) -> Subspace {
        if rows.is_empty() {
            return Subspace::full(self.dim);
        }
        crate::exactmath::kernel(&Matrix::from_rows(rows).expect("rows"))
    }

    /// `{x : xA = 0}`.
    pub fn left_annihilator(&self) -> Subspace {
        self.kernel_of(self.left_rows())
    }

    /// `{x : Ax = 0}`.
    pub fn right_annihilator(&self) -> Subspace {
        self.kernel_of(self.right_rows())
    }

    /// `{x : xA + Ax = 0}`.
    pub fn annihilator(&self) -> Subspace {
        let mut rows = self.left_rows();
        rows.extend(self.right_rows());
        self.kernel_of(rows)
    }

    /// Smallest subalgebra containing `x`.
    pub fn generated_subalgebra(&self, x: &[Scalar]) -> Result<Subspace> {
        self.check(x)?;
        let mut s = Subspace::span(self.dim, &[x.to_vec()])?;
        loop {
            let p = self.product_space(&s, &s)?;
            let next = s.sum(&p)?;
            if next == s {
                return Ok(s);
            }
            s = next;
        }
    }

    /// `dim A - dim A^2 == 1`, for nilpotent algebras.
    pub fn is_one_generated(&self) -> Result<bool> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent(self.name.clone()));
        }
        Ok(self.square().codim() == 1)
    }

    /// Search e_1..e_n, then 20 seeded random vectors, for an element
    /// generating the whole algebra.
    pub fn find_generator(&self, seed: u64) -> Result<Option<Vector>> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent(self.name.clone()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let candidates = (0..self.dim)
            .map(|i| unit_vec(self.dim, i))
            .chain((0..20).map(|_| random_vec(&mut rng, self.dim, 5, 3)));
        for g in candidates {
            if self.generated_subalgebra(&g)?.dim() == self.dim {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Product `P*(x, y) = 2/3 xy + 1/3 yx` as an algebra.
    pub fn pstar(&self) -> Algebra {
        let n = self.dim;
        let two = Scalar::new(2.into(), 3.into());
        let one = Scalar::new(1.into(), 3.into());
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = &two * self.coeff(i, j, k) + &one * self.coeff(j, i, k);
                }
            }
        }
        Algebra::from_tensor(&format!("{}*", self.name), n, c).expect("shape")
    }

    /// Relabel the basis: old `e_i` becomes new `e_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Result<Algebra> {
        let n = self.dim;
        let set: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != n || set.len() != n || set.iter().any(|&p| p >= n) {
            return Err(Error::Invalid(format!("not a permutation of 1..{n}: {perm:?}")));
        }
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, v) in self.basis_product(i, j) {
                    c[(perm[i] * n + perm[j]) * n + perm[*k]] = v.clone();
                }
            }
        }
        Ok(Algebra::from_tensor(&self.name, n, c)?.with_binding(self.binding.clone()))
    }

    /// Change of basis: the new basis vector `e'_j` is column `j` of `m`.
    pub fn change_basis(&self, m: &Matrix) -> Result<Algebra> {
        let n = self.dim;
        let inv = m.inverse().ok_or(Error::NotAutomorphism)?;
        let cols: Vec<Vector> = (0..n).map(|j| m.col(j)).collect();
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let p = inv.mul_vec(&self.mul(&cols[i], &cols[j]))?;
                for (k, v) in p.into_iter().enumerate() {
                    c[(i * n + j) * n + k] = v;
                }
            }
        }
        Algebra::from_tensor(&self.name, n, c)
    }

    /// Direct sum; the second summand's basis follows the first.
    pub fn direct_sum(&self, other: &Algebra) -> Algebra {
        let (n, m) = (self.dim, other.dim);
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, v) in self.basis_product(i, j) {
                    entries.push((i, j, *k, v.clone()));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for (k, v) in other.basis_product(i, j) {
                    entries.push((n + i, n + j, n + k, v.clone()));
                }
            }
        }
        Algebra::from_entries(&format!("{}+{}", self.name, other.name), n + m, &entries)
            .expect("indices in range")
    }

    /// Dense random algebra with entries `p/q`, `|p| <= 3`, `q <= 2`.
    pub fn random<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Algebra {
        let c = random_vec(rng, dim * dim * dim, 3, 2);
        Algebra::from_tensor("random", dim, c).expect("shape")
    }

    /// Random strictly upper-triangular product (`e_i e_j` in span of
    /// `e_k`, `k > max(i, j)`), hence nilpotent.
    pub fn random_nilpotent<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Algebra {
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in i.max(j) + 1..dim {
                    let v = crate::exactmath::random_scalar(rng, 2, 2);
                    entries.push((i, j, k, v));
                }
            }
        }
        Algebra::from_entries("random", dim, &entries).expect("indices")
    }

    /// Product table lines `e1 e2 = 2*e3 + e4` in basis order.
    pub fn table_lines(&self) -> Vec<String> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let terms = self.basis_product(i, j);
                if terms.is_empty() {
                    continue;
                }
                let rhs = linear_combination(terms.iter().map(|(k, v)| (format!("e{}", k + 1), v)));
                out.push(format!("e{} e{} = {rhs}", i + 1, j + 1));
            }
        }
        out
    }
}

/// Render `sum c_k * name_k` with sign handling.
pub(crate) fn linear_combination<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut s = String::new();
    for (name, c) in terms {
        let neg = c < &Scalar::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        let body = if mag.is_one() {
            name
        } else if mag.is_integer() {
            format!("{mag}*{name}")
        } else {
            format!("({mag})*{name}")
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.table_lines();
        if lines.is_empty() {
            write!(f, "{}: zero product", self.name)
        } else {
            write!(f, "{}: {}", self.name, lines.join(", "))
        }
    }
}

/// One product line of a template: `e_i e_j = sum coeff_k e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, ParamExpr)>,
}

/// Parametric multiplication table with excluded parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraTemplate {
    pub name: String,
    pub dim: usize,
    pub params: Vec<String>,
    /// Each must be nonzero at a valid binding.
    pub exclusions: Vec<ParamExpr>,
    pub products: Vec<ProductEntry>,
}

impl AlgebraTemplate {
    /// Validate indices, duplicates, identifiers and divisors.
    pub fn new(
        name: &str,
        dim: usize,
        params: Vec<String>,
        exclusions: Vec<ParamExpr>,
        products: Vec<ProductEntry>,
    ) -> Result<Self> {
        let t = AlgebraTemplate {
            name: name.to_string(),
            dim,
            params,
            exclusions,
            products,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let declared: BTreeSet<&str> = self.params.iter().map(String::as_str).collect();
        if declared.len() != self.params.len() {
            return Err(Error::Invalid(format!("{}: duplicate parameter", self.name)));
        }
        let check_expr = |e: &ParamExpr| -> Result<()> {
            for v in e.vars() {
                if !declared.contains(v.as_str()) {
                    return Err(Error::UnknownReference(v));
                }
            }
            e.normalize().map(|_| ())
        };
        let mut seen = BTreeSet::new();
        for p in &self.products {
            if !seen.insert((p.i, p.j)) {
                return Err(Error::Invalid(format!(
                    "{}: duplicate product e{} e{}",
                    self.name,
                    p.i + 1,
                    p.j + 1
                )));
            }
            let mut ks = BTreeSet::new();
            for (k, e) in &p.terms {
                for x in [p.i, p.j, *k] {
                    if x >= self.dim {
                        return Err(Error::Invalid(format!(
                            "{}: basis index e{} out of range for dimension {}",
                            self.name,
                            x + 1,
                            self.dim
                        )));
                    }
                }
                if !ks.insert(*k) {
                    return Err(Error::Invalid(format!("{}: repeated e{} in one product", self.name, k + 1)));
                }
                check_expr(e)?;
            }
        }
        for e in &self.exclusions {
            check_expr(e)?;
        }
        Ok(())
    }

    pub fn is_parametric(&self) -> bool {
        !self.params.is_empty()
    }

    /// First exclusion vanishing at `b`, if any. Errors on missing values
    /// and division by zero.
    pub fn violated_exclusion(&self, b: &Binding) -> Result<Option<&ParamExpr>> {
        for e in &self.exclusions {
            if e.eval(b)?.is_zero() {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    pub fn specialize(&self, b: &Binding) -> Result<Algebra> {
        for p in &self.params {
            if !b.contains_key(p) {
                return Err(Error::MissingParameter(p.clone()));
            }
        }
        if let Some(e) = self.violated_exclusion(b)? {
            return Err(Error::ExclusionViolated {
                name: self.name.clone(),
                expr: e.to_string(),
            });
        }
        let mut entries = Vec::new();
        for p in &self.products {
            for (k, e) in &p.terms {
                entries.push((p.i, p.j, *k, e.eval(b)?));
            }
        }
        let own: Binding = b
            .iter()
            .filter(|(k, _)| self.params.contains(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(Algebra::from_entries(&self.name, self.dim, &entries)?.with_binding(own))
    }

    /// Constant template with the structure constants of `a`.
    pub fn from_algebra(a: &Algebra) -> Self {
        let n = a.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let terms: Vec<(usize, ParamExpr)> = a
                    .basis_product(i, j)
                    .iter()
                    .map(|(k, v)| (*k, ParamExpr::Num(v.clone())))
                    .collect();
                if !terms.is_empty() {
                    products.push(ProductEntry { i, j, terms });
                }
            }
        }
        AlgebraTemplate {
            name: a.name().to_string(),
            dim: n,
            params: Vec::new(),
            exclusions: Vec::new(),
            products,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{axpy, frac, int};
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Vector {
        unit_vec(n, i)
    }

    pub(crate) fn t3_01() -> Algebra {
        Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))]).unwrap()
    }

    fn t4_04() -> Algebra {
        Algebra::from_entries(
            "T4_04",
            4,
            &[
                (0, 0, 1, int(1)),
                (0, 1, 2, int(1)),
                (0, 2, 3, int(1)),
                (1, 0, 3, int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn products_and_filtration() {
        let a = t3_01();
        assert_eq!(a.multiply(&e(3, 0), &e(3, 1)).unwrap(), e(3, 2));
        assert!(a.multiply(&e(3, 0), &e(2, 0)).is_err());
        let dims: Vec<usize> = a.power_chain().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 0]);
        assert_eq!(a.annihilator(), Subspace::span(3, &[e(3, 2)]).unwrap());
        assert!(a.is_one_generated().unwrap());
        assert_eq!(a.find_generator(1).unwrap(), Some(e(3, 0)));

        let b = t4_04();
        let a2 = b.square();
        let full = Subspace::full(4);
        assert_eq!(b.product_space(&a2, &full).unwrap(), Subspace::span(4, &[e(4, 3)]).unwrap());
    }

    #[test]
    fn equal_neighbouring_powers_are_not_the_limit() {
        // A^3 = A^4 = <e3> but A^5 = 0
        let a = Algebra::from_entries(
            "x",
            3,
            &[(0, 0, 1, int(1)), (0, 1, 2, int(2)), (1, 0, 2, int(1)), (1, 1, 2, int(1))],
        )
        .unwrap();
        let dims: Vec<usize> = a.powers().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 1, 0]);
        assert!(a.is_nilpotent());
    }

    #[test]
    fn degenerate_cases() {
        let z = Algebra::zero(3);
        let dims: Vec<usize> = z.power_chain().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 0]);
        assert!(z.is_nilpotent());
        assert_eq!(z.annihilator(), Subspace::full(3));
        assert!(!z.is_one_generated().unwrap());
        assert_eq!(z.find_generator(0).unwrap(), None);

        let idem = Algebra::from_entries("idem", 1, &[(0, 0, 0, int(1))]).unwrap();
        assert!(!idem.is_nilpotent());
        assert!(matches!(idem.is_one_generated(), Err(Error::NotNilpotent(_))));

        let t2 = Algebra::from_entries("T2_01", 2, &[(0, 0, 1, int(1))]).unwrap();
        let sum = t2.direct_sum(&t2);
        assert!(!sum.is_one_generated().unwrap());
        assert_eq!(sum.find_generator(5).unwrap(), None);
    }

    #[test]
    fn template_specialization() {
        let lam = ParamExpr::var("lambda");
        let t = AlgebraTemplate::new(
            "T",
            3,
            vec!["lambda".into()],
            vec![ParamExpr::parse("5 - 2*lambda").unwrap()],
            vec![
                ProductEntry { i: 0, j: 0, terms: vec![(1, ParamExpr::one())] },
                ProductEntry { i: 0, j: 1, terms: vec![(2, lam)] },
            ],
        )
        .unwrap();
        let b = |x| Binding::from([("lambda".to_string(), x)]);
        assert!(t.specialize(&b(int(0))).unwrap().coeff(0, 1, 2).is_zero());
        assert!(matches!(t.specialize(&b(frac(5, 2))), Err(Error::ExclusionViolated { .. })));
        assert!(matches!(t.specialize(&Binding::new()), Err(Error::MissingParameter(_))));
        let bad = AlgebraTemplate::new(
            "U",
            2,
            vec![],
            vec![],
            vec![ProductEntry { i: 0, j: 0, terms: vec![(1, ParamExpr::var("mu"))] }],
        );
        assert!(matches!(bad, Err(Error::UnknownReference(_))));
    }

    proptest! {
        #[test]
        fn bilinear(seed in 0u64..500, s in -3i64..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Algebra::random(3, &mut rng);
            let x = random_vec(&mut rng, 3, 4, 3);
            let x2 = random_vec(&mut rng, 3, 4, 3);
            let y = random_vec(&mut rng, 3, 4, 3);
            let mut lhs_in = x.clone();
            for v in lhs_in.iter_mut() { *v *= int(s); }
            axpy(&mut lhs_in, &Scalar::one(), &x2);
            let lhs = a.mul(&lhs_in, &y);
            let mut rhs = a.mul(&x2, &y);
            axpy(&mut rhs, &int(s), &a.mul(&x, &y));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn annihilator_is_ideal(seed in 0u64..200, n in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Algebra::random_nilpotent(n, &mut rng);
            let ann = a.annihilator();
            let full = Subspace::full(n);
            prop_assert!(a.product_space(&ann, &full).unwrap().is_zero());
            prop_assert!(a.product_space(&full, &ann).unwrap().is_zero());
            let chain = a.power_chain();
            prop_assert!(chain.windows(2).all(|w| w[1].dim() < w[0].dim()));
            prop_assert!(chain.last().unwrap().is_zero());
            let og = a.is_one_generated().unwrap();
            prop_assert_eq!(og, a.find_generator(seed).unwrap().is_some());
        }
    }
}
