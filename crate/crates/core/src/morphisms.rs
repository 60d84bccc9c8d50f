//! Homomorphisms, the automorphism action on cocycles and cohomology
//! classes, and isomorphism-invariant profiles.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::catalog::words::Word;
use crate::cohomology::{Cocycle, CohomologyBasis};
use crate::error::{Error, Result};
use crate::exactmath::{random_scalar, random_vec, Binding, Matrix, ParamExpr, Scalar, Subspace, Vector};

/// Square matrix whose column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap(Matrix);

impl LinearMap {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "linear map",
                expected: m.rows(),
                found: m.cols(),
            });
        }
        Ok(LinearMap(m))
    }

    pub fn identity(n: usize) -> Self {
        LinearMap(Matrix::identity(n))
    }

    /// Map with the given images of the basis vectors.
    pub fn from_images(images: Vec<Vector>) -> Result<Self> {
        Self::new(Matrix::from_cols(images)?)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        self.0.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap(self.0.mul(&other.0)?))
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.0.inverse().map(LinearMap)
    }

    pub fn is_invertible(&self) -> bool {
        !self.0.det().expect("square").is_zero()
    }
}

fn dims_match(a: &Algebra, b: &Algebra, m: &LinearMap) -> Result<()> {
    for d in [b.dim(), m.dim()] {
        if d != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "homomorphism",
                expected: a.dim(),
                found: d,
            });
        }
    }
    Ok(())
}

/// First basis pair `(i, j)` with `m(e_i e_j) != m(e_i) m(e_j)`.
pub fn homomorphism_witness(a: &Algebra, b: &Algebra, m: &LinearMap) -> Result<Option<(usize, usize)>> {
    dims_match(a, b, m)?;
    let n = a.dim();
    let images: Vec<Vector> = (0..n).map(|j| m.0.col(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let mut lhs = vec![Scalar::zero(); n];
            for (k, c) in a.basis_product(i, j) {
                crate::exactmath::axpy(&mut lhs, c, &images[*k]);
            }
            if lhs != b.mul(&images[i], &images[j]) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_homomorphism(a: &Algebra, b: &Algebra, m: &LinearMap) -> Result<bool> {
    Ok(homomorphism_witness(a, b, m)?.is_none())
}

pub fn is_automorphism(a: &Algebra, m: &LinearMap) -> bool {
    m.dim() == a.dim() && m.is_invertible() && is_homomorphism(a, a, m).unwrap_or(false)
}

/// `(φθ)(x, y) = θ(φx, φy)`, i.e. `m^T M m`.
pub fn act_on_cocycle(m: &LinearMap, th: &Cocycle) -> Result<Cocycle> {
    if m.dim() != th.dim() {
        return Err(Error::DimensionMismatch {
            context: "cocycle action",
            expected: th.dim(),
            found: m.dim(),
        });
    }
    Cocycle::from_matrix(m.0.transpose().mul(th.matrix())?.mul(&m.0)?)
}

/// Coordinates of `[φ θ]` where `θ = sum coords_i reps_i`.
pub fn act_on_class(a: &Algebra, cb: &CohomologyBasis, m: &LinearMap, coords: &[Scalar]) -> Result<Vector> {
    if !is_automorphism(a, m) {
        return Err(Error::NotAutomorphism);
    }
    act_on_class_unchecked(cb, m, coords)
}

fn act_on_class_unchecked(cb: &CohomologyBasis, m: &LinearMap, coords: &[Scalar]) -> Result<Vector> {
    let th = cb.combine(coords)?;
    cb.class_coords(&act_on_cocycle(m, &th)?)
}

/// `span{φ w : w in W1} == span W2` in class coordinates.
pub fn subspace_action_equal(
    a: &Algebra,
    cb: &CohomologyBasis,
    m: &LinearMap,
    w1: &[Vector],
    w2: &[Vector],
) -> Result<bool> {
    let mut moved = Vec::new();
    for w in w1 {
        moved.push(act_on_class(a, cb, m, w)?);
    }
    Ok(Subspace::span(cb.dim(), &moved)? == Subspace::span(cb.dim(), w2)?)
}

/// Parametric automorphism matrix (rows as printed; column `j` is the
/// image of `e_j`) valid where `nondegenerate` is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct AutFamily {
    pub dim: usize,
    pub params: Vec<String>,
    pub entries: Vec<Vec<ParamExpr>>,
    pub nondegenerate: ParamExpr,
}

impl AutFamily {
    pub fn new(entries: Vec<Vec<ParamExpr>>, nondegenerate: ParamExpr, extra_vars: &BTreeSet<String>) -> Result<Self> {
        let dim = entries.len();
        if entries.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid("automorphism matrix is not square".into()));
        }
        let mut vars = BTreeSet::new();
        for e in entries.iter().flatten().chain(std::iter::once(&nondegenerate)) {
            e.normalize()?;
            vars.extend(e.vars());
        }
        let params = vars.difference(extra_vars).cloned().collect();
        Ok(AutFamily {
            dim,
            params,
            entries,
            nondegenerate,
        })
    }

    /// Evaluate at a binding that covers family and algebra parameters.
    pub fn specialize(&self, b: &Binding) -> Result<LinearMap> {
        if self.nondegenerate.eval(b)?.is_zero() {
            return Err(Error::Invalid(format!(
                "degenerate binding: {} = 0",
                self.nondegenerate
            )));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.eval(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(Matrix::from_rows(rows)?)
    }

    /// Random binding of the family parameters on top of `base`, with
    /// the nondegeneracy expression nonzero and the matrix invertible.
    pub fn random_binding<R: rand::Rng>(&self, base: &Binding, rng: &mut R) -> Result<(Binding, LinearMap)> {
        for _ in 0..200 {
            let mut b = base.clone();
            for p in &self.params {
                b.insert(p.clone(), random_scalar(rng, 4, 3));
            }
            match self.specialize(&b) {
                Ok(m) if m.is_invertible() => return Ok((b, m)),
                Ok(_) | Err(Error::Invalid(_)) | Err(Error::DivisionByZero(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Invalid("no nondegenerate binding found".into()))
    }
}

/// A mismatch between a claimed and a computed action.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionMismatch {
    pub binding: Vec<(String, String)>,
    pub coordinate: usize,
    pub claimed: String,
    pub computed: String,
}

/// Names used for class coordinates inside action formulas.
pub fn coord_name(i: usize) -> String {
    format!("a{}", i + 1)
}

/// Compare `claimed[i]` (in family parameters, algebra parameters and
/// coordinates `a1..ak`) with the computed action at random bindings.
/// `base` carries the algebra's parameter values.
pub fn verify_action_formula(
    a: &Algebra,
    cb: &CohomologyBasis,
    fam: &AutFamily,
    claimed: &[ParamExpr],
    samples: usize,
    seed: u64,
) -> Result<Option<ActionMismatch>> {
    let k = cb.dim();
    if claimed.len() != k {
        return Err(Error::DimensionMismatch {
            context: "action formulas",
            expected: k,
            found: claimed.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (mut b, m) = fam.random_binding(a.binding(), &mut rng)?;
        if !is_automorphism(a, &m) {
            return Err(Error::NotAutomorphism);
        }
        let coords = random_vec(&mut rng, k, 5, 3);
        for (i, c) in coords.iter().enumerate() {
            b.insert(coord_name(i), c.clone());
        }
        let got = act_on_class_unchecked(cb, &m, &coords)?;
        for (i, f) in claimed.iter().enumerate() {
            let want = f.eval(&b)?;
            if want != got[i] {
                return Ok(Some(ActionMismatch {
                    binding: b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    coordinate: i + 1,
                    claimed: want.to_string(),
                    computed: got[i].to_string(),
                }));
            }
        }
    }
    Ok(None)
}

/// Dimensions of canonically defined subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub powers: Vec<usize>,
    pub ann: usize,
    pub left_ann: usize,
    pub right_ann: usize,
    /// `dim A^i A^j` for `i + j <= 4`, in the order (1,1) (1,2) (2,1) (1,3) (2,2) (3,1).
    pub products: Vec<usize>,
    pub commutators: usize,
    pub anticommutators: usize,
}

pub fn invariant_profile(a: &Algebra) -> InvariantProfile {
    let n = a.dim();
    let pw = a.powers();
    let get = |i: usize| pw.get(i - 1).cloned().unwrap_or_else(|| pw.last().expect("nonempty").clone());
    let mut products = Vec::new();
    for (i, j) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)] {
        products.push(a.product_space(&get(i), &get(j)).expect("ambient").dim());
    }
    let mut comm = Subspace::zero(n);
    let mut anti = Subspace::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut c = vec![Scalar::zero(); n];
            let mut s = vec![Scalar::zero(); n];
            for (k, v) in a.basis_product(i, j) {
                c[*k] += v;
                s[*k] += v;
            }
            for (k, v) in a.basis_product(j, i) {
                c[*k] -= v;
                s[*k] += v;
            }
            comm.insert(&c).expect("length");
            anti.insert(&s).expect("length");
        }
    }
    InvariantProfile {
        powers: pw.iter().map(Subspace::dim).collect(),
        ann: a.annihilator().dim(),
        left_ann: a.left_annihilator().dim(),
        right_ann: a.right_annihilator().dim(),
        products,
        commutators: comm.dim(),
        anticommutators: anti.dim(),
    }
}

pub fn profiles_distinguish(p: &InvariantProfile, q: &InvariantProfile) -> bool {
    p != q
}

/// The first invariant on which two profiles disagree, as
/// `name: value vs value`.
pub fn profile_difference(p: &InvariantProfile, q: &InvariantProfile) -> Option<String> {
    let fields: [(&str, String, String); 7] = [
        ("power dimensions", format!("{:?}", p.powers), format!("{:?}", q.powers)),
        ("dim A^i A^j", format!("{:?}", p.products), format!("{:?}", q.products)),
        ("dim Ann", p.ann.to_string(), q.ann.to_string()),
        ("dim left Ann", p.left_ann.to_string(), q.left_ann.to_string()),
        ("dim right Ann", p.right_ann.to_string(), q.right_ann.to_string()),
        ("dim [A,A]", p.commutators.to_string(), q.commutators.to_string()),
        ("dim A∘A", p.anticommutators.to_string(), q.anticommutators.to_string()),
    ];
    fields
        .into_iter()
        .find(|(_, a, b)| a != b)
        .map(|(name, a, b)| format!("{name}: {a} vs {b}"))
}

/// Try each candidate image `c` of the generator of `a`: the map sending
/// `e_k = words[k](g)` to `words[k](c)` in `b` is accepted when it is an
/// invertible homomorphism. Word coefficients are evaluated at `a`'s
/// binding.
pub fn find_isomorphism(
    a: &Algebra,
    b: &Algebra,
    words: &[Word],
    candidates: &[Vector],
) -> Result<Option<LinearMap>> {
    if a.dim() != b.dim() {
        return Ok(None);
    }
    if words.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "generator words",
            expected: a.dim(),
            found: words.len(),
        });
    }
    for c in candidates {
        if c.len() != b.dim() {
            return Err(Error::DimensionMismatch {
                context: "candidate",
                expected: b.dim(),
                found: c.len(),
            });
        }
        let images = words
            .iter()
            .map(|w| w.eval(b, c, a.binding()))
            .collect::<Result<Vec<_>>>()?;
        let m = LinearMap::from_images(images)?;
        if m.is_invertible() && is_homomorphism(a, b, &m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// `e_1..e_n` followed by `extra` seeded random vectors.
pub fn default_candidates(n: usize, extra: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| crate::exactmath::unit_vec(n, i))
        .chain((0..extra).map(|_| random_vec(&mut rng, n, 4, 3)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::words::derive_words;
    use crate::cohomology::h2;
    use crate::exactmath::{int, unit_vec};

    fn t3_01() -> Algebra {
        Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))]).unwrap()
    }

    fn aut_t3_01(x: i64, y: i64, z: i64) -> LinearMap {
        LinearMap::new(
            Matrix::from_rows(vec![
                vec![int(x), int(0), int(0)],
                vec![int(y), int(x * x), int(0)],
                vec![int(z), int(x * y), int(x * x * x)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn reps3() -> Vec<Cocycle> {
        vec![
            Cocycle::delta(3, 0, 2),
            Cocycle::delta(3, 1, 0),
            Cocycle::from_triples(3, &[(1, 1, int(1)), (2, 0, int(-3))]).unwrap(),
        ]
    }

    #[test]
    fn homomorphisms_of_t3_01() {
        let a = t3_01();
        assert!(is_automorphism(&a, &LinearMap::identity(3)));
        assert!(is_automorphism(&a, &aut_t3_01(2, 0, 0)));
        assert!(is_automorphism(&a, &aut_t3_01(3, -1, 5)));
        let swap = LinearMap::from_images(vec![unit_vec(3, 1), unit_vec(3, 0), unit_vec(3, 2)]).unwrap();
        assert!(!is_homomorphism(&a, &a, &swap).unwrap());
        assert!(!is_automorphism(&a, &LinearMap::new(Matrix::zeros(3, 3)).unwrap()));
    }

    #[test]
    fn action_on_classes() {
        let a = t3_01();
        let cb = h2(&a, Some(&reps3())).unwrap();
        let m = aut_t3_01(1, 1, 0);
        let moved = act_on_cocycle(&m, &reps3()[2]).unwrap();
        assert_eq!(cb.class_coords(&moved).unwrap(), vec![int(0), int(-2), int(1)]);
        let m2 = aut_t3_01(2, 0, 0);
        assert_eq!(
            act_on_class(&a, &cb, &m2, &[int(1), int(0), int(0)]).unwrap(),
            vec![int(16), int(0), int(0)]
        );
        let fam = AutFamily::new(
            vec![
                vec![ParamExpr::var("x"), ParamExpr::zero(), ParamExpr::zero()],
                vec![ParamExpr::var("y"), ParamExpr::parse("x^2").unwrap(), ParamExpr::zero()],
                vec![ParamExpr::var("z"), ParamExpr::parse("x*y").unwrap(), ParamExpr::parse("x^3").unwrap()],
            ],
            ParamExpr::var("x"),
            &BTreeSet::new(),
        )
        .unwrap();
        let good: Vec<ParamExpr> = ["x^4*a1", "x^2*(x*a2 - 2*y*a3)", "x^4*a3"]
            .iter()
            .map(|s| ParamExpr::parse(s).unwrap())
            .collect();
        assert_eq!(verify_action_formula(&a, &cb, &fam, &good, 20, 1).unwrap(), None);
        let mut bad = good.clone();
        bad[1] = ParamExpr::parse("x^2*(x*a2 - 3*y*a3)").unwrap();
        assert!(verify_action_formula(&a, &cb, &fam, &bad, 20, 1).unwrap().is_some());
    }

    #[test]
    fn isomorphism_search() {
        let a = t3_01();
        let words = derive_words(&a, &unit_vec(3, 0)).unwrap();
        let cands = default_candidates(3, 5, 2);
        let m = find_isomorphism(&a, &a, &words, &cands).unwrap().unwrap();
        assert_eq!(m, LinearMap::identity(3));

        let t403 = Algebra::from_entries("T4_03", 4, &[(0, 0, 1, int(1)), (0, 1, 2, int(1)), (0, 2, 3, int(1))]).unwrap();
        let t404 = Algebra::from_entries(
            "T4_04",
            4,
            &[(0, 0, 1, int(1)), (0, 1, 2, int(1)), (0, 2, 3, int(1)), (1, 0, 3, int(1))],
        )
        .unwrap();
        let p = invariant_profile(&t403);
        let q = invariant_profile(&t404);
        assert!(profiles_distinguish(&p, &q));
        assert!(!profiles_distinguish(&p, &p));
        let w = derive_words(&t403, &unit_vec(4, 0)).unwrap();
        assert!(find_isomorphism(&t403, &t404, &w, &default_candidates(4, 50, 7)).unwrap().is_none());
    }
}
