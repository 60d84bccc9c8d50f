//! Central extensions `A_θ = A ⊕ V` and the conditions under which they
//! are non-split.

use num_traits::Zero;

use crate::algebra::Algebra;
use crate::cohomology::{cocycle_witness, Cocycle, CohomologyBasis};
use crate::error::{Error, Result};
use crate::exactmath::{Matrix, Scalar, Subspace, Vector};

/// Base algebra together with `s` scalar cocycles; the extension has
/// basis `e_1..e_n` followed by one new vector per cocycle.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub base: Algebra,
    pub cocycles: Vec<Cocycle>,
    pub labels: Option<Vec<String>>,
}

impl ExtensionSpec {
    pub fn new(base: Algebra, cocycles: Vec<Cocycle>) -> Self {
        ExtensionSpec {
            base,
            cocycles,
            labels: None,
        }
    }

    pub fn extend(&self) -> Result<Algebra> {
        extend(&self.base, &self.cocycles)
    }
}

fn check_shapes(base: &Algebra, cocycles: &[Cocycle]) -> Result<()> {
    if cocycles.is_empty() {
        return Err(Error::Invalid("an extension needs at least one cocycle".into()));
    }
    for th in cocycles {
        if th.dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                context: "cocycle",
                expected: base.dim(),
                found: th.dim(),
            });
        }
    }
    Ok(())
}

/// Extension product without the cocycle check.
pub fn extend_unchecked(base: &Algebra, cocycles: &[Cocycle]) -> Result<Algebra> {
    check_shapes(base, cocycles)?;
    let n = base.dim();
    let m = n + cocycles.len();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in base.basis_product(i, j) {
                entries.push((i, j, *k, c.clone()));
            }
            for (s, th) in cocycles.iter().enumerate() {
                let c = th.get(i, j);
                if !c.is_zero() {
                    entries.push((i, j, n + s, c.clone()));
                }
            }
        }
    }
    let name = format!("{}_ext", base.name());
    Ok(Algebra::from_entries(&name, m, &entries)?.with_binding(base.binding().clone()))
}

/// `A_θ`; each cocycle must satisfy the cocycle identity.
pub fn extend(base: &Algebra, cocycles: &[Cocycle]) -> Result<Algebra> {
    check_shapes(base, cocycles)?;
    for th in cocycles {
        if let Some((q, d)) = cocycle_witness(base, th)? {
            return Err(Error::NotCocycle(format!(
                "{th} fails at (e{}, e{}, e{}, e{}) with defect {d}",
                q[0] + 1,
                q[1] + 1,
                q[2] + 1,
                q[3] + 1
            )));
        }
    }
    extend_unchecked(base, cocycles)
}

/// `∩ Ann(θ_i) ∩ Ann(A)`.
pub fn radical(base: &Algebra, cocycles: &[Cocycle]) -> Result<Subspace> {
    let mut acc = base.annihilator();
    for th in cocycles {
        acc = acc.intersect(&th.annihilator())?;
    }
    Ok(acc)
}

/// Why a family of cocycles does or does not span an element of `T_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Valid,
    DependentClasses,
    /// Nonzero common annihilator; carries its dimension.
    CommonAnnihilator(usize),
}

pub fn ts_status(base: &Algebra, cb: &CohomologyBasis, cocycles: &[Cocycle]) -> Result<TsStatus> {
    check_shapes(base, cocycles)?;
    let mut coords: Vec<Vector> = Vec::new();
    for th in cocycles {
        coords.push(cb.class_coords(th)?);
    }
    let span = Subspace::span(cb.dim(), &coords)?;
    if span.dim() < cocycles.len() {
        return Ok(TsStatus::DependentClasses);
    }
    let r = radical(base, cocycles)?;
    if !r.is_zero() {
        return Ok(TsStatus::CommonAnnihilator(r.dim()));
    }
    Ok(TsStatus::Valid)
}

/// Classes independent in `H²` and `∩ Ann(θ_i) ∩ Ann(A) = 0`.
pub fn check_ts(base: &Algebra, cb: &CohomologyBasis, cocycles: &[Cocycle]) -> Result<bool> {
    Ok(ts_status(base, cb, cocycles)? == TsStatus::Valid)
}

/// Compare `Ann(A_θ)` with `(Ann θ ∩ Ann A) ⊕ V` inside the extension.
pub fn verify_ann_lemma(base: &Algebra, cocycles: &[Cocycle]) -> Result<bool> {
    let ext = extend(base, cocycles)?;
    let n = base.dim();
    let m = ext.dim();
    let mut rhs = Subspace::zero(m);
    for v in radical(base, cocycles)?.basis() {
        let mut w = v.clone();
        w.resize(m, Scalar::zero());
        rhs.insert(&w)?;
    }
    for k in n..m {
        rhs.insert(&crate::exactmath::unit_vec(m, k))?;
    }
    Ok(ext.annihilator() == rhs)
}

/// Map `A_θ -> A_{θ + δf}` sending `e_i` to `e_i + sum_k f_k(e_i) e_{n+k}`
/// and fixing the new vectors; `fs[k]` lists the values of `f_k` on the
/// base basis.
pub fn cohomologous_map(n: usize, fs: &[Vector]) -> Result<Matrix> {
    let m = n + fs.len();
    let mut mat = Matrix::identity(m);
    for (k, f) in fs.iter().enumerate() {
        if f.len() != n {
            return Err(Error::DimensionMismatch {
                context: "functional",
                expected: n,
                found: f.len(),
            });
        }
        for (i, v) in f.iter().enumerate() {
            mat[(n + k, i)] = v.clone();
        }
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h2;
    use crate::exactmath::int;
    use crate::identities::is_terminal;

    fn t3_01() -> Algebra {
        Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))]).unwrap()
    }

    fn d(i: usize, j: usize) -> Cocycle {
        Cocycle::delta(3, i - 1, j - 1)
    }

    #[test]
    fn extensions_of_t3_01() {
        let a = t3_01();
        let t403 = extend(&a, &[d(1, 3)]).unwrap();
        let expected = Algebra::from_entries(
            "T4_03",
            4,
            &[(0, 0, 1, int(1)), (0, 1, 2, int(1)), (0, 2, 3, int(1))],
        )
        .unwrap();
        assert_eq!(t403, expected);
        assert!(is_terminal(&t403).holds);

        let t501 = extend(&a, &[d(1, 3), d(2, 1)]).unwrap();
        assert_eq!(t501.coeff(1, 0, 4), &int(1));
        assert_eq!(t501.coeff(0, 2, 3), &int(1));

        assert!(matches!(extend(&a, &[d(3, 1)]), Err(Error::NotCocycle(_))));
        let split = extend(&a, &[Cocycle::zero(3)]).unwrap();
        assert!(split.annihilator().contains(&crate::exactmath::unit_vec(4, 3)).unwrap());
    }

    #[test]
    fn ts_condition() {
        let a = t3_01();
        let cb = h2(&a, None).unwrap();
        assert!(check_ts(&a, &cb, &[d(1, 3), d(2, 1)]).unwrap());
        assert!(!check_ts(&a, &cb, &[d(1, 1)]).unwrap());
        assert!(!check_ts(&a, &cb, &[d(1, 3), d(1, 3)]).unwrap());
        assert!(check_ts(&a, &cb, &[d(3, 1)]).is_err());
    }

    #[test]
    fn annihilator_lemma() {
        let a = t3_01();
        assert!(verify_ann_lemma(&a, &[Cocycle::zero(3)]).unwrap());
        assert!(verify_ann_lemma(&a, &[d(1, 3)]).unwrap());
        let ext = extend(&a, &[d(1, 3)]).unwrap();
        assert_eq!(ext.annihilator(), Subspace::span(4, &[crate::exactmath::unit_vec(4, 3)]).unwrap());
    }
}
