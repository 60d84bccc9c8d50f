#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use termalg::catalog::{Catalog, CatalogEntry, DerivationEntry};
use termalg::cohomology::{h2, Cocycle, CohomologyBasis};
use termalg::exactmath::{random_scalar, Binding, Matrix, Scalar, Subspace};
use termalg::extensions::extend_unchecked;
use termalg::identities::is_terminal_direct;
use termalg::morphisms::AutFamily;
use termalg::Algebra;

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

pub fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

pub fn bind(pairs: &[(&str, Scalar)]) -> Binding {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// A derivation block evaluated at one binding of its parameters.
pub struct Frame {
    pub full: Binding,
    pub base: Algebra,
    pub cb: CohomologyBasis,
    pub fam: Option<AutFamily>,
}

fn nonzero(e: &termalg::exactmath::ParamExpr, b: &Binding) -> bool {
    match e.eval(b) {
        Ok(v) => !v.is_zero(),
        Err(_) => false,
    }
}

/// Random binding of the block parameters at which the base specializes,
/// the exclusions hold and the nablas form an H² basis.
pub fn random_frame<R: Rng>(d: &DerivationEntry, cat: &Catalog, rng: &mut R) -> Option<Frame> {
    let base = cat.get(&d.base).ok()?;
    for _ in 0..200 {
        let mut full: Binding = d.params.iter().map(|p| (p.clone(), random_scalar(rng, 5, 3))).collect();
        let mut ok = true;
        for (k, e) in &d.base_binding {
            match e.eval(&full) {
                Ok(v) => {
                    full.insert(k.clone(), v);
                }
                Err(_) => ok = false,
            }
        }
        if !ok || !d.exclusions.iter().all(|e| nonzero(e, &full)) {
            continue;
        }
        let Ok(a) = base.template.specialize(&full) else { continue };
        let n = a.dim();
        let nablas: Option<Vec<Cocycle>> = d
            .nablas
            .iter()
            .map(|ts| {
                let t: Option<Vec<(usize, usize, Scalar)>> =
                    ts.iter().map(|(i, j, c)| Some((*i, *j, c.eval(&full).ok()?))).collect();
                Cocycle::from_triples(n, &t?).ok()
            })
            .collect();
        let Some(nablas) = nablas else { continue };
        let Ok(cb) = h2(&a, Some(&nablas)) else { continue };
        let fam = d.aut.as_ref().map(|s| {
            let mut scope: BTreeSet<String> = d.params.iter().cloned().collect();
            scope.extend(base.template.params.iter().cloned());
            AutFamily::new(s.rows.clone(), s.nondegenerate.clone(), &scope).expect("aut family")
        });
        return Some(Frame { full, base: a, cb, fam });
    }
    None
}

/// Random valid specialization of a catalog entry.
pub fn random_specialization<R: Rng>(e: &CatalogEntry, rng: &mut R) -> Algebra {
    loop {
        let b: Binding = e.template.params.iter().map(|p| (p.clone(), random_scalar(rng, 5, 3))).collect();
        if let Ok(a) = e.template.specialize(&b) {
            return a;
        }
    }
}

pub fn random_element<R: Rng>(s: &Subspace, rng: &mut R) -> Vec<Scalar> {
    let mut v = vec![Scalar::from_integer(0.into()); s.ambient()];
    for b in s.basis() {
        let c = random_scalar(rng, 4, 3);
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    v
}

pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| random_scalar(rng, 3, 2)).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// dim Z² recomputed from the lemma that `A_θ` is terminal exactly when
/// `θ` is a cocycle: the defect of `A ⊕_θ ⟨v⟩` along `v` is linear in
/// `θ`, so dim Z² = n² - rank of the defects of the n² elementary forms.
pub fn z2_dim_oracle(a: &Algebra) -> usize {
    let n = a.dim();
    let m = n + 1;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ext = extend_unchecked(a, &[Cocycle::delta(n, i, j)]).expect("shape");
            let basis: Vec<Vec<Scalar>> = (0..m).map(|k| termalg::exactmath::unit_vec(m, k)).collect();
            let mut col = Vec::new();
            for q in 0..m.pow(4) {
                let idx = [q % m, (q / m) % m, (q / (m * m)) % m, q / (m * m * m)];
                let d = termalg::identities::direct_defect(
                    &ext,
                    [&basis[idx[0]], &basis[idx[1]], &basis[idx[2]], &basis[idx[3]]],
                )
                .expect("dims");
                col.push(d[n].clone());
            }
            rows.push(col);
        }
    }
    n * n - termalg::exactmath::fraction_free_rank(&rows)
}

/// dim B² = dim A², since `δf = 0` exactly when `f` vanishes on `A²`.
pub fn b2_dim_oracle(a: &Algebra) -> usize {
    a.square().dim()
}

pub fn direct_holds(a: &Algebra) -> bool {
    is_terminal_direct(a).holds
}
