mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use termalg::catalog::{sample_bindings, Catalog};
use termalg::cohomology::{b2_basis, coboundary, h2, z2_basis, Cocycle};
use termalg::exactmath::{random_scalar, random_vec, Binding, Matrix, ParamExpr, Subspace};
use termalg::extensions::{extend, verify_ann_lemma};
use termalg::identities::{is_terminal, is_terminal_direct, jordan_holds};
use termalg::morphisms::{act_on_cocycle, invariant_profile, is_homomorphism};
use termalg::{Algebra, LinearMap};

use common::{random_element, random_invertible, random_specialization};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|_| random_vec(r, cols, 3, 2)).collect()).unwrap()
}

/// Catalog algebra of dimension 2 to 4 at a random valid binding.
fn catalog_algebra(r: &mut ChaCha8Rng) -> Algebra {
    let cat = Catalog::shipped();
    let small: Vec<_> = cat.entries.iter().filter(|e| e.dim() <= 4).collect();
    random_specialization(small[r.gen_range(0..small.len())], r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..5) {
        let m = random_matrix(&mut rng(seed), n, n);
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(n));
            prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(n));
            prop_assert!(!m.det().unwrap().is_zero());
        } else {
            prop_assert!(m.det().unwrap().is_zero());
        }
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6) {
        let m = random_matrix(&mut rng(seed), rows, cols);
        prop_assert_eq!(m.rank() + termalg::exactmath::kernel(&m).dim(), cols);
    }

    #[test]
    fn subspace_dimension_formula(seed in any::<u64>(), n in 2usize..6, k in 0usize..4, l in 0usize..4) {
        let mut r = rng(seed);
        let u = Subspace::span(n, &(0..k).map(|_| random_vec(&mut r, n, 2, 1)).collect::<Vec<_>>()).unwrap();
        let w = Subspace::span(n, &(0..l).map(|_| random_vec(&mut r, n, 2, 1)).collect::<Vec<_>>()).unwrap();
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && u.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn expression_display_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = ["lambda", "alpha"];
        let mut e = ParamExpr::num(random_scalar(&mut r, 5, 3));
        for _ in 0..4 {
            let t = ParamExpr::var(vars[r.gen_range(0..2)]).times(ParamExpr::num(random_scalar(&mut r, 5, 3)));
            e = if r.gen() { e.plus(t) } else { e.times(t.plus(ParamExpr::one())) };
        }
        let back = ParamExpr::parse(&e.to_string()).unwrap();
        prop_assert!(back.equivalent(&e).unwrap());
        let b: Binding = vars.iter().map(|v| (v.to_string(), random_scalar(&mut r, 5, 3))).collect();
        prop_assert_eq!(back.eval(&b).unwrap(), e.eval(&b).unwrap());
    }

    #[test]
    fn formulations_agree_on_random_algebras(seed in any::<u64>(), n in 2usize..5, nil in any::<bool>()) {
        let mut r = rng(seed);
        let a = if nil { Algebra::random_nilpotent(n, &mut r) } else { Algebra::random(n, &mut r) };
        prop_assert_eq!(is_terminal(&a).holds, is_terminal_direct(&a).holds);
    }

    #[test]
    fn terminality_survives_change_of_basis(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = catalog_algebra(&mut r);
        let m = random_invertible(a.dim(), &mut r);
        let b = a.change_basis(&m).unwrap();
        prop_assert!(is_terminal(&b).holds);
        prop_assert!(is_homomorphism(&b, &a, &LinearMap::new(m).unwrap()).unwrap());
        prop_assert_eq!(invariant_profile(&a), invariant_profile(&b));
    }

    #[test]
    fn commutative_terminal_is_jordan(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let a = Algebra::random_nilpotent(n, &mut r);
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in a.basis_product(i.min(j), i.max(j)) {
                    entries.push((i, j, *k, c.clone()));
                }
            }
        }
        let c = Algebra::from_entries("sym", n, &entries).unwrap();
        prop_assert!(c.is_commutative());
        if is_terminal(&c).holds {
            prop_assert!(jordan_holds(&c));
        }
    }

    #[test]
    fn coboundaries_are_cocycles(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = catalog_algebra(&mut r);
        let z = z2_basis(&a);
        prop_assert!(b2_basis(&a).is_subspace_of(&z).unwrap());
        let f = random_vec(&mut r, a.dim(), 4, 3);
        prop_assert!(z.contains(&coboundary(&a, &f).unwrap().flatten()).unwrap());
    }

    #[test]
    fn z2_matches_extension_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cat = Catalog::shipped();
        let small: Vec<_> = cat.entries.iter().filter(|e| e.dim() <= 3).collect();
        let a = random_specialization(small[r.gen_range(0..small.len())], &mut r);
        let cb = h2(&a, None).unwrap();
        prop_assert_eq!(cb.z2().dim(), common::z2_dim_oracle(&a));
        prop_assert_eq!(cb.b2().dim(), common::b2_dim_oracle(&a));
    }

    #[test]
    fn extensions_by_cocycles_are_terminal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = catalog_algebra(&mut r);
        let cb = h2(&a, None).unwrap();
        let th = Cocycle::from_flat(a.dim(), &random_element(cb.z2(), &mut r)).unwrap();
        let ext = extend(&a, std::slice::from_ref(&th)).unwrap();
        prop_assert!(is_terminal(&ext).holds);
        prop_assert!(ext.is_nilpotent());
        prop_assert!(verify_ann_lemma(&a, &[th]).unwrap());
    }

    #[test]
    fn class_coordinates_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = catalog_algebra(&mut r);
        let cb = h2(&a, None).unwrap();
        let coords = random_vec(&mut r, cb.dim(), 4, 3);
        let th = cb.combine(&coords).unwrap();
        let shifted = th.add(&coboundary(&a, &random_vec(&mut r, a.dim(), 4, 3)).unwrap()).unwrap();
        prop_assert_eq!(cb.class_coords(&shifted).unwrap(), coords);
    }

    #[test]
    fn action_composes(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let th = Cocycle::from_matrix(random_matrix(&mut r, n, n)).unwrap();
        let p = random_matrix(&mut r, n, n);
        let q = random_matrix(&mut r, n, n);
        let lp = LinearMap::new(p.clone()).unwrap();
        let lq = LinearMap::new(q.clone()).unwrap();
        let lqp = LinearMap::new(q.mul(&p).unwrap()).unwrap();
        let twice = act_on_cocycle(&lp, &act_on_cocycle(&lq, &th).unwrap()).unwrap();
        prop_assert_eq!(twice, act_on_cocycle(&lqp, &th).unwrap());
    }

    #[test]
    fn sampling_is_deterministic_and_filtered(seed in any::<u64>(), k in 1usize..4) {
        let params: Vec<String> = ["alpha", "beta", "gamma"][..k].iter().map(|s| s.to_string()).collect();
        let valid = |b: &Binding| !b["alpha"].is_zero();
        let a = sample_bindings(&params, seed, "t", valid);
        let b = sample_bindings(&params, seed, "t", valid);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(valid));
        for p in &params {
            let distinct: std::collections::BTreeSet<_> = a.iter().map(|b| &b[p]).collect();
            prop_assert!(distinct.len() >= 5);
        }
    }
}

#[test]
fn t4_02_at_one_is_terminal() {
    let cat = Catalog::shipped();
    let a = cat.get("T4_02").unwrap().template.specialize(&common::bind(&[("alpha", termalg::exactmath::int(1))])).unwrap();
    assert!(is_terminal(&a).holds);
    assert!(is_terminal_direct(&a).holds);
}

#[test]
fn seeded_dense_algebra_is_not_terminal() {
    let a = Algebra::random(3, &mut rng(3));
    let rep = is_terminal(&a);
    assert!(!rep.holds);
    assert!(rep.witness_label().is_some());
    assert!(!is_terminal_direct(&a).holds);
}
