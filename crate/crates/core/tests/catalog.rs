mod common;

use std::collections::BTreeMap;

use termalg::catalog::{parse_catalog, verify_entry, Catalog, Status};
use termalg::exactmath::{int, unit_vec, Binding, Subspace};
use termalg::Algebra;

#[test]
fn shipped_catalog_round_trips() {
    let cat = Catalog::shipped();
    let again = parse_catalog(&cat.to_string()).unwrap();
    assert_eq!(cat, again);
    assert_eq!(again.to_string(), cat.to_string());
}

#[test]
fn entry_counts() {
    let counts = Catalog::shipped().count_by_dim();
    assert_eq!(counts, BTreeMap::from([(2, 1), (3, 2), (4, 10), (5, 79)]));
}

fn family_sizes(cat: &Catalog, n: usize) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for e in cat.entries_of_dim(n) {
        *m.entry(e.template.params.len()).or_insert(0) += 1;
    }
    m
}

#[test]
fn family_breakdown() {
    let cat = Catalog::shipped();
    assert_eq!(family_sizes(&cat, 4), BTreeMap::from([(0, 5), (1, 4), (2, 1)]));
    assert_eq!(family_sizes(&cat, 5), BTreeMap::from([(0, 22), (1, 38), (2, 18), (3, 1)]));
}

#[test]
fn every_entry_is_generated_by_e1() {
    let cat = Catalog::shipped();
    for e in &cat.entries {
        assert_eq!(e.generator, 0, "{}", e.name());
        assert_eq!(e.words.len(), e.dim(), "{}", e.name());
    }
}

#[test]
fn every_derivation_resolves() {
    let cat = Catalog::shipped();
    for d in &cat.derivations {
        assert!(cat.entry(&d.base).is_some(), "{}", d.label);
        for o in &d.orbits {
            let r = cat.get(&o.result).unwrap();
            assert_eq!(r.dim(), cat.get(&d.base).unwrap().dim() + d.s, "{} -> {}", d.label, o.result);
        }
    }
}

#[test]
fn corrupted_entry_fails_with_witness() {
    let text = std::fs::read_to_string(common::fixture("corrupted.alg")).unwrap();
    let cat = parse_catalog(&text).unwrap();
    let recs = verify_entry(&cat.entries[0], 1, None);
    let bad = recs.iter().find(|r| r.check == "terminal").unwrap();
    assert_eq!(bad.status, Status::Fail);
    assert!(bad.witness.as_deref().unwrap().starts_with("(e"));
}

#[test]
fn annihilators() {
    let cat = Catalog::shipped();
    let t301 = cat.get("T3_01").unwrap().template.specialize(&Binding::new()).unwrap();
    assert_eq!(t301.annihilator(), Subspace::span(3, &[unit_vec(3, 2)]).unwrap());
    let b = common::bind(&[("alpha", int(1))]);
    let t502 = cat.get("T5_02").unwrap().template.specialize(&b).unwrap();
    assert_eq!(t502.annihilator(), Subspace::span(5, &[unit_vec(5, 3), unit_vec(5, 4)]).unwrap());
}

#[test]
fn one_generated_convention() {
    let t2 = Algebra::from_entries("T2_01", 2, &[(0, 0, 1, int(1))]).unwrap();
    let sum = t2.direct_sum(&t2);
    assert!(sum.is_nilpotent());
    assert!(!sum.is_one_generated().unwrap());
    assert!(sum.find_generator(1).unwrap().is_none());
    assert!(!Algebra::zero(2).is_one_generated().unwrap());
    let cat = Catalog::shipped();
    for e in &cat.entries {
        let a = common::random_specialization(e, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2));
        assert_eq!(a.is_one_generated().unwrap(), a.find_generator(5).unwrap().is_some(), "{}", e.name());
    }
}
