//! Replay the shipped catalog with a cap on bindings per check.

use termalg::catalog::{verify_all, Catalog, STATUS_NAMES};

fn main() {
    let cat = Catalog::shipped();
    println!("entries by dimension: {:?}", cat.count_by_dim());
    println!("derivation blocks: {}", cat.derivations.len());
    let report = verify_all(&cat, 1, Some(2));
    for (name, s) in STATUS_NAMES {
        println!("{name}: {}", report.count(s));
    }
    for r in report.failures() {
        println!("FAIL {} {} [{}]: {:?}", r.check, r.entry, r.binding, r.witness);
    }
    println!("passed: {}", report.passed());
}
