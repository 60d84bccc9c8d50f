//! The action of the automorphism group of T3_01 on H², compared with
//! the closed-form action recorded in the catalog.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use termalg::catalog::Catalog;
use termalg::cohomology::{h2, Cocycle};
use termalg::exactmath::{fmt_vec, int, Binding};
use termalg::morphisms::{act_on_class, verify_action_formula, AutFamily};

fn main() -> termalg::Result<()> {
    let cat = Catalog::shipped();
    let d = cat.derivations.iter().find(|d| d.label == "T3_01/s1").expect("block");
    let a = cat.get("T3_01")?.template.specialize(&Binding::new())?;
    let nablas = vec![
        Cocycle::from_triples(3, &[(0, 2, int(1))])?,
        Cocycle::from_triples(3, &[(1, 0, int(1))])?,
        Cocycle::from_triples(3, &[(1, 1, int(1)), (2, 0, int(-3))])?,
    ];
    let cb = h2(&a, Some(&nablas))?;
    let spec = d.aut.as_ref().expect("automorphisms");
    let fam = AutFamily::new(spec.rows.clone(), spec.nondegenerate.clone(), &Default::default())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (b, phi) = fam.random_binding(&Binding::new(), &mut rng)?;
    let shown: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("automorphism at {}:\n{}", shown.join(", "), phi.matrix());
    let class = vec![int(1), int(1), int(1)];
    println!("class (1, 1, 1) moves to {}", fmt_vec(&act_on_class(&a, &cb, &phi, &class)?));

    for (i, f) in d.actions.iter().enumerate() {
        println!("action {}: {f}", i + 1);
    }
    match verify_action_formula(&a, &cb, &fam, &d.actions, 20, 11)? {
        None => println!("formulas agree at 20 random automorphisms"),
        Some(m) => println!("mismatch: {m:?}"),
    }
    Ok(())
}
