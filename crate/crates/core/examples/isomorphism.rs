//! Invariant profiles and isomorphism certificates between catalog entries.

use termalg::catalog::Catalog;
use termalg::exactmath::{frac, int, Binding};
use termalg::morphisms::{default_candidates, find_isomorphism, invariant_profile, profile_difference};

fn bind(pairs: &[(&str, termalg::exactmath::Scalar)]) -> Binding {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn main() -> termalg::Result<()> {
    let cat = Catalog::shipped();
    let t403 = cat.get("T4_03")?.template.specialize(&Binding::new())?;
    let t404 = cat.get("T4_04")?.template.specialize(&Binding::new())?;
    let (p, q) = (invariant_profile(&t403), invariant_profile(&t404));
    println!("T4_03 {p:?}");
    println!("T4_04 {q:?}");
    println!("distinguished by {}", profile_difference(&p, &q).unwrap_or_default());

    // T5_73 at beta = 0 lands in the T5_75 family.
    let e73 = cat.get("T5_73")?;
    let a = e73.template.specialize(&bind(&[("alpha", int(3)), ("beta", int(0))]))?;
    let b = cat.get("T5_75")?.template.specialize(&bind(&[("alpha", int(3))]))?;
    let mut cands = default_candidates(5, 0, 0);
    for x in [int(1), frac(3, 2), int(2), int(-1)] {
        for y in [int(0), int(1), frac(27, 8)] {
            cands.push(vec![x.clone(), int(0), y.clone(), int(0), int(0)]);
        }
    }
    match find_isomorphism(&a, &b, &e73.words, &cands)? {
        Some(m) => println!("T5_73(3, 0) ≅ T5_75(3) via\n{}", m.matrix()),
        None => println!("no certificate among {} candidates", cands.len()),
    }
    Ok(())
}
