//! Build 4-dimensional algebras as central extensions of T3_01 and check
//! the T_s condition.

use termalg::catalog::Catalog;
use termalg::cohomology::{h2, Cocycle};
use termalg::exactmath::{int, Binding};
use termalg::extensions::{extend, ts_status, verify_ann_lemma};
use termalg::identities::is_terminal;

fn main() -> termalg::Result<()> {
    let cat = Catalog::shipped();
    let a = cat.get("T3_01")?.template.specialize(&Binding::new())?;
    let cb = h2(&a, None)?;

    let cases = [
        ("Delta13", Cocycle::from_triples(3, &[(0, 2, int(1))])?),
        ("Delta13 + Delta21", Cocycle::from_triples(3, &[(0, 2, int(1)), (1, 0, int(1))])?),
        ("Delta21", Cocycle::from_triples(3, &[(1, 0, int(1))])?),
        ("Delta22 - 3 Delta31", Cocycle::from_triples(3, &[(1, 1, int(1)), (2, 0, int(-3))])?),
    ];
    for (name, th) in cases {
        let ext = extend(&a, std::slice::from_ref(&th))?;
        println!("T3_01 + {name}: T_s {:?}, terminal {}, Ann lemma {}", ts_status(&a, &cb, std::slice::from_ref(&th))?, is_terminal(&ext).holds, verify_ann_lemma(&a, &[th])?);
        for line in ext.table_lines() {
            println!("    {line}");
        }
    }

    let bad = Cocycle::from_triples(3, &[(1, 1, int(1))])?;
    match extend(&a, &[bad]) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("Delta22 alone: {e}"),
    }
    Ok(())
}
