//! Z², B² and H² of the 3-dimensional terminal algebras.

use termalg::catalog::Catalog;
use termalg::cohomology::h2;
use termalg::exactmath::{frac, int, Binding};

fn main() -> termalg::Result<()> {
    let cat = Catalog::shipped();
    let t301 = cat.get("T3_01")?.template.specialize(&Binding::new())?;
    let cb = h2(&t301, None)?;
    println!("T3_01: Z2={} B2={} H2={}", cb.z2().dim(), cb.b2().dim(), cb.dim());
    for r in cb.reps() {
        println!("  {}", r.to_triples_string());
    }

    let t302 = &cat.get("T3_02")?.template;
    for l in [int(1), int(2), int(-1), frac(1, 2), int(7), int(0)] {
        let mut b = Binding::new();
        b.insert("lambda".into(), l.clone());
        let cb = h2(&t302.specialize(&b)?, None)?;
        println!("T3_02({l}): Z2={} B2={} H2={}", cb.z2().dim(), cb.b2().dim(), cb.dim());
    }
    Ok(())
}
