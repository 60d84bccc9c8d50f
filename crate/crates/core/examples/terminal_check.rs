//! The terminal identity in both formulations, with a failing witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use termalg::catalog::Catalog;
use termalg::exactmath::int;
use termalg::identities::{is_terminal, is_terminal_direct};
use termalg::Algebra;

fn report(a: &Algebra) {
    let p = is_terminal(a);
    let d = is_terminal_direct(a);
    println!(
        "{}: P* form {}, bracket expansion {}, witness {}",
        a.name(),
        p.holds,
        d.holds,
        p.witness_label().unwrap_or_else(|| "-".into())
    );
}

fn main() -> termalg::Result<()> {
    let t3 = Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))])?;
    report(&t3);
    println!("  nilpotent {}, one-generated {}", t3.is_nilpotent(), t3.is_one_generated()?);

    let cat = Catalog::shipped();
    let t402 = cat.get("T4_02")?;
    let mut b = termalg::exactmath::Binding::new();
    b.insert("alpha".into(), int(1));
    report(&t402.template.specialize(&b)?);

    let broken = Algebra::from_entries(
        "T4_02 with e3 e1 = -2 e4",
        4,
        &[
            (0, 0, 1, int(1)),
            (0, 1, 2, int(1)),
            (0, 2, 3, int(1)),
            (1, 1, 3, int(1)),
            (2, 0, 3, int(-2)),
        ],
    )?;
    report(&broken);

    let dense = Algebra::random(3, &mut ChaCha8Rng::seed_from_u64(3));
    report(&dense);
    Ok(())
}
