//! Rational matrices, subspaces and parametric coefficients.

use termalg::exactmath::{fmt_vec, frac, int, kernel, Binding, Matrix, ParamExpr, Subspace};

fn main() -> termalg::Result<()> {
    let m = Matrix::from_rows(vec![
        vec![int(2), int(1), int(0)],
        vec![int(1), int(3), int(1)],
        vec![int(0), int(1), frac(1, 2)],
    ])?;
    println!("det = {}", m.det()?);
    let inv = m.inverse().expect("invertible");
    println!("inverse:\n{inv}");
    println!("m * inverse == 1: {}", m.mul(&inv)? == Matrix::identity(3));

    let singular = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]])?;
    println!("kernel of [[1,2],[2,4]]: {}", fmt_vec(&kernel(&singular).basis()[0]));

    let u = Subspace::span(3, &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]])?;
    let w = Subspace::span(3, &[vec![int(1), int(1), int(1)], vec![int(0), int(1), int(0)]])?;
    println!("dim U ∩ W = {}, dim U + W = {}", u.intersect(&w)?.dim(), u.sum(&w)?.dim());

    let e = ParamExpr::parse("(2*lambda^2 + 5*lambda - 1)/6")?;
    let mut b = Binding::new();
    for l in [int(0), int(1), frac(-1, 2), int(7)] {
        b.insert("lambda".into(), l.clone());
        println!("{e} at lambda = {l}: {}", e.eval(&b)?);
    }
    let f = ParamExpr::parse("(2*lambda - 1)*(lambda + 3)/6 + 1/3")?;
    println!("{f} == {e}: {}", f.equivalent(&e)?);
    Ok(())
}
