//! The terminal identity, in two independent formulations.
//!
//! `conservative_defect` evaluates the degree-4 identity with the second
//! multiplication fixed to `P*(x, y) = 2/3 xy + 1/3 yx`; `direct_defect`
//! expands `[[[P, a], P], P]` through the operator brackets.

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactmath::{is_zero_vec, unit_vec, Scalar, Vector};

/// Outcome of a basis scan: `witness` is the first failing quadruple
/// (0-based indices) together with the defect vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub holds: bool,
    pub witness: Option<([usize; 4], Vector)>,
}

impl DefectReport {
    fn from_witness(witness: Option<([usize; 4], Vector)>) -> Self {
        DefectReport {
            holds: witness.is_none(),
            witness,
        }
    }

    /// `(e1, e2, e1, e3)` style rendering of the witness.
    pub fn witness_label(&self) -> Option<String> {
        self.witness.as_ref().map(|(q, _)| {
            format!("(e{}, e{}, e{}, e{})", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)
        })
    }
}

pub fn pstar(a: &Algebra) -> Algebra {
    a.pstar()
}

fn sub_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (x, y) in acc.iter_mut().zip(v) {
        if !y.is_zero() {
            *x -= y;
        }
    }
}

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (x, y) in acc.iter_mut().zip(v) {
        if !y.is_zero() {
            *x += y;
        }
    }
}

fn check_dims(a: &Algebra, ps: &Algebra, vs: &[&[Scalar]]) -> Result<()> {
    if ps.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "second multiplication",
            expected: a.dim(),
            found: ps.dim(),
        });
    }
    for v in vs {
        if v.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "identity argument",
                expected: a.dim(),
                found: v.len(),
            });
        }
    }
    Ok(())
}

/// LHS minus RHS of
/// `b(a(xy)-(ax)y-x(ay)) - a((bx)y) + (a(bx))y + (bx)(ay) - a(x(by)) + (ax)(by) + x(a(by))
///  = -P*(a,b)(xy) + (P*(a,b)x)y + x(P*(a,b)y)`.
pub fn conservative_defect(
    alg: &Algebra,
    ps: &Algebra,
    q: [&[Scalar]; 4],
) -> Result<Vector> {
    check_dims(alg, ps, &q)?;
    Ok(conservative_raw(alg, ps, q))
}

fn conservative_raw(alg: &Algebra, ps: &Algebra, [a, b, x, y]: [&[Scalar]; 4]) -> Vector {
    let m = |u: &[Scalar], v: &[Scalar]| alg.mul(u, v);
    let xy = m(x, y);
    let ax = m(a, x);
    let ay = m(a, y);
    let bx = m(b, x);
    let by = m(b, y);

    let mut inner = m(a, &xy);
    sub_into(&mut inner, &m(&ax, y));
    sub_into(&mut inner, &m(x, &ay));

    let mut d = m(b, &inner);
    sub_into(&mut d, &m(a, &m(&bx, y)));
    add_into(&mut d, &m(&m(a, &bx), y));
    add_into(&mut d, &m(&bx, &ay));
    sub_into(&mut d, &m(a, &m(x, &by)));
    add_into(&mut d, &m(&ax, &by));
    add_into(&mut d, &m(x, &m(a, &by)));

    let p = ps.mul(a, b);
    add_into(&mut d, &m(&p, &xy));
    sub_into(&mut d, &m(&m(&p, x), y));
    sub_into(&mut d, &m(x, &m(&p, y)));
    d
}

/// `[B1, P](x, y, z)` with `B1(x, y) = a(xy) - (ax)y - x(ay)` and
/// `[B, C](x,y,z) = B(C(x,y),z) + B(x,C(y,z)) + B(y,C(x,z))
///                  - C(B(x,y),z) - C(x,B(y,z)) - C(y,B(x,z))`.
pub fn direct_defect(alg: &Algebra, q: [&[Scalar]; 4]) -> Result<Vector> {
    check_dims(alg, alg, &q)?;
    Ok(direct_raw(alg, q))
}

fn direct_raw(alg: &Algebra, [a, x, y, z]: [&[Scalar]; 4]) -> Vector {
    let m = |u: &[Scalar], v: &[Scalar]| alg.mul(u, v);
    let b1 = |u: &[Scalar], v: &[Scalar]| {
        let mut r = m(a, &m(u, v));
        sub_into(&mut r, &m(&m(a, u), v));
        sub_into(&mut r, &m(u, &m(a, v)));
        r
    };
    let mut d = b1(&m(x, y), z);
    add_into(&mut d, &b1(x, &m(y, z)));
    add_into(&mut d, &b1(y, &m(x, z)));
    sub_into(&mut d, &m(&b1(x, y), z));
    sub_into(&mut d, &m(x, &b1(y, z)));
    sub_into(&mut d, &m(y, &b1(x, z)));
    d
}

/// First basis quadruple in lexicographic order where `f` is nonzero.
/// Work is split by the first index; the merge keeps lexicographic order.
fn scan<F>(n: usize, f: F) -> Option<([usize; 4], Vector)>
where
    F: Fn([usize; 4]) -> Vector + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let q = [i, j, k, l];
                        let d = f(q);
                        if !is_zero_vec(&d) {
                            return Some((q, d));
                        }
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next()
}

/// Scan all basis quadruples `(a, b, x, y)` of the conservative form with
/// `P*` from `pstar`.
pub fn is_terminal(alg: &Algebra) -> DefectReport {
    let n = alg.dim();
    let ps = alg.pstar();
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    DefectReport::from_witness(scan(n, |[i, j, k, l]| {
        conservative_raw(alg, &ps, [&basis[i], &basis[j], &basis[k], &basis[l]])
    }))
}

/// Scan all basis quadruples `(a, x, y, z)` of the bracket expansion.
pub fn is_terminal_direct(alg: &Algebra) -> DefectReport {
    let n = alg.dim();
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    DefectReport::from_witness(scan(n, |[i, j, k, l]| {
        direct_raw(alg, [&basis[i], &basis[j], &basis[k], &basis[l]])
    }))
}

/// `(x^2 y) x = x^2 (y x)` on all basis pairs and on `x = e_i + e_j`.
pub fn jordan_holds(alg: &Algebra) -> bool {
    let n = alg.dim();
    let mut xs: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit_vec(n, i);
            v[j] = Scalar::from_integer(1.into());
            xs.push(v);
        }
    }
    xs.iter().all(|x| {
        let x2 = alg.mul(x, x);
        (0..n).all(|j| {
            let y = unit_vec(n, j);
            alg.mul(&alg.mul(&x2, &y), x) == alg.mul(&x2, &alg.mul(&y, x))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int, random_vec, zero_vec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t3_01() -> Algebra {
        Algebra::from_entries("T3_01", 3, &[(0, 0, 1, int(1)), (0, 1, 2, int(1))]).unwrap()
    }

    fn t4_02(alpha: Scalar) -> Algebra {
        Algebra::from_entries(
            "T4_02",
            4,
            &[
                (0, 0, 1, int(1)),
                (0, 1, 2, int(1)),
                (0, 2, 3, alpha),
                (1, 1, 3, int(1)),
                (2, 0, 3, int(-3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pstar_of_t3_02_at_zero() {
        let a = Algebra::from_entries("T3_02", 3, &[(0, 0, 1, int(1)), (1, 0, 2, int(1))]).unwrap();
        let p = pstar(&a);
        assert_eq!(p.coeff(0, 1, 2), &frac(1, 3));
        assert_eq!(p.coeff(1, 0, 2), &frac(2, 3));
        assert_eq!(p.coeff(0, 0, 1), &int(1));
        assert!(pstar(&Algebra::zero(3)).is_zero_product());
    }

    #[test]
    fn catalog_style_algebras_are_terminal() {
        let a = t3_01();
        assert!(is_terminal(&a).holds);
        assert!(is_terminal_direct(&a).holds);
        let b = t4_02(int(1));
        assert!(is_terminal(&b).holds);
        assert!(is_terminal_direct(&b).holds);
        assert!(is_terminal(&Algebra::zero(2)).holds);
    }

    #[test]
    fn zero_first_argument_gives_zero() {
        let b = t4_02(int(1));
        let ps = pstar(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let z = zero_vec(4);
        let (u, v, w) = (random_vec(&mut rng, 4, 3, 2), random_vec(&mut rng, 4, 3, 2), random_vec(&mut rng, 4, 3, 2));
        assert!(is_zero_vec(&conservative_defect(&b, &ps, [&z, &u, &v, &w]).unwrap()));
        assert!(is_zero_vec(&direct_defect(&b, [&z, &u, &v, &w]).unwrap()));
        assert!(conservative_defect(&b, &ps, [&z, &u, &v, &w[..3]]).is_err());
    }

    #[test]
    fn random_dense_algebra_fails_with_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Algebra::random(3, &mut rng);
        let r = is_terminal(&a);
        assert!(!r.holds);
        let (q, d) = r.witness.clone().unwrap();
        assert!(!is_zero_vec(&d));
        let n = 3;
        let e: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
        let again = conservative_defect(&a, &pstar(&a), [&e[q[0]], &e[q[1]], &e[q[2]], &e[q[3]]]).unwrap();
        assert_eq!(again, d);
        assert!(!is_terminal_direct(&a).holds);
    }

    fn combine(coeffs: &[Scalar], basis_vals: &[Vector]) -> Vector {
        let mut out = zero_vec(basis_vals[0].len());
        for (c, v) in coeffs.iter().zip(basis_vals) {
            crate::exactmath::axpy(&mut out, c, v);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn defect_is_multilinear(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 2;
            let a = Algebra::random(n, &mut rng);
            let ps = pstar(&a);
            let vs: Vec<Vector> = (0..4).map(|_| random_vec(&mut rng, n, 3, 2)).collect();
            let whole = conservative_defect(&a, &ps, [&vs[0], &vs[1], &vs[2], &vs[3]]).unwrap();
            let e: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
            let mut coeffs = Vec::new();
            let mut vals = Vec::new();
            for i in 0..n { for j in 0..n { for k in 0..n { for l in 0..n {
                coeffs.push(&vs[0][i] * &vs[1][j] * &vs[2][k] * &vs[3][l]);
                vals.push(conservative_defect(&a, &ps, [&e[i], &e[j], &e[k], &e[l]]).unwrap());
            }}}}
            prop_assert_eq!(whole, combine(&coeffs, &vals));
        }
    }
}
