//! Product words in a single generator `g`.
//!
//! A `Tree` is a bracketed product of copies of `g`; a `Word` is a linear
//! combination of trees with parameter-expression coefficients. Every
//! basis vector of a one-generated algebra is such a word in its generator.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, AlgebraTemplate};
use crate::error::{Error, Result};
use crate::exactmath::{axpy, zero_vec, Binding, Field, ParamExpr, RatFunc, Scalar, Vector};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tree {
    G,
    Mul(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn mul(a: Tree, b: Tree) -> Tree {
        Tree::Mul(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Tree::G => 1,
            Tree::Mul(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn eval(&self, alg: &Algebra, g: &[Scalar]) -> Vector {
        match self {
            Tree::G => g.to_vec(),
            Tree::Mul(a, b) => alg.mul(&a.eval(alg, g), &b.eval(alg, g)),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::G => write!(f, "g"),
            Tree::Mul(a, b) => write!(f, "({a}*{b})"),
        }
    }
}

/// `sum coeff_i * tree_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    pub terms: Vec<(ParamExpr, Tree)>,
}

impl Word {
    pub fn tree(t: Tree) -> Self {
        Word {
            terms: vec![(ParamExpr::one(), t)],
        }
    }

    /// Parse `g`, `(g*g)`, `2*((g*g)*g) - lambda*(g*(g*g))`, ...
    pub fn parse(src: &str) -> Result<Word> {
        let e = ParamExpr::parse(src)?;
        match interpret(&e)? {
            Value::Word(w) => Ok(w),
            Value::Scalar(_) => Err(Error::Invalid(format!("`{src}` does not involve g"))),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|(_, t)| t.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, alg: &Algebra, g: &[Scalar], b: &Binding) -> Result<Vector> {
        let mut out = zero_vec(alg.dim());
        for (c, t) in &self.terms {
            let c = c.eval(b)?;
            axpy(&mut out, &c, &t.eval(alg, g));
        }
        Ok(out)
    }

    /// Evaluate with coefficients already specialised to numbers.
    pub fn eval_numeric(&self, alg: &Algebra, g: &[Scalar]) -> Result<Vector> {
        self.eval(alg, g, &Binding::new())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*g");
        }
        for (idx, (c, t)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                ParamExpr::Num(q) if q < &Scalar::zero() => (true, ParamExpr::Num(-q.clone())),
                ParamExpr::Neg(inner) => (true, (**inner).clone()),
                other => (false, other.clone()),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let simple = matches!(&mag, ParamExpr::Var(_))
                || matches!(&mag, ParamExpr::Num(q) if q.is_integer());
            match &mag {
                ParamExpr::Num(q) if q.is_one() => write!(f, "{t}")?,
                _ if simple => write!(f, "{mag}*{t}")?,
                _ => write!(f, "({mag})*{t}")?,
            }
        }
        Ok(())
    }
}

enum Value {
    Scalar(ParamExpr),
    Word(Word),
}

fn negate(c: ParamExpr) -> ParamExpr {
    match c {
        ParamExpr::Num(q) => ParamExpr::Num(-q),
        ParamExpr::Neg(inner) => *inner,
        other => ParamExpr::Neg(Box::new(other)),
    }
}

fn scale_word(s: &ParamExpr, w: Word) -> Word {
    Word {
        terms: w
            .terms
            .into_iter()
            .map(|(c, t)| (s.clone().times(c), t))
            .collect(),
    }
}

fn interpret(e: &ParamExpr) -> Result<Value> {
    use ParamExpr as P;
    Ok(match e {
        P::Var(v) if v == "g" => Value::Word(Word::tree(Tree::G)),
        P::Num(_) | P::Var(_) => Value::Scalar(e.clone()),
        P::Neg(a) => match interpret(a)? {
            Value::Scalar(s) => Value::Scalar(negate(s)),
            Value::Word(w) => Value::Word(Word {
                terms: w.terms.into_iter().map(|(c, t)| (negate(c), t)).collect(),
            }),
        },
        P::Add(a, b) | P::Sub(a, b) => {
            let sub = matches!(e, P::Sub(..));
            match (interpret(a)?, interpret(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
                (Value::Word(mut x), Value::Word(y)) => {
                    for (c, t) in y.terms {
                        x.terms.push((if sub { negate(c) } else { c }, t));
                    }
                    Value::Word(x)
                }
                _ => return Err(Error::Invalid(format!("cannot add a scalar and a word in `{e}`"))),
            }
        }
        P::Mul(a, b) => match (interpret(a)?, interpret(b)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(s), Value::Word(w)) | (Value::Word(w), Value::Scalar(s)) => {
                Value::Word(scale_word(&s, w))
            }
            (Value::Word(x), Value::Word(y)) => {
                let mut terms = Vec::new();
                for (c1, t1) in &x.terms {
                    for (c2, t2) in &y.terms {
                        terms.push((c1.clone().times(c2.clone()), Tree::mul(t1.clone(), t2.clone())));
                    }
                }
                Value::Word(Word { terms })
            }
        },
        P::Div(a, b) => match (interpret(a)?, interpret(b)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x / y),
            (Value::Word(w), Value::Scalar(s)) => {
                Value::Word(scale_word(&(ParamExpr::one() / s), w))
            }
            _ => return Err(Error::Invalid(format!("cannot divide by a word in `{e}`"))),
        },
        P::Pow(a, k) => match interpret(a)? {
            Value::Scalar(s) => Value::Scalar(P::Pow(Box::new(s), *k)),
            Value::Word(_) => {
                return Err(Error::Invalid(format!(
                    "powers of words are ambiguous without brackets: `{e}`"
                )))
            }
        },
    })
}

/// Echelon basis over a field, remembering pivot positions.
struct Echelon<F: Field> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if r[*p].vanishes() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.vanishes() {
                    *x = x.minus(&f.times(y));
                }
            }
        }
        r
    }

    /// Insert when independent; with `constant_only`, only when a
    /// parameter-free pivot exists.
    fn try_insert(&mut self, v: &[F], constant_only: bool) -> bool {
        let r = self.reduce(v);
        let pivot = if constant_only {
            r.iter().position(Field::is_constant_unit)
        } else {
            r.iter().position(|x| !x.vanishes())
        };
        let Some(p) = pivot else {
            return false;
        };
        let inv = F::one_el().over(&r[p]).expect("nonzero pivot");
        let r: Vec<F> = r.iter().map(|x| x.times(&inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p].vanishes() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.vanishes() {
                    *x = x.minus(&f.times(y));
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Choose trees whose values span the algebra generated by `g`, preferring
/// parameter-free pivots, then express each basis vector in them. Returns
/// `None` when `g` does not generate everything.
fn derive_generic<F, M>(n: usize, mul: M, g: Vec<F>) -> Option<Vec<Vec<(F, Tree)>>>
where
    F: Field,
    M: Fn(&[F], &[F]) -> Vec<F>,
{
    let mut ech = Echelon::<F> { rows: Vec::new() };
    let mut chosen: Vec<(Tree, Vec<F>)> = Vec::new();
    if !ech.try_insert(&g, false) {
        return None;
    }
    chosen.push((Tree::G, g));
    // Products of chosen trees, lowest degree first. Parameter-free pivots
    // are exhausted before a single parametric one is admitted.
    loop {
        let mut cands: Vec<(Tree, Vec<F>)> = Vec::new();
        for (t1, v1) in chosen.iter() {
            for (t2, v2) in chosen.iter() {
                let t = Tree::mul(t1.clone(), t2.clone());
                if chosen.iter().all(|(c, _)| *c != t) {
                    cands.push((t, mul(v1, v2)));
                }
            }
        }
        cands.sort_by_key(|(t, _)| t.degree());
        let mut added = false;
        for (t, v) in &cands {
            if chosen.len() < n && ech.try_insert(v, true) {
                chosen.push((t.clone(), v.clone()));
                added = true;
            }
        }
        if chosen.len() == n {
            break;
        }
        if added {
            continue;
        }
        match cands.iter().find(|(_, v)| ech.try_insert(v, false)) {
            Some((t, v)) => chosen.push((t.clone(), v.clone())),
            None => break,
        }
    }
    if chosen.len() < n {
        return None;
    }
    // Solve V c = e_k where column j of V is chosen[j].1.
    let mut aug: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row: Vec<F> = chosen.iter().map(|(_, v)| v[i].clone()).collect();
            row.extend((0..n).map(|k| if k == i { F::one_el() } else { F::zero_el() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| aug[r][c].is_constant_unit())
            .or_else(|| (c..n).find(|&r| !aug[r][c].vanishes()))?;
        aug.swap(c, p);
        let inv = F::one_el().over(&aug[c][c])?;
        aug[c] = aug[c].iter().map(|x| x.times(&inv)).collect();
        let prow = aug[c].clone();
        for r in 0..n {
            if r == c || aug[r][c].vanishes() {
                continue;
            }
            let f = aug[r][c].clone();
            aug[r] = aug[r]
                .iter()
                .zip(&prow)
                .map(|(x, y)| if y.vanishes() { x.clone() } else { x.minus(&f.times(y)) })
                .collect();
        }
    }
    Some(
        (0..n)
            .map(|k| {
                (0..n)
                    .filter(|&j| !aug[j][n + k].vanishes())
                    .map(|j| (aug[j][n + k].clone(), chosen[j].0.clone()))
                    .collect()
            })
            .collect(),
    )
}

/// Words expressing each basis vector in the generator `g`, with rational
/// coefficients.
pub fn derive_words(alg: &Algebra, g: &[Scalar]) -> Option<Vec<Word>> {
    let n = alg.dim();
    let raw = derive_generic(n, |x: &[Scalar], y: &[Scalar]| alg.mul(x, y), g.to_vec())?;
    Some(
        raw.into_iter()
            .map(|terms| Word {
                terms: terms.into_iter().map(|(c, t)| (ParamExpr::Num(c), t)).collect(),
            })
            .collect(),
    )
}

/// Words valid for generic parameter values of a template, computed over
/// the field of rational functions in its parameters. Generator is given
/// with constant coordinates.
pub fn derive_template_words(t: &AlgebraTemplate, g: &[Scalar]) -> Result<Option<Vec<Word>>> {
    let n = t.dim;
    let mut c: BTreeMap<(usize, usize), Vec<(usize, RatFunc)>> = BTreeMap::new();
    for p in &t.products {
        let terms = p
            .terms
            .iter()
            .map(|(k, e)| Ok((*k, e.normalize()?)))
            .collect::<Result<Vec<_>>>()?;
        c.insert((p.i, p.j), terms);
    }
    let mul = |x: &[RatFunc], y: &[RatFunc]| {
        let mut out = vec![<RatFunc as Field>::zero_el(); n];
        for ((i, j), terms) in &c {
            if x[*i].vanishes() || y[*j].vanishes() {
                continue;
            }
            let f = Field::times(&x[*i], &y[*j]);
            for (k, v) in terms {
                out[*k] = Field::plus(&out[*k], &Field::times(&f, v));
            }
        }
        out
    };
    let g: Vec<RatFunc> = g.iter().map(|x| RatFunc::constant(x.clone())).collect();
    Ok(derive_generic(n, mul, g).map(|raw| {
        raw.into_iter()
            .map(|terms| Word {
                terms: terms.into_iter().map(|(c, t)| (c.to_expr(), t)).collect(),
            })
            .collect()
    }))
}
