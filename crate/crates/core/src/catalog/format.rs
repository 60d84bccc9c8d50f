//! Reading and writing the catalog text format.
//!
//! ```text
//! algebra T3_02 dim=3 params=lambda
//!   e1 e1 = e2
//!   e1 e2 = lambda*e3
//!   e2 e1 = e3
//!   generatorword e3 = ((g*g)*g)
//! derivation label=T3_02/s1 base=T3_02 s=1 params=lambda,alpha exclude=lambda
//!   nabla 1 = (1,2,1)
//!   aut = x, 0, 0; y, x^2, 0; z, (lambda + 1)*x*y, x^3
//!   action 1 = x^3*a1 + ...
//!   orbit rep=alpha,0,1 result=T4_05 bind=alpha:alpha
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};

use super::words::{derive_template_words, Word};
use super::{AutSpec, Catalog, CatalogEntry, Claims, DerivationEntry, Orbit};
use crate::algebra::{AlgebraTemplate, ProductEntry};
use crate::error::{Error, Result};
use crate::exactmath::{unit_vec, Binding, ParamExpr};
use crate::morphisms::coord_name;

/// A physical line with its 1-based number.
#[derive(Clone, Copy)]
struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn col_of(&self, part: &str) -> usize {
        let base = self.text.as_ptr() as usize;
        let p = part.as_ptr() as usize;
        if p >= base && p <= base + self.text.len() {
            p - base + 1
        } else {
            1
        }
    }

    fn err(&self, part: &str, msg: impl Into<String>) -> Error {
        Error::parse(self.no, self.col_of(part), msg)
    }

    fn expr(&self, src: &'a str) -> Result<ParamExpr> {
        let col = self.col_of(src);
        ParamExpr::parse(src).map_err(|e| e.at_line(self.no, col - 1))
    }
}

/// `key=value` attributes; a value runs until the next `key=` token so
/// that it may contain spaces.
fn attributes<'a>(line: &Line<'a>, rest: &'a str) -> Result<Vec<(&'a str, &'a str)>> {
    let mut out: Vec<(&'a str, &'a str)> = Vec::new();
    let mut idx = 0;
    let bytes = rest.as_bytes();
    let mut starts = Vec::new();
    while idx < bytes.len() {
        while idx < bytes.len() && bytes[idx].is_ascii_whitespace() {
            idx += 1;
        }
        if idx >= bytes.len() {
            break;
        }
        let start = idx;
        while idx < bytes.len() && !bytes[idx].is_ascii_whitespace() {
            idx += 1;
        }
        let tok = &rest[start..idx];
        let is_key = tok
            .split_once('=')
            .map(|(k, _)| !k.is_empty() && k.bytes().all(|b| b.is_ascii_lowercase() || b == b'_'))
            .unwrap_or(false);
        if is_key {
            starts.push(start);
        } else if starts.is_empty() {
            return Err(line.err(tok, format!("expected `key=value`, found `{tok}`")));
        }
    }
    for (n, &s) in starts.iter().enumerate() {
        let end = starts.get(n + 1).copied().unwrap_or(rest.len());
        let chunk = rest[s..end].trim_end();
        let (k, v) = chunk.split_once('=').expect("checked above");
        if out.iter().any(|(k2, _)| *k2 == k) {
            return Err(line.err(k, format!("repeated attribute `{k}`")));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn basis_index(line: &Line, tok: &str, dim: usize) -> Result<usize> {
    let k = tok
        .strip_prefix('e')
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| line.err(tok, format!("expected a basis vector `e<k>`, found `{tok}`")))?;
    if k == 0 || k > dim {
        return Err(line.err(tok, format!("basis index e{k} out of range for dimension {dim}")));
    }
    Ok(k - 1)
}

fn is_basis_name(v: &str) -> Option<usize> {
    let d = v.strip_prefix('e')?;
    if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    d.parse().ok()
}

fn has_basis(e: &ParamExpr) -> bool {
    e.vars().iter().any(|v| is_basis_name(v).is_some())
}

fn scale_terms(terms: Vec<(usize, ParamExpr)>, f: impl Fn(ParamExpr) -> ParamExpr) -> Vec<(usize, ParamExpr)> {
    terms.into_iter().map(|(k, c)| (k, f(c))).collect()
}

fn negate(c: ParamExpr) -> ParamExpr {
    match c {
        ParamExpr::Num(q) => ParamExpr::Num(-q),
        ParamExpr::Neg(inner) => *inner,
        other => ParamExpr::Neg(Box::new(other)),
    }
}

/// Decompose an expression that is linear in identifiers `e1, e2, ...`
/// into `(k, coefficient)` pairs (0-based `k`, first occurrence order).
pub fn split_linear(e: &ParamExpr) -> Result<Vec<(usize, ParamExpr)>> {
    use ParamExpr::*;
    let raw = match e {
        Var(v) => match is_basis_name(v) {
            Some(k) if k > 0 => vec![(k - 1, ParamExpr::one())],
            _ => return Err(Error::Invalid(format!("`{e}` is not a combination of basis vectors"))),
        },
        Num(_) => return Err(Error::Invalid(format!("constant term `{e}` in a product"))),
        Neg(a) => scale_terms(split_linear(a)?, negate),
        Add(a, b) => {
            let mut t = split_linear(a)?;
            t.extend(split_linear(b)?);
            t
        }
        Sub(a, b) => {
            let mut t = split_linear(a)?;
            t.extend(scale_terms(split_linear(b)?, negate));
            t
        }
        Mul(a, b) => match (has_basis(a), has_basis(b)) {
            (false, true) => scale_terms(split_linear(b)?, |c| (**a).clone().times(c)),
            (true, false) => scale_terms(split_linear(a)?, |c| c.times((**b).clone())),
            _ => return Err(Error::Invalid(format!("`{e}` is not linear in the basis"))),
        },
        Div(a, b) if !has_basis(b) => scale_terms(split_linear(a)?, |c| {
            if matches!(c.as_literal(), Some(q) if q.is_one()) {
                ParamExpr::one() / (**b).clone()
            } else {
                c / (**b).clone()
            }
        }),
        _ => return Err(Error::Invalid(format!("`{e}` is not linear in the basis"))),
    };
    let mut merged: Vec<(usize, ParamExpr)> = Vec::new();
    for (k, c) in raw {
        if let Some(slot) = merged.iter_mut().find(|(k2, _)| *k2 == k) {
            slot.1 = slot.1.clone().plus(c);
        } else {
            merged.push((k, c));
        }
    }
    Ok(merged)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn expr_list<'a>(line: &Line<'a>, s: &'a str, sep: char) -> Result<Vec<ParamExpr>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(s, sep).into_iter().map(|p| line.expr(p)).collect()
}

fn name_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

fn binding_list<'a>(line: &Line<'a>, s: &'a str) -> Result<BTreeMap<String, ParamExpr>> {
    let mut m = BTreeMap::new();
    for part in s.split(',') {
        if part.trim().is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| line.err(part, "expected `name:expr`"))?;
        if m.insert(k.trim().to_string(), line.expr(v)?).is_some() {
            return Err(line.err(k, format!("`{}` bound twice", k.trim())));
        }
    }
    Ok(m)
}

/// `(i,j,expr) (i,j,expr) ...`
fn triples<'a>(line: &Line<'a>, s: &'a str) -> Result<Vec<(usize, usize, ParamExpr)>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i] != b'(' {
            return Err(line.err(&s[i..], "expected `(i,j,value)`"));
        }
        let mut depth = 0;
        let mut j = i;
        loop {
            if j >= bytes.len() {
                return Err(line.err(&s[i..], "unbalanced parenthesis"));
            }
            match bytes[j] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            j += 1;
        }
        let inner = &s[i + 1..j];
        let parts = split_top(inner, ',');
        if parts.len() != 3 {
            return Err(line.err(inner, "a triple needs three components"));
        }
        let idx = |p: &str| -> Result<usize> {
            p.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .map(|v| v - 1)
                .ok_or_else(|| line.err(p, format!("bad index `{}`", p.trim())))
        };
        out.push((idx(parts[0])?, idx(parts[1])?, line.expr(parts[2])?));
        i = j + 1;
    }
    Ok(out)
}

struct RawEntry {
    line: usize,
    template: AlgebraTemplate,
    source: String,
    generator: usize,
    words: BTreeMap<usize, Word>,
    claims: Claims,
    samples: Vec<(usize, Binding)>,
    notes: Vec<String>,
}

struct RawDerivation {
    line: usize,
    d: DerivationEntry,
    actions: BTreeMap<usize, (usize, ParamExpr)>,
    nablas: BTreeMap<usize, (usize, Vec<(usize, usize, ParamExpr)>)>,
    orbit_lines: Vec<usize>,
}

enum Block {
    Entry(RawEntry),
    Derivation(RawDerivation),
}

fn index_after<'a>(line: &Line<'a>, rest: &'a str, what: &str) -> Result<(usize, &'a str)> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| line.err(rest, format!("expected `{what} <k> = ...`")))?;
    let k = lhs
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| line.err(lhs, format!("bad {what} index")))?;
    Ok((k - 1, rhs))
}

fn value_after_eq<'a>(line: &Line<'a>, rest: &'a str) -> Result<&'a str> {
    let r = rest.trim_start();
    r.strip_prefix('=')
        .map(str::trim)
        .ok_or_else(|| line.err(rest, "expected `=`"))
}

fn entry_header(line: &Line, rest: &str) -> Result<RawEntry> {
    let rest = rest.trim_start();
    let name_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let name = &rest[..name_end];
    if name.is_empty() || name.contains('=') {
        return Err(line.err(rest, "expected an algebra name"));
    }
    let mut dim = None;
    let mut params = Vec::new();
    let mut exclusions = Vec::new();
    for (k, v) in attributes(line, &rest[name_end..])? {
        match k {
            "dim" => {
                dim = Some(
                    v.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| line.err(v, "bad dimension"))?,
                )
            }
            "params" => params = name_list(v),
            "exclude" => exclusions = expr_list(line, v, ';')?,
            _ => return Err(line.err(k, format!("unknown attribute `{k}`"))),
        }
    }
    let dim = dim.ok_or_else(|| line.err(rest, "missing `dim=`"))?;
    Ok(RawEntry {
        line: line.no,
        template: AlgebraTemplate {
            name: name.to_string(),
            dim,
            params,
            exclusions,
            products: Vec::new(),
        },
        source: String::new(),
        generator: 0,
        words: BTreeMap::new(),
        claims: Claims::default(),
        samples: Vec::new(),
        notes: Vec::new(),
    })
}

fn entry_line(line: &Line, e: &mut RawEntry, body: &str) -> Result<()> {
    let (head, rest) = body.split_at(body.find(char::is_whitespace).unwrap_or(body.len()));
    let dim = e.template.dim;
    match head {
        "generator" => {
            let v = value_after_eq(line, rest)?;
            e.generator = basis_index(line, v, dim)?;
        }
        "generatorword" => {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| line.err(rest, "expected `generatorword e<k> = <word>`"))?;
            let k = basis_index(line, lhs.trim(), dim)?;
            let col = line.col_of(rhs);
            let w = Word::parse(rhs).map_err(|err| err.at_line(line.no, col - 1))?;
            if e.words.insert(k, w).is_some() {
                return Err(line.err(lhs, format!("second word for e{}", k + 1)));
            }
        }
        "source" => e.source = value_after_eq(line, rest)?.to_string(),
        "note" => e.notes.push(value_after_eq(line, rest)?.to_string()),
        "claims" => {
            let v = value_after_eq(line, rest)?;
            let mut c = Claims {
                terminal: false,
                nilpotent: false,
                one_generated: false,
            };
            for w in v.split_whitespace() {
                match w {
                    "terminal" => c.terminal = true,
                    "nilpotent" => c.nilpotent = true,
                    "one-generated" => c.one_generated = true,
                    "none" => {}
                    _ => return Err(line.err(w, format!("unknown property `{w}`"))),
                }
            }
            e.claims = c;
        }
        "sample" => {
            let mut b = Binding::new();
            for (k, v) in attributes(line, rest)? {
                let q = line.expr(v)?.eval(&Binding::new()).map_err(|_| line.err(v, "sample values must be numbers"))?;
                b.insert(k.to_string(), q);
            }
            e.samples.push((line.no, b));
        }
        _ if head.starts_with('e') => {
            let i = basis_index(line, head, dim)?;
            let rest = rest.trim_start();
            let jend = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let j = basis_index(line, &rest[..jend], dim)?;
            let rhs = value_after_eq(line, &rest[jend..])?;
            let expr = line.expr(rhs)?;
            for v in expr.vars() {
                if let Some(k) = is_basis_name(&v) {
                    if k == 0 || k > dim {
                        return Err(line.err(rhs, format!("basis index e{k} out of range for dimension {dim}")));
                    }
                }
            }
            let terms = split_linear(&expr).map_err(|err| line.err(rhs, err.to_string()))?;
            if e.template.products.iter().any(|p| p.i == i && p.j == j) {
                return Err(line.err(head, format!("product e{} e{} given twice", i + 1, j + 1)));
            }
            e.template.products.push(ProductEntry { i, j, terms });
        }
        _ => return Err(line.err(head, format!("unexpected `{head}` in an algebra block"))),
    }
    Ok(())
}

fn derivation_header(line: &Line, rest: &str, count: usize) -> Result<RawDerivation> {
    let mut d = DerivationEntry {
        label: String::new(),
        base: String::new(),
        s: 1,
        params: Vec::new(),
        exclusions: Vec::new(),
        base_binding: BTreeMap::new(),
        nablas: Vec::new(),
        aut: None,
        actions: Vec::new(),
        orbits: Vec::new(),
        notes: Vec::new(),
    };
    for (k, v) in attributes(line, rest)? {
        match k {
            "label" => d.label = v.trim().to_string(),
            "base" => d.base = v.trim().to_string(),
            "s" => {
                d.s = v
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&s| s > 0)
                    .ok_or_else(|| line.err(v, "bad `s`"))?
            }
            "params" => d.params = name_list(v),
            "exclude" => d.exclusions = expr_list(line, v, ';')?,
            "bind" => d.base_binding = binding_list(line, v)?,
            _ => return Err(line.err(k, format!("unknown attribute `{k}`"))),
        }
    }
    if d.base.is_empty() {
        return Err(line.err(rest, "missing `base=`"));
    }
    if d.label.is_empty() {
        d.label = format!("{}/{}", d.base, count + 1);
    }
    Ok(RawDerivation {
        line: line.no,
        d,
        actions: BTreeMap::new(),
        nablas: BTreeMap::new(),
        orbit_lines: Vec::new(),
    })
}

fn derivation_line(line: &Line, r: &mut RawDerivation, body: &str) -> Result<()> {
    let (head, rest) = body.split_at(body.find(char::is_whitespace).unwrap_or(body.len()));
    match head {
        "nabla" => {
            let (k, rhs) = index_after(line, rest, "nabla")?;
            if r.nablas.insert(k, (line.no, triples(line, rhs)?)).is_some() {
                return Err(line.err(head, format!("nabla {} given twice", k + 1)));
            }
        }
        "action" => {
            let (k, rhs) = index_after(line, rest, "action")?;
            if r.actions.insert(k, (line.no, line.expr(rhs.trim())?)).is_some() {
                return Err(line.err(head, format!("action {} given twice", k + 1)));
            }
        }
        "aut" => {
            let v = value_after_eq(line, rest)?;
            let rows = v
                .split(';')
                .map(|row| expr_list(line, row, ','))
                .collect::<Result<Vec<_>>>()?;
            let nondeg = r.d.aut.as_ref().map(|a| a.nondegenerate.clone()).unwrap_or_else(ParamExpr::one);
            r.d.aut = Some(AutSpec {
                rows,
                nondegenerate: nondeg,
            });
        }
        "nondeg" => {
            let v = value_after_eq(line, rest)?;
            let e = line.expr(v)?;
            match r.d.aut.as_mut() {
                Some(a) => a.nondegenerate = e,
                None => return Err(line.err(head, "`nondeg` must follow `aut`")),
            }
        }
        "note" => r.d.notes.push(value_after_eq(line, rest)?.to_string()),
        "orbit" => {
            let mut o = Orbit {
                reps: Vec::new(),
                exclusions: Vec::new(),
                result: String::new(),
                result_binding: BTreeMap::new(),
                perm: Vec::new(),
            };
            for (k, v) in attributes(line, rest)? {
                match k {
                    "rep" => {
                        o.reps = v
                            .split('|')
                            .map(|part| expr_list(line, part, ','))
                            .collect::<Result<Vec<_>>>()?
                    }
                    "exclude" => o.exclusions = expr_list(line, v, ';')?,
                    "result" => o.result = v.trim().to_string(),
                    "bind" => o.result_binding = binding_list(line, v)?,
                    "perm" => {
                        o.perm = v
                            .split(',')
                            .map(|p| {
                                p.trim()
                                    .parse::<usize>()
                                    .ok()
                                    .filter(|&x| x > 0)
                                    .map(|x| x - 1)
                                    .ok_or_else(|| line.err(p, "bad permutation entry"))
                            })
                            .collect::<Result<Vec<_>>>()?
                    }
                    _ => return Err(line.err(k, format!("unknown attribute `{k}`"))),
                }
            }
            if o.result.is_empty() || o.reps.is_empty() {
                return Err(line.err(head, "an orbit needs `rep=` and `result=`"));
            }
            r.d.orbits.push(o);
            r.orbit_lines.push(line.no);
        }
        _ => return Err(line.err(head, format!("unexpected `{head}` in a derivation block"))),
    }
    Ok(())
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::UnknownReference(_) | Error::ExclusionViolated { .. } => e,
        other => Error::parse(line, 1, other.to_string()),
    }
}

fn check_vars(line: usize, e: &ParamExpr, allowed: &BTreeSet<String>) -> Result<()> {
    for v in e.vars() {
        if !allowed.contains(&v) {
            return Err(Error::UnknownReference(v));
        }
    }
    e.normalize().map(|_| ()).map_err(|err| at(line, err))
}

fn finish_entry(r: RawEntry) -> Result<CatalogEntry> {
    let RawEntry {
        line,
        template,
        source,
        generator,
        mut words,
        claims,
        samples,
        notes,
    } = r;
    template.validate().map_err(|e| at(line, e))?;
    let n = template.dim;
    if words.len() < n {
        let g = unit_vec(n, generator);
        if let Some(derived) = derive_template_words(&template, &g).map_err(|e| at(line, e))? {
            for (k, w) in derived.into_iter().enumerate() {
                words.entry(k).or_insert(w);
            }
        }
    }
    let words = if words.len() == n { words.into_values().collect() } else { Vec::new() };
    let mut checked = Vec::new();
    for (ln, b) in samples {
        for k in b.keys() {
            if !template.params.contains(k) {
                return Err(Error::UnknownReference(k.clone()));
            }
        }
        if let Some(ex) = template.violated_exclusion(&b).map_err(|e| at(ln, e))? {
            return Err(Error::ExclusionViolated {
                name: template.name.clone(),
                expr: ex.to_string(),
            });
        }
        checked.push(b);
    }
    Ok(CatalogEntry {
        template,
        source,
        generator,
        words,
        claims,
        samples: checked,
        notes,
    })
}

fn finish_derivation(r: RawDerivation, entries: &[CatalogEntry]) -> Result<DerivationEntry> {
    let RawDerivation {
        line,
        mut d,
        actions,
        nablas,
        orbit_lines,
    } = r;
    let base = entries
        .iter()
        .find(|e| e.name() == d.base)
        .ok_or_else(|| Error::UnknownReference(d.base.clone()))?;
    let n = base.dim();
    let declared: BTreeSet<String> = d.params.iter().cloned().collect();
    if declared.len() != d.params.len() {
        return Err(Error::parse(line, 1, "duplicate derivation parameter"));
    }
    for (k, e) in &d.base_binding {
        if !base.template.params.contains(k) {
            return Err(Error::UnknownReference(k.clone()));
        }
        check_vars(line, e, &declared)?;
    }
    for p in &base.template.params {
        if !d.base_binding.contains_key(p) && !declared.contains(p) {
            return Err(Error::parse(
                line,
                1,
                format!("base parameter `{p}` is neither bound nor declared"),
            ));
        }
    }
    let mut scope = declared.clone();
    scope.extend(base.template.params.iter().cloned());
    for e in &d.exclusions {
        check_vars(line, e, &scope)?;
    }
    let k = nablas.len();
    for (idx, (pos, (ln, ts))) in nablas.into_iter().enumerate() {
        if idx != pos {
            return Err(Error::parse(ln, 1, format!("nabla {} is missing", idx + 1)));
        }
        for (i, j, c) in &ts {
            if *i >= n || *j >= n {
                return Err(Error::parse(ln, 1, format!("index ({},{}) out of range for dimension {n}", i + 1, j + 1)));
            }
            check_vars(ln, c, &scope)?;
        }
        d.nablas.push(ts);
    }
    if k == 0 {
        return Err(Error::parse(line, 1, "a derivation needs at least one nabla"));
    }
    let mut aut_vars = BTreeSet::new();
    if let Some(a) = &d.aut {
        if a.rows.len() != n || a.rows.iter().any(|r| r.len() != n) {
            return Err(Error::parse(line, 1, format!("automorphism matrix must be {n}x{n}")));
        }
        for e in a.rows.iter().flatten().chain(std::iter::once(&a.nondegenerate)) {
            e.normalize().map_err(|err| at(line, err))?;
            aut_vars.extend(e.vars().into_iter().filter(|v| !scope.contains(v)));
        }
    }
    if !actions.is_empty() {
        if d.aut.is_none() {
            return Err(Error::parse(line, 1, "action formulas need an `aut` line"));
        }
        if actions.len() != k {
            return Err(Error::parse(line, 1, format!("expected {k} action formulas, found {}", actions.len())));
        }
        let mut allowed = scope.clone();
        allowed.extend(aut_vars.iter().cloned());
        allowed.extend((0..k).map(coord_name));
        for (idx, (pos, (ln, e))) in actions.into_iter().enumerate() {
            if idx != pos {
                return Err(Error::parse(ln, 1, format!("action {} is missing", idx + 1)));
            }
            check_vars(ln, &e, &allowed)?;
            d.actions.push(e);
        }
    }
    for (o, ln) in d.orbits.iter().zip(orbit_lines) {
        if o.reps.len() != d.s {
            return Err(Error::parse(ln, 1, format!("expected {} cocycles, found {}", d.s, o.reps.len())));
        }
        for rep in &o.reps {
            if rep.len() != k {
                return Err(Error::parse(ln, 1, format!("expected {k} coordinates, found {}", rep.len())));
            }
            for c in rep {
                check_vars(ln, c, &scope)?;
            }
        }
        for e in &o.exclusions {
            check_vars(ln, e, &scope)?;
        }
        let res = entries
            .iter()
            .find(|e| e.name() == o.result)
            .ok_or_else(|| Error::UnknownReference(o.result.clone()))?;
        if res.dim() != n + d.s {
            return Err(Error::parse(
                ln,
                1,
                format!("{} has dimension {}, expected {}", o.result, res.dim(), n + d.s),
            ));
        }
        for (p, e) in &o.result_binding {
            if !res.template.params.contains(p) {
                return Err(Error::UnknownReference(p.clone()));
            }
            check_vars(ln, e, &scope)?;
        }
        for p in &res.template.params {
            if !o.result_binding.contains_key(p) && !scope.contains(p) {
                return Err(Error::parse(ln, 1, format!("result parameter `{p}` is neither bound nor declared")));
            }
        }
        if !o.perm.is_empty() {
            let mut seen = vec![false; res.dim()];
            if o.perm.len() != res.dim() || o.perm.iter().any(|&p| p >= res.dim() || std::mem::replace(&mut seen[p], true)) {
                return Err(Error::parse(ln, 1, "`perm` is not a permutation of the result basis"));
            }
        }
    }
    Ok(d)
}

/// Sparse cocycle triples `(i,j,expr) ...` with 1-based indices, as in a
/// `nabla` line.
pub fn parse_triples(s: &str) -> Result<Vec<(usize, usize, ParamExpr)>> {
    triples(&Line { no: 1, text: s }, s)
}

/// Matrix rows separated by `;`, entries by `,`.
pub fn parse_matrix_rows(s: &str) -> Result<Vec<Vec<ParamExpr>>> {
    let line = Line { no: 1, text: s };
    s.split(';').map(|row| expr_list(&line, row, ',')).collect()
}

/// Comma-separated expressions.
pub fn parse_expr_list(s: &str) -> Result<Vec<ParamExpr>> {
    expr_list(&Line { no: 1, text: s }, s, ',')
}

/// Parse a catalog document and resolve every cross-reference.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut nderiv = 0;
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Line { no: idx + 1, text: raw };
        let body = content.trim();
        if body.is_empty() {
            continue;
        }
        let body = &content[content.find(body).expect("substring")..][..body.len()];
        if let Some(rest) = body.strip_prefix("algebra ") {
            blocks.push(Block::Entry(entry_header(&line, rest)?));
        } else if let Some(rest) = body.strip_prefix("derivation ") {
            blocks.push(Block::Derivation(derivation_header(&line, rest, nderiv)?));
            nderiv += 1;
        } else {
            match blocks.last_mut() {
                Some(Block::Entry(e)) => entry_line(&line, e, body)?,
                Some(Block::Derivation(d)) => derivation_line(&line, d, body)?,
                None => return Err(line.err(body, "content before the first block")),
            }
        }
    }
    let mut cat = Catalog::default();
    let mut derivs = Vec::new();
    for b in blocks {
        match b {
            Block::Entry(e) => {
                if cat.entries.iter().any(|x| x.name() == e.template.name) {
                    return Err(Error::parse(e.line, 1, format!("algebra `{}` defined twice", e.template.name)));
                }
                cat.entries.push(finish_entry(e)?);
            }
            Block::Derivation(d) => derivs.push(d),
        }
    }
    for d in derivs {
        let dd = finish_derivation(d, &cat.entries)?;
        if cat.derivations.iter().any(|x| x.label == dd.label) {
            return Err(Error::Invalid(format!("derivation label `{}` used twice", dd.label)));
        }
        cat.derivations.push(dd);
    }
    Ok(cat)
}

fn write_linear(f: &mut fmt::Formatter<'_>, terms: &[(usize, ParamExpr)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0*e1");
    }
    for (idx, (k, c)) in terms.iter().enumerate() {
        let (neg, mag) = match c {
            ParamExpr::Num(q) if q.is_negative() => (true, ParamExpr::Num(-q.clone())),
            ParamExpr::Neg(inner) => (true, (**inner).clone()),
            other => (false, other.clone()),
        };
        match (idx, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if matches!(mag.as_literal(), Some(q) if q.is_one()) {
            write!(f, "e{}", k + 1)?;
        } else {
            let term = mag * ParamExpr::var(&format!("e{}", k + 1));
            if neg {
                write!(f, "{}", Wrapped(&term))?;
            } else {
                write!(f, "{term}")?;
            }
        }
    }
    Ok(())
}

/// Prints an expression so that it survives being placed after a minus.
struct Wrapped<'a>(&'a ParamExpr);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ParamExpr::Mul(a, b) if matches!(**a, ParamExpr::Add(..) | ParamExpr::Sub(..)) => {
                write!(f, "({a})*{b}")
            }
            other => write!(f, "{other}"),
        }
    }
}

fn join_exprs(es: &[ParamExpr], sep: &str) -> String {
    es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(sep)
}

fn join_binding(b: &BTreeMap<String, ParamExpr>) -> String {
    b.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.template;
        write!(f, "algebra {} dim={}", t.name, t.dim)?;
        if !t.params.is_empty() {
            write!(f, " params={}", t.params.join(","))?;
        }
        if !t.exclusions.is_empty() {
            write!(f, " exclude={}", join_exprs(&t.exclusions, ";"))?;
        }
        writeln!(f)?;
        if !self.source.is_empty() {
            writeln!(f, "  source = {}", self.source)?;
        }
        for n in &self.notes {
            writeln!(f, "  note = {n}")?;
        }
        if self.claims != Claims::default() {
            let mut c = Vec::new();
            if self.claims.terminal {
                c.push("terminal");
            }
            if self.claims.nilpotent {
                c.push("nilpotent");
            }
            if self.claims.one_generated {
                c.push("one-generated");
            }
            if c.is_empty() {
                c.push("none");
            }
            writeln!(f, "  claims = {}", c.join(" "))?;
        }
        for p in &t.products {
            write!(f, "  e{} e{} = ", p.i + 1, p.j + 1)?;
            write_linear(f, &p.terms)?;
            writeln!(f)?;
        }
        if self.generator != 0 {
            writeln!(f, "  generator = e{}", self.generator + 1)?;
        }
        for (k, w) in self.words.iter().enumerate() {
            writeln!(f, "  generatorword e{} = {w}", k + 1)?;
        }
        for b in &self.samples {
            write!(f, "  sample")?;
            for (k, v) in b {
                write!(f, " {k}={v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for DerivationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "derivation label={} base={} s={}", self.label, self.base, self.s)?;
        if !self.params.is_empty() {
            write!(f, " params={}", self.params.join(","))?;
        }
        if !self.exclusions.is_empty() {
            write!(f, " exclude={}", join_exprs(&self.exclusions, ";"))?;
        }
        if !self.base_binding.is_empty() {
            write!(f, " bind={}", join_binding(&self.base_binding))?;
        }
        writeln!(f)?;
        for n in &self.notes {
            writeln!(f, "  note = {n}")?;
        }
        for (k, ts) in self.nablas.iter().enumerate() {
            write!(f, "  nabla {} =", k + 1)?;
            for (i, j, c) in ts {
                write!(f, " ({},{},{c})", i + 1, j + 1)?;
            }
            writeln!(f)?;
        }
        if let Some(a) = &self.aut {
            let rows: Vec<String> = a.rows.iter().map(|r| join_exprs(r, ", ")).collect();
            writeln!(f, "  aut = {}", rows.join("; "))?;
            if !matches!(a.nondegenerate.as_literal(), Some(q) if q.is_one()) {
                writeln!(f, "  nondeg = {}", a.nondegenerate)?;
            }
        }
        for (k, e) in self.actions.iter().enumerate() {
            writeln!(f, "  action {} = {e}", k + 1)?;
        }
        for o in &self.orbits {
            let reps: Vec<String> = o.reps.iter().map(|r| join_exprs(r, ",")).collect();
            write!(f, "  orbit rep={} result={}", reps.join("|"), o.result)?;
            if !o.exclusions.is_empty() {
                write!(f, " exclude={}", join_exprs(&o.exclusions, ";"))?;
            }
            if !o.result_binding.is_empty() {
                write!(f, " bind={}", join_binding(&o.result_binding))?;
            }
            if !o.perm.is_empty() {
                let p: Vec<String> = o.perm.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, " perm={}", p.join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        for d in &self.derivations {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
