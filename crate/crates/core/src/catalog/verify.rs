//! Replaying the catalog: per-entry property checks, per-derivation
//! checks and the pairwise non-isomorphism sweep.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{mix, sample_bindings};
use super::{Catalog, CatalogEntry, DerivationEntry, Orbit};
use crate::algebra::Algebra;
use crate::cohomology::{cocycle_witness, h2, Cocycle, CohomologyBasis};
use crate::error::{Error, Result};
use crate::exactmath::{unit_vec, Binding, ParamExpr, Scalar};
use crate::extensions::{extend, ts_status, TsStatus};
use crate::identities::is_terminal;
use crate::morphisms::{
    default_candidates, find_isomorphism, invariant_profile, is_automorphism, profile_difference,
    verify_action_formula, AutFamily, InvariantProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Note,
    Distinguished,
    CertificateIsomorphic,
    Inconclusive,
}

/// Serialized names of the statuses, in report order.
pub const STATUS_NAMES: [(&str, Status); 6] = [
    ("pass", Status::Pass),
    ("fail", Status::Fail),
    ("note", Status::Note),
    ("distinguished", Status::Distinguished),
    ("certificate-isomorphic", Status::CertificateIsomorphic),
    ("inconclusive", Status::Inconclusive),
];

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    #[serde(rename = "check-id")]
    pub check: String,
    pub entry: String,
    pub binding: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Record {
    fn new(check: impl Into<String>, entry: impl Into<String>, b: &Binding, status: Status, witness: Option<String>) -> Self {
        Record {
            check: check.into(),
            entry: entry.into(),
            binding: fmt_binding(b),
            status,
            witness,
        }
    }

    fn outcome(check: impl Into<String>, entry: impl Into<String>, b: &Binding, witness: Option<String>) -> Self {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        Record::new(check, entry, b, status, witness)
    }
}

pub(crate) fn fmt_binding(b: &Binding) -> String {
    b.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub samples: Option<usize>,
    pub records: Vec<Record>,
}

#[derive(Serialize)]
struct Header<'a> {
    report: &'a str,
    seed: u64,
    samples: Option<usize>,
}

#[derive(Serialize)]
struct Summary {
    summary: BTreeMap<&'static str, usize>,
}

impl Report {
    /// Failed checks and certificate-isomorphic pairs of distinct entries.
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records
            .iter()
            .filter(|r| matches!(r.status, Status::Fail | Status::CertificateIsomorphic))
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    /// Header line, one JSON object per record, then a summary line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let h = Header {
            report: "termalg catalog verify-all",
            seed: self.seed,
            samples: self.samples,
        };
        out.push_str(&serde_json::to_string(&h).expect("serializable"));
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        let mut summary = BTreeMap::new();
        for (name, s) in STATUS_NAMES {
            summary.insert(name, self.count(s));
        }
        out.push_str(&serde_json::to_string(&Summary { summary }).expect("serializable"));
        out.push('\n');
        out
    }
}

fn truncate(mut v: Vec<Binding>, limit: Option<usize>) -> Vec<Binding> {
    if let Some(n) = limit {
        v.truncate(n.max(1));
    }
    v
}

/// Policy bindings followed by the entry's explicit samples.
pub fn entry_bindings(e: &CatalogEntry, seed: u64, limit: Option<usize>) -> Vec<Binding> {
    let t = &e.template;
    let mut bs = sample_bindings(&t.params, seed, t.name.as_str(), |b| t.specialize(b).is_ok());
    for b in &e.samples {
        if !bs.contains(b) {
            bs.push(b.clone());
        }
    }
    truncate(bs, limit)
}

fn check_words(e: &CatalogEntry, a: &Algebra, b: &Binding) -> Option<String> {
    let n = e.dim();
    if e.words.len() != n {
        return Some("no generator words".into());
    }
    let g = unit_vec(n, e.generator);
    for (k, w) in e.words.iter().enumerate() {
        match w.eval(a, &g, b) {
            Ok(v) if v == unit_vec(n, k) => {}
            Ok(v) => {
                return Some(format!(
                    "e{} = {w} evaluates to {}",
                    k + 1,
                    crate::exactmath::fmt_vec(&v)
                ))
            }
            Err(err) => return Some(format!("e{} = {w}: {err}", k + 1)),
        }
    }
    None
}

/// Terminal, nilpotent, one-generated and generator-word checks at every
/// sample binding. `limit` caps the number of bindings.
pub fn verify_entry(e: &CatalogEntry, seed: u64, limit: Option<usize>) -> Vec<Record> {
    let name = e.name();
    let mut out = Vec::new();
    for note in &e.notes {
        out.push(Record::new("note", name, &Binding::new(), Status::Note, Some(note.clone())));
    }
    for b in entry_bindings(e, seed, limit) {
        let a = match e.template.specialize(&b) {
            Ok(a) => a,
            Err(err) => {
                out.push(Record::outcome("specialize", name, &b, Some(err.to_string())));
                continue;
            }
        };
        let rep = is_terminal(&a);
        let w = if rep.holds == e.claims.terminal {
            None
        } else {
            Some(rep.witness_label().unwrap_or_else(|| "identity holds".into()))
        };
        out.push(Record::outcome("terminal", name, &b, w));
        let nil = a.is_nilpotent();
        let w = (nil != e.claims.nilpotent).then(|| {
            let dims: Vec<String> = a.powers().iter().map(|s| s.dim().to_string()).collect();
            format!("power dimensions {}", dims.join(","))
        });
        out.push(Record::outcome("nilpotent", name, &b, w));
        let gen = a.is_one_generated();
        let w = match gen {
            Ok(g) if g == e.claims.one_generated => None,
            Ok(g) => Some(format!("one-generated = {g}")),
            Err(err) => Some(err.to_string()),
        };
        out.push(Record::outcome("one-generated", name, &b, w));
        out.push(Record::outcome("generator-words", name, &b, check_words(e, &a, &b)));
    }
    out
}

/// Everything a derivation needs at one binding of its parameters.
struct Frame {
    full: Binding,
    base: Algebra,
    nablas: Vec<Cocycle>,
}

fn eval_all(es: &[ParamExpr], b: &Binding) -> Result<Vec<Scalar>> {
    es.iter().map(|e| e.eval(b)).collect()
}

fn nonzero_all(es: &[ParamExpr], b: &Binding) -> bool {
    es.iter().all(|e| matches!(e.eval(b), Ok(v) if !v.is_zero()))
}

fn frame(d: &DerivationEntry, base: &CatalogEntry, b: &Binding) -> Result<Frame> {
    let mut full = b.clone();
    for (k, e) in &d.base_binding {
        full.insert(k.clone(), e.eval(b)?);
    }
    let a = base.template.specialize(&full)?;
    let n = a.dim();
    let nablas = d
        .nablas
        .iter()
        .map(|ts| {
            let triples = ts
                .iter()
                .map(|(i, j, c)| Ok((*i, *j, c.eval(&full)?)))
                .collect::<Result<Vec<_>>>()?;
            Cocycle::from_triples(n, &triples)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Frame { full, base: a, nablas })
}

fn block_valid(d: &DerivationEntry, base: &CatalogEntry, b: &Binding, extra: &[ParamExpr]) -> bool {
    let Ok(f) = frame(d, base, b) else { return false };
    nonzero_all(&d.exclusions, &f.full) && nonzero_all(extra, &f.full)
}

fn aut_family(d: &DerivationEntry, base: &CatalogEntry) -> Result<Option<AutFamily>> {
    let Some(a) = &d.aut else { return Ok(None) };
    let mut scope: BTreeSet<String> = d.params.iter().cloned().collect();
    scope.extend(base.template.params.iter().cloned());
    AutFamily::new(a.rows.clone(), a.nondegenerate.clone(), &scope).map(Some)
}

fn structure_diff(got: &Algebra, want: &Algebra) -> Option<String> {
    let n = want.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y) = (got.coeff(i, j, k), want.coeff(i, j, k));
                if x != y {
                    return Some(format!("coefficient of e{} in e{} e{}: extension gives {x}, table gives {y}", k + 1, i + 1, j + 1));
                }
            }
        }
    }
    None
}

fn orbit_records(
    d: &DerivationEntry,
    base: &CatalogEntry,
    cat: &Catalog,
    o: &Orbit,
    idx: usize,
    seed: u64,
    limit: Option<usize>,
) -> Vec<Record> {
    let entry = format!("{} -> {}", d.label, o.result);
    let tag = format!("{}/orbit{}", d.label, idx);
    let result = match cat.get(&o.result) {
        Ok(r) => r,
        Err(err) => return vec![Record::outcome("round-trip", entry, &Binding::new(), Some(err.to_string()))],
    };
    let bs = truncate(
        sample_bindings(&d.params, seed, &tag, |b| block_valid(d, base, b, &o.exclusions)),
        limit,
    );
    let mut out = Vec::new();
    for b in bs {
        let outcome = (|| -> Result<(Option<String>, Option<String>)> {
            let f = frame(d, base, &b)?;
            let cb = h2(&f.base, Some(&f.nablas))?;
            let mut cocycles = Vec::new();
            for rep in &o.reps {
                cocycles.push(cb.combine(&eval_all(rep, &f.full)?)?);
            }
            let ts = match ts_status(&f.base, &cb, &cocycles)? {
                TsStatus::Valid => None,
                TsStatus::DependentClasses => Some("classes are dependent".to_string()),
                TsStatus::CommonAnnihilator(k) => Some(format!("common annihilator of dimension {k}")),
            };
            let mut rb = Binding::new();
            for p in &result.template.params {
                let v = match o.result_binding.get(p) {
                    Some(e) => e.eval(&f.full)?,
                    None => f.full.get(p).cloned().ok_or_else(|| Error::MissingParameter(p.clone()))?,
                };
                rb.insert(p.clone(), v);
            }
            let want = result.template.specialize(&rb)?;
            let mut got = extend(&f.base, &cocycles)?;
            if !o.perm.is_empty() {
                got = got.permute(&o.perm)?;
            }
            Ok((ts, structure_diff(&got, &want)))
        })();
        match outcome {
            Ok((ts, diff)) => {
                out.push(Record::outcome("ts", entry.as_str(), &b, ts));
                out.push(Record::outcome("round-trip", entry.as_str(), &b, diff));
            }
            Err(err) => out.push(Record::outcome("round-trip", entry.as_str(), &b, Some(err.to_string()))),
        }
    }
    out
}

/// Cocycle, basis, automorphism, action, `T_s` and round-trip checks for
/// one derivation block.
pub fn verify_derivation(d: &DerivationEntry, cat: &Catalog, seed: u64, limit: Option<usize>) -> Vec<Record> {
    let label = d.label.as_str();
    let mut out = Vec::new();
    for note in &d.notes {
        out.push(Record::new("note", label, &Binding::new(), Status::Note, Some(note.clone())));
    }
    let base = match cat.get(&d.base) {
        Ok(b) => b,
        Err(err) => {
            out.push(Record::outcome("base", label, &Binding::new(), Some(err.to_string())));
            return out;
        }
    };
    let fam = match aut_family(d, base) {
        Ok(f) => f,
        Err(err) => {
            out.push(Record::outcome("automorphism", label, &Binding::new(), Some(err.to_string())));
            None
        }
    };
    let bs = truncate(
        sample_bindings(&d.params, seed, label, |b| block_valid(d, base, b, &[])),
        limit,
    );
    // Bindings that differ only in orbit-level parameters give the same frame.
    let mut seen: Vec<Binding> = Vec::new();
    for b in bs {
        let f = match frame(d, base, &b) {
            Ok(f) => f,
            Err(err) => {
                out.push(Record::outcome("frame", label, &b, Some(err.to_string())));
                continue;
            }
        };
        let key: Binding = f.base.binding().clone();
        if seen.contains(&key) {
            continue;
        }
        seen.push(key.clone());
        let shown = &key;
        for (i, th) in f.nablas.iter().enumerate() {
            let w = match cocycle_witness(&f.base, th) {
                Ok(None) => None,
                Ok(Some((q, v))) => Some(format!(
                    "(e{}, e{}, e{}, e{}) gives {v}",
                    q[0] + 1,
                    q[1] + 1,
                    q[2] + 1,
                    q[3] + 1
                )),
                Err(err) => Some(err.to_string()),
            };
            out.push(Record::outcome(format!("cocycle[{}]", i + 1), label, shown, w));
        }
        let cb: Option<CohomologyBasis> = match h2(&f.base, Some(&f.nablas)) {
            Ok(cb) => {
                out.push(Record::outcome("h2-basis", label, shown, None));
                Some(cb)
            }
            Err(err) => {
                out.push(Record::outcome("h2-basis", label, shown, Some(err.to_string())));
                None
            }
        };
        let Some(fam) = &fam else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &format!("{label}/aut/{}", fmt_binding(shown))));
        let mut w = None;
        for _ in 0..5 {
            match fam.random_binding(&f.full, &mut rng) {
                Ok((ab, m)) if !is_automorphism(&f.base, &m) => {
                    let vars: Binding = ab.into_iter().filter(|(k, _)| fam.params.contains(k)).collect();
                    w = Some(format!("not an automorphism at {}", fmt_binding(&vars)));
                    break;
                }
                Ok(_) => {}
                Err(err) => {
                    w = Some(err.to_string());
                    break;
                }
            }
        }
        let aut_ok = w.is_none();
        out.push(Record::outcome("automorphism", label, shown, w));
        if d.actions.is_empty() || !aut_ok {
            continue;
        }
        let Some(cb) = cb else { continue };
        let s = mix(seed, &format!("{label}/action/{}", fmt_binding(shown)));
        let w = match verify_action_formula(&f.base, &cb, fam, &d.actions, 20, s) {
            Ok(None) => None,
            Ok(Some(m)) => Some(serde_json::to_string(&m).expect("serializable")),
            Err(err) => Some(err.to_string()),
        };
        out.push(Record::outcome("action", label, shown, w));
    }
    for (i, o) in d.orbits.iter().enumerate() {
        out.extend(orbit_records(d, base, cat, o, i, seed, limit));
    }
    out
}

/// Verdict for one unordered pair of same-dimension entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepVerdict {
    Distinguished(String),
    CertificateIsomorphic(String),
    Inconclusive,
}

/// One generic binding per entry: the last policy sample, which is a
/// seeded random value for parametric entries.
fn generic(e: &CatalogEntry, seed: u64) -> Option<(Binding, Algebra)> {
    let bs = entry_bindings(e, seed, None);
    let b = bs.into_iter().rev().find(|b| e.template.specialize(b).is_ok())?;
    let a = e.template.specialize(&b).ok()?;
    Some((b, a))
}

/// Pairwise comparison of all entries of each dimension at generic
/// bindings: invariant profiles first, then a certificate search on ties.
pub fn sweep(cat: &Catalog, seed: u64, dims: &[usize]) -> Vec<Record> {
    let mut out = Vec::new();
    for &n in dims {
        let items: Vec<(&CatalogEntry, Binding, Algebra, InvariantProfile)> = cat
            .entries_of_dim(n)
            .filter_map(|e| {
                let (b, a) = generic(e, seed)?;
                let p = invariant_profile(&a);
                Some((e, b, a, p))
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..items.len())
            .flat_map(|i| (i + 1..items.len()).map(move |j| (i, j)))
            .collect();
        let recs: Vec<Record> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (ea, ba, a, pa) = &items[i];
                let (eb, bb, b, pb) = &items[j];
                let entry = format!("{} | {}", ea.name(), eb.name());
                let mut shown = ba.clone();
                for (k, v) in bb {
                    shown.insert(format!("{}.{k}", eb.name()), v.clone());
                }
                let verdict = if pa != pb {
                    SweepVerdict::Distinguished(profile_difference(pa, pb).unwrap_or_default())
                } else {
                    let cands = default_candidates(n, 50, mix(seed, &entry));
                    match find_isomorphism(a, b, &ea.words, &cands) {
                        Ok(Some(m)) => SweepVerdict::CertificateIsomorphic(m.matrix().to_string().replace('\n', "; ")),
                        _ => SweepVerdict::Inconclusive,
                    }
                };
                let (status, w) = match verdict {
                    SweepVerdict::Distinguished(w) => (Status::Distinguished, Some(w)),
                    SweepVerdict::CertificateIsomorphic(w) => (Status::CertificateIsomorphic, Some(w)),
                    SweepVerdict::Inconclusive => (Status::Inconclusive, None),
                };
                Record::new("iso-sweep", entry, &shown, status, w)
            })
            .collect();
        out.extend(recs);
    }
    out
}

enum Task<'a> {
    Entry(&'a CatalogEntry),
    Derivation(&'a DerivationEntry),
    Sweep,
}

/// Every entry, every derivation and the sweep, merged in catalog order.
pub fn verify_all(cat: &Catalog, seed: u64, limit: Option<usize>) -> Report {
    let mut tasks: Vec<Task> = cat.entries.iter().map(Task::Entry).collect();
    tasks.extend(cat.derivations.iter().map(Task::Derivation));
    tasks.push(Task::Sweep);
    let dims: Vec<usize> = cat.count_by_dim().into_keys().collect();
    let parts: Vec<Vec<Record>> = tasks
        .par_iter()
        .map(|t| match t {
            Task::Entry(e) => verify_entry(e, seed, limit),
            Task::Derivation(d) => verify_derivation(d, cat, seed, limit),
            Task::Sweep => sweep(cat, seed, &dims),
        })
        .collect();
    Report {
        seed,
        samples: limit,
        records: parts.into_iter().flatten().collect(),
    }
}
