//! The algebra catalog: a line-oriented text format for parametric
//! multiplication tables and extension derivations, the shipped data
//! file, and the harness that replays every derivation.

mod format;
mod sampling;
mod verify;
pub mod words;

use std::collections::BTreeMap;

pub use format::{parse_catalog, parse_expr_list, parse_matrix_rows, parse_triples, split_linear};
pub use sampling::{sample_bindings, SAMPLE_VALUES};
pub use verify::{
    entry_bindings, sweep, verify_all, verify_derivation, verify_entry, Record, Report, Status, SweepVerdict,
    STATUS_NAMES,
};

use crate::algebra::AlgebraTemplate;
use crate::error::{Error, Result};
use crate::exactmath::{Binding, ParamExpr};
use words::Word;

const SHIPPED: &str = include_str!("../../data/catalog.alg");

/// Properties an entry is claimed to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claims {
    pub terminal: bool,
    pub nilpotent: bool,
    pub one_generated: bool,
}

impl Default for Claims {
    fn default() -> Self {
        Claims {
            terminal: true,
            nilpotent: true,
            one_generated: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub template: AlgebraTemplate,
    pub source: String,
    /// Index of the basis vector used as generator.
    pub generator: usize,
    /// `words[k]` expresses `e_{k+1}` in the generator.
    pub words: Vec<Word>,
    pub claims: Claims,
    /// Bindings listed explicitly in the file, checked against exclusions.
    pub samples: Vec<Binding>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.template.name
    }

    pub fn dim(&self) -> usize {
        self.template.dim
    }
}

/// Parametric automorphism matrix as written in a derivation block.
#[derive(Clone, Debug, PartialEq)]
pub struct AutSpec {
    pub rows: Vec<Vec<ParamExpr>>,
    pub nondegenerate: ParamExpr,
}

/// One orbit representative and the table it should produce.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    /// `s` coordinate vectors over the `nabla` basis.
    pub reps: Vec<Vec<ParamExpr>>,
    pub exclusions: Vec<ParamExpr>,
    pub result: String,
    pub result_binding: BTreeMap<String, ParamExpr>,
    /// `perm[i]` is the position of the extension's `e_{i+1}` in the result.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationEntry {
    pub label: String,
    pub base: String,
    pub s: usize,
    pub params: Vec<String>,
    pub exclusions: Vec<ParamExpr>,
    pub base_binding: BTreeMap<String, ParamExpr>,
    /// Sparse `(i, j, coefficient)` triples, 0-based.
    pub nablas: Vec<Vec<(usize, usize, ParamExpr)>>,
    pub aut: Option<AutSpec>,
    pub actions: Vec<ParamExpr>,
    pub orbits: Vec<Orbit>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub derivations: Vec<DerivationEntry>,
}

impl Catalog {
    /// The catalog bundled with the crate.
    pub fn shipped() -> Catalog {
        parse_catalog(SHIPPED).expect("bundled catalog parses")
    }

    pub fn shipped_text() -> &'static str {
        SHIPPED
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entry(name).ok_or_else(|| Error::UnknownReference(name.to_string()))
    }

    pub fn entries_of_dim(&self, n: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.dim() == n)
    }

    pub fn count_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.dim()).or_insert(0) += 1;
        }
        m
    }
}
