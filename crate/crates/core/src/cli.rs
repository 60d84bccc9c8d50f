//! Command-line front end. `run` is the whole program; the binary only
//! forwards the process arguments and streams.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::algebra::{Algebra, AlgebraTemplate};
use crate::catalog::{
    entry_bindings, parse_catalog, parse_expr_list, parse_matrix_rows, parse_triples, verify_all, Catalog, CatalogEntry,
    Claims, STATUS_NAMES,
};
use crate::cohomology::{b2_basis, h2, z2_basis, Cocycle};
use crate::error::Error;
use crate::exactmath::{fmt_vec, parse_scalar, Binding, Matrix, Scalar};
use crate::extensions::extend;
use crate::identities::is_terminal;
use crate::morphisms::{act_on_class, default_candidates, find_isomorphism, invariant_profile, profile_difference};
use crate::LinearMap;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "termalg", version, about = "Terminal algebras over the rationals")]
struct Cli {
    /// Worker threads for catalog verification.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Catalog-format file.
    file: PathBuf,
    /// Algebra to use when the file holds several.
    #[arg(long)]
    entry: Option<String>,
    /// Parameter value, `name=value`.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the terminal identity, nilpotency and one-generation.
    Verify {
        /// Catalog-format file; every algebra in it is checked.
        file: PathBuf,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        /// Sample bindings per parametric algebra when no value is given.
        #[arg(long, conflicts_with = "params")]
        samples: Option<usize>,
        #[arg(long, env = "TERMALG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Basis of terminal 2-cocycles.
    Z2(Input),
    /// Basis of coboundaries.
    B2(Input),
    /// Representatives of the second terminal cohomology.
    H2 {
        #[command(flatten)]
        input: Input,
        /// Preferred representative, as sparse triples; repeat in order.
        #[arg(long, value_name = "TRIPLES")]
        nabla: Vec<String>,
    },
    /// Central extension by one or more cocycles.
    Extend {
        #[command(flatten)]
        input: Input,
        /// Cocycle as sparse triples `(i,j,c) ...`.
        #[arg(long, required = true, value_name = "TRIPLES")]
        cocycle: Vec<String>,
        /// Name of the printed algebra.
        #[arg(long)]
        name: Option<String>,
    },
    /// Transform cohomology class coordinates by an automorphism.
    Act {
        #[command(flatten)]
        input: Input,
        /// Matrix rows separated by `;`; column j is the image of e_j.
        #[arg(long, value_name = "MATRIX")]
        aut: String,
        /// Class coordinates, comma separated.
        #[arg(long, value_name = "COORDS", allow_hyphen_values = true)]
        class: String,
        #[arg(long, value_name = "TRIPLES")]
        nabla: Vec<String>,
    },
    /// Search for an isomorphism between two algebras.
    Iso {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        entry_a: Option<String>,
        #[arg(long)]
        entry_b: Option<String>,
        /// Parameter of the first algebra.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        /// Parameter of the second algebra.
        #[arg(long = "param-b", value_name = "K=V")]
        params_b: Vec<String>,
        /// Random generator images tried besides the basis vectors.
        #[arg(long, default_value_t = 200)]
        candidates: usize,
        #[arg(long, env = "TERMALG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Catalog-wide operations.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Replay every entry and derivation and run the non-isomorphism sweep.
    VerifyAll {
        #[arg(long, env = "TERMALG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Cap on bindings per check.
        #[arg(long)]
        samples: Option<usize>,
        /// Write the line-delimited report here instead of standard output.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        /// Catalog file to use instead of the shipped one.
        #[arg(long, value_name = "PATH")]
        catalog: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// A check ran and did not pass: exit 1.
    Check(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: Error) -> Failure {
    Failure::Check(e.to_string())
}

/// Parse `argv` (including the program name), run the command and return
/// the exit code: 0 when everything passed, 1 on a failed check, 2 on a
/// usage or input error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        jobs => dispatch(cli.command, jobs, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\n{}", Cli::command().render_usage());
            2
        }
    }
}

fn dispatch(cmd: Command, jobs: Option<usize>, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Verify {
            file,
            params,
            samples,
            seed,
        } => cmd_verify(&file, &params, samples, seed, out),
        Command::Z2(input) => cmd_spaces(&input, Space::Z2, &[], out),
        Command::B2(input) => cmd_spaces(&input, Space::B2, &[], out),
        Command::H2 { input, nabla } => cmd_spaces(&input, Space::H2, &nabla, out),
        Command::Extend { input, cocycle, name } => cmd_extend(&input, &cocycle, name, out),
        Command::Act {
            input,
            aut,
            class,
            nabla,
        } => cmd_act(&input, &aut, &class, &nabla, out),
        Command::Iso {
            file_a,
            file_b,
            entry_a,
            entry_b,
            params,
            params_b,
            candidates,
            seed,
        } => {
            let a = load_single(&file_a, entry_a.as_deref(), &params)?;
            let b = load_single(&file_b, entry_b.as_deref(), &params_b)?;
            cmd_iso(&a, &b, candidates, seed, out)
        }
        Command::Catalog {
            command:
                CatalogCommand::VerifyAll {
                    seed,
                    samples,
                    report,
                    catalog,
                },
        } => cmd_verify_all(seed, samples, jobs, report.as_deref(), catalog.as_deref(), out),
    }
}

fn load(path: &Path) -> std::result::Result<Catalog, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_catalog(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pick<'a>(cat: &'a Catalog, name: Option<&str>, path: &Path) -> std::result::Result<&'a CatalogEntry, Failure> {
    match name {
        Some(n) => cat.get(n).map_err(usage),
        None => match cat.entries.as_slice() {
            [e] => Ok(e),
            [] => Err(Failure::Usage(format!("{}: no algebra in file", path.display()))),
            _ => Err(Failure::Usage(format!(
                "{}: several algebras in file, choose one with --entry",
                path.display()
            ))),
        },
    }
}

fn parse_params(params: &[String]) -> std::result::Result<Binding, Failure> {
    let mut b = Binding::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("parameter `{p}` is not of the form name=value")))?;
        let v = parse_scalar(v.trim()).map_err(usage)?;
        if b.insert(k.trim().to_string(), v).is_some() {
            return Err(Failure::Usage(format!("parameter `{}` given twice", k.trim())));
        }
    }
    Ok(b)
}

fn specialize(e: &CatalogEntry, b: &Binding) -> std::result::Result<Algebra, Failure> {
    if let Some(k) = b.keys().find(|k| !e.template.params.contains(k)) {
        return Err(Failure::Usage(format!("`{}` has no parameter `{k}`", e.name())));
    }
    e.template.specialize(b).map_err(usage)
}

struct Loaded {
    entry: CatalogEntry,
    binding: Binding,
    algebra: Algebra,
}

fn load_single(path: &Path, entry: Option<&str>, params: &[String]) -> std::result::Result<Loaded, Failure> {
    let cat = load(path)?;
    let e = pick(&cat, entry, path)?.clone();
    let binding = parse_params(params)?;
    let algebra = specialize(&e, &binding)?;
    Ok(Loaded {
        entry: e,
        binding,
        algebra,
    })
}

fn label(name: &str, b: &Binding) -> String {
    if b.is_empty() {
        name.to_string()
    } else {
        let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{name} [{}]", parts.join(", "))
    }
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn cmd_verify(path: &Path, params: &[String], samples: Option<usize>, seed: u64, out: &mut dyn Write) -> Outcome {
    let cat = load(path)?;
    let given = parse_params(params)?;
    writeln!(out, "seed: {seed}")?;
    let mut ok = true;
    for e in &cat.entries {
        let bindings = if e.template.params.is_empty() || !given.is_empty() {
            let mut b = Binding::new();
            for p in &e.template.params {
                let v = given
                    .get(p)
                    .ok_or_else(|| Failure::Usage(format!("`{}` needs --param {p}=...", e.name())))?;
                b.insert(p.clone(), v.clone());
            }
            vec![b]
        } else {
            entry_bindings(e, seed, samples)
        };
        for b in bindings {
            let a = specialize(e, &b)?;
            let t = is_terminal(&a);
            let nil = a.is_nilpotent();
            let one = nil && a.is_one_generated().map_err(check)?;
            let mut line = format!("{}: terminal: {}", label(e.name(), &b), yes_no(t.holds));
            if let Some(w) = t.witness_label() {
                line.push_str(&format!(" (witness {w})"));
            }
            line.push_str(&format!("; nilpotent: {}; one-generated: {}", yes_no(nil), yes_no(one)));
            writeln!(out, "{line}")?;
            let claims = e.claims;
            ok &= (t.holds || !claims.terminal) && (nil || !claims.nilpotent) && (one || !claims.one_generated);
        }
    }
    Ok(ok)
}

#[derive(Clone, Copy)]
enum Space {
    Z2,
    B2,
    H2,
}

fn eval_triples(s: &str, n: usize, b: &Binding) -> std::result::Result<Cocycle, Failure> {
    let ts = parse_triples(s).map_err(usage)?;
    let ts = ts
        .into_iter()
        .map(|(i, j, c)| Ok((i, j, c.eval(b)?)))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(usage)?;
    Cocycle::from_triples(n, &ts).map_err(usage)
}

fn cmd_spaces(input: &Input, which: Space, nablas: &[String], out: &mut dyn Write) -> Outcome {
    let l = load_single(&input.file, input.entry.as_deref(), &input.params)?;
    let n = l.algebra.dim();
    let preferred = nablas
        .iter()
        .map(|s| eval_triples(s, n, &l.binding))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let cb = h2(&l.algebra, if preferred.is_empty() { None } else { Some(&preferred) }).map_err(check)?;
    writeln!(out, "Z2={} B2={} H2={}", cb.z2().dim(), cb.b2().dim(), cb.dim())?;
    let listing: Vec<String> = match which {
        Space::Z2 => flat_listing(n, z2_basis(&l.algebra).basis())?,
        Space::B2 => flat_listing(n, b2_basis(&l.algebra).basis())?,
        Space::H2 => cb.reps().iter().map(Cocycle::to_triples_string).collect(),
    };
    for s in listing {
        writeln!(out, "{s}")?;
    }
    Ok(true)
}

fn flat_listing(n: usize, vs: &[Vec<Scalar>]) -> std::result::Result<Vec<String>, Failure> {
    vs.iter()
        .map(|v| Cocycle::from_flat(n, v).map(|c| c.to_triples_string()).map_err(check))
        .collect()
}

fn cmd_extend(input: &Input, cocycles: &[String], name: Option<String>, out: &mut dyn Write) -> Outcome {
    let l = load_single(&input.file, input.entry.as_deref(), &input.params)?;
    let n = l.algebra.dim();
    let cs = cocycles
        .iter()
        .map(|s| eval_triples(s, n, &l.binding))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let ext = extend(&l.algebra, &cs).map_err(check)?;
    let name = name.unwrap_or_else(|| format!("{}_ext", l.entry.name()));
    let entry = CatalogEntry {
        template: AlgebraTemplate::from_algebra(&ext.with_name(&name)),
        source: String::new(),
        generator: 0,
        words: Vec::new(),
        claims: Claims::default(),
        samples: Vec::new(),
        notes: Vec::new(),
    };
    write!(out, "{entry}")?;
    Ok(true)
}

fn cmd_act(input: &Input, aut: &str, class: &str, nablas: &[String], out: &mut dyn Write) -> Outcome {
    let l = load_single(&input.file, input.entry.as_deref(), &input.params)?;
    let n = l.algebra.dim();
    let eval = |es: Vec<crate::exactmath::ParamExpr>| -> std::result::Result<Vec<Scalar>, Failure> {
        es.iter().map(|e| e.eval(&l.binding)).collect::<crate::Result<Vec<_>>>().map_err(usage)
    };
    let rows = parse_matrix_rows(aut)
        .map_err(usage)?
        .into_iter()
        .map(eval)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let m = Matrix::from_rows(rows).and_then(LinearMap::new).map_err(usage)?;
    if m.dim() != n {
        return Err(Failure::Usage(format!("--aut must be {n}x{n}")));
    }
    let coords = eval(parse_expr_list(class).map_err(usage)?)?;
    let preferred = nablas
        .iter()
        .map(|s| eval_triples(s, n, &l.binding))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let cb = h2(&l.algebra, if preferred.is_empty() { None } else { Some(&preferred) }).map_err(check)?;
    if coords.len() != cb.dim() {
        return Err(Failure::Usage(format!("--class needs {} coordinates", cb.dim())));
    }
    let image = act_on_class(&l.algebra, &cb, &m, &coords).map_err(check)?;
    writeln!(out, "{}", fmt_vec(&image))?;
    Ok(true)
}

fn cmd_iso(a: &Loaded, b: &Loaded, candidates: usize, seed: u64, out: &mut dyn Write) -> Outcome {
    writeln!(out, "seed: {seed}")?;
    writeln!(
        out,
        "{} vs {}",
        label(a.entry.name(), &a.binding),
        label(b.entry.name(), &b.binding)
    )?;
    let (x, y) = (&a.algebra, &b.algebra);
    let mut found = None;
    if x.dim() == y.dim() {
        let cands = default_candidates(x.dim(), candidates, seed);
        if a.entry.words.len() == x.dim() {
            found = find_isomorphism(x, y, &a.entry.words, &cands).map_err(check)?;
        }
        if found.is_none() && b.entry.words.len() == y.dim() {
            found = find_isomorphism(y, x, &b.entry.words, &cands)
                .map_err(check)?
                .and_then(|m| m.inverse());
        }
    }
    match found {
        Some(m) => {
            writeln!(out, "certificate:")?;
            for row in m.matrix().to_rows() {
                writeln!(out, "  {}", fmt_vec(&row))?;
            }
        }
        None => {
            writeln!(out, "none found")?;
            let (p, q) = (invariant_profile(x), invariant_profile(y));
            match profile_difference(&p, &q) {
                Some(d) => writeln!(out, "profiles: distinguished by {d}")?,
                None => writeln!(out, "profiles: identical (inconclusive)")?,
            }
        }
    }
    Ok(true)
}

fn cmd_verify_all(
    seed: u64,
    samples: Option<usize>,
    jobs: Option<usize>,
    report: Option<&Path>,
    catalog: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let cat = match catalog {
        Some(p) => load(p)?,
        None => Catalog::shipped(),
    };
    let r = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(|| verify_all(&cat, seed, samples)),
        None => verify_all(&cat, seed, samples),
    };
    let text = r.to_json_lines();
    match report {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            writeln!(out, "seed: {seed}")?;
            writeln!(out, "records: {}", r.records.len())?;
            for (name, s) in STATUS_NAMES {
                writeln!(out, "{name}: {}", r.count(s))?;
            }
            for f in r.failures() {
                writeln!(
                    out,
                    "FAIL {} {} [{}]: {}",
                    f.check,
                    f.entry,
                    f.binding,
                    f.witness.as_deref().unwrap_or("")
                )?;
            }
        }
        None => write!(out, "{text}")?,
    }
    Ok(r.passed())
}
