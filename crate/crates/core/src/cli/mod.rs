//! Command-line front end.

pub mod table;

use crate::catalog::{build_with_cap, imprimitive_sweep, CatalogError, CatalogKey};
use crate::coinv::{self, CoinvError};
use crate::cyclo::RootOfUnity;
use crate::groups::{GroupError, ReflectionCoset, ReflectionGroup, DEFAULT_CAP};
use crate::harmonics::{Harmonics, HarmonicsError};
use crate::linalg::CycMatrix;
use crate::molien::{ModuleRep, Molien, MolienError};
use crate::regularity::{self, Identity, RegularityError};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

pub const CACHE_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "refcosets", version, about = "Invariants and regular eigenvalues of reflection cosets")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration cap on group elements.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Working conductor for Galois-indexed identities; a multiple of the
    /// coset's conductor.
    #[arg(long, global = true)]
    pub conductor: Option<u32>,
    /// Directory for enumerated groups.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the named catalog keys.
    Catalog,
    /// M-factors (d, eps) of a coset.
    Factors {
        key: String,
        /// V, Vdual, ext<p>, galois:<k>, galois-dual:<k>, trivial.
        #[arg(long, default_value = "V")]
        module: String,
    },
    /// Regular eigenvalues.
    Regular {
        key: String,
        /// A single root, as k/n or z<n>^<k>.
        #[arg(long)]
        zeta: Option<String>,
        /// Show an eigenspace witness for each regular root.
        #[arg(long)]
        oracle: bool,
    },
    /// Polynomial identities.
    Verify {
        key: String,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        identity: Option<String>,
        #[arg(long, default_value_t = 1)]
        sigma: i64,
        /// Every identity for every Galois sigma, and three-way regularity.
        #[arg(long)]
        all: bool,
    },
    /// Degrees, codegrees and regular sets with reference comparison.
    Table {
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
        #[arg(long, default_value_t = 5000)]
        max_order: u64,
        #[arg(long, default_value_t = 12)]
        max_conductor: u32,
    },
    /// Checks on harmonic polynomials.
    Harmonics {
        key: String,
        #[arg(long, value_enum)]
        check: HarmonicsCheck,
    },
    /// Graded character of the coinvariant algebra.
    Coinv {
        key: String,
        #[arg(long, requires = "gamma")]
        induction: bool,
        /// Conjugacy class index of gamma.
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Imprimitive,
    Named,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HarmonicsCheck {
    Gutkin,
    Discriminant,
    Wellgen,
    Factors,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

macro_rules! compute_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                CliError::Compute(e.to_string())
            }
        }
    )*};
}
compute_from!(GroupError, MolienError, RegularityError, HarmonicsError, CoinvError, table::TableError);

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> CliError {
        match e {
            CatalogError::UnknownKey(_) | CatalogError::InvalidParameters(_) => CliError::Usage(e.to_string()),
            e => CliError::Compute(e.to_string()),
        }
    }
}

/// Result of one command: text, JSON, and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Outcome {
    fn new(text: String, json: Value, ok: bool) -> Outcome {
        Outcome { text, json, ok }
    }
}

/// Parse and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let wants_json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if wants_json {
                let _ = writeln!(out, "{}", json!({"error": {"kind": "usage", "message": e.to_string()}}));
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return 2;
        }
    };
    if let Some(n) = cli.threads {
        // a global pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(o) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"));
            } else {
                let _ = write!(out, "{}", o.text);
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let (kind, code) = match e {
                CliError::Usage(_) => ("usage", 2),
                CliError::Compute(_) => ("compute", 1),
            };
            if cli.json {
                let _ = writeln!(out, "{}", json!({"error": {"kind": kind, "message": e.to_string()}}));
            } else {
                let _ = writeln!(out, "error: {e}");
            }
            code
        }
    }
}

fn parse_key(s: &str) -> Result<CatalogKey, CliError> {
    Ok(s.parse::<CatalogKey>()?)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    key: String,
    dim: usize,
    generators: Vec<CycMatrix>,
    elements: Vec<CycMatrix>,
    gamma: CycMatrix,
}

fn cache_path(dir: &Path, key: &CatalogKey) -> PathBuf {
    let name: String = key.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{name}.json"))
}

fn load_cached(path: &Path, key: &CatalogKey, cap: usize) -> Option<ReflectionCoset> {
    let f: CacheFile = serde_json::from_slice(&std::fs::read(path).ok()?).ok()?;
    if f.format != "refcosets-group" || f.version != CACHE_VERSION || f.key != key.to_string() {
        return None;
    }
    if f.elements.len() as u64 != key.expected_order() || f.elements.len() > cap {
        return None;
    }
    let g = ReflectionGroup::from_element_list(f.dim, f.generators, f.elements).ok()?;
    ReflectionCoset::new(Arc::new(g), f.gamma, u64::MAX).ok()
}

fn load_coset(cli: &Cli, key: &CatalogKey) -> Result<ReflectionCoset, CliError> {
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let Some(dir) = &cli.cache else {
        return Ok(build_with_cap(key, cap)?);
    };
    let path = cache_path(dir, key);
    if let Some(c) = load_cached(&path, key, cap) {
        return Ok(c);
    }
    let c = build_with_cap(key, cap)?;
    let f = CacheFile {
        format: "refcosets-group".into(),
        version: CACHE_VERSION,
        key: key.to_string(),
        dim: c.group.dim,
        generators: c.group.generators.clone(),
        elements: c.group.elements.clone(),
        gamma: c.gamma.clone(),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Compute(format!("cache: {e}")))?;
    let body = serde_json::to_vec(&f).expect("serializable");
    std::fs::write(&path, body).map_err(|e| CliError::Compute(format!("cache: {e}")))?;
    Ok(c)
}

fn working_conductor(cli: &Cli, coset: &ReflectionCoset) -> Result<u32, CliError> {
    let n = coset.conductor();
    match cli.conductor {
        None => Ok(n),
        Some(m) if m > 0 && m % n == 0 => Ok(m),
        Some(m) => Err(CliError::Usage(format!("--conductor {m} is not a multiple of the coset conductor {n}"))),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Catalog => Ok(catalog_cmd()),
        Command::Factors { key, module } => {
            let key = parse_key(key)?;
            let m: ModuleRep = module.parse().map_err(CliError::Usage)?;
            let coset = load_coset(cli, &key)?;
            let mol = Molien::new(&coset);
            let fs = if matches!(m, ModuleRep::DefiningV) { mol.v_factors()? } else { mol.module_factors(&m)? };
            let text = format!("{key} {m}: {}\n", fs.render());
            Ok(Outcome::new(text, json!({"key": key.to_string(), "module": m.to_string(), "factors": fs}), true))
        }
        Command::Regular { key, zeta, oracle } => {
            let key = parse_key(key)?;
            let z = match zeta {
                Some(s) => Some(RootOfUnity::parse(s).ok_or_else(|| CliError::Usage(format!("bad root of unity {s}")))?),
                None => None,
            };
            let coset = load_coset(cli, &key)?;
            let mol = Molien::new(&coset);
            regular_cmd(&mol, &key, z, *oracle)
        }
        Command::Verify { key, identity, sigma, all } => {
            let key = parse_key(key)?;
            let ids = match identity {
                Some(name) => {
                    vec![Identity::parse(name, *sigma).ok_or_else(|| CliError::Usage(format!("unknown identity {name}")))?]
                }
                None => Vec::new(),
            };
            let coset = load_coset(cli, &key)?;
            let n = working_conductor(cli, &coset)?;
            if num_integer::gcd(sigma.rem_euclid(n as i64), n as i64) != 1 {
                return Err(CliError::Usage(format!("sigma {sigma} is not a unit mod {n}")));
            }
            let ids = if *all { Identity::suite(n) } else { ids };
            let mol = Molien::new(&coset);
            verify_cmd(&mol, &key, &ids, *all)
        }
        Command::Table { family, max_order, max_conductor } => {
            let mut keys = Vec::new();
            if matches!(family, Family::Imprimitive | Family::All) {
                keys.extend(imprimitive_sweep(*max_order, *max_conductor));
            }
            if matches!(family, Family::Named | Family::All) {
                keys.extend(CatalogKey::named_twisted());
            }
            let cap = cli.cap.unwrap_or(DEFAULT_CAP);
            let rows: Vec<table::TableRow> =
                keys.par_iter().map(|k| table::table_row(k, cap)).collect::<Result<_, _>>()?;
            Ok(table_outcome(&rows))
        }
        Command::Harmonics { key, check } => {
            let key = parse_key(key)?;
            let coset = load_coset(cli, &key)?;
            harmonics_cmd(&Harmonics::new(&coset), &key, *check)
        }
        Command::Coinv { key, induction, gamma, k } => {
            let key = parse_key(key)?;
            let coset = load_coset(cli, &key)?;
            let g = coset.group.clone();
            if *induction {
                let c = gamma.expect("clap enforces --gamma");
                let class = g.classes.get(c).ok_or_else(|| CliError::Usage(format!("class index {c} out of range (0..{})", g.classes.len())))?;
                let (_, v) = coinv::default_eigenvector(&g, class.rep)?;
                let rep = coinv::induction_check(&g, class.rep, &v, *k)?;
                let text = format!(
                    "{key} class {c} (element {}), zeta {}, k {}: |G_v| = {}, |K| = {}\n  lhs: {}\n  rhs: {}\n  {}\n",
                    rep.gamma,
                    rep.zeta,
                    rep.k,
                    rep.parabolic_order,
                    rep.subgroup_order,
                    render_cf(&rep.lhs),
                    render_cf(&rep.rhs),
                    pass(rep.holds)
                );
                let holds = rep.holds;
                Ok(Outcome::new(text, json!({"key": key.to_string(), "class": c, "induction": rep}), holds))
            } else {
                coinv_cmd(&g, &key)
            }
        }
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn render_cf(c: &coinv::ClassFunction) -> String {
    c.values.iter().map(|x| x.render()).collect::<Vec<_>>().join(" ")
}

fn catalog_cmd() -> Outcome {
    let mut keys: Vec<CatalogKey> = CatalogKey::named_twisted();
    for s in ["G(4,2,2;zeta=2)", "G(3,3,3)", "G(4,2,2)", "A3", "B3", "D4", "F4", "H3", "H4", "G2", "I2(5)", "G5", "G6", "G7", "swap(G(3,1,2))"] {
        keys.push(s.parse().expect("catalog key"));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for k in &keys {
        text.push_str(&format!("{:<18} rank {}  |G| = {}\n", k.to_string(), k.rank(), k.expected_order()));
        rows.push(json!({"key": k.to_string(), "rank": k.rank(), "order": k.expected_order()}));
    }
    text.push_str("family keys: G(m,p,r) and G(m,p,r;zeta=e') with e' | p; A<n>, B<n>, D<n>, F4, G2, H3, H4, I2(m); G5, G6, G7\n");
    Outcome::new(text, Value::Array(rows), true)
}

fn regular_cmd(mol: &Molien, key: &CatalogKey, z: Option<RootOfUnity>, with_oracle: bool) -> Result<Outcome, CliError> {
    if let Some(z) = z {
        let rep = regularity::report(mol, &z)?;
        let mut text = format!(
            "{key} zeta {z}: {}\n  criterion {}, multisets {}, oracle {}\n",
            if rep.criterion { "regular" } else { "not regular" },
            rep.criterion,
            rep.multiset_equal,
            rep.oracle.is_some()
        );
        if let (true, Some(w)) = (with_oracle, &rep.oracle) {
            text.push_str(&format!("  witness element {} vector {}\n", w.element, render_vec(&w.vector)));
        }
        return Ok(Outcome::new(text, json!({"key": key.to_string(), "report": rep}), true));
    }
    let rs = regularity::regular_orders(mol)?;
    let orders: Vec<String> = rs.orders.iter().map(|o| o.to_string()).collect();
    let mut text = format!("orders: {}\n", orders.join(" "));
    text.push_str(&format!("regular: {}\n", table::describe(&rs)));
    let mut witnesses = Vec::new();
    if with_oracle {
        for z in &rs.roots {
            let w = regularity::oracle(mol, z).ok_or_else(|| CliError::Compute(format!("no witness for {z}")))?;
            text.push_str(&format!("  {z}: element {} vector {}\n", w.element, render_vec(&w.vector)));
            witnesses.push(w);
        }
    }
    let j = json!({
        "key": key.to_string(),
        "exponent": rs.exponent,
        "orders": rs.orders,
        "roots": rs.roots,
        "witnesses": if with_oracle { serde_json::to_value(&witnesses).expect("serializable") } else { Value::Null },
    });
    Ok(Outcome::new(text, j, true))
}

fn render_vec(v: &[crate::cyclo::Cyclotomic]) -> String {
    format!("[{}]", v.iter().map(|x| x.render()).collect::<Vec<_>>().join(", "))
}

fn verify_cmd(mol: &Molien, key: &CatalogKey, ids: &[Identity], all: bool) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut ok = true;
    for id in ids {
        let rep = regularity::verify_identity(mol, id)?;
        text.push_str(&format!("{key} {}: {}\n", rep.name, pass(rep.holds)));
        if !rep.holds {
            text.push_str(&format!("  lhs: {}\n  rhs: {}\n", rep.lhs, rep.rhs));
        }
        ok &= rep.holds;
        reports.push(rep);
    }
    let mut j = json!({"key": key.to_string(), "identities": reports});
    if all {
        // counting criterion and oracle over the full candidate universe;
        // the ideal route as well for rank <= 3
        let (orders, routes) = if mol.coset.dim() <= 3 {
            let h = Harmonics::new(&mol.coset);
            (h.three_way_regularity()?.orders, "criterion, oracle, ideal")
        } else {
            (regularity::regular_orders(mol)?.orders, "criterion, oracle")
        };
        let o: Vec<String> = orders.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("{key} regularity ({routes}): orders {}\n", o.join(" ")));
        j["regular_orders"] = json!(orders);
        j["regularity_routes"] = json!(routes);
    }
    j["holds"] = json!(ok);
    Ok(Outcome::new(text, j, ok))
}

fn table_outcome(rows: &[table::TableRow]) -> Outcome {
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            let pairs = |v: &[table::DegreeEntry]| v.iter().map(|e| format!("{}:{}", e.d, e.eps)).collect::<Vec<_>>().join(" ");
            let status = match r.agrees {
                Some(true) => "ok",
                Some(false) => "DIFFERS",
                None => "-",
            };
            [r.key.clone(), pairs(&r.degrees), pairs(&r.codegrees), r.regular.clone(), status.to_string()]
        })
        .collect();
    let header = ["coset", "degrees d:eps", "codegrees d*:eps*", "regular", "ref"];
    let mut w = header.map(|h| h.len());
    for c in &cells {
        for i in 0..5 {
            w[i] = w[i].max(c[i].len());
        }
    }
    let line = |c: &[String]| {
        let mut s = String::new();
        for i in 0..5 {
            s.push_str(&format!("{:<width$}  ", c[i], width = w[i]));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut text = line(&header.map(String::from));
    for (c, r) in cells.iter().zip(rows) {
        text.push_str(&line(c));
        for f in r.flags.iter().filter(|f| f.as_str() != "no reference row") {
            text.push_str(&format!("    ! {f}\n"));
        }
    }
    Outcome::new(text, serde_json::to_value(rows).expect("serializable"), true)
}

fn harmonics_cmd(h: &Harmonics, key: &CatalogKey, check: HarmonicsCheck) -> Result<Outcome, CliError> {
    let modules = [ModuleRep::v(), ModuleRep::vdual()];
    match check {
        HarmonicsCheck::Gutkin => {
            let mut text = String::new();
            let mut j = Vec::new();
            for m in &modules {
                let lambda = h.gutkin_check(m)?;
                let n = crate::molien::n_of_module(&h.mol, m)?;
                text.push_str(&format!("{key} {m}: wedge of basis = {} * Psi, N = {n}\n", lambda.render()));
                j.push(json!({"module": m.to_string(), "lambda": lambda, "n": n}));
            }
            Ok(Outcome::new(text, json!({"key": key.to_string(), "gutkin": j}), true))
        }
        HarmonicsCheck::Discriminant => {
            let d = h.disc_matrix(&ModuleRep::v())?;
            // variables of the expression are the basic invariants
            let in_basics = format!("{:?}", d.delta_expr).replace('X', "P");
            let text = format!(
                "{key}: Delta_V = {} * Psi_V Psi_V*; entries satisfy gamma(M_ij) = eps_i eps*_j M_ij\n  Delta in basics: {}\n",
                d.lambda.render(),
                in_basics
            );
            Ok(Outcome::new(text, json!({"key": key.to_string(), "lambda": d.lambda, "delta_in_basics": in_basics}), true))
        }
        HarmonicsCheck::Wellgen => {
            let w = h.wellgen_structure()?;
            let fails = [w.matrix_check, w.top_degree_sum, w.sigma_matching, w.top_regular].iter().any(|x| *x == Some(false))
                || w.monic.iter().any(|(_, b)| !b)
                || w.degree_condition != w.well_generated;
            let opt = |x: Option<bool>| x.map_or("n/a".to_string(), |b| pass(b).to_string());
            let text = format!(
                "{key}: degree condition {}, minimal generating reflections {}, well-generated {}\n  disc matrix {}, r d_r = N + N* {}, sigma matching {}, top regular {}, monic {:?}\n",
                w.degree_condition,
                w.min_generating_reflections,
                w.well_generated,
                opt(w.matrix_check),
                opt(w.top_degree_sum),
                opt(w.sigma_matching),
                opt(w.top_regular),
                w.monic
            );
            Ok(Outcome::new(text, json!({"key": key.to_string(), "wellgen": w}), !fails))
        }
        HarmonicsCheck::Factors => {
            let mut text = String::new();
            let mut j = Vec::new();
            for m in &modules {
                let fs = h.harmonic_module_basis(m)?.factor_set();
                text.push_str(&format!("{key} {m}: {} (agrees with the Molien route)\n", fs.render()));
                j.push(json!({"module": m.to_string(), "factors": fs}));
            }
            Ok(Outcome::new(text, json!({"key": key.to_string(), "harmonic_factors": j}), true))
        }
    }
}

fn coinv_cmd(g: &Arc<ReflectionGroup>, key: &CatalogKey) -> Result<Outcome, CliError> {
    let degrees = coinv::group_degrees(g)?;
    let gc = coinv::coinvariant_character(g, &degrees);
    let regular = coinv::regular_character_check(g, &gc);
    let mut text = format!("{key}: dims {:?}\n  regular character {}\n", gc.dims(), pass(regular));
    let mut ok = regular;
    let mut eq = Vec::new();
    let mut divisors: Vec<u64> = (1..=*degrees.iter().max().unwrap_or(&1) as u64).filter(|d| degrees.iter().any(|&x| x as u64 % d == 0)).collect();
    divisors.dedup();
    for d in divisors {
        let holds = (0..d as i64).all(|k| coinv::eqdims_check(&gc, &degrees, d, k, 0).unwrap_or(false));
        text.push_str(&format!("  eqdims d = {d}: {}\n", pass(holds)));
        ok &= holds;
        eq.push(json!({"d": d, "holds": holds}));
    }
    Ok(Outcome::new(text, json!({"key": key.to_string(), "character": gc, "regular_character": regular, "eqdims": eq}), ok))
}
