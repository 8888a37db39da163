// SPDX-License-Identifier: MIT OR Apache-2.0
//! `g2cert` command line.
//!
//! Exit status: 0 on success, 1 when a verification fails or a result
//! disagrees with the catalog, 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g2cert::catalog::{Catalog, CatalogError, Method, Status};
use g2cert::report::{Entry, RunReport, VerifiedStatus};
use g2cert::runner::{self, RunOptions, Scope, SearchMode, Task};
use g2cert_core::scalar::{format_rat, parse_rat, Rat};

#[derive(Parser, Debug)]
#[command(name = "g2cert", version, about = "Exact checking of purely coclosed G2-structures on 7-dimensional nilpotent Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Database directory.
    #[arg(long, global = true, env = "G2CERT_DB")]
    db: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timing fields so output is byte-identical between runs.
    #[arg(long, global = true)]
    canonical: bool,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug, Default)]
struct Select {
    /// Every record.
    #[arg(long)]
    all: bool,
    /// Indecomposable records of this nilpotency step.
    #[arg(long)]
    step: Option<usize>,
    /// Decomposable records.
    #[arg(long)]
    decomposable: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the purely coclosed certificate of one algebra.
    Verify {
        /// Algebra name, e.g. 37B or 147E.
        name: String,
        /// Family parameter as p/q.
        #[arg(long)]
        param: Option<String>,
    },
    /// Find or check an obstruction certificate.
    Obstruct {
        /// Algebra name; omit with --all to cover every claimed obstruction.
        name: Option<String>,
        /// Family parameter as p/q.
        #[arg(long)]
        param: Option<String>,
        /// Restrict to one method: contraction, ideal or lambda.
        #[arg(long)]
        method: Option<String>,
        /// File of certificate lines in obstructions.db format to check.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Ignore pinned certificates and search afresh.
        #[arg(long)]
        search: bool,
        /// Every algebra claimed to have no coclosed structure.
        #[arg(long)]
        all: bool,
    },
    /// Verify or obstruct every record in scope.
    Classify {
        /// Restrict to these algebras.
        names: Vec<String>,
        #[command(flatten)]
        select: Select,
        /// Ignore pinned certificates and search afresh.
        #[arg(long)]
        search: bool,
    },
    /// Chevalley-Eilenberg cohomology.
    Cohomology {
        /// Algebra name.
        name: String,
        /// Family parameter as p/q.
        #[arg(long)]
        param: Option<String>,
        /// Degree; all Betti numbers when omitted.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// List catalog records.
    List {
        #[command(flatten)]
        select: Select,
        /// Only records with this status tag, e.g. pure or no-coclosed.
        #[arg(long)]
        status: Option<String>,
    },
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

enum Failure {
    Input(String),
    Check,
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn parse_param(p: &Option<String>) -> Result<Option<Rat>, Failure> {
    match p {
        None => Ok(None),
        Some(s) => parse_rat(s).map(Some).ok_or_else(|| Failure::Input(format!("bad parameter {s:?}; expected p/q"))),
    }
}

fn scope(select: &Select, names: &[String]) -> Scope {
    if !names.is_empty() {
        Scope::Names(names.to_vec())
    } else if let Some(k) = select.step {
        Scope::Step(k)
    } else if select.decomposable {
        Scope::Decomposable
    } else {
        Scope::All
    }
}

fn emit(report: &mut RunReport, g: &Global) {
    if g.canonical {
        report.canonicalize();
    }
    if g.json {
        out!("{}", report.to_json());
    } else {
        out!("{}", report.to_text().trim_end());
    }
}

fn verify_text(e: &Entry) -> String {
    let mut out = format!("{} [{}]\n", e.display_name(), e.row.as_deref().unwrap_or("-"));
    if let Some(f) = &e.flags {
        for (k, v) in f.headline() {
            out.push_str(&format!("  {k:<13} {}\n", if v { "ok" } else { "FAIL" }));
        }
        out.push_str(&format!("  {:<13} {}\n", "dual_closed", if f.dual_closed { "ok" } else { "FAIL" }));
        out.push_str(&format!("  {:<13} {}\n", "pure", if f.pure { "ok" } else { "FAIL" }));
    }
    if let Some(l) = &e.lambda {
        out.push_str(&format!("  lambda        {l}\n"));
    }
    if let Some(r) = &e.reading {
        out.push_str(&format!("  reading       {r}\n"));
    }
    if let Some(p) = &e.psi_plus {
        out.push_str(&format!("  psi+          {p}\n"));
    }
    if let Some(m) = &e.metric {
        let rows: Vec<String> = m.iter().map(|r| r.join(",")).collect();
        out.push_str(&format!("  metric        {}\n", rows.join("; ")));
    }
    if let Some(d) = &e.detail {
        out.push_str(&format!("  detail        {d}\n"));
    }
    let verdict = match e.status_verified {
        VerifiedStatus::PureVerified => "PASS",
        VerifiedStatus::ExternalCitation => "EXTERNAL_CITATION",
        _ => "FAIL",
    };
    out.push_str(verdict);
    out
}

fn cmd_verify(cat: &Catalog, name: &str, param: Option<Rat>, g: &Global) -> Result<(), Failure> {
    let rec = cat.lookup(name)?;
    let entry = match rec.status {
        Status::CoclosedOnlyExternal | Status::NoCoclosedExternal => runner::external(rec),
        Status::NoCoclosed(_) => {
            return Err(Failure::Input(format!("{} has no certificate (status {}); use obstruct", rec.name, rec.status.tag())))
        }
        Status::Pure => {
            cat.instantiate(&rec.name, param.as_ref())?;
            let row = cat.certificate_at(&rec.name, param.as_ref()).ok_or_else(|| {
                Failure::Input(format!(
                    "no certificate row of {} covers parameter {}",
                    rec.name,
                    param.as_ref().map(format_rat).unwrap_or_default()
                ))
            })?;
            runner::verify_row(rec, row, param.as_ref())
        }
    };
    let ok = entry.status_verified != VerifiedStatus::Mismatch;
    let mut report = RunReport::new(vec![entry]);
    if g.json {
        emit(&mut report, g);
    } else {
        out!("{}", verify_text(&report.entries[0]));
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_obstruct(
    cat: &Catalog,
    name: Option<&str>,
    param: Option<Rat>,
    method: Option<Method>,
    cert: Option<&PathBuf>,
    opts: &RunOptions,
    all: bool,
    g: &Global,
) -> Result<(), Failure> {
    if let Some(path) = cert {
        let name = name.ok_or_else(|| Failure::Input("--cert needs an algebra name".into()))?;
        return check_cert_file(cat, name, param, path, g);
    }
    let tasks: Vec<Task> = match (name, all) {
        (Some(n), false) => {
            let rec = cat.lookup(n)?;
            if rec.is_family() {
                cat.instantiate(&rec.name, param.as_ref())?;
            }
            vec![Task::Obstruct { name: rec.name.clone(), param, method }]
        }
        (None, true) => runner::plan(cat, &Scope::All)
            .into_iter()
            .filter_map(|t| match t {
                Task::Obstruct { name, param, method: m } => Some(Task::Obstruct { name, param, method: method.or(m) }),
                _ => None,
            })
            .collect(),
        _ => return Err(Failure::Input("give an algebra name or --all".into())),
    };
    let mut report = runner::run(cat, &tasks, g.jobs, opts);
    if g.json {
        emit(&mut report, g);
    } else {
        for e in &report.entries {
            match (&e.certificate, e.status_verified) {
                (Some(c), VerifiedStatus::ObstructedVerified) => out!("{c}"),
                _ => out!("# {}: {}", e.display_name(), e.detail.as_deref().unwrap_or("failed")),
            }
        }
    }
    if report.entries.iter().all(|e| e.status_verified == VerifiedStatus::ObstructedVerified) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn check_cert_file(cat: &Catalog, name: &str, param: Option<Rat>, path: &PathBuf, g: &Global) -> Result<(), Failure> {
    let rec = cat.lookup(name)?;
    let alg = if rec.is_family() { cat.instantiate(&rec.name, param.as_ref())? } else { rec.algebra(None)? };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut any = false;
    let mut all_ok = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let pinned =
            g2cert::catalog::parse_obstruction_line(line).map_err(|m| Failure::Input(format!("{}:{}: {m}", path.display(), i + 1)))?;
        if pinned.name != rec.name {
            continue;
        }
        any = true;
        let verdict = runner::check_pinned(&alg, &pinned, 200);
        if g.json {
            let v = serde_json::json!({ "certificate": pinned.to_line(), "verified": verdict.is_ok(), "detail": verdict.as_ref().err() });
            out!("{}", serde_json::to_string_pretty(&v).expect("json"));
        } else {
            match &verdict {
                Ok(()) => out!("OBSTRUCTED_VERIFIED {}", pinned.to_line()),
                Err(m) => out!("REJECTED {} ({m})", pinned.to_line()),
            }
        }
        all_ok &= verdict.is_ok();
    }
    if !any {
        return Err(Failure::Input(format!("{} holds no certificate for {}", path.display(), rec.name)));
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_cohomology(cat: &Catalog, name: &str, param: Option<Rat>, degree: Option<usize>, g: &Global) -> Result<(), Failure> {
    let rec = cat.lookup(name)?;
    let alg = if rec.is_family() || param.is_some() { cat.instantiate(&rec.name, param.as_ref())? } else { rec.algebra(None)? };
    match degree {
        Some(k) if k <= alg.dim() => {
            let reps: Vec<String> = alg.cohomology_representatives(k).iter().map(|f| f.to_text()).collect();
            if g.json {
                let v = serde_json::json!({ "name": alg.name(), "degree": k, "dimension": reps.len(), "representatives": reps });
                out!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                out!("H^{k}({}) has dimension {}", alg.name(), reps.len());
                for r in reps {
                    out!("  {r}");
                }
            }
        }
        Some(k) => return Err(Failure::Input(format!("degree {k} exceeds the dimension {}", alg.dim()))),
        None => {
            let betti = alg.betti_numbers();
            if g.json {
                let v = serde_json::json!({ "name": alg.name(), "betti": betti });
                out!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                let b: Vec<String> = betti.iter().map(|b| b.to_string()).collect();
                out!("{} betti numbers: {}", alg.name(), b.join(" "));
            }
        }
    }
    Ok(())
}

fn cmd_list(cat: &Catalog, select: &Select, status: Option<&str>, g: &Global) -> Result<(), Failure> {
    let sc = scope(select, &[]);
    let mut rows: Vec<(String, String, String, String)> = Vec::new();
    for rec in &cat.algebras {
        let in_scope = match &sc {
            Scope::Step(k) => !rec.decomposable && rec.step == *k,
            Scope::Decomposable => rec.decomposable,
            _ => true,
        };
        if !in_scope {
            continue;
        }
        if status.is_none_or(|s| s == rec.status.kind() || s == rec.status.tag()) {
            rows.push((rec.name.clone(), rec.group(), rec.status.tag(), rec.structure_text.clone()));
        }
        for (v, m) in &rec.obstructed {
            let tag = Status::NoCoclosed(*m);
            if status.is_none_or(|s| s == tag.kind() || s == tag.tag()) {
                rows.push((format!("{}({})", rec.name, format_rat(v)), rec.group(), tag.tag(), rec.structure_text.clone()));
            }
        }
    }
    if g.json {
        let v: Vec<_> =
            rows.iter().map(|(n, gr, s, eq)| serde_json::json!({ "name": n, "group": gr, "status": s, "structure": eq })).collect();
        out!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        for (n, gr, s, eq) in rows {
            out!("{n:<14} {gr:<13} {s:<32} {eq}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let dir = g.db.clone().unwrap_or_else(g2cert::catalog::default_db_dir);
    let cat = Catalog::load(&dir)?;
    let mut opts = RunOptions { timing: !g.canonical, ..RunOptions::default() };
    match &cli.command {
        Command::Verify { name, param } => cmd_verify(&cat, name, parse_param(param)?, g),
        Command::Obstruct { name, param, method, cert, search, all } => {
            let method = match method {
                Some(m) => Some(Method::from_tag(m).ok_or_else(|| Failure::Input(format!("unknown method {m:?}")))?),
                None => None,
            };
            if *search {
                opts.search = SearchMode::AlwaysSearch;
            }
            cmd_obstruct(&cat, name.as_deref(), parse_param(param)?, method, cert.as_ref(), &opts, *all, g)
        }
        Command::Classify { names, select, search } => {
            if *search {
                opts.search = SearchMode::AlwaysSearch;
            }
            for n in names {
                cat.lookup(n)?;
            }
            let mut report = runner::classify(&cat, &scope(select, names), g.jobs, &opts);
            emit(&mut report, g);
            if report.exit_code == 0 {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Cohomology { name, param, degree } => cmd_cohomology(&cat, name, parse_param(param)?, *degree, g),
        Command::List { select, status } => cmd_list(&cat, select, status.as_deref(), g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("g2cert: {m}");
            ExitCode::from(2)
        }
    }
}
