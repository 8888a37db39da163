// SPDX-License-Identifier: MIT OR Apache-2.0
//! Verification and obstruction runs over catalog records.
//!
//! A run is planned as a list of tasks in catalog order, executed in
//! parallel, and assembled in plan order so that the report does not depend
//! on scheduling.

use std::time::Instant;

use g2cert_core::exterior::Form;
use g2cert_core::g2::{check_purely_coclosed, G2Error};
use g2cert_core::lie_ce::NilpotentLieAlgebra;
use g2cert_core::obstructions::{
    check_contraction, check_ideal, check_lambda_obstruction, search_contraction, search_ideal, search_lambda_obstruction, LambdaVerdict,
    ObstructionCertificate, SearchBounds,
};
use g2cert_core::parse::parse_form;
use g2cert_core::scalar::{format_rat, Rat};
use rayon::prelude::*;

use crate::catalog::{parse_monomials, AlgebraRecord, Catalog, CertificateRecord, Method, PinnedObstruction, Status};
use crate::report::{CheckFlags, Entry, EntryKind, RunReport, VerifiedStatus};

/// How obstruction certificates are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Check pinned certificates first and search only when none verifies.
    #[default]
    PinnedFirst,
    /// Always search, ignoring pinned certificates.
    AlwaysSearch,
}

/// Options shared by all runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Pinned versus fresh obstruction certificates.
    pub search: SearchMode,
    /// Search limits.
    pub bounds: SearchBounds,
    /// Record wall-clock times.
    pub timing: bool,
}

/// Which records a run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// Every record.
    All,
    /// Decomposable records.
    Decomposable,
    /// Indecomposable records of one step.
    Step(usize),
    /// Named records.
    Names(Vec<String>),
}

impl Scope {
    fn contains(&self, rec: &AlgebraRecord) -> bool {
        match self {
            Scope::All => true,
            Scope::Decomposable => rec.decomposable,
            Scope::Step(k) => !rec.decomposable && rec.step == *k,
            Scope::Names(ns) => ns.iter().any(|n| crate::catalog::normalize_name(n) == rec.name),
        }
    }
}

/// One unit of work.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    /// Verify certificate row `row` (index into the catalog) at `param`.
    Verify {
        /// Algebra name.
        name: String,
        /// Index into [`Catalog::certificates`].
        row: usize,
        /// Parameter value.
        param: Option<Rat>,
    },
    /// Obtain an obstruction certificate.
    Obstruct {
        /// Algebra name.
        name: String,
        /// Parameter value.
        param: Option<Rat>,
        /// Method to use; `None` tries all three.
        method: Option<Method>,
    },
    /// Record a cited result.
    External {
        /// Algebra name.
        name: String,
    },
}

/// The tasks for the records in `scope`, in catalog order.
pub fn plan(cat: &Catalog, scope: &Scope) -> Vec<Task> {
    let mut tasks = Vec::new();
    for rec in cat.algebras.iter().filter(|r| scope.contains(r)) {
        match rec.status {
            Status::Pure => {
                for p in Catalog::sample_points(rec) {
                    if let Some(row) = cat.certificates.iter().position(|c| c.name == rec.name && covers(c, p.as_ref())) {
                        tasks.push(Task::Verify { name: rec.name.clone(), row, param: p });
                    }
                }
                for (v, m) in &rec.obstructed {
                    tasks.push(Task::Obstruct { name: rec.name.clone(), param: Some(v.clone()), method: Some(*m) });
                }
            }
            Status::NoCoclosed(m) => tasks.push(Task::Obstruct { name: rec.name.clone(), param: None, method: Some(m) }),
            Status::CoclosedOnlyExternal | Status::NoCoclosedExternal => tasks.push(Task::External { name: rec.name.clone() }),
        }
    }
    tasks
}

fn covers(c: &CertificateRecord, p: Option<&Rat>) -> bool {
    match (&c.regime, p) {
        (Some(r), Some(v)) => r.contains(v),
        (None, _) => true,
        (Some(_), None) => false,
    }
}

/// Runs one task.
pub fn run_task(cat: &Catalog, task: &Task, opts: &RunOptions) -> Entry {
    let start = Instant::now();
    let mut entry = match task {
        Task::Verify { name, row, param } => {
            let rec = cat.lookup(name).expect("planned from the catalog");
            verify_row(rec, &cat.certificates[*row], param.as_ref())
        }
        Task::Obstruct { name, param, method } => {
            let rec = cat.lookup(name).expect("planned from the catalog");
            obstruct(cat, rec, param.as_ref(), *method, opts)
        }
        Task::External { name } => external(cat.lookup(name).expect("planned from the catalog")),
    };
    if opts.timing {
        entry.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    entry
}

/// Runs `tasks` on `jobs` threads (0 means the rayon default) and assembles
/// the report in task order.
pub fn run(cat: &Catalog, tasks: &[Task], jobs: usize, opts: &RunOptions) -> RunReport {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let entries = pool.install(|| tasks.par_iter().map(|t| run_task(cat, t, opts)).collect());
    RunReport::new(entries)
}

/// Plans and runs every record in `scope`.
pub fn classify(cat: &Catalog, scope: &Scope, jobs: usize, opts: &RunOptions) -> RunReport {
    run(cat, &plan(cat, scope), jobs, opts)
}

fn base_entry(rec: &AlgebraRecord, param: Option<&Rat>, kind: EntryKind) -> Entry {
    Entry {
        name: rec.name.clone(),
        group: rec.group(),
        parameter: param.map(format_rat),
        row: None,
        kind,
        status_claimed: rec.status.tag(),
        status_verified: VerifiedStatus::Mismatch,
        reading: None,
        flags: None,
        lambda: None,
        psi_plus: None,
        metric: None,
        certificate: None,
        detail: None,
        elapsed_ms: None,
    }
}

/// Entry for a record whose status rests on a cited result.
pub fn external(rec: &AlgebraRecord) -> Entry {
    let mut e = base_entry(rec, None, EntryKind::External);
    e.status_verified = VerifiedStatus::ExternalCitation;
    e.detail = Some(match rec.status {
        Status::CoclosedOnlyExternal => "purely coclosed structures excluded by a cited result".into(),
        _ => "no coclosed structure by a cited result".into(),
    });
    e
}

/// Verifies one certificate row at one parameter value.
pub fn verify_row(rec: &AlgebraRecord, row: &CertificateRecord, param: Option<&Rat>) -> Entry {
    let mut e = base_entry(rec, param, EntryKind::Verify);
    e.row = Some(row.label());
    let g = match rec.algebra(param) {
        Ok(g) => g,
        Err(err) => {
            e.detail = Some(err.to_string());
            return e;
        }
    };
    let cert = match row.instantiate(7, param) {
        Ok(c) => c,
        Err(err) => {
            e.detail = Some(format!("certificate text: {err}"));
            return e;
        }
    };
    let report = match check_purely_coclosed(&g, &cert) {
        Ok(r) => r,
        Err(err) => {
            e.detail = Some(match err {
                G2Error::DimensionMismatch => "certificate forms have the wrong degree".into(),
                other => other.to_string(),
            });
            return e;
        }
    };
    e.lambda = report.lambda.as_ref().map(format_rat);
    let primary = report.primary().cloned();
    let mut flags = CheckFlags { su3: report.su3_valid(), cond1: report.cond1, ..CheckFlags::default() };
    if let Some(r) = &primary {
        flags.cond2 = r.cond2;
        flags.cond3 = r.cond3;
        flags.phi_positive = r.phi_positive;
        flags.dual_closed = r.dual_closed;
        flags.dual_matches = r.dual_matches;
        flags.pure = r.pure;
        flags.metric_consistent = r.metric_consistent;
        e.reading = Some(r.reading.label().to_string());
    }
    e.flags = Some(flags);
    let mut problems = Vec::new();
    if let Some(err) = &report.su3_error {
        problems.push(format!("SU(3) condition: {err}"));
    } else if !report.cond1 {
        problems.push("d psi- != 0".to_string());
    }
    match &report.construction {
        Some(c) => {
            e.psi_plus = Some(c.psi_plus.to_text());
            e.metric = Some(c.metric.to_rows().iter().map(|r| r.iter().map(|v| v.to_text()).collect()).collect());
            if let Some(expected) = &row.expect_psiplus {
                match parse_form(expected, 7) {
                    Ok(f) if f == c.psi_plus => {}
                    _ => problems.push(format!("psi+ {} differs from expected {expected}", c.psi_plus)),
                }
            }
            if let Some(expected) = &row.expect_metric {
                let got = c.metric.to_rows();
                let same = got.len() == expected.len()
                    && got
                        .iter()
                        .zip(expected)
                        .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_rat().as_ref() == Some(y)));
                if !same {
                    problems.push("metric differs from the expected rows".into());
                }
            }
        }
        None if report.su3_valid() && report.cond1 => {
            let why: Vec<String> = report
                .readings
                .iter()
                .map(|r| {
                    let mut failed = Vec::new();
                    for (k, v) in [
                        ("cond2", r.cond2),
                        ("cond3", r.cond3),
                        ("positive", r.phi_positive),
                        ("dual_closed", r.dual_closed),
                        ("dual_matches", r.dual_matches),
                        ("pure", r.pure),
                    ] {
                        if !v {
                            failed.push(k);
                        }
                    }
                    format!("{}: {}", r.reading.label(), failed.join(","))
                })
                .collect();
            problems.push(format!("fails under both readings ({})", why.join("; ")));
        }
        None => {}
    }
    if problems.is_empty() && report.pass() {
        e.status_verified = VerifiedStatus::PureVerified;
    } else {
        e.detail = Some(problems.join("; "));
    }
    e
}

/// Converts a found certificate to a database line.
pub fn to_pinned(name: &str, param: Option<&Rat>, cert: &ObstructionCertificate) -> PinnedObstruction {
    let join = |fs: &[Form<Rat>]| fs.iter().map(|f| f.to_text()).collect::<Vec<_>>().join(",");
    let (method, fields) = match cert {
        ObstructionCertificate::Contraction { x, y, u } => {
            (Method::Contraction, vec![("X".into(), format!("e{x}")), ("Y".into(), format!("e{y}")), ("U".into(), join(u))])
        }
        ObstructionCertificate::Ideal { covectors: (a, b) } => {
            (Method::Ideal, vec![("covectors".into(), format!("{},{}", a.to_text(), b.to_text()))])
        }
        ObstructionCertificate::LambdaPositivity { x, w, w_space, scale, square_root } => (
            Method::Lambda,
            vec![
                ("X".into(), format!("e{x}")),
                ("w".into(), join(w)),
                ("W".into(), join(w_space)),
                ("scale".into(), format_rat(scale)),
                ("q".into(), square_root.to_text()),
            ],
        ),
    };
    PinnedObstruction { name: name.to_string(), param: param.cloned(), method, fields, line: 0 }
}

fn index_field(p: &PinnedObstruction, key: &str) -> Result<usize, String> {
    p.field(key).and_then(|s| s.strip_prefix('e')).and_then(|s| s.parse().ok()).ok_or_else(|| format!("bad or missing {key}"))
}

fn forms_field(p: &PinnedObstruction, key: &str, n: usize) -> Result<Vec<Form<Rat>>, String> {
    let s = p.field(key).ok_or_else(|| format!("missing {key}"))?;
    parse_monomials(s, n).map_err(|e| format!("{key}: {e}"))
}

/// Checks a pinned certificate against an algebra. Returns a description of
/// the failure if it does not verify.
pub fn check_pinned(g: &NilpotentLieAlgebra, p: &PinnedObstruction, samples: usize) -> Result<(), String> {
    let n = g.dim();
    match p.method {
        Method::Contraction => {
            let (x, y) = (index_field(p, "X")?, index_field(p, "Y")?);
            match check_contraction(g, x, y, &forms_field(p, "U", n)?) {
                Ok(true) => Ok(()),
                Ok(false) => Err("a contraction leaves U".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        Method::Ideal => {
            let cov = forms_field(p, "covectors", n)?;
            if cov.len() != 2 {
                return Err("ideal certificates need two covectors".into());
            }
            match check_ideal(g, &cov[0], &cov[1]) {
                Ok(true) => Ok(()),
                Ok(false) => Err("a closed 4-form leaves the ideal".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        Method::Lambda => {
            let x = index_field(p, "X")?;
            let (w, w_space) = (forms_field(p, "w", n - 1)?, forms_field(p, "W", n - 1)?);
            match check_lambda_obstruction(g, x, &w, &w_space, samples) {
                Ok(LambdaVerdict::Proven { scale, square_root }) => {
                    let q = square_root.to_text();
                    let neg = g2cert_core::scalar::Ring::neg(&square_root).to_text();
                    let stored_scale = p.field("scale").unwrap_or_default();
                    let stored_q = p.field("q").unwrap_or_default();
                    if stored_scale == format_rat(&scale) && (stored_q == q || stored_q == neg) {
                        Ok(())
                    } else {
                        Err(format!("square certificate changed: scale={} q={q}", format_rat(&scale)))
                    }
                }
                Ok(LambdaVerdict::Inconclusive) => Err("lambda positivity not certified".into()),
                Ok(LambdaVerdict::Fails(m)) => Err(m),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

/// Searches for an obstruction certificate by one method.
pub fn search(g: &NilpotentLieAlgebra, method: Method, bounds: &SearchBounds) -> Option<ObstructionCertificate> {
    match method {
        Method::Contraction => search_contraction(g, bounds),
        Method::Ideal => search_ideal(g),
        Method::Lambda => search_lambda_obstruction(g, bounds),
    }
}

/// Obtains and verifies an obstruction certificate for a record.
///
/// With `method = None` all three methods are tried in the order
/// contraction, ideal, λ-positivity.
pub fn obstruct(cat: &Catalog, rec: &AlgebraRecord, param: Option<&Rat>, method: Option<Method>, opts: &RunOptions) -> Entry {
    let mut e = base_entry(rec, param, EntryKind::Obstruct);
    let expected_obstructed = matches!(rec.status, Status::NoCoclosed(_)) || rec.obstructed.iter().any(|(v, _)| Some(v) == param);
    let g = match rec.algebra(param) {
        Ok(g) => g,
        Err(err) => {
            e.detail = Some(err.to_string());
            return e;
        }
    };
    let methods: Vec<Method> = match method {
        Some(m) => vec![m],
        None => vec![Method::Contraction, Method::Ideal, Method::Lambda],
    };
    let mut found: Option<(PinnedObstruction, &'static str)> = None;
    let mut notes = Vec::new();
    if opts.search == SearchMode::PinnedFirst {
        for p in cat.pinned(&rec.name, param).into_iter().filter(|p| methods.contains(&p.method)) {
            match check_pinned(&g, p, opts.bounds.samples) {
                Ok(()) => {
                    found = Some((p.clone(), "pinned"));
                    break;
                }
                Err(m) => notes.push(format!("pinned {} certificate rejected: {m}", p.method.tag())),
            }
        }
    }
    if found.is_none() {
        for m in &methods {
            if let Some(c) = search(&g, *m, &opts.bounds) {
                let line = to_pinned(&rec.name, param, &c);
                match check_pinned(&g, &line, opts.bounds.samples) {
                    Ok(()) => {
                        found = Some((line, "searched"));
                        break;
                    }
                    Err(msg) => notes.push(format!("found {} certificate failed re-check: {msg}", m.tag())),
                }
            }
        }
    }
    match (found, expected_obstructed) {
        (Some((line, how)), true) => {
            e.status_verified = VerifiedStatus::ObstructedVerified;
            e.certificate = Some(line.to_line());
            notes.insert(0, how.to_string());
        }
        (Some((line, _)), false) => {
            e.certificate = Some(line.to_line());
            notes.insert(0, "obstruction found for an algebra listed with coclosed structures".into());
        }
        (None, true) => notes.insert(0, "no obstruction certificate found".into()),
        (None, false) => notes.insert(0, "no obstruction found (algebra admits coclosed structures)".into()),
    }
    e.detail = Some(notes.join("; "));
    e
}
