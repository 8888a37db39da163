// SPDX-License-Identifier: MIT OR Apache-2.0
//! Checks shared by the integration and acceptance targets.

#![allow(dead_code)]

use g2cert::catalog::{Catalog, Method};
use g2cert::report::{EntryKind, RunReport, VerifiedStatus};
use g2cert::runner::{self, RunOptions, Scope};
use g2cert_core::g2::{check_purely_coclosed, G2Error, VerificationReport};
use g2cert_core::obstructions::SearchBounds;
use g2cert_core::scalar::{parse_rat, Rat};
use g2cert_core::Form;
use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};
use rayon::prelude::*;

pub fn catalog() -> Catalog {
    Catalog::load_default().expect("shipped databases load")
}

pub fn classify_all(cat: &Catalog) -> RunReport {
    runner::classify(cat, &Scope::All, 0, &RunOptions::default())
}

/// `(name, parameter)` of every verified certificate evaluation.
pub fn passing_points(report: &RunReport) -> Vec<(String, Option<Rat>)> {
    report
        .entries
        .iter()
        .filter(|e| e.kind == EntryKind::Verify && e.status_verified == VerifiedStatus::PureVerified)
        .map(|e| (e.name.clone(), e.parameter.as_deref().map(|p| parse_rat(p).expect("reported parameters parse"))))
        .collect()
}

/// Points that both verify a certificate and admit an obstruction. Every
/// verified point is searched with all three methods, and every obstructed
/// point is checked against the certificate rows covering it.
pub fn exclusivity_violations(cat: &Catalog, report: &RunReport, bounds: &SearchBounds) -> Vec<String> {
    let mut out: Vec<String> = passing_points(report)
        .par_iter()
        .flat_map_iter(|(name, param)| {
            let g = cat.instantiate(name, param.as_ref()).expect("verified points instantiate");
            [Method::Contraction, Method::Ideal, Method::Lambda]
                .into_iter()
                .filter(|m| runner::search(&g, *m, bounds).is_some())
                .map(|m| format!("{name} obstructed by {}", m.tag()))
                .collect::<Vec<_>>()
        })
        .collect();
    for e in report.entries.iter().filter(|e| e.status_verified == VerifiedStatus::ObstructedVerified) {
        let param = e.parameter.as_deref().and_then(parse_rat);
        if let Some(row) = cat.certificate_at(&e.name, param.as_ref()) {
            let rec = cat.lookup(&e.name).expect("reported names exist");
            if runner::verify_row(rec, row, param.as_ref()).status_verified == VerifiedStatus::PureVerified {
                out.push(format!("{} verifies and is obstructed", e.display_name()));
            }
        }
    }
    out
}

/// Every check flag of a verification, in a fixed order. A rejected
/// certificate maps to all flags false.
pub fn flag_vector(report: Result<VerificationReport, G2Error>) -> Vec<bool> {
    match report {
        Err(_) => vec![false; 16],
        Ok(r) => {
            let mut v = vec![r.su3_valid(), r.cond1];
            for rr in &r.readings {
                v.extend([rr.cond2, rr.cond3, rr.phi_positive, rr.dual_closed, rr.dual_matches, rr.pure, rr.metric_consistent]);
            }
            v.resize(16, false);
            v
        }
    }
}

/// Outcome of flipping one coefficient sign in one certificate.
pub struct Mutation {
    pub label: String,
    pub changed: bool,
}

fn flip_one(f: &Form<Rat>, k: usize) -> Form<Rat> {
    let (mask, c) = f.terms().nth(k).map(|(m, c)| (m, c.clone())).expect("nonempty form");
    let mut out = f.clone();
    out.add_term(mask, -(c.clone() + c));
    out
}

/// Flips one coefficient sign in each of `count` verified certificates
/// chosen with a fixed seed.
///
/// A one-term `η` is never flipped: `η ↦ −η` sends `φ` to `−φ` with the
/// other sign of `ψ₊`, which is again purely coclosed.
pub fn mutations(cat: &Catalog, report: &RunReport, count: usize, seed: u8) -> Vec<Mutation> {
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut pool = passing_points(report);
    let mut out = Vec::new();
    while out.len() < count && !pool.is_empty() {
        let (name, param) = pool.swap_remove(rng.next_u32() as usize % pool.len());
        let g = cat.instantiate(&name, param.as_ref()).expect("verified points instantiate");
        let row = cat.certificate_at(&name, param.as_ref()).expect("verified points have rows");
        let cert = row.instantiate(7, param.as_ref()).expect("verified rows parse");
        let before = flag_vector(check_purely_coclosed(&g, &cert));
        let mut sites: Vec<(usize, usize)> = (0..cert.omega.len()).map(|k| (0, k)).collect();
        sites.extend((0..cert.psi_minus.len()).map(|k| (1, k)));
        if cert.eta.len() > 1 {
            sites.extend((0..cert.eta.len()).map(|k| (2, k)));
        }
        let (which, k) = sites[rng.next_u32() as usize % sites.len()];
        let mut m = cert.clone();
        let part = match which {
            0 => {
                m.omega = flip_one(&cert.omega, k);
                "omega"
            }
            1 => {
                m.psi_minus = flip_one(&cert.psi_minus, k);
                "psi"
            }
            _ => {
                m.eta = flip_one(&cert.eta, k);
                "eta"
            }
        };
        let after = flag_vector(check_purely_coclosed(&g, &m));
        let label = match &param {
            Some(p) => format!("{name}({}) {part}", g2cert_core::scalar::format_rat(p)),
            None => format!("{name} {part}"),
        };
        out.push(Mutation { label, changed: before != after });
    }
    out
}
