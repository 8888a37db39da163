// SPDX-License-Identifier: MIT OR Apache-2.0
//! Run reports and their JSON form.
//!
//! The JSON layout is documented in the repository README. Keys are stable;
//! optional fields are omitted when empty so canonical output stays small and
//! byte-identical between runs.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Report format version.
pub const REPORT_VERSION: u32 = 1;

/// Outcome of one report entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerifiedStatus {
    /// A purely coclosed certificate was verified exactly.
    PureVerified,
    /// An obstruction certificate was verified exactly.
    ObstructedVerified,
    /// The claim rests on a cited result and is not recomputed.
    ExternalCitation,
    /// Computation and claim disagree.
    Mismatch,
}

impl VerifiedStatus {
    /// Upper-case label used in text output.
    pub fn label(self) -> &'static str {
        match self {
            VerifiedStatus::PureVerified => "PURE_VERIFIED",
            VerifiedStatus::ObstructedVerified => "OBSTRUCTED_VERIFIED",
            VerifiedStatus::ExternalCitation => "EXTERNAL_CITATION",
            VerifiedStatus::Mismatch => "MISMATCH",
        }
    }
}

impl fmt::Display for VerifiedStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// What an entry checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// Purely coclosed certificate verification.
    Verify,
    /// Obstruction certificate check or search.
    Obstruct,
    /// Cited result.
    External,
}

/// Flags of a certificate verification. Flags that could not be evaluated
/// because an earlier stage failed are `false`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFlags {
    /// `(ω, ψ₋)` is an SU(3)-structure on the quotient.
    pub su3: bool,
    /// `dψ₋ = 0`.
    pub cond1: bool,
    /// `ω∧dω = s·ψ₋∧dη`.
    pub cond2: bool,
    /// `ω²∧dη = −2s·ψ₊∧dω`.
    pub cond3: bool,
    /// `φ` is a positive 3-form.
    pub phi_positive: bool,
    /// The exact Hodge dual of `φ` is closed.
    pub dual_closed: bool,
    /// The Hodge dual is proportional to `½ω² + s·ψ₋∧η`.
    pub dual_matches: bool,
    /// `φ∧dφ = 0`.
    pub pure: bool,
    /// `B(φ)` is a multiple of the reported metric.
    pub metric_consistent: bool,
}

impl CheckFlags {
    /// The five headline flags in print order.
    pub fn headline(&self) -> [(&'static str, bool); 5] {
        [("su3", self.su3), ("cond1", self.cond1), ("cond2", self.cond2), ("cond3", self.cond3), ("phi_positive", self.phi_positive)]
    }
}

/// One line of a run report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    /// Algebra name.
    pub name: String,
    /// Table group: `decomposable`, `2-step`, `3-step` or `4-step`.
    pub group: String,
    /// Parameter value for family members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    /// Certificate row label for verifications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    /// What was checked.
    pub kind: EntryKind,
    /// Status tag claimed by the catalog.
    pub status_claimed: String,
    /// Verified outcome.
    pub status_verified: VerifiedStatus,
    /// Sign reading of `ψ₊` that passed, or the one reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<String>,
    /// Verification flags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<CheckFlags>,
    /// `λ(ψ₋)` on the quotient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// `s·ψ₊` in ambient labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_plus: Option<String>,
    /// Metric rows with entries in `ℚ(√D)` text form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    /// Obstruction certificate in database line form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    /// Diagnostic text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall-clock time in milliseconds; omitted in canonical mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Entry {
    /// `name` or `name(param)`.
    pub fn display_name(&self) -> String {
        match &self.parameter {
            Some(p) => format!("{}({})", self.name, p),
            None => self.name.clone(),
        }
    }
}

/// Counts per verified status.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    /// Number of entries.
    pub total: usize,
    /// `PURE_VERIFIED` entries.
    pub pure_verified: usize,
    /// `OBSTRUCTED_VERIFIED` entries.
    pub obstructed_verified: usize,
    /// `EXTERNAL_CITATION` entries.
    pub external_citation: usize,
    /// `MISMATCH` entries.
    pub mismatch: usize,
}

/// A complete run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// Format version.
    pub version: u32,
    /// Entries in catalog order.
    pub entries: Vec<Entry>,
    /// Counts.
    pub summary: Summary,
    /// Process exit status implied by the entries.
    pub exit_code: i32,
}

impl RunReport {
    /// Builds a report and its summary.
    pub fn new(entries: Vec<Entry>) -> Self {
        let mut s = Summary { total: entries.len(), ..Summary::default() };
        for e in &entries {
            match e.status_verified {
                VerifiedStatus::PureVerified => s.pure_verified += 1,
                VerifiedStatus::ObstructedVerified => s.obstructed_verified += 1,
                VerifiedStatus::ExternalCitation => s.external_citation += 1,
                VerifiedStatus::Mismatch => s.mismatch += 1,
            }
        }
        let exit_code = if s.mismatch > 0 { 1 } else { 0 };
        RunReport { version: REPORT_VERSION, entries, summary: s, exit_code }
    }

    /// Drops timing fields.
    pub fn canonicalize(&mut self) {
        for e in &mut self.entries {
            e.elapsed_ms = None;
        }
    }

    /// Pretty JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Parses JSON produced by [`RunReport::to_json`].
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mut line = format!("{:<16} {:<12} {:<20}", e.display_name(), e.group, e.status_verified.label());
            if let Some(f) = &e.flags {
                let flags: Vec<String> = f.headline().iter().map(|(k, v)| format!("{k}={}", if *v { "ok" } else { "FAIL" })).collect();
                line.push_str(&format!(" {}", flags.join(" ")));
            }
            if let Some(c) = &e.certificate {
                line.push_str(&format!(" [{c}]"));
            }
            if let Some(d) = &e.detail {
                line.push_str(&format!(" ({d})"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "summary: {} entries, {} PURE_VERIFIED, {} OBSTRUCTED_VERIFIED, {} EXTERNAL_CITATION, {} MISMATCH\n",
            s.total, s.pure_verified, s.obstructed_verified, s.external_citation, s.mismatch
        ));
        out
    }
}
