//! Machine-readable reports. Serialized as JSON with a schema version.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::cases::{Diagnostic, DiagnosticKind, Remediation, Severity};
use crate::churn::{ChurnMetrics, LineDiff};
use crate::detect::{ClassMetrics, ClassModel};
use crate::migrate::{MigrationPlan, PlanStatus};

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    pub paths: Vec<PathBuf>,
    pub dry_run: bool,
    pub rule1_literal: bool,
    pub in_place: bool,
    pub out: Option<PathBuf>,
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FileStatus {
    /// Every class migrated and no manual work is left.
    Good,
    /// Some class or construct needs manual work.
    PartiallyBlocked,
    /// The file could not be parsed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileReport {
    pub path: PathBuf,
    pub status: FileStatus,
    pub changed: bool,
    pub metrics: ClassMetrics,
    pub churn: LineDiff,
    pub plans: Vec<MigrationPlan>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Class counts by outcome.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOutcomes {
    pub good: usize,
    /// Migrated after a bad-case remediation.
    pub bad_fixed: usize,
    /// Left as is; manual work needed.
    pub blocked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub classes: ClassMetrics,
    pub churn: ChurnMetrics,
    pub outcomes: ClassOutcomes,
    pub diagnostics_by_kind: BTreeMap<DiagnosticKind, usize>,
    pub bad: usize,
    pub bad_applied: usize,
    pub ugly_preserved: usize,
    pub manual: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationReport {
    pub schema: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub per_file: Vec<FileReport>,
    pub skipped: Vec<SkippedFile>,
    pub totals: Totals,
}

impl FileReport {
    pub fn new(path: PathBuf, changed: bool, metrics: ClassMetrics, churn: LineDiff, plans: Vec<MigrationPlan>, diagnostics: Vec<Diagnostic>) -> Self {
        let blocked = plans.iter().any(|p| matches!(p.status, PlanStatus::Blocked(_))) || diagnostics.iter().any(Diagnostic::is_manual);
        let status = if blocked { FileStatus::PartiallyBlocked } else { FileStatus::Good };
        FileReport { path, status, changed, metrics, churn, plans, diagnostics }
    }
}

impl Totals {
    pub fn from_files(files: &[FileReport], churn: ChurnMetrics) -> Totals {
        let mut outcomes = ClassOutcomes::default();
        for p in files.iter().flat_map(|f| &f.plans) {
            match p.status {
                PlanStatus::Good => outcomes.good += 1,
                PlanStatus::NeedsBadFix(_) => outcomes.bad_fixed += 1,
                PlanStatus::Blocked(_) => outcomes.blocked += 1,
            }
        }
        let diags: Vec<&Diagnostic> = files.iter().flat_map(|f| &f.diagnostics).collect();
        let mut diagnostics_by_kind = BTreeMap::new();
        for d in &diags {
            *diagnostics_by_kind.entry(d.kind).or_insert(0) += 1;
        }
        Totals {
            classes: ClassMetrics::sum(files.iter().map(|f| &f.metrics)),
            churn,
            outcomes,
            diagnostics_by_kind,
            bad: diags.iter().filter(|d| d.severity == Severity::Bad).count(),
            bad_applied: diags.iter().filter(|d| d.severity == Severity::Bad && matches!(d.remediation, Remediation::Applied(_))).count(),
            ugly_preserved: diags.iter().filter(|d| d.severity == Severity::Ugly && d.remediation == Remediation::Preserved).count(),
            manual: diags.iter().filter(|d| d.is_manual()).count(),
        }
    }
}

impl MigrationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn has_manual_work(&self) -> bool {
        self.totals.manual > 0
    }
}

/// Output of `detect`: the class inventory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectReport {
    pub schema: u32,
    pub tool_version: String,
    pub files: Vec<DetectedFile>,
    pub skipped: Vec<SkippedFile>,
    pub totals: ClassMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectedFile {
    pub path: PathBuf,
    pub metrics: ClassMetrics,
    pub classes: Vec<ClassModel>,
}
