//! Code churn between an original and a migrated tree.
//!
//! Churned LOC is the sum of added and changed lines; total LOC is counted
//! on the migrated code. Lines are compared raw, so whitespace-only
//! changes count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use similar::{capture_diff_slices, Algorithm, DiffOp};

use crate::error::{Error, Result};
use crate::exec;
use crate::files;

/// Line classification of one file pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDiff {
    pub added: usize,
    pub changed: usize,
    pub deleted: usize,
}

impl LineDiff {
    pub fn churned(&self) -> usize {
        self.added + self.changed
    }

    pub fn is_empty(&self) -> bool {
        self.added == 0 && self.changed == 0 && self.deleted == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileChurn {
    pub path: PathBuf,
    pub diff: LineDiff,
    /// Lines of the migrated file.
    pub loc: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChurnMetrics {
    pub churned_loc: usize,
    pub deleted_loc: usize,
    pub files_churned: usize,
    pub file_count: usize,
    pub total_loc: usize,
    pub rel_churned: f64,
    pub rel_deleted: f64,
    pub rel_files: f64,
    /// `None` when nothing was deleted.
    pub churn_over_delete: Option<f64>,
}

fn lines(text: &str) -> Vec<&str> {
    text.split_inclusive('\n').collect()
}

/// Counts lines through a shortest edit script. Within each run of
/// deletions and insertions, deleted and inserted lines are paired up as
/// changed lines; every deleted line also counts as deleted, and inserted
/// lines without a partner count as added.
pub fn diff_lines(old: &str, new: &str) -> LineDiff {
    let (old, new) = (lines(old), lines(new));
    let mut out = LineDiff::default();
    let (mut del, mut ins) = (0, 0);
    let mut flush = |del: &mut usize, ins: &mut usize| {
        let changed = (*del).min(*ins);
        out.changed += changed;
        out.added += *ins - changed;
        out.deleted += *del;
        (*del, *ins) = (0, 0);
    };
    for op in capture_diff_slices(Algorithm::RawMyers, &old, &new) {
        match op {
            DiffOp::Equal { .. } => flush(&mut del, &mut ins),
            DiffOp::Delete { old_len, .. } => del += old_len,
            DiffOp::Insert { new_len, .. } => ins += new_len,
            DiffOp::Replace { old_len, new_len, .. } => {
                del += old_len;
                ins += new_len;
            }
        }
    }
    flush(&mut del, &mut ins);
    out
}

pub fn loc(text: &str) -> usize {
    text.lines().count()
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// Aggregates per-file results. Order does not matter.
pub fn aggregate(files: &[FileChurn]) -> ChurnMetrics {
    let churned_loc = files.iter().map(|f| f.diff.churned()).sum();
    let deleted_loc = files.iter().map(|f| f.diff.deleted).sum();
    let files_churned = files.iter().filter(|f| !f.diff.is_empty()).count();
    let total_loc = files.iter().map(|f| f.loc).sum();
    ChurnMetrics {
        churned_loc,
        deleted_loc,
        files_churned,
        file_count: files.len(),
        total_loc,
        rel_churned: ratio(churned_loc, total_loc),
        rel_deleted: ratio(deleted_loc, total_loc),
        rel_files: ratio(files_churned, files.len()),
        churn_over_delete: (deleted_loc > 0).then(|| churned_loc as f64 / deleted_loc as f64),
    }
}

/// Churn of `(path, original, migrated)` triples.
pub fn compute_churn(pairs: &[(PathBuf, String, String)], parallel: bool) -> (ChurnMetrics, Vec<FileChurn>) {
    let files = exec::map(pairs, parallel, |(path, old, new)| FileChurn { path: path.clone(), diff: diff_lines(old, new), loc: loc(new) });
    (aggregate(&files), files)
}

/// Churn between two directory trees holding the same relative file paths.
pub fn compute_tree_churn(original: &Path, migrated: &Path, parallel: bool) -> Result<(ChurnMetrics, Vec<FileChurn>)> {
    let rel = |root: &Path| -> Result<Vec<PathBuf>> {
        Ok(files::js_files(root)?.into_iter().map(|p| p.strip_prefix(root).map(Path::to_path_buf).unwrap_or(p)).collect())
    };
    let (old_files, new_files) = (rel(original)?, rel(migrated)?);
    if let Some(p) = old_files.iter().find(|p| !new_files.contains(p)).or_else(|| new_files.iter().find(|p| !old_files.contains(p))) {
        return Err(Error::MissingCounterpart(p.clone()));
    }
    let texts = exec::map(&old_files, parallel, |p| -> Result<(PathBuf, String, String)> {
        Ok((p.clone(), files::read(&original.join(p))?, files::read(&migrated.join(p))?))
    });
    let pairs = texts.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(compute_churn(&pairs, parallel))
}

/// Plain-text table with the absolute and relative measures.
pub fn table(m: &ChurnMetrics) -> String {
    let mut out = String::new();
    let cod = m.churn_over_delete.map_or_else(|| "-".to_string(), |r| format!("{r:.2}"));
    let _ = writeln!(
        out,
        "{:>8} {:>8} {:>6} {:>10} | {:>8} {:>8} {:>6} | {:>8}",
        "Churned", "Deleted", "Files", "Total LOC", "Churned", "Deleted", "Files", "Ch/Del"
    );
    let _ = writeln!(
        out,
        "{:>8} {:>8} {:>6} {:>10} | {:>8.4} {:>8.4} {:>6.2} | {:>8}",
        m.churned_loc, m.deleted_loc, m.files_churned, m.total_loc, m.rel_churned, m.rel_deleted, m.rel_files, cod
    );
    out
}
