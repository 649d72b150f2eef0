//! Text edits and the replayable rule trace.

use serde::{Deserialize, Serialize};

use crate::js::Span;

/// Replace `span` of the current text with `replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub span: Span,
    pub replacement: String,
}

impl Edit {
    pub fn replace(span: Span, replacement: impl Into<String>) -> Self {
        Edit { span, replacement: replacement.into() }
    }

    pub fn insert(at: usize, text: impl Into<String>) -> Self {
        Edit { span: Span::new(at, at), replacement: text.into() }
    }

    pub fn delete(span: Span) -> Self {
        Edit { span, replacement: String::new() }
    }
}

/// The step that produced a trace entry. Declaration order is the order in
/// which phases run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    FactoryFix,
    AliasFix,
    HoistingFix,
    Rule1,
    Rule2,
    Rule3,
    ThisBeforeSuperFix,
}

impl RuleId {
    pub fn phase(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEdit {
    /// Span in the text the entry was applied to.
    pub before: Span,
    /// Span of the replacement in the text the entry produced.
    pub after: Span,
    pub replacement: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: RuleId,
    pub class_name: String,
    pub edits: Vec<TraceEdit>,
}

/// Applies non-overlapping edits. Insertions at the same offset keep their
/// given order.
pub fn apply_edits(text: &str, edits: &[Edit]) -> (String, Vec<TraceEdit>) {
    let mut order: Vec<usize> = (0..edits.len()).collect();
    order.sort_by_key(|&i| (edits[i].span.start, edits[i].span.end, i));
    let mut out = String::with_capacity(text.len());
    let mut trace = Vec::with_capacity(edits.len());
    let mut pos = 0;
    for i in order {
        let e = &edits[i];
        assert!(e.span.start >= pos, "overlapping edits at {}", e.span.start);
        out.push_str(&text[pos..e.span.start]);
        let start = out.len();
        out.push_str(&e.replacement);
        trace.push(TraceEdit { before: e.span, after: Span::new(start, out.len()), replacement: e.replacement.clone() });
        pos = e.span.end;
    }
    out.push_str(&text[pos..]);
    (out, trace)
}

/// Re-applies a trace to the text it started from.
pub fn replay(original: &str, trace: &[TraceEntry]) -> String {
    let mut text = original.to_string();
    for entry in trace {
        let edits: Vec<Edit> = entry.edits.iter().map(|e| Edit::replace(e.before, e.replacement.clone())).collect();
        text = apply_edits(&text, &edits).0;
    }
    text
}

/// True when the entries never go back to an earlier phase.
pub fn phases_ordered(trace: &[TraceEntry]) -> bool {
    trace.windows(2).all(|w| w[0].rule.phase() <= w[1].rule.phase())
}
