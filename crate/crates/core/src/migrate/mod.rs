//! Migration driver: analysis, then per-module execution of the
//! remediations and of Rules 1, 2 and 3, each to its fixed point.

pub mod analysis;
pub mod edit;
pub mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::cases::Diagnostic;
use crate::detect::{detect, module_facts, ClassModel, ProgramIndex};
use crate::exec;
use crate::js::SourceModule;
use crate::{Error, Result};

use analysis::{apply_entry, prepare, reparse};
pub use analysis::{ModulePlan, PlanStatus};
pub use edit::{phases_ordered, replay, RuleId, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MigrateOptions {
    /// Emit constructor-property methods as instance methods.
    pub rule1_literal: bool,
    /// Run per-file stages on the thread pool.
    pub parallel: bool,
}

impl Default for MigrateOptions {
    fn default() -> Self {
        MigrateOptions { rule1_literal: false, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationPlan {
    pub class: ClassModel,
    pub status: PlanStatus,
    /// Rule instances applied for this class, in application order.
    pub rule_trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone)]
pub struct ModuleOutcome {
    pub path: PathBuf,
    pub original: String,
    pub output: String,
    /// Every applied rule instance; replaying it on `original` gives `output`.
    pub trace: Vec<TraceEntry>,
    pub plans: Vec<MigrationPlan>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ModuleOutcome {
    pub fn changed(&self) -> bool {
        self.original != self.output
    }
}

/// Detected classes of every module, against the program-wide index.
pub fn detect_program(modules: &[SourceModule], parallel: bool) -> (ProgramIndex, Vec<Vec<ClassModel>>) {
    let program = ProgramIndex::from_facts(exec::map(modules, parallel, module_facts));
    let classes = exec::map(modules, parallel, |m| detect(m, &program));
    (program, classes)
}

/// Migrates a whole program. Outcomes come back in input order.
pub fn migrate_program(modules: &[SourceModule], options: MigrateOptions) -> Result<Vec<ModuleOutcome>> {
    let (program, classes) = detect_program(modules, options.parallel);
    let plans = analysis::analyze(modules, &classes, &program, options.rule1_literal)?;
    let jobs: Vec<usize> = (0..modules.len()).collect();
    exec::map(&jobs, options.parallel, |&i| execute(&modules[i], &classes[i], &plans[i], &program, options)).into_iter().collect()
}

fn execute(module: &SourceModule, classes: &[ClassModel], plan: &ModulePlan, program: &ProgramIndex, options: MigrateOptions) -> Result<ModuleOutcome> {
    let parse_err = |source| Error::Parse { path: module.path.clone(), source };
    let prepared = prepare(module, classes, &plan.migrate, &plan.factory).map_err(parse_err)?;
    // Analysis ran the same preparation and blocked every class it could not prepare.
    debug_assert!(prepared.failure.is_none(), "{:?}", prepared.failure);
    let mut text = prepared.text;
    let mut trace = prepared.trace;

    let current_name: BTreeMap<String, String> = plan.migrate.iter().map(|n| (n.clone(), plan.factory.get(n).cloned().unwrap_or_else(|| n.clone()))).collect();
    let original_name: BTreeMap<&str, &str> = current_name.iter().map(|(o, c)| (c.as_str(), o.as_str())).collect();
    let names: BTreeSet<&str> = current_name.values().map(String::as_str).collect();
    let cap = 4 * names.len() + 4;

    // Rule 1, innermost classes first.
    for _ in 0..cap {
        let cur = reparse(&module.path, &text).map_err(parse_err)?;
        let found = detect(&cur, program);
        let Some(class) = found.iter().filter(|c| names.contains(c.name.as_str())).max_by_key(|c| (c.depth, std::cmp::Reverse(c.ctor.start))) else {
            break;
        };
        let Some(edits) = rules::rule1_edits(&cur, class, options.rule1_literal) else { break };
        apply_entry(&mut text, &mut trace, RuleId::Rule1, original_name[class.name.as_str()], &edits);
    }

    type Builder = fn(&crate::js::SourceModule, &str) -> Option<Vec<edit::Edit>>;
    for (rule, build) in [(RuleId::Rule2, rules::rule2_edits as Builder), (RuleId::Rule3, rules::rule3_edits as Builder)] {
        for _ in 0..cap {
            let cur = reparse(&module.path, &text).map_err(parse_err)?;
            let Some((name, edits)) = names.iter().find_map(|n| build(&cur, n).map(|e| (*n, e))) else { break };
            apply_entry(&mut text, &mut trace, rule, original_name[name], &edits);
        }
    }

    for (sub, fix) in &plan.tbs {
        let cur = reparse(&module.path, &text).map_err(parse_err)?;
        if let Some(edits) = rules::tbs_edits(&cur, &current_name[sub], fix) {
            apply_entry(&mut text, &mut trace, RuleId::ThisBeforeSuperFix, sub, &edits);
        }
    }
    debug_assert_eq!(replay(&module.text, &trace), text);

    let plans = classes
        .iter()
        .zip(&plan.statuses)
        .map(|(c, status)| MigrationPlan {
            class: c.clone(),
            status: status.clone(),
            rule_trace: if plan.migrate.contains(&c.name) { trace.iter().filter(|e| e.class_name == c.name).cloned().collect() } else { Vec::new() },
        })
        .collect();
    Ok(ModuleOutcome { path: module.path.clone(), original: module.text.clone(), output: text, trace, plans, diagnostics: plan.diagnostics.clone() })
}

/// Convenience for a single source text.
pub fn migrate_source(path: impl Into<PathBuf>, text: &str, options: MigrateOptions) -> Result<ModuleOutcome> {
    let path = path.into();
    let module = crate::js::parse(&path, text).map_err(|source| Error::Parse { path: path.clone(), source })?;
    Ok(migrate_program(std::slice::from_ref(&module), options)?.remove(0))
}
