//! Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use classlift::cases::{DiagnosticKind, Remediation, Severity};
use classlift::detect::ClassModel;
use classlift::files;
use classlift::js::{parse, SourceModule, StmtKind};
use classlift::migrate::{migrate_program, MigrateOptions, ModuleOutcome, PlanStatus};
use sha2::{Digest, Sha256};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn idiom(name: &str) -> PathBuf {
    fixtures().join("idioms").join(name)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn is_support(path: &Path) -> bool {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    [".driver.js", ".prelude.js", ".expected.js"].iter().any(|s| name.ends_with(s))
}

/// Every `.js` file of the fixture corpus except the deliberately broken ones.
pub fn corpus_files() -> Vec<PathBuf> {
    let broken = fixtures().join("broken");
    files::js_files(&fixtures()).unwrap().into_iter().filter(|p| !p.starts_with(&broken)).collect()
}

/// One migration input: a single legacy file or a directory migrated as one program.
#[derive(Debug, Clone)]
pub struct Unit {
    pub name: String,
    pub root: PathBuf,
    /// Driver script printing observable behaviour, if the unit is executable.
    pub driver: Option<PathBuf>,
    pub prelude: Option<PathBuf>,
}

fn sibling(path: &Path, suffix: &str) -> Option<PathBuf> {
    let stem = path.file_name()?.to_str()?.trim_end_matches(".js");
    let p = path.with_file_name(format!("{stem}{suffix}"));
    p.exists().then_some(p)
}

/// Legacy inputs of the corpus, in a stable order.
pub fn units() -> Vec<Unit> {
    let mut out = Vec::new();
    for dir in ["idioms", "cases", "churn"] {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(fixtures().join(dir)).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for root in entries {
            let is_js = root.extension().is_some_and(|x| x == "js");
            if !(root.is_dir() || is_js && !is_support(&root)) {
                continue;
            }
            let name = format!("{dir}/{}", root.file_name().unwrap().to_string_lossy());
            out.push(Unit { name, driver: sibling(&root, ".driver.js"), prelude: sibling(&root, ".prelude.js"), root });
        }
    }
    out
}

pub fn unit(name: &str) -> Unit {
    units().into_iter().find(|u| u.name == name).unwrap_or_else(|| panic!("no fixture unit {name}"))
}

pub fn options() -> MigrateOptions {
    MigrateOptions { rule1_literal: false, parallel: true }
}

pub fn load(root: &Path) -> Vec<SourceModule> {
    let loaded = files::load(files::inputs(&[root.to_path_buf()]).unwrap(), true).unwrap();
    assert!(loaded.skipped.is_empty(), "{}: {:?}", root.display(), loaded.skipped);
    loaded.modules
}

pub fn migrate_root(root: &Path) -> Vec<ModuleOutcome> {
    migrate_program(&load(root), options()).unwrap()
}

pub fn migrate_text(name: &str, text: &str) -> ModuleOutcome {
    classlift::migrate::migrate_source(name, text, options()).unwrap()
}

/// Code tokens of `text`, comments and whitespace dropped.
pub fn code_tokens(text: &str) -> Vec<String> {
    let m = parse("t.js", text).expect("parses");
    m.code_tokens(classlift::js::Span::new(0, text.len())).iter().map(|t| m.slice(t.span).to_string()).collect()
}

/// First position where the code token streams differ, with context.
pub fn token_mismatch(actual: &str, expected: &str) -> Option<String> {
    let (a, e) = (code_tokens(actual), code_tokens(expected));
    let i = a.iter().zip(&e).position(|(x, y)| x != y).unwrap_or(a.len().min(e.len()));
    if a.len() == e.len() && i == a.len() {
        return None;
    }
    let ctx = |v: &[String]| v[i.saturating_sub(3)..(i + 4).min(v.len())].join(" ");
    Some(format!("token {i}: got `{}`, expected `{}`", ctx(&a), ctx(&e)))
}

pub fn sha(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of every file under `dir` with its relative path.
pub fn tree_hash(dir: &Path) -> String {
    let mut h = Sha256::new();
    let mut paths: Vec<PathBuf> = walk(dir);
    paths.sort();
    for p in paths {
        h.update(p.strip_prefix(dir).unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        h.update(std::fs::read(&p).unwrap());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

fn strip_indent(text: &str) -> String {
    text.lines().map(str::trim_start).collect::<Vec<_>>().join("\n")
}

fn factory_renamed(outcome: &ModuleOutcome) -> Vec<String> {
    outcome
        .plans
        .iter()
        .filter(|p| matches!(&p.status, PlanStatus::NeedsBadFix(k) if k.contains(&DiagnosticKind::FactoryConstructor)))
        .map(|p| p.class.name.clone())
        .collect()
}

/// Spans that must survive migration unchanged, checked by hash.
///
/// Ugly-case spans must appear byte for byte. Opaque statements must appear
/// up to the indentation of each line, since moving a function body into a
/// class reindents it; statements the rules rewrite by design (superclass
/// calls, `instanceof` and references to a class renamed by the factory
/// fix) are exempt.
pub fn preservation_violations(outcome: &ModuleOutcome) -> Vec<String> {
    preservation(outcome).violations
}

#[derive(Debug, Default)]
pub struct Preservation {
    pub ugly_checked: usize,
    pub opaque_checked: usize,
    pub opaque_exempt: usize,
    pub violations: Vec<String>,
}

pub fn preservation(outcome: &ModuleOutcome) -> Preservation {
    let mut result = Preservation::default();
    let mut out = Vec::new();
    for d in outcome.diagnostics.iter().filter(|d| d.severity == Severity::Ugly) {
        result.ugly_checked += 1;
        let span = &outcome.original[d.span.start..d.span.end];
        let found = outcome.output.match_indices(span).any(|(i, s)| sha(&outcome.output[i..i + s.len()]) == sha(span));
        if d.remediation != Remediation::Preserved || !found {
            out.push(format!("{}: {:?} span at {}:{} not preserved", outcome.path.display(), d.kind, d.location.start_line, d.location.start_col));
        }
    }
    let module = parse(&outcome.path, &outcome.original).unwrap();
    let renamed = factory_renamed(outcome);
    let output = strip_indent(&outcome.output);
    let mut opaque = Vec::new();
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            if matches!(s.kind, StmtKind::Opaque) {
                opaque.push(s.span);
            }
        }
    });
    for span in opaque {
        let text = &outcome.original[span.start..span.end];
        let exempt = [".call(this", ".apply(this", "instanceof"].iter().any(|p| text.contains(p)) || renamed.iter().any(|n| text.contains(n.as_str()));
        if exempt {
            result.opaque_exempt += 1;
            continue;
        }
        result.opaque_checked += 1;
        let norm = strip_indent(text);
        if !output.match_indices(&norm).any(|(i, s)| sha(&output[i..i + s.len()]) == sha(&norm)) {
            let (line, _) = module.line_col(span.start);
            out.push(format!("{}: opaque statement at line {line} changed (hash {})", outcome.path.display(), &sha(&norm)[..12]));
        }
    }
    result.violations = out;
    result
}

pub fn node() -> Option<PathBuf> {
    let path = std::env::var_os("NODE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("node"));
    Command::new(&path).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| path)
}

/// Runs a script with node and returns its stdout, or the failure.
pub fn run_node(node: &Path, script: &Path) -> Result<String, String> {
    let out = Command::new(node).arg(script).current_dir(script.parent().unwrap()).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}

/// Stdout of a unit before and after migration.
pub fn behaviour(node: &Path, unit: &Unit) -> Result<(String, String), String> {
    let driver = unit.driver.as_ref().ok_or("no driver")?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let outcomes = migrate_root(&unit.root);
    let mut results = Vec::new();
    for (label, migrated) in [("original", false), ("migrated", true)] {
        let dir = tmp.path().join(label);
        std::fs::create_dir_all(&dir).unwrap();
        let script = if unit.root.is_dir() {
            let name = unit.root.file_name().unwrap();
            for o in &outcomes {
                let rel = o.path.strip_prefix(&unit.root).unwrap();
                let dest = dir.join(name).join(rel);
                std::fs::create_dir_all(dest.parent().unwrap()).unwrap();
                std::fs::write(dest, if migrated { &o.output } else { &o.original }).unwrap();
            }
            let script = dir.join("driver.js");
            std::fs::copy(driver, &script).unwrap();
            script
        } else {
            let mut text = unit.prelude.as_ref().map(|p| read(p)).unwrap_or_default();
            text.push_str(if migrated { &outcomes[0].output } else { &outcomes[0].original });
            text.push('\n');
            text.push_str(&read(driver));
            let script = dir.join("main.js");
            std::fs::write(&script, text).unwrap();
            script
        };
        results.push(run_node(node, &script).map_err(|e| format!("{label}: {e}"))?);
    }
    let migrated = results.pop().unwrap();
    Ok((results.pop().unwrap(), migrated))
}

pub fn class<'a>(classes: &'a [ClassModel], name: &str) -> &'a ClassModel {
    classes.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("class {name} not detected"))
}
