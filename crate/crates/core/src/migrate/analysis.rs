//! Program-wide decision of which classes migrate and which remediations
//! run. Classes start out migrating unless a static check blocks them;
//! blocking one class can invalidate another (an ES6 class cannot be
//! called without `new`, and class declarations are not hoisted), so the
//! checks are repeated until nothing changes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cases::*;
use crate::detect::{ClassModel, MethodIdiom, ProgramIndex};
use crate::error::ParseError;
use crate::js::*;

use super::edit::{apply_edits, Edit, RuleId, TraceEntry};
use super::rules::{alias_edits, factory_edits, TbsFix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "kinds")]
pub enum PlanStatus {
    Good,
    NeedsBadFix(Vec<DiagnosticKind>),
    Blocked(Vec<DiagnosticKind>),
}

/// What to do with one module.
#[derive(Debug, Clone, Default)]
pub struct ModulePlan {
    /// Original names of the classes that migrate.
    pub migrate: BTreeSet<String>,
    /// Factory constructors to split: original name → new class name.
    pub factory: BTreeMap<String, String>,
    /// Subclasses whose superclass constructor receives a `this`-using function.
    pub tbs: BTreeMap<String, TbsFix>,
    pub diagnostics: Vec<Diagnostic>,
    /// One status per detected class, in detection order.
    pub statuses: Vec<PlanStatus>,
}

/// Result of running the pre-rule remediations (factory, alias, hoisting).
pub(crate) struct Prepared {
    pub text: String,
    pub trace: Vec<TraceEntry>,
    /// `(class, statement the class had to precede)` per hoisting action.
    pub hoisted: Vec<(String, String, bool)>,
    /// A class whose declaration order cannot be fixed, with the reason.
    pub failure: Option<(String, String)>,
}

pub(crate) fn reparse(path: &std::path::Path, text: &str) -> Result<SourceModule, ParseError> {
    parse(path, text)
}

pub(crate) fn apply_entry(text: &mut String, trace: &mut Vec<TraceEntry>, rule: RuleId, class: &str, edits: &[Edit]) {
    let (out, edits) = apply_edits(text, edits);
    *text = out;
    trace.push(TraceEntry { rule, class_name: class.to_string(), edits });
}

/// Runs the factory, alias and hoisting remediations for `migrate`.
pub(crate) fn prepare(
    module: &SourceModule,
    classes: &[ClassModel],
    migrate: &BTreeSet<String>,
    factory: &BTreeMap<String, String>,
) -> Result<Prepared, ParseError> {
    let mut text = module.text.clone();
    let mut trace = Vec::new();
    let mut current = module.clone();
    for (name, new_name) in factory {
        if let Some(edits) = factory_edits(&current, name, new_name) {
            apply_entry(&mut text, &mut trace, RuleId::FactoryFix, name, &edits);
            current = reparse(&module.path, &text)?;
        }
    }
    let renamed = |n: &str| factory.get(n).cloned().unwrap_or_else(|| n.to_string());
    for name in migrate {
        if let Some(edits) = alias_edits(&current, &renamed(name)) {
            apply_entry(&mut text, &mut trace, RuleId::AliasFix, name, &edits);
            current = reparse(&module.path, &text)?;
        }
    }

    let mut hoist = BTreeMap::new();
    let mut original_of = BTreeMap::new();
    for c in classes.iter().filter(|c| migrate.contains(&c.name)) {
        let cur = renamed(&c.name);
        let mut names = vec![cur.clone()];
        if cur != c.name {
            names.push(c.name.clone());
        }
        original_of.insert(cur.clone(), c.name.clone());
        hoist.insert(cur, HoistClass { names, superclass: c.superclass.clone() });
    }
    let mut hoisted = Vec::new();
    let mut failure = None;
    let cap = 2 * hoist.len() + 4;
    while let Some(action) = plan_hoisting(&current, &hoist) {
        let (class, use_text, null_split) = match &action {
            HoistAction::Move { class, use_text, .. } => (class, use_text, false),
            HoistAction::NullSplit { class, use_text, .. } => (class, use_text, true),
            HoistAction::Manual { class, reason, .. } => {
                failure = Some((original_of.get(class).unwrap_or(class).clone(), reason.clone()));
                break;
            }
        };
        let original = original_of.get(class).unwrap_or(class).clone();
        if hoisted.len() >= cap {
            failure = Some((original, format!("declarations around `{use_text}` cannot be ordered")));
            break;
        }
        hoisted.push((original.clone(), use_text.clone(), null_split));
        let edits = hoisting_edits(&current, &action);
        apply_entry(&mut text, &mut trace, RuleId::HoistingFix, &original, &edits);
        current = reparse(&module.path, &text)?;
    }
    Ok(Prepared { text, trace, hoisted, failure })
}

// ---- helpers ------------------------------------------------------------------

pub(crate) fn class_block<'a>(module: &'a SourceModule, class: &ClassModel) -> Option<&'a Block> {
    let mut found = None;
    module.walk_blocks(&mut |block, _| {
        if found.is_none() && block.stmts.iter().any(|s| s.span == class.ctor) {
            found = Some(block);
        }
    });
    found
}

pub(crate) fn ctor_function<'a>(module: &'a SourceModule, class: &ClassModel) -> Option<&'a Function> {
    class_block(module, class)?.stmts.iter().find(|s| s.span == class.ctor).and_then(|s| match &s.kind {
        StmtKind::FunctionDecl(f) => Some(f),
        _ => None,
    })
}

/// `X.prototype = ...` assignments: `(X, span of the X token)`.
fn prototype_assignments(module: &SourceModule) -> Vec<(String, Span)> {
    let toks = module.code_tokens(Span::new(0, module.text.len()));
    let text = |i: usize| toks.get(i).map_or("", |t| module.slice(t.span));
    (0..toks.len())
        .filter(|&i| {
            toks[i].kind == TokenKind::Ident
                && text(i + 1) == "."
                && text(i + 2) == "prototype"
                && text(i + 3) == "="
                && (i == 0 || !matches!(text(i - 1), "." | "?."))
        })
        .map(|i| (text(i).to_string(), toks[i].span))
        .collect()
}

fn root(path: &str) -> &str {
    path.split('.').next().unwrap_or(path)
}

fn last_segment(path: &str) -> &str {
    path.rsplit('.').next().unwrap_or(path)
}

struct ModuleInfo {
    declared: BTreeSet<String>,
    sites: Vec<CallSite>,
    proto_assigns: Vec<(String, Span)>,
    shapes: Vec<Option<SuperCallShape>>,
    /// Superclass index in the same module and the setter, for `FunctionArg` shapes.
    tbs: Vec<Option<(usize, TbsFix)>>,
    guards: Vec<Option<Span>>,
}

fn diag(module: &SourceModule, span: Span, kind: DiagnosticKind, class: &str, msg: String, rem: Remediation) -> Diagnostic {
    Diagnostic::new(module, span, kind, Some(class), msg, rem)
}

fn manual(module: &SourceModule, span: Span, kind: DiagnosticKind, class: &str, msg: String) -> Diagnostic {
    let rem = Remediation::Manual(msg.clone());
    diag(module, span, kind, class, msg, rem)
}

/// Checks that depend on a single class only.
fn static_blockers(module: &SourceModule, info: &ModuleInfo, classes: &[ClassModel], i: usize, program: &ProgramIndex, rule1_literal: bool) -> Vec<Diagnostic> {
    let c = &classes[i];
    let mut out = Vec::new();
    let name = c.name.as_str();
    if classes.iter().filter(|o| o.name == c.name).count() > 1 {
        out.push(manual(module, c.ctor, DiagnosticKind::DuplicateClassName, name, format!("`{name}` is declared more than once in this file")));
    }

    // Method names must be unique per (static, name), except a getter/setter pair.
    let mut seen: BTreeMap<(bool, &str), Vec<&crate::detect::MethodModel>> = BTreeMap::new();
    for m in c.methods.iter().filter(|m| m.foreign_file.is_none()) {
        let is_static = m.idiom.flavor(rule1_literal) == MethodFlavor::Static;
        if !is_static && m.name == "constructor" {
            out.push(manual(
                module,
                m.stmt,
                DiagnosticKind::ConflictingMethodNames,
                name,
                "a method named `constructor` cannot be declared in a class body".into(),
            ));
            continue;
        }
        let entry = seen.entry((is_static, m.name.as_str())).or_default();
        let clash = entry.iter().find(|o| {
            let pair = matches!((o.idiom, m.idiom), (MethodIdiom::Getter, MethodIdiom::Setter) | (MethodIdiom::Setter, MethodIdiom::Getter));
            let same = o.idiom.flavor(rule1_literal) == m.idiom.flavor(rule1_literal) && module.slice(o.function) == module.slice(m.function);
            !pair && !same && o.function != m.function
        });
        if clash.is_some() {
            out.push(manual(
                module,
                m.stmt,
                DiagnosticKind::ConflictingMethodNames,
                name,
                format!("method `{}` is defined more than once with different bodies", m.name),
            ));
        }
        entry.push(m);
    }

    // The prototype object of a class cannot be replaced.
    let block = class_block(module, c);
    let chains: Vec<&Stmt> = block
        .map(|b| {
            b.stmts.iter().filter(|s| matches!(&s.kind, StmtKind::ExprStmt(ExprPattern::ProtoChainAssign { class_name, .. }) if class_name == name)).collect()
        })
        .unwrap_or_default();
    if chains.len() > 1 {
        out.push(manual(module, chains[1].span, DiagnosticKind::PrototypeOverwrite, name, format!("the prototype of `{name}` is assigned more than once")));
    } else if let Some((_, span)) = info.proto_assigns.iter().find(|(n, sp)| n == name && !chains.iter().any(|s| s.span.contains(*sp))) {
        out.push(manual(
            module,
            *span,
            DiagnosticKind::PrototypeOverwrite,
            name,
            format!("the prototype of `{name}` is replaced by an object that is not a superclass instance"),
        ));
    }

    if let Some(sup) = &c.superclass {
        let r = root(sup);
        let known = info.declared.contains(r) || program.unique_declaration(r).is_some() || program.es6_classes.contains(r);
        if !known {
            let span = chains.first().map_or(c.ctor, |s| s.span);
            out.push(manual(module, span, DiagnosticKind::UnknownSuperclass, name, format!("superclass `{sup}` of `{name}` cannot be resolved")));
        }
        match &info.shapes[i] {
            Some(SuperCallShape::Nested { span }) => out.push(manual(
                module,
                *span,
                DiagnosticKind::NestedSuperCall,
                name,
                format!("the call to the `{sup}` constructor is nested or repeated and cannot become `super(...)`"),
            )),
            Some(SuperCallShape::ThisFirst { span, reason }) => {
                out.push(manual(module, *span, DiagnosticKind::ThisBeforeSuper, name, format!("{reason}; `super()` must come first")))
            }
            Some(SuperCallShape::FunctionArg { stmt, .. }) if info.tbs[i].is_none() => out.push(manual(
                module,
                *stmt,
                DiagnosticKind::ThisBeforeSuper,
                name,
                format!("a function passed to the `{sup}` constructor uses `this`, and `{sup}` has no single property to set it through"),
            )),
            _ => {}
        }
    }
    out
}

/// Why a factory constructor cannot be split, if it cannot.
fn factory_refusal(modules: &[SourceModule], infos: &[ModuleInfo], all: &[Vec<ClassModel>], m: usize, c: &ClassModel) -> Option<String> {
    let module = &modules[m];
    let name = c.name.as_str();
    let block = class_block(module, c)?;
    let allowed: Vec<Span> = std::iter::once(c.ctor)
        .chain(block.stmts.iter().filter_map(|s| match &s.kind {
            StmtKind::ExprStmt(
                p @ (ExprPattern::ProtoMethodAssign { .. }
                | ExprPattern::CtorPropAssign { .. }
                | ExprPattern::ProtoChainAssign { .. }
                | ExprPattern::ProtoCtorFixup { .. }
                | ExprPattern::AliasChainAssign { .. }
                | ExprPattern::AccessorDefine { name: AccessorName::Literal(_), .. }),
            ) if crate::detect::pattern_owner(p) == Some(name) => Some(s.span),
            _ => None,
        }))
        .collect();
    let whole = Span::new(0, module.text.len());
    if prototype_refs(module, whole, name).iter().any(|r| !allowed.iter().any(|a| a.contains(*r))) {
        return Some(format!("`{name}.prototype` is used outside the class definition"));
    }
    for (k, other) in modules.iter().enumerate() {
        if k != m && !infos[k].declared.contains(name) && !prototype_refs(other, Span::new(0, other.text.len()), name).is_empty() {
            return Some(format!("`{name}.prototype` is used in {}", other.path.display()));
        }
    }
    if all.iter().flatten().any(|o| o.superclass.as_deref().is_some_and(|s| root(s) == name || last_segment(s) == name)) {
        return Some(format!("`{name}` is the superclass of another class"));
    }
    if infos.iter().any(|i| i.sites.iter().any(|s| s.name == name && s.how == CallHow::CallOrApply)) {
        return Some(format!("`{name}` is invoked with `.call`/`.apply`"));
    }
    None
}

/// Decides, for every module, which classes migrate and which fixes run.
pub fn analyze(modules: &[SourceModule], classes: &[Vec<ClassModel>], program: &ProgramIndex, rule1_literal: bool) -> Result<Vec<ModulePlan>, crate::Error> {
    let infos: Vec<ModuleInfo> = modules
        .iter()
        .zip(classes)
        .map(|(module, cs)| {
            let shapes: Vec<Option<SuperCallShape>> =
                cs.iter().map(|c| Some(super_call_shape(module, ctor_function(module, c)?, c.superclass.as_deref()?))).collect();
            let tbs = cs
                .iter()
                .zip(&shapes)
                .map(|(c, shape)| {
                    let Some(SuperCallShape::FunctionArg { .. }) = shape else { return None };
                    let sup = c.superclass.as_deref()?;
                    let d = cs.iter().position(|o| o.name == sup)?;
                    let (setter, prop, param) = setter_for_param(module, ctor_function(module, &cs[d])?)?;
                    if cs[d].methods.iter().any(|m| m.name == setter) {
                        return None;
                    }
                    Some((d, TbsFix { superclass: sup.to_string(), setter, prop, param }))
                })
                .collect();
            let guards = cs.iter().map(|c| find_factory_guard(module, ctor_function(module, c)?, &c.name).map(|(_, s)| s)).collect();
            ModuleInfo { declared: declared_names(module), sites: call_sites(module), proto_assigns: prototype_assignments(module), shapes, tbs, guards }
        })
        .collect();

    let mut blockers: Vec<Vec<Vec<Diagnostic>>> = modules
        .iter()
        .zip(&infos)
        .zip(classes)
        .map(|((module, info), cs)| (0..cs.len()).map(|i| static_blockers(module, info, cs, i, program, rule1_literal)).collect())
        .collect();

    let mut factory: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); modules.len()];
    for (m, cs) in classes.iter().enumerate() {
        for (i, c) in cs.iter().enumerate() {
            let Some(guard) = infos[m].guards[i] else { continue };
            match factory_refusal(modules, &infos, classes, m, c) {
                None => {
                    factory[m].insert(c.name.clone(), fresh_name(&modules[m], program, &c.name));
                }
                Some(reason) => blockers[m][i].push(manual(
                    &modules[m],
                    guard,
                    DiagnosticKind::FactoryConstructor,
                    &c.name,
                    format!("`{}` can be called without `new`, but the wrapper cannot be introduced: {reason}", c.name),
                )),
            }
        }
    }

    let mut hoisted: Vec<Vec<(String, String, bool)>> = vec![Vec::new(); modules.len()];
    loop {
        let mut changed = false;
        let migrating = |b: &Vec<Vec<Vec<Diagnostic>>>, m: usize, i: usize| b[m][i].is_empty();
        let mut block = |b: &mut Vec<Vec<Vec<Diagnostic>>>, m: usize, i: usize, d: Diagnostic| {
            if b[m][i].is_empty() {
                b[m][i].push(d);
                changed = true;
            }
        };

        // A this-before-super fix needs its superclass to become a class too.
        for m in 0..modules.len() {
            // `blockers` is indexed alongside `classes` and mutated in the loop.
            #[allow(clippy::needless_range_loop)]
            for i in 0..classes[m].len() {
                if let Some((d, fix)) = &infos[m].tbs[i] {
                    if migrating(&blockers, m, i) && !migrating(&blockers, m, *d) {
                        let c = &classes[m][i];
                        let span = match &infos[m].shapes[i] {
                            Some(SuperCallShape::FunctionArg { stmt, .. }) => *stmt,
                            _ => c.ctor,
                        };
                        let msg = format!("a function passed to the `{}` constructor uses `this`, and `{}` stays a function", fix.superclass, fix.superclass);
                        block(&mut blockers, m, i, manual(&modules[m], span, DiagnosticKind::ThisBeforeSuper, &c.name, msg));
                    }
                }
            }
        }

        // Calls without `new` fail once the callee is a class.
        for (m, info) in infos.iter().enumerate() {
            for site in &info.sites {
                let exempt = classes[m].iter().enumerate().any(|(i, c)| {
                    migrating(&blockers, m, i)
                        && c.superclass.as_deref().is_some_and(|s| last_segment(s) == site.name)
                        && match &info.shapes[i] {
                            Some(SuperCallShape::Clean { stmt } | SuperCallShape::FunctionArg { stmt, .. }) => stmt.contains(site.span),
                            _ => false,
                        }
                });
                if exempt {
                    continue;
                }
                let foreign_ok = !info.declared.contains(&site.name);
                for (k, cs) in classes.iter().enumerate() {
                    if k != m && !foreign_ok {
                        continue;
                    }
                    for (i, c) in cs.iter().enumerate() {
                        if c.name != site.name || !migrating(&blockers, k, i) {
                            continue;
                        }
                        let d = match site.how {
                            CallHow::CallOrApply => manual(
                                &modules[m],
                                site.span,
                                DiagnosticKind::SuperCallOutsideClass,
                                &c.name,
                                format!("`{}` is invoked through `.call`/`.apply` outside a subclass constructor", c.name),
                            ),
                            CallHow::Plain if factory[k].contains_key(&c.name) => continue,
                            CallHow::Plain => {
                                manual(&modules[m], site.span, DiagnosticKind::FactoryConstructor, &c.name, format!("`{}` is called without `new`", c.name))
                            }
                        };
                        block(&mut blockers, k, i, d);
                    }
                }
            }
        }

        // Class declarations must precede their eager uses.
        for (m, module) in modules.iter().enumerate() {
            let migrate: BTreeSet<String> = classes[m].iter().enumerate().filter(|(i, _)| migrating(&blockers, m, *i)).map(|(_, c)| c.name.clone()).collect();
            let fac: BTreeMap<String, String> = factory[m].iter().filter(|(k, _)| migrate.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
            let prepared = prepare(module, &classes[m], &migrate, &fac).map_err(|source| crate::Error::Parse { path: module.path.clone(), source })?;
            hoisted[m] = prepared.hoisted;
            if let Some((class, reason)) = prepared.failure {
                if let Some(i) = classes[m].iter().position(|c| c.name == class) {
                    let d = manual(module, classes[m][i].ctor, DiagnosticKind::Hoisting, &class, reason);
                    block(&mut blockers, m, i, d);
                }
            }
        }

        if !changed {
            break;
        }
    }

    let plans = modules
        .iter()
        .enumerate()
        .map(|(m, module)| {
            let cs = &classes[m];
            let mut plan = ModulePlan::default();
            let mut diagnostics = scan_ugly_cases(module, cs, program);
            for (i, c) in cs.iter().enumerate() {
                if !blockers[m][i].is_empty() {
                    let mut kinds: Vec<DiagnosticKind> = blockers[m][i].iter().map(|d| d.kind).collect();
                    kinds.sort();
                    kinds.dedup();
                    diagnostics.extend(blockers[m][i].iter().cloned());
                    plan.statuses.push(PlanStatus::Blocked(kinds));
                    continue;
                }
                plan.migrate.insert(c.name.clone());
                let mut fixed = Vec::new();
                if let (Some(new_name), Some(guard)) = (factory[m].get(&c.name), infos[m].guards[i]) {
                    plan.factory.insert(c.name.clone(), new_name.clone());
                    let msg = format!("class renamed to `{new_name}`; `{}` remains a function that creates instances with or without `new`", c.name);
                    diagnostics.push(diag(module, guard, DiagnosticKind::FactoryConstructor, &c.name, msg.clone(), Remediation::Applied(msg)));
                    fixed.push(DiagnosticKind::FactoryConstructor);
                }
                for g in &c.alias_groups {
                    let stmt = c.methods.iter().find(|m| m.name == g.canonical).map_or(c.ctor, |m| m.stmt);
                    let verb = if g.aliases.len() == 1 { "delegates" } else { "delegate" };
                    let aliases = g.aliases.iter().map(|a| format!("`{a}`")).collect::<Vec<_>>().join(", ");
                    let msg = format!("`{}` holds the method; {aliases} {verb} to it", g.canonical);
                    diagnostics.push(diag(module, stmt, DiagnosticKind::MethodAlias, &c.name, msg.clone(), Remediation::Applied(msg)));
                    fixed.push(DiagnosticKind::MethodAlias);
                }
                for (class, use_text, null_split) in hoisted[m].iter().filter(|(n, ..)| n == &c.name) {
                    let msg = if *null_split {
                        format!("`{use_text}` initialized with `null`; the instance is created after the class declaration")
                    } else {
                        format!("`{class}` moved above `{use_text}`")
                    };
                    diagnostics.push(diag(module, c.ctor, DiagnosticKind::Hoisting, &c.name, msg.clone(), Remediation::Applied(msg)));
                    fixed.push(DiagnosticKind::Hoisting);
                }
                if let Some((_, fix)) = &infos[m].tbs[i] {
                    plan.tbs.insert(c.name.clone(), fix.clone());
                    let span = match &infos[m].shapes[i] {
                        Some(SuperCallShape::FunctionArg { stmt, .. }) => *stmt,
                        _ => c.ctor,
                    };
                    let msg = format!("`super()` is called first; the function is passed through `{}.{}` bound to `this`", fix.superclass, fix.setter);
                    diagnostics.push(diag(module, span, DiagnosticKind::ThisBeforeSuper, &c.name, msg.clone(), Remediation::Applied(msg)));
                    fixed.push(DiagnosticKind::ThisBeforeSuper);
                }
                if let Some(f) = ctor_function(module, c) {
                    for (method, span, names) in captured_methods(module, f, c) {
                        let msg = format!("method `{method}` uses constructor local(s) {} and stays in the constructor", names.join(", "));
                        diagnostics.push(manual(module, span, DiagnosticKind::CapturedLocal, &c.name, msg));
                    }
                }
                fixed.sort();
                fixed.dedup();
                plan.statuses.push(if fixed.is_empty() { PlanStatus::Good } else { PlanStatus::NeedsBadFix(fixed) });
            }
            diagnostics.sort_by_key(|d| (d.span.start, d.kind));
            plan.diagnostics = diagnostics;
            plan
        })
        .collect();
    Ok(plans)
}
