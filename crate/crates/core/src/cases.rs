//! Bad and ugly cases: constructs the three rules cannot migrate as-is.
//!
//! Bad cases get a mechanical remediation (or a manual-work diagnostic when
//! the remediation does not apply); ugly cases are reported and left alone.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::detect::{ClassModel, MethodIdiom, ProgramIndex};
use crate::js::*;
use crate::migrate::edit::Edit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagnosticKind {
    ThisBeforeSuper,
    FactoryConstructor,
    Hoisting,
    MethodAlias,
    DynamicAccessor,
    StaticProperty,
    OptionalFeature,
    UnknownSuperclass,
    ConflictingMethodNames,
    SuperCallOutsideClass,
    PrototypeOverwrite,
    NestedSuperCall,
    CapturedLocal,
    DuplicateClassName,
}

impl DiagnosticKind {
    pub fn severity(self) -> Severity {
        use DiagnosticKind::*;
        match self {
            ThisBeforeSuper | FactoryConstructor | Hoisting | MethodAlias => Severity::Bad,
            DynamicAccessor | StaticProperty | OptionalFeature => Severity::Ugly,
            _ => Severity::Rule,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Bad,
    Ugly,
    /// A rule precondition failed; the class is left as is.
    Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail")]
pub enum Remediation {
    Applied(String),
    Manual(String),
    Preserved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub file: PathBuf,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub severity: Severity,
    pub location: Location,
    /// Byte range in the original file.
    pub span: Span,
    pub class_name: Option<String>,
    pub message: String,
    pub remediation: Remediation,
}

impl Diagnostic {
    pub fn new(
        module: &SourceModule,
        span: Span,
        kind: DiagnosticKind,
        class_name: Option<&str>,
        message: impl Into<String>,
        remediation: Remediation,
    ) -> Self {
        let (start_line, start_col) = module.line_col(span.start);
        let (end_line, end_col) = module.line_col(span.end);
        Diagnostic {
            kind,
            severity: kind.severity(),
            location: Location { file: module.path.clone(), start_line, start_col, end_line, end_col },
            span,
            class_name: class_name.map(str::to_string),
            message: message.into(),
            remediation,
        }
    }

    pub fn is_manual(&self) -> bool {
        matches!(self.remediation, Remediation::Manual(_))
    }
}

fn tok_text<'a>(module: &'a SourceModule, toks: &[Token], i: usize) -> &'a str {
    toks.get(i).map_or("", |t| module.slice(t.span))
}

// ---- ugly cases -----------------------------------------------------------

/// Reports dynamic accessors, prototype data properties and members added
/// to classes imported from other modules. Nothing is rewritten.
pub fn scan_ugly_cases(module: &SourceModule, classes: &[ClassModel], program: &ProgramIndex) -> Vec<Diagnostic> {
    let mut out = dynamic_accessors(module, classes);
    let local: BTreeSet<&str> = classes.iter().map(|c| c.name.as_str()).collect();
    let requires = require_bindings(module);
    let declared = declared_names(module);
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            let StmtKind::ExprStmt(p) = &s.kind else { continue };
            let (owner, member, is_data) = match p {
                ExprPattern::ProtoMethodAssign { owner, name, .. } => (owner, name, false),
                ExprPattern::ProtoPropAssign { owner, name, value } => (owner, name, !looks_like_function(module, *value)),
                ExprPattern::AccessorDefine { target, name: AccessorName::Literal(name), .. } if target.len() >= 2 => {
                    (&target[..target.len() - 1].to_vec(), name, false)
                }
                _ => continue,
            };
            let owner: &[String] = owner;
            let class = owner.last().unwrap().as_str();
            let root = owner[0].as_str();
            if requires.contains(root) {
                let msg = format!("member `{member}` is added to `{}`, which is imported from another module", owner.join("."));
                out.push(Diagnostic::new(module, s.span, DiagnosticKind::OptionalFeature, Some(class), msg, Remediation::Preserved));
                continue;
            }
            if owner.len() != 1 {
                continue;
            }
            let foreign_ambiguous = !declared.contains(class) && program.declarations.get(class).is_some_and(|f| f.len() > 1);
            if foreign_ambiguous {
                let msg = format!("member `{member}` targets `{class}`, declared in several other modules");
                out.push(Diagnostic::new(module, s.span, DiagnosticKind::OptionalFeature, Some(class), msg, Remediation::Preserved));
                continue;
            }
            let is_class = local.contains(class) || (!declared.contains(class) && program.unique_declaration(class).is_some());
            if is_data && is_class {
                let msg = format!("data property `{member}` is shared through the prototype of `{class}`");
                out.push(Diagnostic::new(module, s.span, DiagnosticKind::StaticProperty, Some(class), msg, Remediation::Preserved));
            }
        }
    });
    out.sort_by_key(|d| (d.span.start, d.kind));
    out
}

fn looks_like_function(module: &SourceModule, value: Span) -> bool {
    let toks = module.code_tokens(value);
    let first = tok_text(module, &toks, 0);
    first == "function"
        || (first == "async" && tok_text(module, &toks, 1) == "function")
        || eager_tokens(&module.text, &toks, true).iter().any(|t| module.slice(t.span) == "=>")
}

/// `__defineGetter__`/`__defineSetter__` calls whose property name is not a
/// string literal, anywhere in the module.
fn dynamic_accessors(module: &SourceModule, classes: &[ClassModel]) -> Vec<Diagnostic> {
    let toks = module.code_tokens(Span::new(0, module.text.len()));
    let mut out = Vec::new();
    for i in 1..toks.len() {
        let name = tok_text(module, &toks, i);
        if !matches!(name, "__defineGetter__" | "__defineSetter__") || tok_text(module, &toks, i - 1) != "." || tok_text(module, &toks, i + 1) != "(" {
            continue;
        }
        let open = i + 1;
        let close = matching_close(&module.text, &toks, open);
        let mut k = open + 1;
        while k < close && tok_text(module, &toks, k) != "," {
            if matches!(tok_text(module, &toks, k), "(" | "[" | "{") {
                k = matching_close(&module.text, &toks, k);
            }
            k += 1;
        }
        if k == open + 2 && toks[open + 1].kind == TokenKind::Str {
            continue;
        }
        // Walk back over `a.b.c` to the start of the target path.
        let mut start = i - 1;
        while start >= 1 && toks[start - 1].kind == TokenKind::Ident {
            start -= 1;
            if start >= 1 && tok_text(module, &toks, start - 1) == "." {
                start -= 1;
            } else {
                break;
            }
        }
        let span = Span::new(toks[start].span.start, toks[close].span.end);
        let target: Vec<&str> = toks[start..i - 1].iter().map(|t| module.slice(t.span)).filter(|s| *s != ".").collect();
        let class = match target.as_slice() {
            [c, "prototype"] => Some(c.to_string()),
            ["this"] => classes.iter().find(|c| c.ctor.contains(span)).map(|c| c.name.clone()),
            _ => None,
        };
        let kind = if name == "__defineGetter__" { "getter" } else { "setter" };
        let msg = format!("{kind} name `{}` is only known at run time", module.slice(Span::new(toks[open + 1].span.start, toks[k - 1].span.end)));
        out.push(Diagnostic::new(module, span, DiagnosticKind::DynamicAccessor, class.as_deref(), msg, Remediation::Preserved));
    }
    out
}

pub fn require_bindings(module: &SourceModule) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            if let StmtKind::VarDecl(v) = &s.kind {
                out.extend(v.declarators.iter().filter(|d| d.is_require).map(|d| d.name.clone()));
            }
        }
    });
    out
}

/// Names declared by functions, classes and variables anywhere in the
/// module's statement lists.
pub fn declared_names(module: &SourceModule) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            match &s.kind {
                StmtKind::FunctionDecl(f) => out.extend(f.name.clone()),
                StmtKind::ClassDecl(c) => {
                    out.insert(c.name.clone());
                }
                StmtKind::VarDecl(v) => out.extend(v.declarators.iter().map(|d| d.name.clone())),
                _ => {}
            }
        }
    });
    out
}

// ---- factory constructors ---------------------------------------------------

/// Index and span of the `if (!(this instanceof C)) return new C(...)` guard
/// among the constructor's top-level statements.
pub fn find_factory_guard(module: &SourceModule, ctor: &Function, name: &str) -> Option<(usize, Span)> {
    ctor.body.stmts.iter().enumerate().find_map(|(i, s)| match crate::detect::factory_guard(module, s) {
        Some((x, y, _)) if x == name && y == name => Some((i, s.span)),
        _ => None,
    })
}

/// Spans of the identifier `name` in `name.prototype` occurrences.
pub fn prototype_refs(module: &SourceModule, span: Span, name: &str) -> Vec<Span> {
    let toks = module.code_tokens(span);
    (0..toks.len())
        .filter(|&i| {
            module.slice(toks[i].span) == name
                && tok_text(module, &toks, i + 1) == "."
                && tok_text(module, &toks, i + 2) == "prototype"
                && (i == 0 || !matches!(tok_text(module, &toks, i - 1), "." | "?."))
        })
        .map(|i| toks[i].span)
        .collect()
}

/// Spans of `name` in `instanceof name` occurrences.
pub fn instanceof_refs(module: &SourceModule, span: Span, name: &str) -> Vec<Span> {
    let toks = module.code_tokens(span);
    (1..toks.len())
        .filter(|&i| module.slice(toks[i].span) == name && tok_text(module, &toks, i - 1) == "instanceof" && tok_text(module, &toks, i + 1) != ".")
        .map(|i| toks[i].span)
        .collect()
}

/// First free name of the form `_C`, `_C1`, `_C2`, ...
pub fn fresh_name(module: &SourceModule, program: &ProgramIndex, base: &str) -> String {
    let used: BTreeSet<&str> = module.tokens().iter().filter(|t| t.kind == TokenKind::Ident).map(|t| module.slice(t.span)).collect();
    let taken = |n: &str| used.contains(n) || program.declarations.contains_key(n) || program.es6_classes.contains(n);
    let first = format!("_{base}");
    if !taken(&first) {
        return first;
    }
    (1..).map(|k| format!("_{base}{k}")).find(|n| !taken(n)).unwrap()
}

// ---- super constructor calls ------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum SuperCallShape {
    /// No call to the superclass constructor.
    Missing,
    /// A single top-level `D.call(this, ...)` statement with no `this` before it.
    Clean {
        stmt: Span,
    },
    /// As `Clean`, but the only argument is a function expression that uses its own `this`.
    FunctionArg {
        stmt: Span,
        arg: Span,
    },
    ThisFirst {
        span: Span,
        reason: String,
    },
    Nested {
        span: Span,
    },
}

/// Token indices where `path` (dotted) starts, followed by `.call(`/`.apply(`.
fn call_apply_sites(module: &SourceModule, toks: &[Token], path: &[&str]) -> Vec<usize> {
    let n = path.len() * 2 - 1;
    (0..toks.len())
        .filter(|&i| {
            (0..path.len()).all(|k| tok_text(module, toks, i + 2 * k) == path[k])
                && (0..path.len() - 1).all(|k| tok_text(module, toks, i + 2 * k + 1) == ".")
                && tok_text(module, toks, i + n) == "."
                && matches!(tok_text(module, toks, i + n + 1), "call" | "apply")
                && tok_text(module, toks, i + n + 2) == "("
                && (i == 0 || !matches!(tok_text(module, toks, i - 1), "." | "?."))
        })
        .collect()
}

fn has_eager_this(module: &SourceModule, span: Span) -> bool {
    let toks = module.code_tokens(span);
    eager_tokens(&module.text, &toks, false).iter().any(|t| module.slice(t.span) == "this")
}

pub fn super_call_shape(module: &SourceModule, ctor: &Function, super_name: &str) -> SuperCallShape {
    let path: Vec<&str> = super_name.split('.').collect();
    let toks = module.code_tokens(ctor.body_span);
    let sites = call_apply_sites(module, &toks, &path);
    let Some(&first) = sites.first() else { return SuperCallShape::Missing };
    let site_span = toks[first].span;
    if sites.len() > 1 {
        return SuperCallShape::Nested { span: site_span };
    }
    let found = ctor.body.stmts.iter().enumerate().find(|(_, s)| {
        s.span.contains(site_span) && matches!(&s.kind, StmtKind::ExprStmt(ExprPattern::SuperCtorCall { super_name: d, .. }) if d == super_name)
    });
    let Some((idx, stmt)) = found else { return SuperCallShape::Nested { span: site_span } };
    if let Some(s) = ctor.body.stmts[..idx].iter().find(|s| has_eager_this(module, s.span)) {
        return SuperCallShape::ThisFirst { span: s.span, reason: "`this` is used before the superclass constructor call".into() };
    }
    let StmtKind::ExprStmt(ExprPattern::SuperCtorCall { args, apply, .. }) = &stmt.kind else { unreachable!() };
    if args.iter().any(|a| has_eager_this(module, *a)) {
        return SuperCallShape::ThisFirst { span: stmt.span, reason: "an argument of the superclass constructor call uses `this`".into() };
    }
    let uses_this = |a: &Span| module.code_tokens(*a).iter().any(|t| module.slice(t.span) == "this");
    match args.as_slice() {
        [a] if !apply && uses_this(a) && is_function_expr(module, *a) => SuperCallShape::FunctionArg { stmt: stmt.span, arg: *a },
        _ if args.iter().any(uses_this) => {
            SuperCallShape::ThisFirst { span: stmt.span, reason: "a function passed to the superclass constructor uses `this`".into() }
        }
        _ => SuperCallShape::Clean { stmt: stmt.span },
    }
}

fn is_function_expr(module: &SourceModule, span: Span) -> bool {
    let toks = module.code_tokens(span);
    if tok_text(module, &toks, 0) != "function" {
        return false;
    }
    let Some(open) = toks.iter().position(|t| module.slice(t.span) == "{") else { return false };
    matching_close(&module.text, &toks, open) + 1 == toks.len()
}

/// How a superclass constructor stores the parameter a subclass passes
/// through `this`: `this._x = p`. Gives `(setter name, property, parameter)`.
pub fn setter_for_param(module: &SourceModule, super_ctor: &Function) -> Option<(String, String, String)> {
    let param = super_ctor.param_names.first()?;
    let mut stores = super_ctor.body.stmts.iter().filter_map(|s| match &s.kind {
        StmtKind::ExprStmt(ExprPattern::ThisPropAssign { name, value: Value::Opaque(v) }) if module.slice(*v).trim() == param => Some(name),
        _ => None,
    });
    let prop = stores.next()?;
    if stores.next().is_some() {
        return None;
    }
    let bare = prop.trim_start_matches('_');
    let mut chars = bare.chars();
    let first = chars.next()?;
    Some((format!("set{}{}", first.to_uppercase(), chars.as_str()), prop.clone(), param.clone()))
}

// ---- captured locals --------------------------------------------------------

/// Constructor-local names: parameters, declared variables and functions.
pub fn ctor_locals(module: &SourceModule, ctor: &Function) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = ctor.param_names.iter().cloned().collect();
    let toks = module.code_tokens(ctor.body_span);
    for w in toks.windows(2) {
        if matches!(module.slice(w[0].span), "var" | "let" | "const" | "function") && w[1].kind == TokenKind::Ident {
            out.insert(module.slice(w[1].span).to_string());
        }
    }
    out
}

/// Inner-this methods that reference constructor locals; these stay in the
/// constructor. Returns `(method, statement span, captured names)`.
pub fn captured_methods(module: &SourceModule, ctor: &Function, class: &ClassModel) -> Vec<(String, Span, Vec<String>)> {
    let locals = ctor_locals(module, ctor);
    class
        .methods
        .iter()
        .filter(|m| m.idiom == MethodIdiom::InnerThis)
        .filter_map(|m| {
            let toks = module.code_tokens(m.function);
            let body_start = toks.iter().position(|t| module.slice(t.span) == "{").unwrap_or(0);
            let own: BTreeSet<&str> = toks[..body_start].iter().filter(|t| t.kind == TokenKind::Ident).map(|t| module.slice(t.span)).collect();
            let mut hit: Vec<String> = free_identifiers(&module.text, &toks[body_start..])
                .into_iter()
                .map(|(_, s)| s)
                .filter(|s| locals.contains(*s) && !own.contains(s))
                .map(str::to_string)
                .collect();
            hit.sort();
            hit.dedup();
            (!hit.is_empty()).then(|| (m.name.clone(), m.stmt, hit))
        })
        .collect()
}

// ---- method aliases ---------------------------------------------------------

/// Splits `C.prototype.a = C.prototype.b = function (...) {...};` into the
/// real method `b` followed by a delegating `a`.
pub fn alias_split(module: &SourceModule, stmt: &Stmt, targets: &[Path], function: &Function) -> String {
    let nl = module.newline.as_str();
    let indent = module.indent_at(stmt.span.start);
    let (real, aliases) = targets.split_last().unwrap();
    let text = crate::js::printer::reindent(module.slice(function.span), module.body_indent(function.body_span), indent);
    let mut out = format!("{} = {};", real.join("."), text);
    let params = module.slice(function.params);
    let body_toks = module.code_tokens(function.body_span);
    let uses_arguments = body_toks.iter().any(|t| module.slice(t.span) == "arguments");
    let simple = module.code_tokens(function.params).iter().all(|t| t.kind == TokenKind::Ident || matches!(module.slice(t.span), "(" | ")" | ","));
    let real_name = real.last().unwrap();
    let call = if uses_arguments || !simple {
        format!("this.{real_name}.apply(this, arguments)")
    } else {
        format!("this.{real_name}({})", function.param_names.join(", "))
    };
    for alias in aliases {
        out.push_str(&format!("{nl}{indent}// Method alias{nl}{indent}{} = function{params} {{ return {call}; }};", alias.join(".")));
    }
    out
}

// ---- hoisting -----------------------------------------------------------------

/// A class that will become a (non-hoisted) class declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoistClass {
    /// The declared name plus any name that stands for it (a factory wrapper).
    pub names: Vec<String>,
    pub superclass: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HoistAction {
    /// Move the constructor declaration in front of statement `before`.
    Move {
        class: String,
        ctor: Span,
        before: Span,
        use_text: String,
    },
    /// `var x = new C();` → `var x = null;` here, `x = new C();` after the class.
    NullSplit {
        class: String,
        inits: Vec<(String, Span)>,
        insert_at: usize,
        indent: String,
        use_text: String,
    },
    Manual {
        class: String,
        span: Span,
        reason: String,
    },
}

fn first_line(text: &str) -> String {
    let line = text.lines().next().unwrap_or("").trim();
    if line.len() < text.trim().len() {
        format!("{line} ...")
    } else {
        line.to_string()
    }
}

/// The first hoisting problem among `classes`, or `None` when every class
/// is declared before its eager uses.
pub fn plan_hoisting(module: &SourceModule, classes: &BTreeMap<String, HoistClass>) -> Option<HoistAction> {
    let mut found = None;
    module.walk_blocks(&mut |block, _| {
        if found.is_none() {
            found = plan_block(module, block, classes);
        }
    });
    found
}

fn plan_block(module: &SourceModule, block: &Block, classes: &BTreeMap<String, HoistClass>) -> Option<HoistAction> {
    let mut ctors: Vec<(usize, &String, &HoistClass)> = Vec::new();
    for (i, s) in block.stmts.iter().enumerate() {
        if let StmtKind::FunctionDecl(Function { name: Some(n), .. }) = &s.kind {
            if let Some((key, hc)) = classes.get_key_value(n) {
                ctors.push((i, key, hc));
            }
        }
    }
    if ctors.is_empty() {
        return None;
    }
    let owned_by_migrating = |s: &Stmt| match &s.kind {
        StmtKind::ExprStmt(p) => crate::detect::pattern_owner(p).is_some_and(|o| classes.contains_key(o)),
        _ => false,
    };
    let non_function_decl = |name: &str, lo: usize, hi: usize| {
        block.stmts[lo..hi].iter().any(|s| match &s.kind {
            StmtKind::VarDecl(v) => v.declarators.iter().any(|d| d.name == name),
            StmtKind::ClassDecl(c) => c.name == name,
            _ => false,
        })
    };
    for &(k, name, hc) in &ctors {
        let ctor_span = block.stmts[k].full_span();
        if let Some(sup) = hc.superclass.as_deref().map(|s| s.split('.').next().unwrap()) {
            if let Some(&(d, dname, _)) = ctors.iter().find(|(_, n, _)| n.as_str() == sup) {
                if d > k {
                    let before = block.stmts[k].full_span();
                    return Some(HoistAction::Move {
                        class: dname.clone(),
                        ctor: block.stmts[d].full_span(),
                        before,
                        use_text: format!("class {name} extends {sup}"),
                    });
                }
            } else if non_function_decl(sup, k, block.stmts.len()) {
                let reason = format!("superclass `{sup}` is initialized after `{name}` is declared");
                return Some(HoistAction::Manual { class: name.clone(), span: block.stmts[k].span, reason });
            }
        }
        for j in 0..k {
            let s = &block.stmts[j];
            if matches!(s.kind, StmtKind::FunctionDecl(_)) || owned_by_migrating(s) {
                continue;
            }
            let refs = |span: Span| {
                let toks = module.code_tokens(span);
                let eager = eager_tokens(&module.text, &toks, true);
                free_identifiers(&module.text, &eager).iter().any(|(_, id)| hc.names.iter().any(|n| n == id))
            };
            if !refs(s.span) {
                continue;
            }
            let use_text = first_line(module.slice(s.span));
            if let StmtKind::VarDecl(v) = &s.kind {
                let users: Vec<&Declarator> = v.declarators.iter().filter(|d| d.init.is_some_and(&refs)).collect();
                let instantiates = |d: &&Declarator| {
                    let toks = module.code_tokens(d.init.unwrap());
                    toks.windows(2).any(|w| module.slice(w[0].span) == "new" && hc.names.iter().any(|n| n == module.slice(w[1].span)))
                };
                if v.keyword != "const"
                    && !users.is_empty()
                    && users.iter().all(instantiates)
                    && users.len() == v.declarators.iter().filter(|d| d.init.is_some_and(&refs)).count()
                {
                    let inits = users.iter().map(|d| (d.name.clone(), d.init.unwrap())).collect();
                    let ctor = &block.stmts[k];
                    return Some(HoistAction::NullSplit {
                        class: name.clone(),
                        inits,
                        insert_at: ctor.trailing.end,
                        indent: module.indent_at(ctor.span.start).to_string(),
                        use_text,
                    });
                }
            }
            if let Some(sup) = hc.superclass.as_deref().map(|s| s.split('.').next().unwrap()) {
                if non_function_decl(sup, j, k) {
                    let reason = format!("moving `{name}` above `{use_text}` would precede the initialization of superclass `{sup}`");
                    return Some(HoistAction::Manual { class: name.clone(), span: s.span, reason });
                }
            }
            return Some(HoistAction::Move { class: name.clone(), ctor: ctor_span, before: s.full_span(), use_text });
        }
    }
    None
}

/// Edits performing a (non-manual) hoisting action.
pub fn hoisting_edits(module: &SourceModule, action: &HoistAction) -> Vec<Edit> {
    let nl = module.newline.as_str();
    match action {
        HoistAction::Move { ctor, before, .. } => {
            let mut moved = module.slice(*ctor).to_string();
            if before.start == 0 {
                // Nothing precedes the target: move the separating newline behind the text.
                let lead = moved.len() - moved.trim_start_matches(['\r', '\n']).len();
                let lead = if moved.starts_with("\r\n") { 2 } else { lead.min(1) };
                moved = format!("{}{}", &moved[lead..], nl);
            }
            vec![Edit::insert(before.start, moved), Edit::delete(*ctor)]
        }
        HoistAction::NullSplit { inits, insert_at, indent, .. } => {
            let mut edits: Vec<Edit> = inits.iter().map(|(_, span)| Edit::replace(*span, "null")).collect();
            let assigns: String = inits.iter().map(|(n, span)| format!("{nl}{indent}{n} = {};", module.slice(*span))).collect();
            edits.push(Edit::insert(*insert_at, assigns));
            edits
        }
        HoistAction::Manual { .. } => Vec::new(),
    }
}

// ---- constructor calls ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallHow {
    /// `X.call(...)` / `X.apply(...)`
    CallOrApply,
    /// `X(...)` without `new`
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    pub name: String,
    /// Span of the identifier `X`.
    pub span: Span,
    pub how: CallHow,
}

/// Every place where a function is invoked other than through `new`.
pub fn call_sites(module: &SourceModule) -> Vec<CallSite> {
    let toks = module.code_tokens(Span::new(0, module.text.len()));
    let mut out = Vec::new();
    for i in 0..toks.len() {
        if toks[i].kind != TokenKind::Ident {
            continue;
        }
        let name = module.slice(toks[i].span);
        if is_keyword(name) {
            continue;
        }
        let prev = if i > 0 { tok_text(module, &toks, i - 1) } else { "" };
        let prev2 = if i > 1 { tok_text(module, &toks, i - 2) } else { "" };
        if tok_text(module, &toks, i + 1) == "."
            && matches!(tok_text(module, &toks, i + 2), "call" | "apply")
            && tok_text(module, &toks, i + 3) == "("
            && !(prev == "." && prev2 == "prototype")
        {
            out.push(CallSite { name: name.to_string(), span: toks[i].span, how: CallHow::CallOrApply });
        } else if tok_text(module, &toks, i + 1) == "(" && !matches!(prev, "." | "?." | "new" | "function" | "class" | "get" | "set" | "static" | "async" | "*")
        {
            let close = matching_close(&module.text, &toks, i + 1);
            if tok_text(module, &toks, close + 1) != "{" {
                out.push(CallSite { name: name.to_string(), span: toks[i].span, how: CallHow::Plain });
            }
        }
    }
    out
}
