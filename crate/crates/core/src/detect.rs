//! Detection of emulated classes: constructor functions together with the
//! methods bound to `this`, to their prototype, or to the constructor itself.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::js::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MethodIdiom {
    /// `this.m = function` inside the constructor
    InnerThis,
    /// `C.prototype.m = function`
    Prototype,
    /// `C.m = function`
    CtorProp,
    Getter,
    Setter,
}

impl MethodIdiom {
    pub fn flavor(self, rule1_literal: bool) -> MethodFlavor {
        match self {
            MethodIdiom::InnerThis | MethodIdiom::Prototype => MethodFlavor::Instance,
            MethodIdiom::CtorProp if rule1_literal => MethodFlavor::Instance,
            MethodIdiom::CtorProp => MethodFlavor::Static,
            MethodIdiom::Getter => MethodFlavor::Getter,
            MethodIdiom::Setter => MethodFlavor::Setter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodModel {
    pub name: String,
    pub idiom: MethodIdiom,
    pub params: Vec<String>,
    /// Statement that defines the method.
    pub stmt: Span,
    /// The function literal.
    pub function: Span,
    /// Defined in another file than the constructor.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub foreign_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasGroup {
    pub canonical: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassModel {
    pub name: String,
    pub source_file: PathBuf,
    /// Span of the constructor's function declaration statement.
    pub ctor: Span,
    pub ctor_params: Vec<String>,
    /// `inner` span of the statement list holding the constructor.
    pub scope: Span,
    pub depth: usize,
    pub methods: Vec<MethodModel>,
    pub attributes: Vec<String>,
    pub superclass: Option<String>,
    pub alias_groups: Vec<AliasGroup>,
}

impl ClassModel {
    pub fn key(&self) -> (PathBuf, String) {
        (self.source_file.clone(), self.name.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub noc: usize,
    pub nom: usize,
    pub class_density: f64,
    pub total_functions: usize,
    /// Functions that are constructors or methods of a detected class.
    pub class_functions: usize,
}

impl ClassMetrics {
    /// Sums per-file metrics; class density is recomputed from the sums.
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a ClassMetrics>) -> ClassMetrics {
        let mut out = ClassMetrics { noc: 0, nom: 0, class_density: 0.0, total_functions: 0, class_functions: 0 };
        for p in parts {
            out.noc += p.noc;
            out.nom += p.nom;
            out.total_functions += p.total_functions;
            out.class_functions += p.class_functions;
        }
        out.class_density = density(out.class_functions, out.total_functions);
        out
    }
}

fn density(class_functions: usize, total_functions: usize) -> f64 {
    if total_functions == 0 {
        0.0
    } else {
        class_functions as f64 / total_functions as f64
    }
}

/// Facts about one module needed to resolve references across files.
#[derive(Debug, Clone, Default)]
pub struct ModuleFacts {
    pub path: PathBuf,
    pub function_decls: Vec<String>,
    pub es6_classes: Vec<String>,
    pub instantiated: BTreeSet<String>,
    /// Top-level `C.prototype.m = function` statements, by `C`.
    pub proto_methods: Vec<(String, MethodModel)>,
}

/// Program-wide view used for cross-file resolution. Built by reducing the
/// per-module facts in path order.
#[derive(Debug, Clone, Default)]
pub struct ProgramIndex {
    /// Declared constructor-like names and the files declaring them.
    pub declarations: BTreeMap<String, Vec<PathBuf>>,
    pub es6_classes: BTreeSet<String>,
    pub instantiated: BTreeMap<String, BTreeSet<PathBuf>>,
    pub proto_methods: BTreeMap<String, Vec<(PathBuf, MethodModel)>>,
}

impl ProgramIndex {
    pub fn build<'a>(modules: impl IntoIterator<Item = &'a SourceModule>) -> Self {
        let facts: Vec<ModuleFacts> = modules.into_iter().map(module_facts).collect();
        Self::from_facts(facts)
    }

    pub fn from_facts(mut facts: Vec<ModuleFacts>) -> Self {
        facts.sort_by(|a, b| a.path.cmp(&b.path));
        let mut index = ProgramIndex::default();
        for f in facts {
            for name in f.function_decls {
                index.declarations.entry(name).or_default().push(f.path.clone());
            }
            index.es6_classes.extend(f.es6_classes);
            for name in f.instantiated {
                index.instantiated.entry(name).or_default().insert(f.path.clone());
            }
            for (class, m) in f.proto_methods {
                index.proto_methods.entry(class).or_default().push((f.path.clone(), m));
            }
        }
        index
    }

    /// The single file declaring `name`, if exactly one does.
    pub fn unique_declaration(&self, name: &str) -> Option<&PathBuf> {
        match self.declarations.get(name).map(Vec::as_slice) {
            Some([one]) => Some(one),
            _ => None,
        }
    }

    pub fn is_instantiated(&self, name: &str, from: &PathBuf) -> bool {
        match self.instantiated.get(name) {
            Some(files) if files.contains(from) => true,
            Some(files) => !files.is_empty() && self.unique_declaration(name).is_some(),
            None => false,
        }
    }
}

pub fn module_facts(module: &SourceModule) -> ModuleFacts {
    let mut facts = ModuleFacts { path: module.path.clone(), ..Default::default() };
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            match &s.kind {
                StmtKind::FunctionDecl(f) => facts.function_decls.extend(f.name.clone()),
                StmtKind::ClassDecl(c) => facts.es6_classes.push(c.name.clone()),
                _ => {}
            }
        }
    });
    for s in &module.body.stmts {
        if let StmtKind::ExprStmt(ExprPattern::ProtoMethodAssign { owner, name, function }) = &s.kind {
            if let [class] = owner.as_slice() {
                facts.proto_methods.push((class.clone(), method(name, MethodIdiom::Prototype, function, s.span)));
            }
        }
    }
    facts.instantiated = instantiated_names(module);
    facts
}

/// Names `X` appearing as `new X`.
pub fn instantiated_names(module: &SourceModule) -> BTreeSet<String> {
    let toks = module.code_tokens(Span::new(0, module.text.len()));
    toks.windows(2)
        .filter(|w| w[0].kind == TokenKind::Ident && module.slice(w[0].span) == "new" && w[1].kind == TokenKind::Ident)
        .map(|w| module.slice(w[1].span).to_string())
        .collect()
}

fn method(name: &str, idiom: MethodIdiom, f: &Function, stmt: Span) -> MethodModel {
    MethodModel { name: name.to_string(), idiom, params: f.param_names.clone(), stmt, function: f.span, foreign_file: None }
}

/// `if (!(this instanceof X)) return new Y(args);` with optional braces.
/// Returns `(X, Y, args span including parens)`.
pub fn factory_guard(module: &SourceModule, stmt: &Stmt) -> Option<(String, String, Span)> {
    if stmt.kind != StmtKind::Opaque {
        return None;
    }
    let toks = module.code_tokens(stmt.span);
    let t: Vec<&str> = toks.iter().map(|t| module.slice(t.span)).collect();
    let head = ["if", "(", "!", "(", "this", "instanceof"];
    if t.len() < 14 || t[..6] != head || t[7..9] != [")", ")"] {
        return None;
    }
    let checked = t[6].to_string();
    let mut i = 9;
    let braced = t[i] == "{";
    if braced {
        i += 1;
    }
    if t.get(i..i + 2)? != ["return", "new"] {
        return None;
    }
    let created = t.get(i + 2)?.to_string();
    let open = i + 3;
    if t.get(open) != Some(&"(") {
        return None;
    }
    let close = matching_close(&module.text, &toks, open);
    let mut end = close + 1;
    if t.get(end) == Some(&";") {
        end += 1;
    }
    if braced {
        if t.get(end) != Some(&"}") {
            return None;
        }
        end += 1;
    }
    if end != t.len() {
        return None;
    }
    Some((checked, created, Span::new(toks[open].span.start, toks[close].span.end)))
}

/// A function whose last statement forwards to a different class through
/// an `instanceof` guard. These are left behind by the factory remediation.
pub fn is_factory_wrapper(module: &SourceModule, f: &Function) -> bool {
    let Some(name) = &f.name else { return false };
    let Some(last) = f.body.stmts.last() else { return false };
    matches!(factory_guard(module, last), Some((x, y, _)) if x == y && &x != name)
}

/// Statements in the constructor's scope that belong to class `name`.
pub fn owned_statements<'a>(block: &'a Block, name: &str) -> impl Iterator<Item = &'a Stmt> + 'a {
    let name = name.to_string();
    block.stmts.iter().filter(move |s| match &s.kind {
        StmtKind::ExprStmt(p) => pattern_owner(p) == Some(name.as_str()),
        _ => false,
    })
}

/// The class a top-level pattern attaches to, when it names one directly.
pub fn pattern_owner(p: &ExprPattern) -> Option<&str> {
    match p {
        ExprPattern::ProtoMethodAssign { owner, .. } | ExprPattern::ProtoPropAssign { owner, .. } => match owner.as_slice() {
            [c] => Some(c),
            _ => None,
        },
        ExprPattern::CtorPropAssign { class_name, value: Value::Function(_), .. } => Some(class_name),
        ExprPattern::ProtoChainAssign { class_name, .. } | ExprPattern::ProtoCtorFixup { class_name } | ExprPattern::ProtoReplace { class_name } => {
            Some(class_name)
        }
        ExprPattern::AccessorDefine { target, .. } => match target.as_slice() {
            [c, p] if p == "prototype" => Some(c),
            _ => None,
        },
        ExprPattern::AliasChainAssign { targets, .. } => {
            let first = targets.first()?;
            let same = targets.iter().all(|t| t.len() == 3 && t[1] == "prototype" && t[0] == first[0]);
            same.then_some(first[0].as_str())
        }
        _ => None,
    }
}

/// Detects the emulated classes of `module`.
pub fn detect(module: &SourceModule, program: &ProgramIndex) -> Vec<ClassModel> {
    let mut classes = Vec::new();
    let local_new = instantiated_names(module);
    module.walk_blocks(&mut |block, depth| {
        for s in &block.stmts {
            let StmtKind::FunctionDecl(f) = &s.kind else { continue };
            let Some(name) = f.name.as_deref() else { continue };
            if is_factory_wrapper(module, f) {
                continue;
            }
            if let Some(c) = detect_one(module, program, &local_new, block, depth, s, f, name) {
                classes.push(c);
            }
        }
    });
    classes.sort_by_key(|c| c.ctor.start);
    classes
}

#[allow(clippy::too_many_arguments)]
fn detect_one(
    module: &SourceModule,
    program: &ProgramIndex,
    local_new: &BTreeSet<String>,
    block: &Block,
    depth: usize,
    stmt: &Stmt,
    f: &Function,
    name: &str,
) -> Option<ClassModel> {
    let mut methods = Vec::new();
    let mut attributes = Vec::new();
    for s in &f.body.stmts {
        if let StmtKind::ExprStmt(ExprPattern::ThisPropAssign { name: prop, value }) = &s.kind {
            match value {
                Value::Function(func) => methods.push(method(prop, MethodIdiom::InnerThis, func, s.span)),
                Value::Opaque(_) if !attributes.contains(prop) => attributes.push(prop.clone()),
                Value::Opaque(_) => {}
            }
        }
    }
    let mut owns_prototype = false;
    let mut superclass = None;
    let mut alias_groups = Vec::new();
    for s in owned_statements(block, name) {
        let StmtKind::ExprStmt(p) = &s.kind else { continue };
        match p {
            ExprPattern::ProtoMethodAssign { name: m, function, .. } => {
                owns_prototype = true;
                methods.push(method(m, MethodIdiom::Prototype, function, s.span));
            }
            ExprPattern::CtorPropAssign { name: m, value: Value::Function(function), .. } => {
                methods.push(method(m, MethodIdiom::CtorProp, function, s.span));
            }
            ExprPattern::AccessorDefine { kind, name: AccessorName::Literal(m), function, .. } => {
                owns_prototype = true;
                let idiom = if *kind == AccessorKind::Get { MethodIdiom::Getter } else { MethodIdiom::Setter };
                methods.push(method(m, idiom, function, s.span));
            }
            ExprPattern::AliasChainAssign { targets, function } => {
                owns_prototype = true;
                let names: Vec<String> = targets.iter().map(|t| t[2].clone()).collect();
                for n in &names {
                    methods.push(method(n, MethodIdiom::Prototype, function, s.span));
                }
                let (canonical, aliases) = names.split_last().unwrap();
                alias_groups.push(AliasGroup { canonical: canonical.clone(), aliases: aliases.to_vec() });
            }
            ExprPattern::ProtoChainAssign { super_name, .. } => {
                owns_prototype = true;
                superclass.get_or_insert_with(|| super_name.clone());
            }
            _ => owns_prototype = true,
        }
    }
    if depth == 0 && program.unique_declaration(name) == Some(&module.path) {
        for (file, m) in program.proto_methods.get(name).into_iter().flatten() {
            if file != &module.path {
                owns_prototype = true;
                methods.push(MethodModel { foreign_file: Some(file.clone()), ..m.clone() });
            }
        }
    }
    let instantiated = local_new.contains(name) || program.is_instantiated(name, &module.path);
    let has_this_props = !attributes.is_empty() || methods.iter().any(|m| m.idiom == MethodIdiom::InnerThis);
    if !(instantiated || has_this_props || owns_prototype) {
        return None;
    }
    Some(ClassModel {
        name: name.to_string(),
        source_file: module.path.clone(),
        ctor: stmt.span,
        ctor_params: f.param_names.clone(),
        scope: block.inner,
        depth,
        methods,
        attributes,
        superclass,
        alias_groups,
    })
}

/// Counts every function literal: declarations, expressions, arrows and
/// class members with bodies.
pub fn count_functions(module: &SourceModule) -> usize {
    let toks = module.code_tokens(Span::new(0, module.text.len()));
    let literals = toks
        .iter()
        .filter(|t| {
            let s = module.slice(t.span);
            (t.kind == TokenKind::Ident && s == "function") || (t.kind == TokenKind::Punct && s == "=>")
        })
        .count();
    let mut members = 0;
    module.walk_blocks(&mut |block, _| {
        for s in &block.stmts {
            if let StmtKind::ClassDecl(c) = &s.kind {
                members += c.members.iter().filter(|m| !matches!(m.kind, MemberKind::Other)).count();
            }
        }
    });
    literals + members
}

pub fn metrics<'a>(classes: &[ClassModel], modules: impl IntoIterator<Item = &'a SourceModule>) -> ClassMetrics {
    let total_functions: usize = modules.into_iter().map(count_functions).sum();
    let mut related: HashSet<(PathBuf, Span)> = HashSet::new();
    for c in classes {
        related.insert((c.source_file.clone(), c.ctor));
        for m in &c.methods {
            let file = m.foreign_file.clone().unwrap_or_else(|| c.source_file.clone());
            related.insert((file, m.function));
        }
    }
    ClassMetrics {
        noc: classes.len(),
        nom: classes.iter().map(|c| c.methods.len()).sum(),
        class_density: density(related.len(), total_functions),
        total_functions,
        class_functions: related.len(),
    }
}
