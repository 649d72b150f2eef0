//! Edit builders for the three rules and for the bad-case remediations that
//! reshape code around them. Each builder inspects the current module and
//! returns the edits of one rule instance, or `None` at its fixed point.

use serde::{Deserialize, Serialize};

use crate::cases::{alias_split, captured_methods, find_factory_guard, instanceof_refs, prototype_refs};
use crate::detect::{pattern_owner, ClassModel, MethodIdiom};
use crate::js::printer::{reindent, Layout};
use crate::js::*;

use super::edit::{apply_edits, Edit};

/// Planned fix for a subclass passing a `this`-using function to its
/// superclass constructor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TbsFix {
    pub superclass: String,
    pub setter: String,
    pub prop: String,
    pub param: String,
}

pub(crate) fn find_function_decl<'a>(module: &'a SourceModule, name: &str) -> Option<(&'a Block, usize)> {
    let mut found = None;
    module.walk_blocks(&mut |block, _| {
        if found.is_none() {
            if let Some(i) = block.stmts.iter().position(|s| matches!(&s.kind, StmtKind::FunctionDecl(f) if f.name.as_deref() == Some(name))) {
                found = Some((block, i));
            }
        }
    });
    found
}

pub(crate) fn find_class_decl<'a>(module: &'a SourceModule, name: &str) -> Option<(&'a Block, usize, &'a ClassDecl)> {
    let mut found = None;
    module.walk_blocks(&mut |block, _| {
        if found.is_some() {
            return;
        }
        for (i, s) in block.stmts.iter().enumerate() {
            if let StmtKind::ClassDecl(c) = &s.kind {
                if c.name == name {
                    found = Some((block, i, c));
                    return;
                }
            }
        }
    });
    found
}

fn function_of(stmt: &Stmt) -> &Function {
    match &stmt.kind {
        StmtKind::FunctionDecl(f) => f,
        _ => unreachable!("statement is not a function declaration"),
    }
}

fn layout(module: &SourceModule, at: usize) -> Layout {
    Layout { base: module.indent_at(at).to_string(), unit: module.indent.unit(), newline: module.newline }
}

// ---- factory constructors -----------------------------------------------------

/// Renames constructor `name` to `new_name` and leaves behind a wrapper
/// `name` that keeps the statements before the guard plus the guard.
pub fn factory_edits(module: &SourceModule, name: &str, new_name: &str) -> Option<Vec<Edit>> {
    let (block, k) = find_function_decl(module, name)?;
    let stmt = &block.stmts[k];
    let f = function_of(stmt);
    let (gi, _) = find_factory_guard(module, f, name)?;
    let guard = &f.body.stmts[gi];
    let nl = module.newline.as_str();
    let base = module.indent_at(stmt.span.start);

    let mut edits = Vec::new();
    let name_tok = module.code_tokens(Span::new(stmt.span.start, f.params.start)).into_iter().rev().find(|t| module.slice(t.span) == name)?;
    edits.push(Edit::replace(name_tok.span, new_name));
    edits.push(Edit::delete(guard.full_span()));
    let guard_span = guard.full_span();
    let mut renamed = Vec::new();
    renamed.extend(prototype_refs(module, stmt.span, name));
    renamed.extend(instanceof_refs(module, stmt.span, name));
    for s in block.stmts.iter().filter(|s| matches!(&s.kind, StmtKind::ExprStmt(p) if pattern_owner(p) == Some(name))) {
        renamed.extend(prototype_refs(module, s.span, name));
        renamed.extend(instanceof_refs(module, s.span, name));
    }
    renamed.sort();
    renamed.dedup();
    edits.extend(renamed.into_iter().filter(|r| !guard_span.contains(*r)).map(|r| Edit::replace(r, new_name)));

    // Wrapper: everything up to and including the guard, guard retargeted.
    let guard_toks = module.code_tokens(guard.span);
    let retarget: Vec<Edit> = guard_toks
        .windows(2)
        .filter(|w| matches!(module.slice(w[0].span), "instanceof" | "new") && module.slice(w[1].span) == name)
        .map(|w| Edit::replace(Span::new(w[1].span.start - guard.span.start, w[1].span.end - guard.span.start), new_name))
        .collect();
    let guard_text = apply_edits(module.slice(guard.span), &retarget).0;
    let wrapper = format!(
        "{nl}{base}function {name}{} {{{}{}{}{nl}{base}}}",
        module.slice(f.params),
        module.slice(Span::new(f.body_span.start + 1, guard.span.start)),
        guard_text,
        module.slice(guard.trailing),
    );
    edits.push(Edit::insert(stmt.trailing.end, wrapper));
    Some(edits)
}

// ---- method aliases -------------------------------------------------------------

pub fn alias_edits(module: &SourceModule, name: &str) -> Option<Vec<Edit>> {
    let (block, _) = find_function_decl(module, name)?;
    let edits: Vec<Edit> = block
        .stmts
        .iter()
        .filter_map(|s| match &s.kind {
            StmtKind::ExprStmt(p @ ExprPattern::AliasChainAssign { targets, function }) if pattern_owner(p) == Some(name) => {
                Some(Edit::replace(s.span, alias_split(module, s, targets, function)))
            }
            _ => None,
        })
        .collect();
    (!edits.is_empty()).then_some(edits)
}

// ---- rule 1 -------------------------------------------------------------------------

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_' || c == '$') && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

fn has_blank_line(text: &str) -> bool {
    let parts: Vec<&str> = text.split('\n').collect();
    parts.len() > 2 && parts[1..parts.len() - 1].iter().any(|l| l.trim().is_empty())
}

fn member(module: &SourceModule, stmt: &Stmt, name: &str, flavor: MethodFlavor, f: &Function, to: &str) -> MemberTemplate {
    let from = module.body_indent(f.body_span);
    let comments =
        module.tokens_in(stmt.leading).iter().filter(|t| t.is_comment()).map(|t| reindent(module.slice(t.span), module.indent_at(t.span.start), to)).collect();
    let head = module.slice(Span::new(f.span.start, f.params.start));
    let generator = head.contains('*');
    let mut shown = if is_identifier(name) { name.to_string() } else { format!("{name:?}") };
    if generator {
        shown.insert(0, '*');
    }
    let trailing = module.slice(stmt.trailing).trim();
    MemberTemplate {
        comments,
        blank_before: has_blank_line(module.slice(stmt.leading)),
        flavor,
        name: shown,
        params: module.slice(f.params).to_string(),
        body: reindent(module.slice(f.body_span), from, to),
        trailing_comment: (!trailing.is_empty()).then(|| trailing.to_string()),
    }
}

/// Turns the constructor function into a class declaration, lifting
/// inner-this methods and absorbing the class's prototype and constructor
/// property assignments from the same statement list.
pub fn rule1_edits(module: &SourceModule, class: &ClassModel, rule1_literal: bool) -> Option<Vec<Edit>> {
    let mut target = None;
    module.walk_blocks(&mut |block, _| {
        if let Some(k) = block.stmts.iter().position(|s| s.span == class.ctor) {
            target = Some((block, k));
        }
    });
    let (block, k) = target?;
    let stmt = &block.stmts[k];
    let f = function_of(stmt);
    let lay = layout(module, stmt.span.start);
    let to = lay.member_indent();

    let captured: Vec<Span> = captured_methods(module, f, class).into_iter().map(|(_, s, _)| s).collect();
    let mut members = Vec::new();
    let mut lifted = Vec::new();
    for s in &f.body.stmts {
        if let StmtKind::ExprStmt(ExprPattern::ThisPropAssign { name, value: Value::Function(func) }) = &s.kind {
            if !captured.contains(&s.span) {
                members.push(member(module, s, name, MethodFlavor::Instance, func, &to));
                lifted.push(s.full_span());
            }
        }
    }
    let body_start = f.body_span.start;
    let removals: Vec<Edit> = lifted.iter().map(|sp| Edit::delete(Span::new(sp.start - body_start, sp.end - body_start))).collect();
    let body = apply_edits(module.slice(f.body_span), &removals).0;
    let ctor = MemberTemplate::constructor(module.slice(f.params), reindent(&body, module.body_indent(f.body_span), &to));

    let has_chain =
        block.stmts.iter().any(|s| matches!(&s.kind, StmtKind::ExprStmt(ExprPattern::ProtoChainAssign { class_name, .. }) if class_name == &class.name));
    let mut consumed = Vec::new();
    for s in &block.stmts {
        let StmtKind::ExprStmt(p) = &s.kind else { continue };
        if pattern_owner(p) != Some(class.name.as_str()) {
            continue;
        }
        let m = match p {
            ExprPattern::ProtoMethodAssign { name, function, .. } => Some(member(module, s, name, MethodFlavor::Instance, function, &to)),
            ExprPattern::CtorPropAssign { name, value: Value::Function(function), .. } => {
                Some(member(module, s, name, MethodIdiom::CtorProp.flavor(rule1_literal), function, &to))
            }
            ExprPattern::AccessorDefine { kind, name: AccessorName::Literal(name), function, .. } => {
                let flavor = if *kind == AccessorKind::Get { MethodFlavor::Getter } else { MethodFlavor::Setter };
                Some(member(module, s, name, flavor, function, &to))
            }
            ExprPattern::ProtoCtorFixup { .. } if !has_chain => None,
            _ => continue,
        };
        consumed.push(s.full_span());
        if let Some(m) = m {
            // A repeated identical definition collapses onto its last occurrence.
            members.retain(|o: &MemberTemplate| !(o.name == m.name && o.flavor == m.flavor && o.body == m.body && o.params == m.params));
            members.push(m);
        }
    }
    let template = ClassTemplate { name: class.name.clone(), superclass: None, ctor, members };
    let mut edits = vec![Edit::replace(stmt.span, print_class(&template, &lay))];
    edits.extend(consumed.into_iter().map(Edit::delete));
    Some(edits)
}

// ---- rule 2 -------------------------------------------------------------------------

pub fn rule2_edits(module: &SourceModule, name: &str) -> Option<Vec<Edit>> {
    let (block, _, class) = find_class_decl(module, name)?;
    if class.superclass.is_some() {
        return None;
    }
    let mut sup = None;
    let mut edits = Vec::new();
    for s in &block.stmts {
        match &s.kind {
            StmtKind::ExprStmt(ExprPattern::ProtoChainAssign { class_name, super_name }) if class_name == name && sup.is_none() => {
                sup = Some(super_name.clone());
                edits.push(Edit::delete(s.full_span()));
            }
            StmtKind::ExprStmt(ExprPattern::ProtoCtorFixup { class_name }) if class_name == name => edits.push(Edit::delete(s.full_span())),
            _ => {}
        }
    }
    let sup = sup?;
    edits.push(Edit::insert(class.name_span.end, format!(" extends {sup}")));
    Some(edits)
}

// ---- rule 3 -------------------------------------------------------------------------

fn txt<'a>(module: &'a SourceModule, toks: &[Token], i: usize) -> &'a str {
    toks.get(i).map_or("", |t| module.slice(t.span))
}

/// Matches `path . call|apply ( this` at token `i`; returns
/// `(is_apply, index of the token after "this")`.
fn match_call_this(module: &SourceModule, toks: &[Token], i: usize, path: &[&str]) -> Option<(bool, usize)> {
    let mut j = i;
    for (k, part) in path.iter().enumerate() {
        if k > 0 {
            if txt(module, toks, j) != "." {
                return None;
            }
            j += 1;
        }
        if txt(module, toks, j) != *part {
            return None;
        }
        j += 1;
    }
    if i > 0 && matches!(txt(module, toks, i - 1), "." | "?.") {
        return None;
    }
    if txt(module, toks, j) != "."
        || !matches!(txt(module, toks, j + 1), "call" | "apply")
        || txt(module, toks, j + 2) != "("
        || txt(module, toks, j + 3) != "this"
    {
        return None;
    }
    Some((txt(module, toks, j + 1) == "apply", j + 4))
}

/// The replacement for `... ( this [, rest]`: covers up to the first token
/// of the remaining arguments (or the closing paren).
fn super_rewrite(module: &SourceModule, toks: &[Token], start: usize, after_this: usize, apply: bool, head: &str) -> Option<Edit> {
    match txt(module, toks, after_this) {
        ")" if !apply => Some(Edit::replace(Span::new(toks[start].span.start, toks[after_this].span.start), format!("{head}("))),
        "," => {
            let next = toks.get(after_this + 1)?;
            if module.slice(next.span) == ")" {
                return None;
            }
            let spread = if apply { "..." } else { "" };
            Some(Edit::replace(Span::new(toks[start].span.start, next.span.start), format!("{head}({spread}")))
        }
        _ => None,
    }
}

fn outside_nested(ranges: &[(usize, usize)], i: usize) -> bool {
    !ranges.iter().any(|&(s, e)| s <= i && i <= e)
}

/// Replaces superclass constructor and method calls with `super`, and adds
/// a `super()` call to constructors that have none.
pub fn rule3_edits(module: &SourceModule, name: &str) -> Option<Vec<Edit>> {
    let (_, _, class) = find_class_decl(module, name)?;
    let sup: String = module.slice(class.superclass?).split_whitespace().collect();
    let path: Vec<&str> = sup.split('.').collect();
    let mut edits = Vec::new();
    let mut ctor_has_super = false;
    let mut ctor_body = None;
    for m in &class.members {
        let (f, is_ctor, flavor) = match &m.kind {
            MemberKind::Constructor(f) => (f, true, MethodFlavor::Instance),
            MemberKind::Method { function, flavor, .. } => (function, false, *flavor),
            MemberKind::Other => continue,
        };
        let toks = module.code_tokens(f.body_span);
        let nested = nested_function_bodies(&module.text, &toks);
        for i in 0..toks.len() {
            if !outside_nested(&nested, i) {
                continue;
            }
            if is_ctor && txt(module, &toks, i) == "super" && txt(module, &toks, i + 1) == "(" {
                ctor_has_super = true;
            }
            if is_ctor {
                if let Some((apply, after)) = match_call_this(module, &toks, i, &path) {
                    if let Some(e) = super_rewrite(module, &toks, i, after, apply, "super") {
                        edits.push(e);
                        ctor_has_super = true;
                        continue;
                    }
                }
            }
            // D.prototype.m.call(this, ...) in instance code, D.m.call(this, ...) in static code.
            if i + 1 < toks.len() && (i == 0 || !matches!(txt(module, &toks, i - 1), "." | "?.")) {
                let mut full: Vec<&str> = path.clone();
                if flavor != MethodFlavor::Static {
                    full.push("prototype");
                }
                let mut j = i;
                let mut ok = true;
                for (k, part) in full.iter().enumerate() {
                    if (k > 0 && txt(module, &toks, j - 1) != ".") || txt(module, &toks, j) != *part {
                        ok = false;
                        break;
                    }
                    j += 2;
                }
                if ok && txt(module, &toks, j - 1) == "." && toks.get(j).is_some_and(|t| t.kind == TokenKind::Ident) {
                    let method = txt(module, &toks, j);
                    let method_path: Vec<&str> = full.iter().copied().chain([method]).collect();
                    if let Some((apply, after)) = match_call_this(module, &toks, i, &method_path) {
                        if let Some(e) = super_rewrite(module, &toks, i, after, apply, &format!("super.{method}")) {
                            edits.push(e);
                        }
                    }
                }
            }
        }
        if is_ctor {
            ctor_body = Some(f);
        }
    }
    if !ctor_has_super {
        if let Some(f) = ctor_body {
            let lay = layout(module, f.span.start);
            let nl = lay.newline.as_str();
            let inner = Span::new(f.body_span.start + 1, f.body_span.end - 1);
            let stmt_indent = format!("{}{}", lay.base, lay.unit);
            if module.slice(inner).trim().is_empty() {
                edits.push(Edit::replace(inner, format!("{nl}{stmt_indent}super();{nl}{}", lay.base)));
            } else {
                let at = f.body.open_trailing.end;
                edits.push(Edit::insert(at, format!("{nl}{stmt_indent}super();")));
            }
        }
    }
    (!edits.is_empty()).then_some(edits)
}

// ---- this before super ----------------------------------------------------------

/// `super(function…)` → `super(); this.setX((function…).bind(this));` plus a
/// setter on the superclass.
pub fn tbs_edits(module: &SourceModule, name: &str, fix: &TbsFix) -> Option<Vec<Edit>> {
    let (_, _, class) = find_class_decl(module, name)?;
    let ctor = class.members.iter().find_map(|m| match &m.kind {
        MemberKind::Constructor(f) => Some(f),
        _ => None,
    })?;
    let toks = module.code_tokens(ctor.body_span);
    let nested = nested_function_bodies(&module.text, &toks);
    let i = (0..toks.len()).find(|&i| outside_nested(&nested, i) && txt(module, &toks, i) == "super" && txt(module, &toks, i + 1) == "(")?;
    let close = matching_close(&module.text, &toks, i + 1);
    let args = module.slice(Span::new(toks[i + 1].span.end, toks[close].span.start)).trim();
    if args.is_empty() {
        return None;
    }
    let nl = module.newline.as_str();
    let indent = module.indent_at(toks[i].span.start);
    let call = format!("super();{nl}{indent}this.{}(({args}).bind(this))", fix.setter);
    let mut edits = vec![Edit::replace(Span::new(toks[i].span.start, toks[close].span.end), call)];

    let (_, _, sup) = find_class_decl(module, &fix.superclass)?;
    // Another subclass may already have added the setter.
    let has_setter = sup.members.iter().any(|m| matches!(&m.kind, MemberKind::Method { name, .. } if *name == fix.setter));
    if has_setter {
        return Some(edits);
    }
    let close_at = sup.body_span.end - 1;
    let line_start = module.text[..close_at].rfind('\n').map_or(0, |p| p + 1);
    let lay = layout(module, sup.body_span.start);
    let m = lay.member_indent();
    let setter = format!("{m}{}({p}) {{{nl}{m}{u}this.{prop} = {p};{nl}{m}}}{nl}", fix.setter, p = fix.param, u = lay.unit, prop = fix.prop);
    if module.text[line_start..close_at].trim().is_empty() {
        edits.push(Edit::insert(line_start, setter));
    } else {
        edits.push(Edit::insert(close_at, format!("{nl}{setter}{}", lay.base)));
    }
    Some(edits)
}
