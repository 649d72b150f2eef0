//! Island parser: statements are split exactly, a fixed set of class
//! emulation shapes is recognized, and everything else stays opaque.

use std::path::Path as FsPath;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use crate::error::ParseError;

pub fn parse(path: impl AsRef<FsPath>, text: &str) -> Result<SourceModule, ParseError> {
    let tokens = tokenize(text)?;
    let body = {
        let parser = Parser::new(text, &tokens);
        let inner = Span::new(0, text.len());
        parser.block(0, parser.sig.len(), inner, false)
    };
    Ok(SourceModule { path: path.as_ref().to_path_buf(), newline: detect_newline(text), indent: detect_indent(text), text: text.to_string(), body, tokens })
}

/// Keywords that cannot end an expression, so a newline after them never
/// terminates a statement.
const NON_TERMINAL_WORDS: &[&str] = &[
    "typeof",
    "new",
    "delete",
    "void",
    "in",
    "instanceof",
    "return",
    "throw",
    "case",
    "do",
    "else",
    "yield",
    "await",
    "var",
    "let",
    "const",
    "extends",
    "function",
    "class",
    "if",
    "for",
    "while",
    "switch",
    "try",
    "catch",
    "finally",
    "with",
    "of",
];

const CONTINUATION_PUNCT: &[&str] = &[
    ".", "?.", ",", "(", "[", "?", ":", "=", "==", "===", "!=", "!==", "<", ">", "<=", ">=", "+", "-", "*", "/", "%", "**", "&&", "||", "??", "&", "|", "^",
    "<<", ">>", ">>>", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "??=", "=>",
];

pub(crate) struct Parser<'a> {
    src: &'a str,
    toks: &'a [Token],
    /// Indices of non-comment tokens.
    pub(crate) sig: Vec<usize>,
    /// For each significant open bracket, the significant index of its closer.
    matching: Vec<usize>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, toks: &'a [Token]) -> Self {
        let sig: Vec<usize> = toks.iter().enumerate().filter(|(_, t)| !t.is_comment()).map(|(i, _)| i).collect();
        let mut matching = vec![usize::MAX; sig.len()];
        let mut stack = Vec::new();
        for (i, &ti) in sig.iter().enumerate() {
            let t = &toks[ti];
            if t.kind != TokenKind::Punct {
                continue;
            }
            match t.text(src) {
                "(" | "[" | "{" => stack.push(i),
                ")" | "]" | "}" => {
                    if let Some(open) = stack.pop() {
                        matching[open] = i;
                    }
                }
                _ => {}
            }
        }
        Parser { src, toks, sig, matching }
    }

    fn tok(&self, i: usize) -> &Token {
        &self.toks[self.sig[i]]
    }

    fn text(&self, i: usize) -> &'a str {
        self.toks[self.sig[i]].text(self.src)
    }

    fn is(&self, i: usize, hi: usize, s: &str) -> bool {
        i < hi && self.text(i) == s && self.tok(i).kind != TokenKind::Str
    }

    fn is_ident(&self, i: usize, hi: usize) -> bool {
        i < hi && self.tok(i).kind == TokenKind::Ident
    }

    fn span(&self, lo: usize, hi: usize) -> Span {
        Span::new(self.tok(lo).span.start, self.tok(hi - 1).span.end)
    }

    fn close_of(&self, open: usize) -> usize {
        self.matching[open]
    }

    // ---- blocks and trivia -------------------------------------------------

    pub(crate) fn block(&self, lo: usize, hi: usize, inner: Span, braced: bool) -> Block {
        let mut ranges = Vec::new();
        let mut i = lo;
        while i < hi {
            let (end, kind) = self.stmt(i, hi);
            let end = end.max(i + 1).min(hi);
            ranges.push((i, end, kind));
            i = end;
        }
        let open_trailing = if braced { self.same_line_trivia(inner.start, inner.end) } else { Span::new(inner.start, inner.start) };
        let mut cut = open_trailing.end;
        let mut stmts = Vec::with_capacity(ranges.len());
        for (idx, (s, e, kind)) in ranges.iter().enumerate() {
            let span = self.span(*s, *e);
            let limit = ranges.get(idx + 1).map_or(inner.end, |(ns, _, _)| self.tok(*ns).span.start);
            let trailing = self.same_line_trivia(span.end, limit);
            stmts.push(Stmt { leading: Span::new(cut, span.start), span, trailing, kind: kind.clone() });
            cut = trailing.end;
        }
        Block { inner, stmts, tail: Span::new(cut, inner.end), open_trailing }
    }

    /// Whitespace plus comments that sit on the same line as `pos`.
    /// Empty unless at least one comment is included.
    fn same_line_trivia(&self, pos: usize, limit: usize) -> Span {
        let bytes = self.src.as_bytes();
        let mut end = pos;
        let mut i = pos;
        loop {
            while i < limit && matches!(bytes[i], b' ' | b'\t') {
                i += 1;
            }
            let Some(c) = self.comment_at(i) else { break };
            if c.span.end > limit || (c.kind == TokenKind::BlockComment && c.text(self.src).contains('\n')) {
                break;
            }
            i = c.span.end;
            end = i;
        }
        Span::new(pos, end)
    }

    fn comment_at(&self, pos: usize) -> Option<&Token> {
        let idx = self.toks.partition_point(|t| t.span.start < pos);
        self.toks.get(idx).filter(|t| t.span.start == pos && t.is_comment())
    }

    // ---- statements --------------------------------------------------------

    /// Parses the statement starting at `i`. Returns the exclusive end index.
    fn stmt(&self, i: usize, hi: usize) -> (usize, StmtKind) {
        let t = self.tok(i);
        if t.kind != TokenKind::Ident && t.kind != TokenKind::Punct {
            return self.expr_stmt(i, hi);
        }
        match self.text(i) {
            "function" if t.kind == TokenKind::Ident => match self.function(i, hi) {
                Some((f, end)) if f.name.is_some() => (end, StmtKind::FunctionDecl(f)),
                Some((_, end)) => (end, StmtKind::Opaque),
                None => (self.skip_expr(i, hi, false), StmtKind::Opaque),
            },
            "async" if self.is(i + 1, hi, "function") && !self.tok(i + 1).nl_before => {
                let end = self.function(i + 1, hi).map_or_else(|| self.skip_expr(i, hi, false), |(_, e)| e);
                (end, StmtKind::Opaque)
            }
            "class" => match self.class(i, hi) {
                Some((c, end)) => (end, StmtKind::ClassDecl(c)),
                None => (self.skip_expr(i, hi, false), StmtKind::Opaque),
            },
            "var" | "const" => self.var_decl(i, hi),
            "let" if self.is_ident(i + 1, hi) || self.is(i + 1, hi, "[") || self.is(i + 1, hi, "{") => self.var_decl(i, hi),
            "if" => {
                let Some(mut j) = self.after_parens(i + 1, hi) else { return self.opaque_expr(i, hi) };
                j = self.stmt_end(j, hi);
                if self.is(j, hi, "else") {
                    j = self.stmt_end(j + 1, hi);
                }
                (j, StmtKind::Opaque)
            }
            "for" | "while" | "with" => {
                let mut k = i + 1;
                if self.is(k, hi, "await") {
                    k += 1;
                }
                match self.after_parens(k, hi) {
                    Some(j) => (self.stmt_end(j, hi), StmtKind::Opaque),
                    None => self.opaque_expr(i, hi),
                }
            }
            "do" => {
                let mut j = self.stmt_end(i + 1, hi);
                if self.is(j, hi, "while") {
                    j = self.after_parens(j + 1, hi).unwrap_or(hi);
                    if self.is(j, hi, ";") {
                        j += 1;
                    }
                }
                (j, StmtKind::Opaque)
            }
            "switch" => match self.after_parens(i + 1, hi) {
                Some(j) if self.is(j, hi, "{") => (self.close_of(j) + 1, StmtKind::Opaque),
                _ => self.opaque_expr(i, hi),
            },
            "try" => {
                let mut j = i + 1;
                if !self.is(j, hi, "{") {
                    return self.opaque_expr(i, hi);
                }
                j = self.close_of(j) + 1;
                if self.is(j, hi, "catch") {
                    j += 1;
                    if self.is(j, hi, "(") {
                        j = self.close_of(j) + 1;
                    }
                    if self.is(j, hi, "{") {
                        j = self.close_of(j) + 1;
                    }
                }
                if self.is(j, hi, "finally") && self.is(j + 1, hi, "{") {
                    j = self.close_of(j + 1) + 1;
                }
                (j, StmtKind::Opaque)
            }
            "{" if t.kind == TokenKind::Punct => (self.close_of(i) + 1, StmtKind::Opaque),
            ";" if t.kind == TokenKind::Punct => (i + 1, StmtKind::Opaque),
            "return" | "throw" | "break" | "continue" => (self.skip_expr(i, hi, true), StmtKind::Opaque),
            "debugger" | "import" => self.opaque_expr(i, hi),
            "export" => {
                let mut j = i + 1;
                if self.is(j, hi, "default") {
                    j += 1;
                }
                let end = if j < hi && matches!(self.text(j), "function" | "class" | "var" | "let" | "const" | "async") {
                    self.stmt_end(j, hi)
                } else {
                    self.skip_expr(i, hi, false)
                };
                (end, StmtKind::Opaque)
            }
            _ if t.kind == TokenKind::Ident && self.is(i + 1, hi, ":") => (self.stmt_end(i + 2, hi), StmtKind::Opaque),
            _ => self.expr_stmt(i, hi),
        }
    }

    fn stmt_end(&self, i: usize, hi: usize) -> usize {
        if i >= hi {
            return hi;
        }
        self.stmt(i, hi).0.max(i + 1).min(hi)
    }

    fn opaque_expr(&self, i: usize, hi: usize) -> (usize, StmtKind) {
        (self.skip_expr(i, hi, false), StmtKind::Opaque)
    }

    fn after_parens(&self, i: usize, hi: usize) -> Option<usize> {
        if self.is(i, hi, "(") {
            Some(self.close_of(i) + 1)
        } else {
            None
        }
    }

    fn ends_expression(&self, i: usize) -> bool {
        let t = self.tok(i);
        match t.kind {
            TokenKind::Ident => !NON_TERMINAL_WORDS.contains(&self.text(i)),
            TokenKind::Punct => matches!(self.text(i), ")" | "]" | "}" | "++" | "--"),
            _ => true,
        }
    }

    fn continues(&self, i: usize) -> bool {
        let t = self.tok(i);
        match t.kind {
            TokenKind::Punct => CONTINUATION_PUNCT.contains(&self.text(i)),
            TokenKind::Ident => matches!(self.text(i), "in" | "instanceof"),
            TokenKind::Template => true,
            _ => false,
        }
    }

    /// End of an expression-like statement: a `;`, a line break where
    /// automatic semicolon insertion applies, or the enclosing `}`.
    fn skip_expr(&self, i: usize, hi: usize, restricted: bool) -> usize {
        let mut j = i;
        while j < hi {
            let t = self.tok(j);
            if j > i && t.nl_before && ((restricted && j == i + 1) || (self.ends_expression(j - 1) && !self.continues(j))) {
                return j;
            }
            if t.kind == TokenKind::Punct {
                match self.text(j) {
                    ";" => return j + 1,
                    "}" | ")" | "]" => return j.max(i + 1),
                    "(" | "[" | "{" => {
                        j = self.close_of(j) + 1;
                        continue;
                    }
                    _ => {}
                }
            }
            j += 1;
        }
        hi
    }

    fn var_decl(&self, i: usize, hi: usize) -> (usize, StmtKind) {
        let end = self.skip_expr(i, hi, false);
        let body_end = if end > i + 1 && self.is(end - 1, hi, ";") { end - 1 } else { end };
        let mut declarators = Vec::new();
        for (s, e) in self.split_commas(i + 1, body_end) {
            if !self.is_ident(s, e) {
                continue;
            }
            let init = if self.is(s + 1, e, "=") && s + 2 < e { Some(self.span(s + 2, e)) } else { None };
            let is_require = init.is_some() && self.text(s + 2) == "require" && self.is(s + 3, e, "(");
            declarators.push(Declarator { name: self.text(s).to_string(), name_span: self.tok(s).span, init, is_require });
        }
        (end, StmtKind::VarDecl(VarDecl { keyword: self.text(i).to_string(), declarators }))
    }

    /// Splits `[lo, hi)` at top-level commas.
    fn split_commas(&self, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut s = lo;
        let mut j = lo;
        while j < hi {
            match self.text(j) {
                "(" | "[" | "{" if self.tok(j).kind == TokenKind::Punct => {
                    j = self.close_of(j) + 1;
                    continue;
                }
                "," if self.tok(j).kind == TokenKind::Punct => {
                    out.push((s, j));
                    s = j + 1;
                }
                _ => {}
            }
            j += 1;
        }
        if s < hi {
            out.push((s, hi));
        }
        out
    }

    /// `function [*] [name] (params) { body }` starting at `i`.
    pub(crate) fn function(&self, i: usize, hi: usize) -> Option<(Function, usize)> {
        let mut j = i + 1;
        if self.is(j, hi, "*") {
            j += 1;
        }
        let mut name = None;
        if self.is_ident(j, hi) {
            name = Some(self.text(j).to_string());
            j += 1;
        }
        let (params, param_names, body_span, body, end) = self.params_and_body(j, hi)?;
        Some((Function { name, span: Span::new(self.tok(i).span.start, body_span.end), params, param_names, body_span, body }, end))
    }

    fn params_and_body(&self, j: usize, hi: usize) -> Option<(Span, Vec<String>, Span, Block, usize)> {
        if !self.is(j, hi, "(") {
            return None;
        }
        let close = self.close_of(j);
        if close >= hi {
            return None;
        }
        let params = self.span(j, close + 1);
        let param_names = self
            .split_commas(j + 1, close)
            .into_iter()
            .filter_map(|(s, e)| {
                let s = if self.is(s, e, "...") { s + 1 } else { s };
                self.is_ident(s, e).then(|| self.text(s).to_string())
            })
            .collect();
        let b = close + 1;
        if !self.is(b, hi, "{") {
            return None;
        }
        let bc = self.close_of(b);
        if bc >= hi {
            return None;
        }
        let body_span = self.span(b, bc + 1);
        let inner = Span::new(self.tok(b).span.end, self.tok(bc).span.start);
        let body = self.block(b + 1, bc, inner, true);
        Some((params, param_names, body_span, body, bc + 1))
    }

    fn class(&self, i: usize, hi: usize) -> Option<(ClassDecl, usize)> {
        let mut j = i + 1;
        if !self.is_ident(j, hi) || self.text(j) == "extends" {
            return None;
        }
        let name = self.text(j).to_string();
        let name_span = self.tok(j).span;
        j += 1;
        let mut superclass = None;
        if self.is(j, hi, "extends") {
            let s = j + 1;
            let mut k = s;
            while k < hi && !self.is(k, hi, "{") {
                k = if matches!(self.text(k), "(" | "[") { self.close_of(k) + 1 } else { k + 1 };
            }
            if k == s {
                return None;
            }
            superclass = Some(self.span(s, k));
            j = k;
        }
        if !self.is(j, hi, "{") {
            return None;
        }
        let close = self.close_of(j);
        let members = self.class_members(j + 1, close);
        Some((ClassDecl { name, name_span, superclass, body_span: self.span(j, close + 1), members }, close + 1))
    }

    fn class_members(&self, lo: usize, hi: usize) -> Vec<ClassMember> {
        let mut out = Vec::new();
        let mut j = lo;
        while j < hi {
            if self.is(j, hi, ";") {
                j += 1;
                continue;
            }
            let start = j;
            let modifier_follows = |k: usize| k + 1 < hi && !matches!(self.text(k + 1), "(" | "=" | ";" | "}");
            let mut is_static = false;
            let mut accessor = None;
            if self.is(j, hi, "static") && modifier_follows(j) {
                is_static = true;
                j += 1;
            }
            if self.is(j, hi, "async") && modifier_follows(j) {
                j += 1;
            }
            if self.is(j, hi, "*") {
                j += 1;
            }
            if (self.is(j, hi, "get") || self.is(j, hi, "set")) && modifier_follows(j) {
                accessor = Some(self.text(j) == "get");
                j += 1;
            }
            let name = match self.tok(j).kind {
                TokenKind::Ident | TokenKind::Num => {
                    j += 1;
                    self.text(j - 1).to_string()
                }
                TokenKind::Str => {
                    j += 1;
                    let t = self.text(j - 1);
                    t[1..t.len() - 1].to_string()
                }
                TokenKind::Punct if self.text(j) == "[" => {
                    let c = self.close_of(j);
                    let s = self.span(j, c + 1).text(self.src).to_string();
                    j = c + 1;
                    s
                }
                TokenKind::Punct if self.text(j) == "#" && self.is_ident(j + 1, hi) => {
                    j += 2;
                    format!("#{}", self.text(j - 1))
                }
                _ => String::new(),
            };
            if !name.is_empty() {
                if let Some((params, param_names, body_span, body, end)) = self.params_and_body(j, hi) {
                    let function =
                        Function { name: Some(name.clone()), span: Span::new(self.tok(start).span.start, body_span.end), params, param_names, body_span, body };
                    let kind = match (is_static, accessor) {
                        (false, None) if name == "constructor" => MemberKind::Constructor(function),
                        (_, Some(true)) => MemberKind::Method { name, flavor: MethodFlavor::Getter, function },
                        (_, Some(false)) => MemberKind::Method { name, flavor: MethodFlavor::Setter, function },
                        (true, None) => MemberKind::Method { name, flavor: MethodFlavor::Static, function },
                        (false, None) => MemberKind::Method { name, flavor: MethodFlavor::Instance, function },
                    };
                    out.push(ClassMember { span: self.span(start, end), kind });
                    j = end;
                    continue;
                }
            }
            let end = self.skip_expr(start, hi, false).max(start + 1);
            out.push(ClassMember { span: self.span(start, end), kind: MemberKind::Other });
            j = end;
        }
        out
    }

    // ---- expression statements --------------------------------------------

    fn expr_stmt(&self, i: usize, hi: usize) -> (usize, StmtKind) {
        let end = self.skip_expr(i, hi, false);
        let e = if end > i + 1 && self.is(end - 1, hi, ";") { end - 1 } else { end };
        (end, StmtKind::ExprStmt(self.classify(i, e)))
    }

    /// Reads `ident(.ident)*` at `j`. Returns the path and the index after it.
    fn path_at(&self, mut j: usize, hi: usize) -> Option<(Path, usize)> {
        if !self.is_ident(j, hi) {
            return None;
        }
        let mut path = vec![self.text(j).to_string()];
        j += 1;
        while self.is(j, hi, ".") && self.is_ident(j + 1, hi) {
            path.push(self.text(j + 1).to_string());
            j += 2;
        }
        Some((path, j))
    }

    fn full_path(&self, lo: usize, hi: usize) -> Option<Path> {
        match self.path_at(lo, hi) {
            Some((p, end)) if end == hi => Some(p),
            _ => None,
        }
    }

    fn value(&self, lo: usize, hi: usize) -> Value {
        if self.is(lo, hi, "function") {
            if let Some((f, end)) = self.function(lo, hi) {
                if end == hi {
                    return Value::Function(f);
                }
            }
        }
        Value::Opaque(self.span(lo, hi))
    }

    fn classify(&self, lo: usize, hi: usize) -> ExprPattern {
        if lo >= hi {
            return ExprPattern::OpaqueExpr;
        }
        let mut eqs = Vec::new();
        let mut j = lo;
        while j < hi {
            let t = self.tok(j);
            if t.kind == TokenKind::Punct {
                match self.text(j) {
                    "(" | "[" | "{" => {
                        j = self.close_of(j) + 1;
                        continue;
                    }
                    "=" => eqs.push(j),
                    _ => {}
                }
            }
            j += 1;
        }
        if eqs.is_empty() {
            return self.classify_call(lo, hi);
        }
        let mut targets = Vec::new();
        let mut s = lo;
        for &eq in &eqs {
            match self.full_path(s, eq) {
                Some(p) => targets.push(p),
                None => return ExprPattern::OpaqueExpr,
            }
            s = eq + 1;
        }
        let (vs, ve) = (s, hi);
        if vs >= ve {
            return ExprPattern::OpaqueExpr;
        }
        if targets.len() > 1 {
            return match self.value(vs, ve) {
                Value::Function(function) => ExprPattern::AliasChainAssign { targets, function },
                Value::Opaque(_) => ExprPattern::OpaqueExpr,
            };
        }
        let target = &targets[0];
        let strs: Vec<&str> = target.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["this", name] => ExprPattern::ThisPropAssign { name: name.to_string(), value: self.value(vs, ve) },
            ["module", "exports"] if ve == vs + 1 && self.is_ident(vs, ve) => ExprPattern::ModuleExportAssign { ident: self.text(vs).to_string() },
            [class, "prototype"] if *class != "this" => match self.super_of(vs, ve) {
                Some(super_name) => ExprPattern::ProtoChainAssign { class_name: class.to_string(), super_name },
                None => ExprPattern::ProtoReplace { class_name: class.to_string() },
            },
            [class, "prototype", "constructor"] if ve == vs + 1 && self.text(vs) == *class => ExprPattern::ProtoCtorFixup { class_name: class.to_string() },
            [owner @ .., "prototype", name] if !owner.is_empty() && owner[0] != "this" => {
                let owner: Path = owner.iter().map(|s| s.to_string()).collect();
                match self.value(vs, ve) {
                    Value::Function(function) => ExprPattern::ProtoMethodAssign { owner, name: name.to_string(), function },
                    Value::Opaque(value) => ExprPattern::ProtoPropAssign { owner, name: name.to_string(), value },
                }
            }
            [class, name] if *class != "this" && *name != "prototype" => {
                ExprPattern::CtorPropAssign { class_name: class.to_string(), name: name.to_string(), value: self.value(vs, ve) }
            }
            _ => ExprPattern::OpaqueExpr,
        }
    }

    /// `new D(...)`, `new D`, or `Object.create(D.prototype)`.
    fn super_of(&self, lo: usize, hi: usize) -> Option<String> {
        if self.is(lo, hi, "new") {
            let (path, j) = self.path_at(lo + 1, hi)?;
            if j == hi || (self.is(j, hi, "(") && self.close_of(j) + 1 == hi) {
                return Some(path.join("."));
            }
            return None;
        }
        let (path, j) = self.path_at(lo, hi)?;
        if path != ["Object", "create"] || !self.is(j, hi, "(") || self.close_of(j) + 1 != hi {
            return None;
        }
        let mut arg = self.full_path(j + 1, self.close_of(j))?;
        if arg.len() < 2 || arg.pop().as_deref() != Some("prototype") {
            return None;
        }
        Some(arg.join("."))
    }

    fn call_args(&self, open: usize) -> Vec<(usize, usize)> {
        self.split_commas(open + 1, self.close_of(open))
    }

    fn classify_call(&self, lo: usize, hi: usize) -> ExprPattern {
        if self.is(lo, hi, "new") {
            if let Some((path, j)) = self.path_at(lo + 1, hi) {
                if j == hi || (self.is(j, hi, "(") && self.close_of(j) + 1 == hi) {
                    return ExprPattern::NewExpr { class_name: path.join(".") };
                }
            }
            return ExprPattern::OpaqueExpr;
        }
        let Some((path, j)) = self.path_at(lo, hi) else { return ExprPattern::OpaqueExpr };
        if !self.is(j, hi, "(") || self.close_of(j) + 1 != hi || path.len() < 2 {
            return ExprPattern::OpaqueExpr;
        }
        let args = self.call_args(j);
        let first_is_this = args.first().is_some_and(|&(s, e)| e == s + 1 && self.text(s) == "this");
        let last = path.last().unwrap().as_str();
        let rest_spans = |args: &[(usize, usize)]| args.iter().skip(1).map(|&(s, e)| self.span(s, e)).collect::<Vec<_>>();
        match last {
            "call" | "apply" if first_is_this => {
                let head = &path[..path.len() - 1];
                if head.len() >= 2 && last == "call" {
                    let method_name = head.last().unwrap().clone();
                    let mut owner = head[..head.len() - 1].to_vec();
                    if owner.len() >= 2 && owner.last().map(String::as_str) == Some("prototype") {
                        owner.pop();
                    }
                    if method_name != "prototype" && !owner.is_empty() {
                        return ExprPattern::SuperMethodCall { super_name: owner.join("."), method_name, args: rest_spans(&args) };
                    }
                }
                if head.iter().any(|p| p == "prototype") {
                    return ExprPattern::OpaqueExpr;
                }
                ExprPattern::SuperCtorCall { super_name: head.join("."), args: rest_spans(&args), apply: last == "apply" }
            }
            "__defineGetter__" | "__defineSetter__" if args.len() == 2 => {
                let (fs, fe) = args[1];
                let Value::Function(function) = self.value(fs, fe) else { return ExprPattern::OpaqueExpr };
                let (ns, ne) = args[0];
                let name = if ne == ns + 1 && self.tok(ns).kind == TokenKind::Str {
                    let t = self.text(ns);
                    AccessorName::Literal(t[1..t.len() - 1].to_string())
                } else {
                    AccessorName::Dynamic(self.span(ns, ne))
                };
                let kind = if last == "__defineGetter__" { AccessorKind::Get } else { AccessorKind::Set };
                ExprPattern::AccessorDefine { kind, target: path[..path.len() - 1].to_vec(), name, function }
            }
            _ => ExprPattern::OpaqueExpr,
        }
    }
}

pub fn detect_newline(text: &str) -> NewlineStyle {
    let crlf = text.matches("\r\n").count();
    let lf = text.matches('\n').count();
    if crlf > 0 && crlf * 2 >= lf {
        NewlineStyle::CrLf
    } else {
        NewlineStyle::Lf
    }
}

pub fn detect_indent(text: &str) -> IndentStyle {
    let mut tabs = 0usize;
    let mut spaces = 0usize;
    let mut gcd = 0usize;
    for line in text.lines() {
        let ws: usize = line.bytes().take_while(|b| matches!(b, b' ' | b'\t')).count();
        let rest = &line[ws..];
        if ws == 0 || rest.is_empty() || rest.starts_with('*') {
            continue;
        }
        if line.starts_with('\t') {
            tabs += 1;
        } else if line.as_bytes()[..ws].iter().all(|&b| b == b' ') {
            spaces += 1;
            gcd = gcd_of(gcd, ws);
        }
    }
    if tabs > spaces {
        IndentStyle::Tabs
    } else if (2..=8).contains(&gcd) {
        IndentStyle::Spaces(gcd)
    } else {
        IndentStyle::Spaces(2)
    }
}

fn gcd_of(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_of(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<String> {
        parse("t.js", src)
            .unwrap()
            .body
            .stmts
            .iter()
            .map(|s| match &s.kind {
                StmtKind::ExprStmt(p) => p.label().to_string(),
                k => k.label().to_string(),
            })
            .collect()
    }

    #[test]
    fn empty_input_has_no_statements() {
        let m = parse("e.js", "").unwrap();
        assert!(m.body.stmts.is_empty());
        assert_eq!(m.print(), "");
    }

    #[test]
    fn loop_is_single_opaque_statement() {
        let src = "for (var i=0;i<n;i++) { g(i); }";
        let m = parse("l.js", src).unwrap();
        assert_eq!(m.body.stmts.len(), 1);
        assert_eq!(m.body.stmts[0].kind, StmtKind::Opaque);
        assert_eq!(m.print(), src);
    }

    #[test]
    fn asi_splits_statements() {
        assert_eq!(
            kinds("A.prototype.f = function() {}\nA.prototype.g = function() {}\nvar x = 1\nx++\n"),
            vec!["ProtoMethodAssign", "ProtoMethodAssign", "VarDecl", "OpaqueExpr"]
        );
        assert_eq!(kinds("a = b\n(c)\n"), vec!["OpaqueExpr"]);
        assert_eq!(kinds("return\nx"), vec!["Opaque", "OpaqueExpr"]);
    }

    #[test]
    fn control_flow_statements() {
        assert_eq!(kinds("if (a) b(); else { c(); }\nd();"), vec!["Opaque", "OpaqueExpr"]);
        assert_eq!(kinds("do x(); while (y)\nz();"), vec!["Opaque", "OpaqueExpr"]);
        assert_eq!(kinds("try { a(); } catch (e) {} finally { b(); } c();"), vec!["Opaque", "OpaqueExpr"]);
        assert_eq!(kinds("label: for (;;) { break label; }"), vec!["Opaque"]);
    }

    #[test]
    fn recognizes_patterns() {
        assert_eq!(
            kinds(
                "C.prototype = new D();\nC.prototype = Object.create(D.prototype);\nC.prototype.constructor = C;\n\
                 C.prototype = { a: 1 };\nC.prototype.x = 0;\nC.m = function() {};\nD.call(this, a);\n\
                 D.prototype.m.call(this, b);\nS.prototype.__defineGetter__('r', function() { return 1; });\n\
                 A.prototype.a = A.prototype.b = function() {};\nmodule.exports = C;\nnew C(1);\nfoo();"
            ),
            vec![
                "ProtoChainAssign",
                "ProtoChainAssign",
                "ProtoCtorFixup",
                "ProtoReplace",
                "ProtoPropAssign",
                "CtorPropAssign",
                "SuperCtorCall",
                "SuperMethodCall",
                "AccessorDefine",
                "AliasChainAssign",
                "ModuleExportAssign",
                "NewExpr",
                "OpaqueExpr"
            ]
        );
    }

    #[test]
    fn dynamic_accessor_name() {
        let m = parse("s.js", "S.prototype.__defineGetter__(flag, function() {});").unwrap();
        match &m.body.stmts[0].kind {
            StmtKind::ExprStmt(ExprPattern::AccessorDefine { name: AccessorName::Dynamic(_), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn function_decl_exposes_params_and_body() {
        let src = "function Queue(a, b) { // c\n  this._elements = [];\n  this.m = function(x) { return x; };\n}\n";
        let m = parse("q.js", src).unwrap();
        let StmtKind::FunctionDecl(f) = &m.body.stmts[0].kind else { panic!() };
        assert_eq!(f.name.as_deref(), Some("Queue"));
        assert_eq!(f.param_names, vec!["a", "b"]);
        assert_eq!(f.body.stmts.len(), 2);
        assert_eq!(f.body.open_trailing.text(src), " // c");
        assert!(matches!(&f.body.stmts[1].kind, StmtKind::ExprStmt(ExprPattern::ThisPropAssign { value: Value::Function(_), .. })));
    }

    #[test]
    fn trailing_comments_stay_on_their_line() {
        let src = "a(); // one\n// two\nb();";
        let m = parse("t.js", src).unwrap();
        assert_eq!(m.body.stmts[0].trailing.text(src), " // one");
        assert_eq!(m.body.stmts[1].leading.text(src), "\n// two\n");
    }

    #[test]
    fn es6_class_members() {
        let src = "class A extends B {\n  constructor(x) { super(x); }\n  static s() {}\n  get g() { return 1; }\n  m(a) {}\n  f = 1;\n}";
        let m = parse("c.js", src).unwrap();
        let StmtKind::ClassDecl(c) = &m.body.stmts[0].kind else { panic!() };
        assert_eq!(c.name, "A");
        assert_eq!(c.superclass.unwrap().text(src), "B");
        assert_eq!(c.members.len(), 5);
        assert!(matches!(c.members[0].kind, MemberKind::Constructor(_)));
        assert!(matches!(&c.members[2].kind, MemberKind::Method { flavor: MethodFlavor::Getter, .. }));
        assert!(matches!(c.members[4].kind, MemberKind::Other));
    }

    #[test]
    fn detects_layout() {
        assert_eq!(detect_indent("a {\n\tb\n}\n"), IndentStyle::Tabs);
        assert_eq!(detect_indent("a {\n    b {\n        c\n    }\n}\n"), IndentStyle::Spaces(4));
        assert_eq!(detect_indent("x\n"), IndentStyle::Spaces(2));
        assert_eq!(detect_newline("a\r\nb\r\n"), NewlineStyle::CrLf);
        assert_eq!(detect_newline("a\nb"), NewlineStyle::Lf);
    }

    #[test]
    fn unbalanced_file_is_an_error() {
        assert!(matches!(parse("u.js", "function f() { if (x) { }"), Err(ParseError::UnbalancedDelimiter(13))));
    }
}
