//! Tolerant island parser and printer for the subset of JavaScript that
//! class migration touches. Everything else is preserved as opaque text.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::*;
pub use lexer::{Token, TokenKind};
pub use parser::parse;
pub use printer::{print_class, ClassTemplate, MemberTemplate};

impl SourceModule {
    /// Reconstructs the source from statement spans and trivia.
    pub fn print(&self) -> String {
        let mut out = String::with_capacity(self.text.len());
        for s in &self.body.stmts {
            out.push_str(s.full_span().text(&self.text));
        }
        out.push_str(self.body.tail.text(&self.text));
        out
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// All tokens (comments included) lying inside `span`.
    pub fn tokens_in(&self, span: Span) -> &[Token] {
        let lo = self.tokens.partition_point(|t| t.span.start < span.start);
        let hi = self.tokens.partition_point(|t| t.span.start < span.end);
        &self.tokens[lo..hi.max(lo)]
    }

    /// Non-comment tokens inside `span`.
    pub fn code_tokens(&self, span: Span) -> Vec<Token> {
        self.tokens_in(span).iter().filter(|t| !t.is_comment()).copied().collect()
    }

    pub fn slice(&self, span: Span) -> &str {
        span.text(&self.text)
    }

    /// 1-based line and column of a byte offset.
    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        line_col(&self.text, offset)
    }

    /// Whitespace indentation of the line containing `offset`.
    pub fn indent_at(&self, offset: usize) -> &str {
        let line_start = self.text[..offset].rfind('\n').map_or(0, |i| i + 1);
        let line = &self.text[line_start..];
        let ws = line.bytes().take_while(|b| matches!(b, b' ' | b'\t')).count();
        &line[..ws]
    }

    /// Indentation that the lines of a `{...}` body are relative to: that of
    /// the line holding the closing brace when the brace opens its line,
    /// else that of the line holding the opening brace.
    pub fn body_indent(&self, body: Span) -> &str {
        let close = body.end.saturating_sub(1);
        let close_indent = self.indent_at(close);
        let line_start = self.text[..close].rfind('\n').map_or(0, |i| i + 1);
        if line_start > body.start && line_start + close_indent.len() == close {
            close_indent
        } else {
            self.indent_at(body.start)
        }
    }

    /// Visits every statement list, depth first, with its nesting depth.
    /// Descends into function declaration bodies and class member bodies.
    pub fn walk_blocks<'a>(&'a self, f: &mut dyn FnMut(&'a Block, usize)) {
        walk(&self.body, 0, f);
    }
}

fn walk<'a>(block: &'a Block, depth: usize, f: &mut dyn FnMut(&'a Block, usize)) {
    f(block, depth);
    for s in &block.stmts {
        match &s.kind {
            StmtKind::FunctionDecl(func) => walk(&func.body, depth + 1, f),
            StmtKind::ClassDecl(c) => {
                for m in &c.members {
                    match &m.kind {
                        MemberKind::Constructor(func) | MemberKind::Method { function: func, .. } => walk(&func.body, depth + 1, f),
                        MemberKind::Other => {}
                    }
                }
            }
            _ => {}
        }
    }
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

pub(crate) fn is_keyword(word: &str) -> bool {
    matches!(
        word,
        "break"
            | "case"
            | "catch"
            | "class"
            | "const"
            | "continue"
            | "debugger"
            | "default"
            | "delete"
            | "do"
            | "else"
            | "export"
            | "extends"
            | "finally"
            | "for"
            | "function"
            | "if"
            | "import"
            | "in"
            | "instanceof"
            | "new"
            | "return"
            | "super"
            | "switch"
            | "this"
            | "throw"
            | "try"
            | "typeof"
            | "var"
            | "void"
            | "while"
            | "with"
            | "yield"
            | "let"
            | "static"
            | "null"
            | "true"
            | "false"
            | "undefined"
            | "arguments"
            | "async"
            | "await"
            | "of"
    )
}

/// Identifier references in `tokens` to a free variable: identifiers that
/// are not property names (`a.x`) or object-literal keys (`{x: 1}`).
pub(crate) fn free_identifiers<'a>(src: &'a str, tokens: &[Token]) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.kind != TokenKind::Ident {
            continue;
        }
        let text = t.text(src);
        if is_keyword(text) {
            continue;
        }
        let prev = i.checked_sub(1).map(|p| tokens[p].text(src));
        if matches!(prev, Some(".") | Some("?.")) {
            continue;
        }
        let next = tokens.get(i + 1).map(|n| n.text(src));
        if next == Some(":") && matches!(prev, Some("{") | Some(",")) {
            continue;
        }
        out.push((i, text));
    }
    out
}

/// Token ranges `[open, close]` of nested non-arrow function bodies,
/// i.e. the `{...}` following a `function` keyword's parameter list.
pub(crate) fn nested_function_bodies(src: &str, tokens: &[Token]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].kind == TokenKind::Ident && tokens[i].text(src) == "function" {
            if let Some(open) = (i + 1..tokens.len()).find(|&k| tokens[k].text(src) == "{" && tokens[k].kind == TokenKind::Punct) {
                let close = matching_close(src, tokens, open);
                out.push((open, close));
                i = close + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Tokens evaluated when the enclosing code runs: bodies of nested
/// `function`s and class bodies are skipped, as are block-bodied arrows when
/// `skip_arrows` is set. Parameter lists of skipped functions go with them.
pub(crate) fn eager_tokens(src: &str, tokens: &[Token], skip_arrows: bool) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        let text = t.text(src);
        if t.kind == TokenKind::Ident && text == "function" {
            if let Some(open) = (i + 1..tokens.len()).find(|&k| tokens[k].text(src) == "(" && tokens[k].kind == TokenKind::Punct) {
                let close = matching_close(src, tokens, open);
                if tokens.get(close + 1).is_some_and(|b| b.text(src) == "{") {
                    i = matching_close(src, tokens, close + 1) + 1;
                    continue;
                }
            }
        } else if t.kind == TokenKind::Ident && text == "class" {
            if let Some(open) = (i + 1..tokens.len()).find(|&k| tokens[k].text(src) == "{" && tokens[k].kind == TokenKind::Punct) {
                out.extend_from_slice(&tokens[i..open]);
                i = matching_close(src, tokens, open) + 1;
                continue;
            }
        } else if skip_arrows && t.kind == TokenKind::Punct && text == "=>" && tokens.get(i + 1).is_some_and(|b| b.text(src) == "{") {
            out.push(t);
            i = matching_close(src, tokens, i + 1) + 1;
            continue;
        }
        out.push(t);
        i += 1;
    }
    out
}

pub(crate) fn matching_close(src: &str, tokens: &[Token], open: usize) -> usize {
    let mut depth = 0i32;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.kind != TokenKind::Punct {
            continue;
        }
        match t.text(src) {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => {
                depth -= 1;
                if depth == 0 {
                    return k;
                }
            }
            _ => {}
        }
    }
    tokens.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_and_column() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn free_identifiers_skip_properties_and_keys() {
        let src = "a.b + {c: d, e: f.g} + h";
        let toks = lexer::tokenize(src).unwrap();
        let ids: Vec<&str> = free_identifiers(src, &toks).into_iter().map(|(_, s)| s).collect();
        assert_eq!(ids, vec!["a", "d", "f", "h"]);
    }

    #[test]
    fn eager_tokens_skip_deferred_code() {
        let src = "x(function(a) { A; }, () => { B; }, () => C, class K extends D { m() { E; } })";
        let toks = lexer::tokenize(src).unwrap();
        let text = |skip| eager_tokens(src, &toks, skip).iter().map(|t| t.text(src)).collect::<Vec<_>>().join(" ");
        assert_eq!(text(true), "x ( , ( ) => , ( ) => C , class K extends D )");
        assert!(text(false).contains("B"));
    }
}
