//! ES6 class emission and indentation-shifting of moved code.

use super::ast::{MethodFlavor, NewlineStyle};
use super::lexer::{tokenize, TokenKind};

/// A class body ready to print. Member bodies are complete `{...}` texts
/// whose continuation lines are already indented for the member position.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTemplate {
    pub name: String,
    pub superclass: Option<String>,
    pub ctor: MemberTemplate,
    pub members: Vec<MemberTemplate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberTemplate {
    /// Comments that travel with the member, one entry per comment token.
    pub comments: Vec<String>,
    pub blank_before: bool,
    pub flavor: MethodFlavor,
    pub name: String,
    pub params: String,
    pub body: String,
    pub trailing_comment: Option<String>,
}

impl MemberTemplate {
    pub fn constructor(params: impl Into<String>, body: impl Into<String>) -> Self {
        MemberTemplate {
            comments: Vec::new(),
            blank_before: false,
            flavor: MethodFlavor::Instance,
            name: "constructor".into(),
            params: params.into(),
            body: body.into(),
            trailing_comment: None,
        }
    }

    pub fn header(&self) -> String {
        let prefix = match self.flavor {
            MethodFlavor::Instance => "",
            MethodFlavor::Static => "static ",
            MethodFlavor::Getter => "get ",
            MethodFlavor::Setter => "set ",
        };
        format!("{prefix}{}{}", self.name, self.params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    /// Indentation of the `class` line.
    pub base: String,
    pub unit: String,
    pub newline: NewlineStyle,
}

impl Layout {
    pub fn member_indent(&self) -> String {
        format!("{}{}", self.base, self.unit)
    }
}

/// Prints a class declaration in the shape
/// `class C extends D {\n  constructor(..) {..}\n  m(..) {..}\n}`.
/// The first line carries no indentation; the caller places it.
pub fn print_class(class: &ClassTemplate, layout: &Layout) -> String {
    let nl = layout.newline.as_str();
    let member_indent = layout.member_indent();
    let mut out = format!("class {}", class.name);
    if let Some(sup) = &class.superclass {
        out.push_str(" extends ");
        out.push_str(sup);
    }
    out.push_str(" {");
    out.push_str(nl);
    for member in std::iter::once(&class.ctor).chain(&class.members) {
        if member.blank_before {
            out.push_str(nl);
        }
        for c in &member.comments {
            out.push_str(&member_indent);
            out.push_str(c);
            out.push_str(nl);
        }
        out.push_str(&member_indent);
        out.push_str(&member.header());
        out.push(' ');
        out.push_str(&member.body);
        if let Some(c) = &member.trailing_comment {
            out.push(' ');
            out.push_str(c);
        }
        out.push_str(nl);
    }
    out.push_str(&layout.base);
    out.push('}');
    out
}

/// Replaces the `from` indentation prefix with `to` on every line after the
/// first. Lines that begin inside a string or template literal are left
/// untouched, as are lines not starting with `from`.
pub fn reindent(text: &str, from: &str, to: &str) -> String {
    if from == to || !text.contains('\n') {
        return text.to_string();
    }
    let protected: Vec<(usize, usize)> = tokenize(text)
        .map(|toks| toks.iter().filter(|t| matches!(t.kind, TokenKind::Str | TokenKind::Template)).map(|t| (t.span.start, t.span.end)).collect())
        .unwrap_or_default();
    let mut out = String::with_capacity(text.len() + 16);
    let mut pos = 0;
    for (i, line) in text.split('\n').enumerate() {
        if i > 0 {
            out.push('\n');
            let inside = protected.iter().any(|&(s, e)| s < pos && pos < e);
            let blank = line.trim().is_empty();
            if !inside && !blank {
                if let Some(rest) = line.strip_prefix(from) {
                    out.push_str(to);
                    out.push_str(rest);
                    pos += line.len() + 1;
                    continue;
                }
            }
        }
        out.push_str(line);
        pos += line.len() + 1;
    }
    out
}
