//! Exact JavaScript lexer.
//!
//! Whitespace is not tokenized; it is recovered from the gaps between token
//! spans. Comments are kept as tokens so that trivia can be attached to
//! statements. Template literals are lexed as a single token whose contents
//! (including `${...}` substitutions) stay opaque.

use super::ast::Span;
use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Num,
    Str,
    Template,
    Regex,
    Punct,
    LineComment,
    BlockComment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
    /// A line terminator occurs between the previous significant token and this one.
    pub nl_before: bool,
}

impl Token {
    pub fn is_comment(&self) -> bool {
        matches!(self.kind, TokenKind::LineComment | TokenKind::BlockComment)
    }

    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.span.start..self.span.end]
    }
}

const PUNCTUATORS: &[&str] = &[
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "??=", "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "**", "<<", ">>", "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/", "%", "&", "|", "^", "!", "~",
    "?", ":", "=", ".", "@", "#",
];

/// Keywords after which a `/` starts a regular expression literal.
const REGEX_AFTER_KEYWORDS: &[&str] = &["return", "typeof", "instanceof", "in", "of", "new", "delete", "void", "throw", "case", "do", "else", "yield", "await"];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lexer = Lexer { src, bytes: src.as_bytes(), pos: 0, tokens: Vec::new(), nl: false };
    if src.starts_with("#!") {
        let end = src.find('\n').unwrap_or(src.len());
        lexer.push(TokenKind::LineComment, 0, end);
        lexer.pos = end;
    }
    lexer.run(None)?;
    check_balance(src, &lexer.tokens)?;
    Ok(lexer.tokens)
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    tokens: Vec<Token>,
    nl: bool,
}

impl<'a> Lexer<'a> {
    fn push(&mut self, kind: TokenKind, start: usize, end: usize) {
        let nl_before = self.nl;
        if !matches!(kind, TokenKind::LineComment | TokenKind::BlockComment) {
            self.nl = false;
        }
        self.tokens.push(Token { kind, span: Span::new(start, end), nl_before });
    }

    fn peek(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    /// Lex until end of input, or until the `}` that closes a template
    /// substitution when `stop_depth` is set. Returns the position of that brace.
    fn run(&mut self, stop_depth: Option<usize>) -> Result<Option<usize>, ParseError> {
        let mut depth = 0usize;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            match c {
                b'\n' | b'\r' => {
                    self.nl = true;
                    self.pos += 1;
                }
                b' ' | b'\t' | 0x0b | 0x0c => self.pos += 1,
                b'/' if self.peek(1) == Some(b'/') => {
                    let start = self.pos;
                    while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b'\n' | b'\r') {
                        self.pos += 1;
                    }
                    self.push(TokenKind::LineComment, start, self.pos);
                }
                b'/' if self.peek(1) == Some(b'*') => {
                    let start = self.pos;
                    let end = self.src[self.pos + 2..].find("*/").map(|i| self.pos + 2 + i + 2).ok_or(ParseError::UnterminatedComment(start))?;
                    if self.src[start..end].contains('\n') {
                        self.nl = true;
                    }
                    self.pos = end;
                    self.push(TokenKind::BlockComment, start, end);
                }
                b'\'' | b'"' => self.string(c)?,
                b'`' => self.template()?,
                b'0'..=b'9' => self.number(),
                b'.' if self.peek(1).is_some_and(|d| d.is_ascii_digit()) => self.number(),
                b'/' if self.regex_allowed() => {
                    if !self.regex() {
                        self.punct();
                    }
                }
                b'{' => {
                    depth += 1;
                    self.punct();
                }
                b'}' => {
                    if stop_depth.is_some() && depth == 0 {
                        let at = self.pos;
                        self.pos += 1;
                        return Ok(Some(at));
                    }
                    depth = depth.saturating_sub(1);
                    self.punct();
                }
                _ if is_ident_start(self.src, self.pos) => self.ident(),
                _ if c >= 0x80 => {
                    // Non-ASCII whitespace (NBSP, BOM, line separators).
                    let ch = self.src[self.pos..].chars().next().unwrap_or(' ');
                    if matches!(ch, '\u{2028}' | '\u{2029}') {
                        self.nl = true;
                    }
                    self.pos += ch.len_utf8();
                }
                _ => self.punct(),
            }
        }
        if stop_depth.is_some() {
            return Err(ParseError::UnterminatedTemplate(self.pos));
        }
        Ok(None)
    }

    fn string(&mut self, quote: u8) -> Result<(), ParseError> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.bytes.get(self.pos) {
                None | Some(b'\n') => return Err(ParseError::UnterminatedString(start)),
                Some(b'\\') => {
                    self.pos += 2;
                    if self.bytes.get(self.pos - 1) == Some(&b'\r') && self.bytes.get(self.pos) == Some(&b'\n') {
                        self.pos += 1;
                    }
                }
                Some(&b) if b == quote => {
                    self.pos += 1;
                    break;
                }
                Some(_) => self.pos += 1,
            }
        }
        self.push(TokenKind::Str, start, self.pos.min(self.bytes.len()));
        Ok(())
    }

    fn template(&mut self) -> Result<(), ParseError> {
        let start = self.pos;
        self.pos += 1;
        // Substitutions are lexed on a scratch token list and discarded.
        let saved_nl = self.nl;
        loop {
            match self.bytes.get(self.pos) {
                None => return Err(ParseError::UnterminatedTemplate(start)),
                Some(b'\\') => self.pos += 2,
                Some(b'`') => {
                    self.pos += 1;
                    break;
                }
                Some(b'$') if self.peek(1) == Some(b'{') => {
                    self.pos += 2;
                    let outer = std::mem::take(&mut self.tokens);
                    let res = self.run(Some(0));
                    self.tokens = outer;
                    res?;
                }
                Some(_) => self.pos += 1,
            }
        }
        self.nl = saved_nl;
        self.push(TokenKind::Template, start, self.pos);
        Ok(())
    }

    fn number(&mut self) {
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            let prev = if self.pos > start { self.bytes[self.pos - 1] } else { 0 };
            let exp_sign = matches!(b, b'+' | b'-')
                && matches!(prev, b'e' | b'E')
                && !self.src[start..self.pos].starts_with("0x")
                && !self.src[start..self.pos].starts_with("0X");
            if b.is_ascii_alphanumeric() || b == b'.' || b == b'_' || (exp_sign && self.pos > start) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.push(TokenKind::Num, start, self.pos);
    }

    fn ident(&mut self) {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            if self.bytes[self.pos] == b'\\' {
                // \uXXXX or \u{...} escape inside an identifier
                self.pos += 2;
                continue;
            }
            let ch = self.src[self.pos..].chars().next().unwrap();
            if ch == '$' || ch == '_' || ch.is_alphanumeric() || ch == '\u{200c}' || ch == '\u{200d}' {
                self.pos += ch.len_utf8();
            } else {
                break;
            }
        }
        self.push(TokenKind::Ident, start, self.pos);
    }

    fn punct(&mut self) {
        let rest = &self.src[self.pos..];
        let len = PUNCTUATORS.iter().find(|p| rest.starts_with(*p)).map_or(1, |p| p.len());
        let len = if rest.starts_with("?.") && rest.as_bytes().get(2).is_some_and(|d| d.is_ascii_digit()) { 1 } else { len };
        let start = self.pos;
        self.pos += len;
        self.push(TokenKind::Punct, start, self.pos);
    }

    fn regex_allowed(&self) -> bool {
        let Some(prev) = self.tokens.iter().rev().find(|t| !t.is_comment()) else {
            return true;
        };
        let text = prev.text(self.src);
        match prev.kind {
            TokenKind::Punct => !matches!(text, ")" | "]" | "++" | "--"),
            TokenKind::Ident => REGEX_AFTER_KEYWORDS.contains(&text),
            _ => false,
        }
    }

    /// Returns false (consuming nothing) when the slash cannot start a regex on this line.
    fn regex(&mut self) -> bool {
        let start = self.pos;
        let mut i = self.pos + 1;
        let mut in_class = false;
        loop {
            match self.bytes.get(i) {
                None | Some(b'\n') | Some(b'\r') => return false,
                Some(b'\\') => i += 2,
                Some(b'[') => {
                    in_class = true;
                    i += 1;
                }
                Some(b']') => {
                    in_class = false;
                    i += 1;
                }
                Some(b'/') if !in_class => {
                    i += 1;
                    break;
                }
                Some(_) => i += 1,
            }
        }
        while i < self.bytes.len() && (self.bytes[i].is_ascii_alphanumeric()) {
            i += 1;
        }
        self.pos = i;
        self.push(TokenKind::Regex, start, i);
        true
    }
}

fn is_ident_start(src: &str, pos: usize) -> bool {
    let ch = src[pos..].chars().next().unwrap_or(' ');
    ch == '$' || ch == '_' || ch == '\\' || ch.is_alphabetic()
}

fn check_balance(src: &str, tokens: &[Token]) -> Result<(), ParseError> {
    let mut stack: Vec<(u8, usize)> = Vec::new();
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Punct) {
        let b = src.as_bytes()[t.span.start];
        if t.span.len() != 1 {
            continue;
        }
        match b {
            b'(' | b'[' | b'{' => stack.push((b, t.span.start)),
            b')' | b']' | b'}' => {
                let want = match b {
                    b')' => b'(',
                    b']' => b'[',
                    _ => b'{',
                };
                match stack.pop() {
                    Some((open, _)) if open == want => {}
                    _ => return Err(ParseError::UnbalancedDelimiter(t.span.start)),
                }
            }
            _ => {}
        }
    }
    match stack.pop() {
        Some((_, pos)) => Err(ParseError::UnbalancedDelimiter(pos)),
        None => Ok(()),
    }
}
