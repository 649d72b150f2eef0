use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Half-open byte range into a module's source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NewlineStyle {
    Lf,
    CrLf,
}

impl NewlineStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            NewlineStyle::Lf => "\n",
            NewlineStyle::CrLf => "\r\n",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndentStyle {
    Tabs,
    Spaces(usize),
}

impl IndentStyle {
    pub fn unit(&self) -> String {
        match self {
            IndentStyle::Tabs => "\t".to_string(),
            IndentStyle::Spaces(n) => " ".repeat(*n),
        }
    }
}

/// One parsed `.js` file.
#[derive(Debug, Clone)]
pub struct SourceModule {
    pub path: PathBuf,
    pub text: String,
    pub body: Block,
    pub newline: NewlineStyle,
    pub indent: IndentStyle,
    pub(crate) tokens: Vec<super::lexer::Token>,
}

/// An ordered statement list. `inner` is the region between the braces
/// for function and method bodies, or the whole file for the module body.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub inner: Span,
    pub stmts: Vec<Stmt>,
    /// Trivia between the last statement and the end of `inner`.
    pub tail: Span,
    /// Same-line trivia right after the opening brace.
    pub open_trailing: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    /// Trivia owned by this statement: starts at the line break after the
    /// previous statement (or right after the opening brace).
    pub leading: Span,
    pub span: Span,
    /// Same-line whitespace and comments after the statement.
    pub trailing: Span,
    pub kind: StmtKind,
}

impl Stmt {
    /// Leading trivia, statement and trailing comments.
    pub fn full_span(&self) -> Span {
        Span::new(self.leading.start, self.trailing.end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    FunctionDecl(Function),
    VarDecl(VarDecl),
    ExprStmt(ExprPattern),
    ClassDecl(ClassDecl),
    Opaque,
}

impl StmtKind {
    pub fn label(&self) -> &'static str {
        match self {
            StmtKind::FunctionDecl(_) => "FunctionDecl",
            StmtKind::VarDecl(_) => "VarDecl",
            StmtKind::ExprStmt(_) => "ExprStmt",
            StmtKind::ClassDecl(_) => "ClassDecl",
            StmtKind::Opaque => "Opaque",
        }
    }
}

/// A function declaration or function expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Function {
    pub name: Option<String>,
    pub span: Span,
    /// Parameter list including the parentheses.
    pub params: Span,
    pub param_names: Vec<String>,
    /// Body including the braces.
    pub body_span: Span,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub keyword: String,
    pub declarators: Vec<Declarator>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Declarator {
    pub name: String,
    pub name_span: Span,
    pub init: Option<Span>,
    /// Initializer is a `require(...)` call.
    pub is_require: bool,
}

/// Value of an assignment: a function literal or any other expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Function(Function),
    Opaque(Span),
}

impl Value {
    pub fn as_function(&self) -> Option<&Function> {
        match self {
            Value::Function(f) => Some(f),
            Value::Opaque(_) => None,
        }
    }
}

/// A dotted identifier path such as `core.Container`.
pub type Path = Vec<String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccessorKind {
    Get,
    Set,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AccessorName {
    Literal(String),
    Dynamic(Span),
}

/// Recognized expression-statement shapes. Anything else is `OpaqueExpr`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprPattern {
    /// `this.name = value`
    ThisPropAssign {
        name: String,
        value: Value,
    },
    /// `C.prototype.name = function ...`; `owner` may be qualified.
    ProtoMethodAssign {
        owner: Path,
        name: String,
        function: Function,
    },
    /// `C.prototype.name = <non-function>`
    ProtoPropAssign {
        owner: Path,
        name: String,
        value: Span,
    },
    /// `C.name = value`
    CtorPropAssign {
        class_name: String,
        name: String,
        value: Value,
    },
    /// `C.prototype = new D(...)` or `C.prototype = Object.create(D.prototype)`
    ProtoChainAssign {
        class_name: String,
        super_name: String,
    },
    /// `C.prototype.constructor = C`
    ProtoCtorFixup {
        class_name: String,
    },
    /// `C.prototype = <anything else>`
    ProtoReplace {
        class_name: String,
    },
    /// `D.call(this, args)` / `D.apply(this, args)`
    SuperCtorCall {
        super_name: String,
        args: Vec<Span>,
        apply: bool,
    },
    /// `D.prototype.m.call(this, args)` / `D.m.call(this, args)`
    SuperMethodCall {
        super_name: String,
        method_name: String,
        args: Vec<Span>,
    },
    /// `T.__defineGetter__(name, function ...)`
    AccessorDefine {
        kind: AccessorKind,
        target: Path,
        name: AccessorName,
        function: Function,
    },
    /// `a = b = function ...` with two or more targets
    AliasChainAssign {
        targets: Vec<Path>,
        function: Function,
    },
    /// `module.exports = Ident`
    ModuleExportAssign {
        ident: String,
    },
    /// `new C(args)`
    NewExpr {
        class_name: String,
    },
    OpaqueExpr,
}

impl ExprPattern {
    pub fn label(&self) -> &'static str {
        match self {
            ExprPattern::ThisPropAssign { .. } => "ThisPropAssign",
            ExprPattern::ProtoMethodAssign { .. } => "ProtoMethodAssign",
            ExprPattern::ProtoPropAssign { .. } => "ProtoPropAssign",
            ExprPattern::CtorPropAssign { .. } => "CtorPropAssign",
            ExprPattern::ProtoChainAssign { .. } => "ProtoChainAssign",
            ExprPattern::ProtoCtorFixup { .. } => "ProtoCtorFixup",
            ExprPattern::ProtoReplace { .. } => "ProtoReplace",
            ExprPattern::SuperCtorCall { .. } => "SuperCtorCall",
            ExprPattern::SuperMethodCall { .. } => "SuperMethodCall",
            ExprPattern::AccessorDefine { .. } => "AccessorDefine",
            ExprPattern::AliasChainAssign { .. } => "AliasChainAssign",
            ExprPattern::ModuleExportAssign { .. } => "ModuleExportAssign",
            ExprPattern::NewExpr { .. } => "NewExpr",
            ExprPattern::OpaqueExpr => "OpaqueExpr",
        }
    }
}

/// An ES6 class declaration found in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub name: String,
    pub name_span: Span,
    pub superclass: Option<Span>,
    /// Body including the braces.
    pub body_span: Span,
    pub members: Vec<ClassMember>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodFlavor {
    Instance,
    Static,
    Getter,
    Setter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMember {
    pub span: Span,
    pub kind: MemberKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MemberKind {
    Constructor(Function),
    Method { name: String, flavor: MethodFlavor, function: Function },
    Other,
}
