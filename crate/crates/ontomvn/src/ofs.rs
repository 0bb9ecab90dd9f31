//! Reader and writer for the OWL 2 functional-style syntax subset.
//!
//! The accepted document shape is
//!
//! ```text
//! Prefix(name:=<iri>)*
//! Ontology(<ontologyIri>? <versionIri>?
//!   Import(<iri>)*
//!   Annotation(prop value)*
//!   Axiom*
//! )
//! ```
//!
//! with `//` line comments, quoted-string literals (escapes `\"` and `\\`)
//! and prefixed names expanded through the declared prefixes. Supported
//! axioms are SubClassOf, EquivalentClasses, ClassAssertion,
//! ObjectPropertyAssertion, Declaration and AnnotationAssertion over
//! class expressions built from named classes, `owl:Thing`, `owl:Nothing`,
//! ObjectIntersectionOf and ObjectSomeValuesFrom.
//!
//! Recognized OWL keywords outside that subset do not kill the parse:
//! the whole axiom is kept verbatim as [`AxiomKind::Unsupported`] and a
//! Warning diagnostic is emitted. Unknown keywords are hard errors, so
//! garbage is still rejected. Parsing is total: every input yields either
//! an ontology (possibly with warnings) or at least one Error diagnostic,
//! never both.
//!
//! Serialization is canonical: prefixes sorted by name, imports in stored
//! order, annotations and axioms sorted, IRIs written in full. Parsing a
//! serialized document reproduces the ontology exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::iri::Iri;
use crate::model::{
    write_annotation, write_iri, Annotation, AnnotationValue, Axiom, AxiomKind, ClassExpression,
    EntityKind, ModelError, Ontology,
};

/// 1-based line and column of a source location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourcePosition {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for SourcePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Malformed input: bad token, unbalanced parentheses, wrong arity.
    Syntax,
    /// A prefixed name used an undeclared prefix.
    UnknownPrefix,
    /// An IRI reference that is not absolute.
    RelativeIri,
    /// A keyword that is not OWL at all.
    UnknownConstruct,
    /// A recognized OWL construct outside the supported subset; the axiom
    /// is preserved verbatim and this diagnostic is a Warning.
    UnsupportedConstruct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub position: SourcePosition,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{} at {}: {}", sev, self.position, self.message)
    }
}

/// A successful parse: the ontology plus any Warning diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub ontology: Ontology,
    pub warnings: Vec<Diagnostic>,
}

/// A failed parse: at least one diagnostic has Error severity.
#[derive(Debug, Clone)]
pub struct ParseFailure {
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseFailure {
    pub fn first_error(&self) -> &Diagnostic {
        self.diagnostics
            .iter()
            .find(|d| d.severity == Severity::Error)
            .expect("a parse failure carries an error diagnostic")
    }
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.first_error())
    }
}

impl std::error::Error for ParseFailure {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    LParen,
    RParen,
    Eq,
    IriRef(String),
    Pname { prefix: String, local: String },
    Word(String),
    Literal(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    position: SourcePosition,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn position(&self) -> SourcePosition {
        SourcePosition {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, position: SourcePosition, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::Syntax,
            position,
            message: message.into(),
        }
    }

    fn lex(mut self) -> Result<(Vec<Token>, SourcePosition), Diagnostic> {
        let mut tokens = Vec::new();
        loop {
            let position = self.position();
            let Some(c) = self.bump() else {
                return Ok((tokens, position));
            };
            let kind = match c {
                _ if c.is_whitespace() => continue,
                '/' => {
                    if self.chars.peek() == Some(&'/') {
                        while let Some(&n) = self.chars.peek() {
                            if n == '\n' {
                                break;
                            }
                            self.bump();
                        }
                        continue;
                    }
                    return Err(self.error(position, "unexpected character '/'"));
                }
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '=' => TokenKind::Eq,
                '<' => {
                    let mut text = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some('\n') | None => {
                                return Err(
                                    self.error(position, "unterminated IRI reference")
                                );
                            }
                            Some(c) => text.push(c),
                        }
                    }
                    TokenKind::IriRef(text)
                }
                '"' => {
                    let mut text = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => text.push('"'),
                                Some('\\') => text.push('\\'),
                                Some(other) => {
                                    return Err(self.error(
                                        position,
                                        format!("unsupported escape '\\{other}' in literal"),
                                    ));
                                }
                                None => {
                                    return Err(self.error(position, "unterminated literal"));
                                }
                            },
                            Some(c) => text.push(c),
                            None => {
                                return Err(self.error(position, "unterminated literal"));
                            }
                        }
                    }
                    TokenKind::Literal(text)
                }
                ':' => {
                    let local = self.take_word();
                    TokenKind::Pname {
                        prefix: String::new(),
                        local,
                    }
                }
                _ if is_word_char(c) => {
                    let mut word = String::from(c);
                    word.push_str(&self.take_word());
                    if self.chars.peek() == Some(&':') {
                        self.bump();
                        let local = self.take_word();
                        TokenKind::Pname {
                            prefix: word,
                            local,
                        }
                    } else {
                        TokenKind::Word(word)
                    }
                }
                other => {
                    return Err(
                        self.error(position, format!("unexpected character {other:?}"))
                    );
                }
            };
            tokens.push(Token { kind, position });
        }
    }

    fn take_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if is_word_char(c) {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        word
    }
}

/// OWL keywords recognized but outside the supported subset. Meeting one
/// of these turns the surrounding axiom into `AxiomKind::Unsupported`.
const RECOGNIZED_CONSTRUCTS: &[&str] = &[
    "Annotation",
    "AnnotationPropertyDomain",
    "AnnotationPropertyRange",
    "AsymmetricObjectProperty",
    "DataAllValuesFrom",
    "DataComplementOf",
    "DataExactCardinality",
    "DataHasValue",
    "DataIntersectionOf",
    "DataMaxCardinality",
    "DataMinCardinality",
    "DataOneOf",
    "DataPropertyAssertion",
    "DataPropertyDomain",
    "DataPropertyRange",
    "DataSomeValuesFrom",
    "DataUnionOf",
    "Datatype",
    "DatatypeDefinition",
    "DatatypeRestriction",
    "DifferentIndividuals",
    "DisjointClasses",
    "DisjointDataProperties",
    "DisjointObjectProperties",
    "DisjointUnion",
    "EquivalentDataProperties",
    "EquivalentObjectProperties",
    "FunctionalDataProperty",
    "FunctionalObjectProperty",
    "HasKey",
    "InverseFunctionalObjectProperty",
    "InverseObjectProperties",
    "IrreflexiveObjectProperty",
    "NegativeDataPropertyAssertion",
    "NegativeObjectPropertyAssertion",
    "ObjectAllValuesFrom",
    "ObjectComplementOf",
    "ObjectExactCardinality",
    "ObjectHasSelf",
    "ObjectHasValue",
    "ObjectInverseOf",
    "ObjectMaxCardinality",
    "ObjectMinCardinality",
    "ObjectOneOf",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "ObjectUnionOf",
    "ReflexiveObjectProperty",
    "SameIndividual",
    "SubAnnotationPropertyOf",
    "SubDataPropertyOf",
    "SubObjectPropertyOf",
    "SymmetricObjectProperty",
    "TransitiveObjectProperty",
];

fn is_recognized_construct(word: &str) -> bool {
    RECOGNIZED_CONSTRUCTS.binary_search(&word).is_ok()
}

enum Abort {
    Fatal(Diagnostic),
    /// A recognized out-of-subset construct; caught at axiom granularity.
    Unsupported {
        construct: String,
        position: SourcePosition,
    },
}

type PResult<T> = Result<T, Abort>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: SourcePosition,
    prefixes: BTreeMap<String, String>,
    warnings: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_position(&self) -> SourcePosition {
        self.tokens
            .get(self.pos)
            .map(|t| t.position)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.pos).cloned();
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    fn fatal(&self, position: SourcePosition, kind: DiagnosticKind, message: String) -> Abort {
        Abort::Fatal(Diagnostic {
            severity: Severity::Error,
            kind,
            position,
            message,
        })
    }

    fn syntax_error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.fatal(self.peek_position(), DiagnosticKind::Syntax, message.into()))
    }

    fn expect_lparen(&mut self) -> PResult<()> {
        match self.peek() {
            Some(TokenKind::LParen) => {
                self.advance();
                Ok(())
            }
            _ => self.syntax_error("expected '('"),
        }
    }

    fn expect_rparen(&mut self) -> PResult<()> {
        match self.peek() {
            Some(TokenKind::RParen) => {
                self.advance();
                Ok(())
            }
            _ => self.syntax_error("expected ')'"),
        }
    }

    fn peek_word(&self) -> Option<&str> {
        match self.peek() {
            Some(TokenKind::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    /// True when the next tokens are `Word(word)` followed by `(`.
    fn at_call(&self, word: &str) -> bool {
        self.peek_word() == Some(word)
            && matches!(
                self.tokens.get(self.pos + 1).map(|t| &t.kind),
                Some(TokenKind::LParen)
            )
    }

    fn parse_iri(&mut self) -> PResult<Iri> {
        let position = self.peek_position();
        match self.advance().map(|t| t.kind) {
            Some(TokenKind::IriRef(text)) => Iri::new(text).map_err(|e| {
                self.fatal(position, DiagnosticKind::RelativeIri, e.to_string())
            }),
            Some(TokenKind::Pname { prefix, local }) => {
                let Some(expansion) = self.prefixes.get(&prefix) else {
                    return Err(self.fatal(
                        position,
                        DiagnosticKind::UnknownPrefix,
                        format!("unknown prefix '{prefix}:'"),
                    ));
                };
                Iri::new(format!("{expansion}{local}")).map_err(|e| {
                    self.fatal(position, DiagnosticKind::RelativeIri, e.to_string())
                })
            }
            Some(TokenKind::Word(w)) => Err(self.construct_abort(w, position)),
            _ => Err(self.fatal(
                position,
                DiagnosticKind::Syntax,
                "expected an IRI".to_string(),
            )),
        }
    }

    /// Classifies a keyword met where it cannot be handled: recognized OWL
    /// becomes an Unsupported signal, anything else is a hard error.
    fn construct_abort(&self, word: String, position: SourcePosition) -> Abort {
        if is_recognized_construct(&word) {
            Abort::Unsupported {
                construct: word,
                position,
            }
        } else {
            self.fatal(
                position,
                DiagnosticKind::UnknownConstruct,
                format!("unknown construct '{word}'"),
            )
        }
    }

    fn parse_annotation_value(&mut self) -> PResult<AnnotationValue> {
        match self.peek() {
            Some(TokenKind::Literal(_)) => {
                let Some(TokenKind::Literal(text)) = self.advance().map(|t| t.kind) else {
                    unreachable!()
                };
                Ok(AnnotationValue::Literal(text))
            }
            _ => Ok(AnnotationValue::Iri(self.parse_iri()?)),
        }
    }

    /// `Annotation(prop value)`; the caller has checked the lookahead.
    fn parse_annotation(&mut self) -> PResult<Annotation> {
        self.advance(); // Annotation
        self.expect_lparen()?;
        let property = self.parse_iri()?;
        let value = self.parse_annotation_value()?;
        self.expect_rparen()?;
        Ok(Annotation { property, value })
    }

    fn parse_annotations(&mut self) -> PResult<Vec<Annotation>> {
        let mut annotations = Vec::new();
        while self.at_call("Annotation") {
            annotations.push(self.parse_annotation()?);
        }
        Ok(annotations)
    }

    fn parse_class_expression(&mut self) -> PResult<ClassExpression> {
        let position = self.peek_position();
        match self.peek() {
            Some(TokenKind::Word(w)) => match w.as_str() {
                "ObjectIntersectionOf" => {
                    self.advance();
                    self.expect_lparen()?;
                    let mut ops = Vec::new();
                    while !matches!(self.peek(), Some(TokenKind::RParen) | None) {
                        ops.push(self.parse_class_expression()?);
                    }
                    self.expect_rparen()?;
                    if ops.len() < 2 {
                        return Err(self.fatal(
                            position,
                            DiagnosticKind::Syntax,
                            "ObjectIntersectionOf needs at least two operands".to_string(),
                        ));
                    }
                    ClassExpression::conjunction(ops)
                        .map_err(|e| self.fatal(position, DiagnosticKind::Syntax, e.to_string()))
                }
                "ObjectSomeValuesFrom" => {
                    self.advance();
                    self.expect_lparen()?;
                    let role = self.parse_iri()?;
                    let filler = self.parse_class_expression()?;
                    self.expect_rparen()?;
                    Ok(ClassExpression::existential(role, filler))
                }
                _ => {
                    let word = w.clone();
                    Err(self.construct_abort(word, position))
                }
            },
            Some(TokenKind::IriRef(_) | TokenKind::Pname { .. }) => {
                Ok(ClassExpression::named(self.parse_iri()?))
            }
            _ => self.syntax_error("expected a class expression"),
        }
    }

    fn model_error(&self, position: SourcePosition, e: ModelError) -> Abort {
        self.fatal(position, DiagnosticKind::Syntax, e.to_string())
    }

    fn parse_axiom_inner(&mut self) -> PResult<Axiom> {
        let position = self.peek_position();
        let Some(TokenKind::Word(word)) = self.peek() else {
            return self.syntax_error("expected an axiom");
        };
        let word = word.clone();
        match word.as_str() {
            // These appear only in the document header; meeting one here
            // means the input is out of order, not out of profile.
            "Import" | "Prefix" | "Ontology" => {
                return Err(self.fatal(
                    position,
                    DiagnosticKind::Syntax,
                    format!("misplaced '{word}' (header entries precede axioms)"),
                ));
            }
            "Annotation" => {
                return Err(self.fatal(
                    position,
                    DiagnosticKind::Syntax,
                    "misplaced 'Annotation' (ontology annotations precede axioms)".to_string(),
                ));
            }
            _ => {}
        }
        let kind = match word.as_str() {
            "SubClassOf" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let sub = self.parse_class_expression()?;
                let sup = self.parse_class_expression()?;
                self.expect_rparen()?;
                return Axiom::new(AxiomKind::SubClassOf { sub, sup }, annotations)
                    .map_err(|e| self.model_error(position, e));
            }
            "EquivalentClasses" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let mut ops = Vec::new();
                while !matches!(self.peek(), Some(TokenKind::RParen) | None) {
                    ops.push(self.parse_class_expression()?);
                }
                self.expect_rparen()?;
                if ops.len() < 2 {
                    return Err(self.fatal(
                        position,
                        DiagnosticKind::Syntax,
                        "EquivalentClasses needs at least two operands".to_string(),
                    ));
                }
                return Axiom::new(AxiomKind::EquivalentClasses(ops), annotations)
                    .map_err(|e| self.model_error(position, e));
            }
            "ClassAssertion" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let class = self.parse_class_expression()?;
                let individual = self.parse_iri()?;
                self.expect_rparen()?;
                return Axiom::new(AxiomKind::ClassAssertion { class, individual }, annotations)
                    .map_err(|e| self.model_error(position, e));
            }
            "ObjectPropertyAssertion" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let role = self.parse_iri()?;
                let subject = self.parse_iri()?;
                let object = self.parse_iri()?;
                self.expect_rparen()?;
                return Axiom::new(
                    AxiomKind::PropertyAssertion {
                        role,
                        subject,
                        object,
                    },
                    annotations,
                )
                .map_err(|e| self.model_error(position, e));
            }
            "Declaration" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let kind_position = self.peek_position();
                let Some(TokenKind::Word(kind_word)) = self.peek() else {
                    return self.syntax_error("expected an entity kind");
                };
                let kind = match kind_word.as_str() {
                    "Class" => EntityKind::Class,
                    "ObjectProperty" => EntityKind::ObjectProperty,
                    "DataProperty" => EntityKind::DataProperty,
                    "AnnotationProperty" => EntityKind::AnnotationProperty,
                    "NamedIndividual" => EntityKind::NamedIndividual,
                    other => {
                        let other = other.to_string();
                        return Err(self.construct_abort(other, kind_position));
                    }
                };
                self.advance();
                self.expect_lparen()?;
                let entity = self.parse_iri()?;
                self.expect_rparen()?;
                self.expect_rparen()?;
                return Axiom::new(AxiomKind::Declaration { kind, entity }, annotations)
                    .map_err(|e| self.model_error(position, e));
            }
            "AnnotationAssertion" => {
                self.advance();
                self.expect_lparen()?;
                let annotations = self.parse_annotations()?;
                let property = self.parse_iri()?;
                let subject = self.parse_iri()?;
                let value = self.parse_annotation_value()?;
                self.expect_rparen()?;
                return Axiom::new(
                    AxiomKind::AnnotationAssertion {
                        property,
                        subject,
                        value,
                    },
                    annotations,
                )
                .map_err(|e| self.model_error(position, e));
            }
            _ => self.construct_abort(word, position),
        };
        Err(kind)
    }

    /// Parses one axiom, degrading recognized out-of-subset constructs to a
    /// verbatim `Unsupported` axiom plus a Warning.
    fn parse_axiom(&mut self) -> Result<Axiom, Diagnostic> {
        let start = self.pos;
        match self.parse_axiom_inner() {
            Ok(axiom) => Ok(axiom),
            Err(Abort::Fatal(d)) => Err(d),
            Err(Abort::Unsupported {
                construct,
                position,
            }) => {
                self.pos = start;
                let text = self.skip_axiom_and_render()?;
                self.warnings.push(Diagnostic {
                    severity: Severity::Warning,
                    kind: DiagnosticKind::UnsupportedConstruct,
                    position,
                    message: format!(
                        "construct '{construct}' is outside the supported subset; \
                         axiom kept verbatim"
                    ),
                });
                Ok(Axiom::new(AxiomKind::Unsupported { construct, text }, [])
                    .expect("unsupported axioms always construct"))
            }
        }
    }

    /// Consumes one `Word ( ... )` group as raw tokens and renders it in
    /// single-space form. Prefixed names stay unexpanded.
    fn skip_axiom_and_render(&mut self) -> Result<String, Diagnostic> {
        let mut out = String::new();
        let Some(head) = self.advance() else {
            unreachable!("caller saw the head word");
        };
        let TokenKind::Word(word) = &head.kind else {
            unreachable!("caller saw the head word");
        };
        out.push_str(word);
        match self.peek() {
            Some(TokenKind::LParen) => {}
            _ => {
                return Err(Diagnostic {
                    severity: Severity::Error,
                    kind: DiagnosticKind::Syntax,
                    position: self.peek_position(),
                    message: "expected '('".to_string(),
                });
            }
        }
        let mut depth = 0usize;
        let mut previous_was_open = false;
        loop {
            let Some(token) = self.advance() else {
                return Err(Diagnostic {
                    severity: Severity::Error,
                    kind: DiagnosticKind::Syntax,
                    position: self.end,
                    message: "unbalanced parentheses".to_string(),
                });
            };
            match &token.kind {
                TokenKind::LParen => {
                    out.push('(');
                    depth += 1;
                    previous_was_open = true;
                }
                TokenKind::RParen => {
                    out.push(')');
                    depth -= 1;
                    previous_was_open = false;
                    if depth == 0 {
                        return Ok(out);
                    }
                }
                other => {
                    // A '(' never follows a non-paren token without its head
                    // word, so a space before every other token is right
                    // unless we just opened a group.
                    if !previous_was_open {
                        out.push(' ');
                    }
                    previous_was_open = false;
                    match other {
                        TokenKind::IriRef(text) => {
                            out.push('<');
                            out.push_str(text);
                            out.push('>');
                        }
                        TokenKind::Pname { prefix, local } => {
                            out.push_str(prefix);
                            out.push(':');
                            out.push_str(local);
                        }
                        TokenKind::Word(w) => {
                            out.push_str(w);
                            // Peek: a call keyword glues to its paren.
                            if matches!(self.peek(), Some(TokenKind::LParen)) {
                                continue;
                            }
                        }
                        TokenKind::Literal(text) => {
                            out.push('"');
                            for c in text.chars() {
                                match c {
                                    '"' => out.push_str("\\\""),
                                    '\\' => out.push_str("\\\\"),
                                    _ => out.push(c),
                                }
                            }
                            out.push('"');
                        }
                        TokenKind::Eq => out.push('='),
                        TokenKind::LParen | TokenKind::RParen => unreachable!(),
                    }
                }
            }
        }
    }

    fn parse_prefix_declaration(&mut self) -> PResult<()> {
        self.advance(); // Prefix
        self.expect_lparen()?;
        let position = self.peek_position();
        let name = match self.advance().map(|t| t.kind) {
            Some(TokenKind::Pname { prefix, local }) if local.is_empty() => prefix,
            _ => {
                return Err(self.fatal(
                    position,
                    DiagnosticKind::Syntax,
                    "expected a prefix name like 'p:' or ':'".to_string(),
                ));
            }
        };
        match self.peek() {
            Some(TokenKind::Eq) => {
                self.advance();
            }
            _ => return self.syntax_error("expected '='"),
        }
        let iri_position = self.peek_position();
        let expansion = match self.advance().map(|t| t.kind) {
            Some(TokenKind::IriRef(text)) => {
                Iri::new(text)
                    .map_err(|e| {
                        self.fatal(iri_position, DiagnosticKind::RelativeIri, e.to_string())
                    })?
                    .as_str()
                    .to_string()
            }
            _ => return self.syntax_error("expected an IRI reference"),
        };
        self.expect_rparen()?;
        if self.prefixes.insert(name.clone(), expansion).is_some() {
            return Err(self.fatal(
                position,
                DiagnosticKind::Syntax,
                format!("prefix '{name}:' declared twice"),
            ));
        }
        Ok(())
    }

    fn parse_document(&mut self) -> Result<Ontology, Diagnostic> {
        match self.parse_document_inner() {
            Ok(ontology) => Ok(ontology),
            Err(Abort::Fatal(d)) => Err(d),
            Err(Abort::Unsupported {
                construct,
                position,
            }) => Err(Diagnostic {
                severity: Severity::Error,
                kind: DiagnosticKind::UnsupportedConstruct,
                position,
                message: format!("construct '{construct}' cannot appear here"),
            }),
        }
    }

    fn parse_document_inner(&mut self) -> PResult<Ontology> {
        while self.at_call("Prefix") {
            self.parse_prefix_declaration()?;
        }
        if !self.at_call("Ontology") {
            return self.syntax_error("expected 'Ontology('");
        }
        self.advance();
        self.expect_lparen()?;

        let mut ontology = Ontology::new();
        for (name, expansion) in &self.prefixes {
            ontology.set_prefix(name.clone(), expansion.clone());
        }

        if matches!(
            self.peek(),
            Some(TokenKind::IriRef(_) | TokenKind::Pname { .. })
        ) {
            let iri = self.parse_iri()?;
            ontology.set_ontology_iri(iri);
            if matches!(
                self.peek(),
                Some(TokenKind::IriRef(_) | TokenKind::Pname { .. })
            ) {
                let position = self.peek_position();
                let version = self.parse_iri()?;
                ontology
                    .set_version_iri(version)
                    .map_err(|e| self.model_error(position, e))?;
            }
        }

        while self.at_call("Import") {
            self.advance();
            self.expect_lparen()?;
            let iri = self.parse_iri()?;
            self.expect_rparen()?;
            ontology.add_import(iri);
        }

        while self.at_call("Annotation") {
            let annotation = self.parse_annotation()?;
            ontology.add_annotation(annotation);
        }

        while !matches!(self.peek(), Some(TokenKind::RParen) | None) {
            let axiom = self.parse_axiom().map_err(Abort::Fatal)?;
            ontology.add_axiom(axiom);
        }
        self.expect_rparen()?;
        if self.pos != self.tokens.len() {
            return self.syntax_error("unexpected content after the ontology");
        }
        Ok(ontology)
    }
}

/// Parses a document. Total: returns an ontology with warnings, or a
/// failure carrying at least one Error diagnostic (warnings included).
pub fn parse_ontology(text: &str) -> Result<Parsed, ParseFailure> {
    let (tokens, end) = match Lexer::new(text).lex() {
        Ok(pair) => pair,
        Err(diagnostic) => {
            return Err(ParseFailure {
                diagnostics: vec![diagnostic],
            });
        }
    };
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        prefixes: BTreeMap::new(),
        warnings: Vec::new(),
    };
    match parser.parse_document() {
        Ok(ontology) => Ok(Parsed {
            ontology,
            warnings: parser.warnings,
        }),
        Err(error) => {
            let mut diagnostics = parser.warnings;
            diagnostics.push(error);
            Err(ParseFailure { diagnostics })
        }
    }
}

/// Canonical serialization: prefixes sorted by name, imports in stored
/// order, annotations sorted, axioms sorted by their canonical text, IRIs
/// written in full. Equal ontologies serialize to identical bytes.
pub fn serialize_ontology(ontology: &Ontology) -> String {
    let mut out = String::new();
    for (name, expansion) in ontology.prefixes() {
        out.push_str("Prefix(");
        out.push_str(name);
        out.push_str(":=<");
        out.push_str(expansion);
        out.push_str(">)\n");
    }
    out.push_str("Ontology(");
    let mut header = Vec::new();
    if let Some(iri) = ontology.ontology_iri() {
        let mut text = String::new();
        write_iri(&mut text, iri);
        header.push(text);
        if let Some(version) = ontology.version_iri() {
            let mut text = String::new();
            write_iri(&mut text, version);
            header.push(text);
        }
    }
    out.push_str(&header.join(" "));

    let mut members: Vec<String> = Vec::new();
    for import in ontology.imports() {
        let mut line = String::from("Import(");
        write_iri(&mut line, import);
        line.push(')');
        members.push(line);
    }
    for annotation in ontology.annotations() {
        let mut line = String::new();
        write_annotation(&mut line, annotation);
        members.push(line);
    }
    let mut axiom_lines: Vec<String> = ontology
        .axioms()
        .iter()
        .map(|a| a.canonical_text())
        .collect();
    axiom_lines.sort();
    members.extend(axiom_lines);

    if members.is_empty() {
        out.push_str(")\n");
    } else {
        out.push('\n');
        for member in members {
            out.push_str("  ");
            out.push_str(&member);
            out.push('\n');
        }
        out.push_str(")\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OWL_THING;

    fn parse(text: &str) -> Parsed {
        parse_ontology(text).expect("parse should succeed")
    }

    fn first_error(text: &str) -> Diagnostic {
        parse_ontology(text)
            .expect_err("parse should fail")
            .first_error()
            .clone()
    }

    #[test]
    fn empty_document_round_trips() {
        let parsed = parse("Ontology()");
        assert!(parsed.ontology.axioms().is_empty());
        assert_eq!(serialize_ontology(&parsed.ontology), "Ontology()\n");
    }

    #[test]
    fn full_document_parses() {
        let text = r#"
// A small camera ontology.
Prefix(:=<http://example.org/camera#>)
Prefix(dc:=<http://purl.org/dc/terms/>)
Ontology(<http://example.org/camera> <http://example.org/camera/1.0>
  Import(<http://example.org/base>)
  Annotation(dc:creator "xfront")
  Declaration(Class(:Camera))
  SubClassOf(:DSLR :Camera)
  SubClassOf(Annotation(:hasAspect :prov789) :SLR ObjectSomeValuesFrom(:hasPart :Mirror))
  EquivalentClasses(:Digital ObjectIntersectionOf(:Camera ObjectSomeValuesFrom(:hasSensor :CCD)))
  ClassAssertion(:Camera :d70)
  ObjectPropertyAssertion(:hasPart :d70 :mirror1)
  AnnotationAssertion(dc:creator :d70 "Nikon")
)
"#;
        let parsed = parse(text);
        let ont = &parsed.ontology;
        assert!(parsed.warnings.is_empty());
        assert_eq!(
            ont.ontology_iri().unwrap().as_str(),
            "http://example.org/camera"
        );
        assert_eq!(
            ont.version_iri().unwrap().as_str(),
            "http://example.org/camera/1.0"
        );
        assert_eq!(ont.imports().len(), 1);
        assert_eq!(ont.annotations().len(), 1);
        assert_eq!(ont.axioms().len(), 7);
        assert_eq!(ont.prefixes().len(), 2);

        let annotated = ont
            .axioms()
            .iter()
            .find(|a| !a.annotations().is_empty())
            .unwrap();
        let aspects =
            annotated.aspects(&Iri::new("http://example.org/camera#hasAspect").unwrap());
        assert_eq!(aspects.len(), 1);
    }

    #[test]
    fn owl_thing_and_nothing_map_to_top_and_bottom() {
        let text = r#"
Prefix(owl:=<http://www.w3.org/2002/07/owl#>)
Ontology(
  SubClassOf(<http://e/A> owl:Thing)
  SubClassOf(owl:Nothing <http://e/A>)
)
"#;
        let parsed = parse(text);
        let texts: Vec<String> = parsed
            .ontology
            .axioms()
            .iter()
            .map(|a| a.canonical_text())
            .collect();
        assert!(texts.iter().any(|t| t.contains(OWL_THING)));
    }

    #[test]
    fn unknown_prefix_is_an_error_with_position() {
        let err = first_error("Ontology(\nSubClassOf(x:A x:B)\n)");
        assert_eq!(err.kind, DiagnosticKind::UnknownPrefix);
        assert_eq!(err.position, SourcePosition { line: 2, column: 12 });
    }

    #[test]
    fn relative_iri_is_an_error() {
        let err = first_error("Ontology(SubClassOf(<a> <http://e/B>))");
        assert_eq!(err.kind, DiagnosticKind::RelativeIri);
    }

    #[test]
    fn garbage_keyword_is_an_error() {
        let err = first_error("Ontology(FooBarBaz(<http://e/A>))");
        assert_eq!(err.kind, DiagnosticKind::UnknownConstruct);
        assert_eq!(err.severity, Severity::Error);
    }

    #[test]
    fn unbalanced_parens_is_an_error() {
        let err = first_error("Ontology(SubClassOf(<http://e/A> <http://e/B>)");
        assert_eq!(err.severity, Severity::Error);
    }

    #[test]
    fn recognized_construct_becomes_unsupported_axiom_with_warning() {
        let text = r#"
Ontology(
  DisjointClasses(<http://e/A> <http://e/B>)
  SubClassOf(<http://e/A> ObjectUnionOf(<http://e/B> <http://e/C>))
  SubClassOf(<http://e/A> <http://e/B>)
)
"#;
        let parsed = parse(text);
        assert_eq!(parsed.warnings.len(), 2);
        assert!(parsed
            .warnings
            .iter()
            .all(|w| w.severity == Severity::Warning
                && w.kind == DiagnosticKind::UnsupportedConstruct));
        let unsupported: Vec<&Axiom> = parsed
            .ontology
            .axioms()
            .iter()
            .filter(|a| matches!(a.kind(), AxiomKind::Unsupported { .. }))
            .collect();
        assert_eq!(unsupported.len(), 2);
        match unsupported[0].kind() {
            AxiomKind::Unsupported { construct, text } => {
                assert_eq!(construct, "DisjointClasses");
                assert_eq!(text, "DisjointClasses(<http://e/A> <http://e/B>)");
            }
            _ => unreachable!(),
        }
        match unsupported[1].kind() {
            AxiomKind::Unsupported { construct, text } => {
                assert_eq!(construct, "ObjectUnionOf");
                assert_eq!(
                    text,
                    "SubClassOf(<http://e/A> ObjectUnionOf(<http://e/B> <http://e/C>))"
                );
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn unsupported_axioms_round_trip() {
        let text = r#"
Prefix(:=<http://e/>)
Ontology(
  DisjointClasses(:A :B)
  SubObjectPropertyOf(:r :s)
  SubClassOf(:A ObjectMinCardinality(2 :r :B))
)
"#;
        let parsed = parse(text);
        let serialized = serialize_ontology(&parsed.ontology);
        let reparsed = parse_ontology(&serialized).expect("round trip parses");
        assert_eq!(reparsed.ontology, parsed.ontology);
        assert_eq!(serialize_ontology(&reparsed.ontology), serialized);
        assert!(serialized.contains("DisjointClasses(:A :B)"));
        assert!(serialized.contains("ObjectMinCardinality(2 :r :B)"));
    }

    #[test]
    fn success_never_carries_error_diagnostics() {
        let parsed = parse("Ontology(DisjointClasses(<http://e/A> <http://e/B>))");
        assert!(parsed
            .warnings
            .iter()
            .all(|d| d.severity == Severity::Warning));
        let failure =
            parse_ontology("Ontology(FooBarBaz(<http://e/A>))").expect_err("must fail");
        assert!(failure
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error));
    }

    #[test]
    fn duplicate_axioms_are_deduplicated() {
        let text = r#"
Ontology(
  SubClassOf(<http://e/A> <http://e/B>)
  SubClassOf(<http://e/A> <http://e/B>)
)
"#;
        assert_eq!(parse(text).ontology.axioms().len(), 1);
    }

    #[test]
    fn degenerate_equivalence_is_an_error() {
        let err = first_error("Ontology(EquivalentClasses(<http://e/A> <http://e/A>))");
        assert_eq!(err.severity, Severity::Error);
    }

    #[test]
    fn single_operand_intersection_is_an_error() {
        let err =
            first_error("Ontology(SubClassOf(ObjectIntersectionOf(<http://e/A>) <http://e/B>))");
        assert_eq!(err.severity, Severity::Error);
    }

    #[test]
    fn literal_escapes_round_trip() {
        let text = "Ontology(AnnotationAssertion(<http://e/p> <http://e/s> \"a\\\"b\\\\c\"))";
        let parsed = parse(text);
        let serialized = serialize_ontology(&parsed.ontology);
        assert!(serialized.contains("\"a\\\"b\\\\c\""));
        let reparsed = parse_ontology(&serialized).unwrap();
        assert_eq!(reparsed.ontology, parsed.ontology);
    }

    #[test]
    fn axiom_order_does_not_affect_serialization() {
        let a = "Ontology(SubClassOf(<http://e/A> <http://e/B>) SubClassOf(<http://e/B> <http://e/C>))";
        let b = "Ontology(SubClassOf(<http://e/B> <http://e/C>) SubClassOf(<http://e/A> <http://e/B>))";
        let sa = serialize_ontology(&parse(a).ontology);
        let sb = serialize_ontology(&parse(b).ontology);
        assert_eq!(sa, sb);
    }

    #[test]
    fn conjunction_operand_order_does_not_affect_serialization() {
        let a = "Ontology(SubClassOf(ObjectIntersectionOf(<http://e/X> <http://e/Y>) <http://e/Z>))";
        let b = "Ontology(SubClassOf(ObjectIntersectionOf(<http://e/Y> <http://e/X>) <http://e/Z>))";
        assert_eq!(
            serialize_ontology(&parse(a).ontology),
            serialize_ontology(&parse(b).ontology)
        );
    }

    #[test]
    fn serialization_reaches_a_fixpoint() {
        let text = r#"
Prefix(:=<http://e/>)
Ontology(<http://e/onto>
  Import(<http://e/base>)
  Annotation(:note "v")
  SubClassOf(:B :C)
  SubClassOf(:A ObjectIntersectionOf(:B ObjectSomeValuesFrom(:r :C)))
  DisjointClasses(:A :B)
)
"#;
        let once = serialize_ontology(&parse(text).ontology);
        let twice = serialize_ontology(&parse(&once).ontology);
        assert_eq!(once, twice);
    }

    #[test]
    fn misplaced_header_entries_are_errors() {
        let err = first_error(
            "Ontology(SubClassOf(<http://e/A> <http://e/B>) Import(<http://e/b>))",
        );
        assert!(err.message.contains("misplaced"));
        let err = first_error(
            "Ontology(SubClassOf(<http://e/A> <http://e/B>) Annotation(<http://e/p> \"v\"))",
        );
        assert!(err.message.contains("misplaced"));
    }

    #[test]
    fn trailing_content_is_an_error() {
        let err = first_error("Ontology() Ontology()");
        assert!(err.message.contains("unexpected content"));
    }

    #[test]
    fn comments_are_skipped() {
        let text = "// leading\nOntology( // inline\n) // trailing";
        parse(text);
    }

    #[test]
    fn duplicate_prefix_is_an_error() {
        let err = first_error(
            "Prefix(a:=<http://e/1>)\nPrefix(a:=<http://e/2>)\nOntology()",
        );
        assert!(err.message.contains("declared twice"));
    }

    #[test]
    fn declarations_of_every_kind_parse() {
        let text = r#"
Ontology(
  Declaration(Class(<http://e/C>))
  Declaration(ObjectProperty(<http://e/r>))
  Declaration(DataProperty(<http://e/d>))
  Declaration(AnnotationProperty(<http://e/p>))
  Declaration(NamedIndividual(<http://e/i>))
)
"#;
        assert_eq!(parse(text).ontology.axioms().len(), 5);
    }

    #[test]
    fn datatype_declaration_degrades_to_unsupported() {
        let parsed = parse("Ontology(Declaration(Datatype(<http://e/dt>)))");
        assert_eq!(parsed.warnings.len(), 1);
        assert!(matches!(
            parsed.ontology.axioms()[0].kind(),
            AxiomKind::Unsupported { .. }
        ));
    }

    #[test]
    fn error_positions_are_one_based() {
        let err = first_error("FooBar()");
        assert_eq!(err.position, SourcePosition { line: 1, column: 1 });
    }
}
