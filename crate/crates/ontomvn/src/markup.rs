//! Minimal XML-shaped markup reader for descriptors, catalogs, metadata
//! and test manifests.
//!
//! Supported: one root element, nested elements, attributes in single or
//! double quotes, character data, `<!-- -->` comments, an optional leading
//! `<?xml ...?>` declaration, and the five standard entities (`&lt;`
//! `&gt;` `&amp;` `&apos;` `&quot;`). No namespaces (colons in names are
//! kept verbatim), no DTDs, no CDATA, no processing instructions beyond
//! the prolog. Whitespace-only text runs between elements are dropped.

use std::fmt;

use thiserror::Error;

use crate::ofs::SourcePosition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkupNode {
    pub name: String,
    /// In document order; names are unique per element.
    pub attributes: Vec<(String, String)>,
    pub children: Vec<MarkupChild>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkupChild {
    Element(MarkupNode),
    Text(String),
}

impl MarkupNode {
    pub fn attribute(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &MarkupNode> {
        self.children.iter().filter_map(|c| match c {
            MarkupChild::Element(node) => Some(node),
            MarkupChild::Text(_) => None,
        })
    }

    pub fn children_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a MarkupNode> {
        self.elements().filter(move |e| e.name == name)
    }

    pub fn child(&self, name: &str) -> Option<&MarkupNode> {
        self.elements().find(|e| e.name == name)
    }

    /// Concatenated direct text content, trimmed.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for child in &self.children {
            if let MarkupChild::Text(text) = child {
                out.push_str(text);
            }
        }
        out.trim().to_string()
    }

    /// Trimmed text of a direct child element, when present and non-empty.
    pub fn child_text(&self, name: &str) -> Option<String> {
        let text = self.child(name)?.text();
        if text.is_empty() {
            None
        } else {
            Some(text)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("markup error at {position}: {message}")]
pub struct MarkupError {
    pub position: SourcePosition,
    pub message: String,
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
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

    fn error<T>(&self, message: impl Into<String>) -> Result<T, MarkupError> {
        Err(MarkupError {
            position: self.position(),
            message: message.into(),
        })
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

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn eat(&mut self, expected: char) -> Result<(), MarkupError> {
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            Some(c) => self.error(format!("expected {expected:?}, found {c:?}")),
            None => self.error(format!("expected {expected:?}, found end of input")),
        }
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn starts_with(&mut self, prefix: &str) -> bool {
        self.chars.clone().take(prefix.len()).eq(prefix.chars())
    }

    fn skip_literal(&mut self, literal: &str) -> Result<(), MarkupError> {
        for expected in literal.chars() {
            self.eat(expected)?;
        }
        Ok(())
    }

    fn skip_until(&mut self, terminator: &str) -> Result<(), MarkupError> {
        loop {
            if self.starts_with(terminator) {
                self.skip_literal(terminator)?;
                return Ok(());
            }
            if self.bump().is_none() {
                return self.error(format!("unterminated section, expected {terminator:?}"));
            }
        }
    }

    fn name(&mut self) -> Result<String, MarkupError> {
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | ':') {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return self.error("expected a name");
        }
        Ok(name)
    }

    fn entity(&mut self) -> Result<char, MarkupError> {
        // The '&' is already consumed.
        let mut entity = String::new();
        loop {
            match self.bump() {
                Some(';') => break,
                Some(c) if entity.len() < 8 => entity.push(c),
                _ => return self.error("malformed entity reference"),
            }
        }
        match entity.as_str() {
            "lt" => Ok('<'),
            "gt" => Ok('>'),
            "amp" => Ok('&'),
            "apos" => Ok('\''),
            "quot" => Ok('"'),
            other => self.error(format!("unsupported entity '&{other};'")),
        }
    }

    fn attribute_value(&mut self) -> Result<String, MarkupError> {
        let quote = match self.bump() {
            Some(c @ ('"' | '\'')) => c,
            _ => return self.error("expected a quoted attribute value"),
        };
        let mut value = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(value),
                Some('&') => value.push(self.entity()?),
                Some('<') => return self.error("'<' in attribute value"),
                Some(c) => value.push(c),
                None => return self.error("unterminated attribute value"),
            }
        }
    }

    /// The reader is past `<` and the name character is next.
    fn element(&mut self) -> Result<MarkupNode, MarkupError> {
        let name = self.name()?;
        let mut attributes: Vec<(String, String)> = Vec::new();
        loop {
            self.skip_whitespace();
            match self.peek() {
                Some('/') => {
                    self.bump();
                    self.eat('>')?;
                    return Ok(MarkupNode {
                        name,
                        attributes,
                        children: Vec::new(),
                    });
                }
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    let attr_name = self.name()?;
                    if attributes.iter().any(|(n, _)| n == &attr_name) {
                        return self.error(format!("duplicate attribute '{attr_name}'"));
                    }
                    self.skip_whitespace();
                    self.eat('=')?;
                    self.skip_whitespace();
                    let value = self.attribute_value()?;
                    attributes.push((attr_name, value));
                }
                None => return self.error("unterminated start tag"),
            }
        }

        let mut children = Vec::new();
        let mut text = String::new();
        loop {
            match self.peek() {
                Some('<') => {
                    if !text.trim().is_empty() {
                        children.push(MarkupChild::Text(std::mem::take(&mut text)));
                    } else {
                        text.clear();
                    }
                    if self.starts_with("<!--") {
                        self.skip_literal("<!--")?;
                        self.skip_until("-->")?;
                        continue;
                    }
                    if self.starts_with("</") {
                        self.skip_literal("</")?;
                        let close = self.name()?;
                        if close != name {
                            return self.error(format!(
                                "mismatched close tag: expected '</{name}>', found '</{close}>'"
                            ));
                        }
                        self.skip_whitespace();
                        self.eat('>')?;
                        return Ok(MarkupNode {
                            name,
                            attributes,
                            children,
                        });
                    }
                    if self.starts_with("<?") || self.starts_with("<!") {
                        return self.error("processing instructions are only allowed as prolog");
                    }
                    self.bump();
                    children.push(MarkupChild::Element(self.element()?));
                }
                Some('&') => {
                    self.bump();
                    text.push(self.entity()?);
                }
                Some(c) => {
                    text.push(c);
                    self.bump();
                }
                None => return self.error(format!("unterminated element '{name}'")),
            }
        }
    }
}

/// Reads a document into its root element.
pub fn read_markup(text: &str) -> Result<MarkupNode, MarkupError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = Reader::new(text);
    reader.skip_whitespace();
    if reader.starts_with("<?xml") {
        reader.skip_literal("<?xml")?;
        reader.skip_until("?>")?;
    }
    loop {
        reader.skip_whitespace();
        if reader.starts_with("<!--") {
            reader.skip_literal("<!--")?;
            reader.skip_until("-->")?;
            continue;
        }
        break;
    }
    match reader.peek() {
        Some('<') => {
            reader.bump();
        }
        _ => return reader.error("expected an element"),
    }
    if matches!(reader.peek(), Some('?' | '!')) {
        return reader.error("expected an element");
    }
    let root = reader.element()?;
    loop {
        reader.skip_whitespace();
        if reader.starts_with("<!--") {
            reader.skip_literal("<!--")?;
            reader.skip_until("-->")?;
            continue;
        }
        break;
    }
    if reader.peek().is_some() {
        return reader.error("content after the root element");
    }
    Ok(root)
}

/// Escapes character data.
pub fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escapes a double-quoted attribute value.
pub fn escape_attribute(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

impl fmt::Display for MarkupNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.name)?;
        for (name, value) in &self.attributes {
            write!(f, " {}=\"{}\"", name, escape_attribute(value))?;
        }
        if self.children.is_empty() {
            return write!(f, "/>");
        }
        write!(f, ">")?;
        for child in &self.children {
            match child {
                MarkupChild::Element(node) => write!(f, "{node}")?,
                MarkupChild::Text(text) => write!(f, "{}", escape_text(text))?,
            }
        }
        write!(f, "</{}>", self.name)
    }
}
