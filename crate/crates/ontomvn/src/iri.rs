//! IRI values used for entities, imports and annotations.

use std::fmt;

use thiserror::Error;

/// An absolute IRI.
///
/// Construction rejects relative references: the text must start with a
/// `scheme:` prefix whose scheme is `ALPHA (ALPHA | DIGIT | "+" | "-" | ".")*`.
/// Comparison and ordering are by exact codepoints; no normalization of
/// case, percent escapes or dot segments is attempted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IriError {
    #[error("empty IRI")]
    Empty,
    #[error("relative IRI reference: {0:?}")]
    Relative(String),
    #[error("IRI contains whitespace or angle bracket: {0:?}")]
    ForbiddenCharacter(String),
}

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, IriError> {
        let value = value.into();
        if value.is_empty() {
            return Err(IriError::Empty);
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"')
        {
            return Err(IriError::ForbiddenCharacter(value));
        }
        if !is_absolute_reference(&value) {
            return Err(IriError::Relative(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The fragment after `#` when present, otherwise the last non-empty
    /// `/` segment, otherwise the text after the last `:` with leading
    /// slashes dropped. Used for display only.
    pub fn local_name(&self) -> &str {
        if let Some(pos) = self.0.rfind('#') {
            return &self.0[pos + 1..];
        }
        if let Some(pos) = self.0.rfind('/') {
            if pos + 1 < self.0.len() {
                return &self.0[pos + 1..];
            }
        }
        match self.0.rfind(':') {
            Some(pos) => self.0[pos + 1..].trim_start_matches('/'),
            None => &self.0,
        }
    }
}

/// True when `text` starts with a valid scheme followed by a colon and a
/// non-empty remainder. Covers both hierarchical (`http://...`) and opaque
/// (`urn:...`) forms.
fn is_absolute_reference(text: &str) -> bool {
    let Some(colon) = text.find(':') else {
        return false;
    };
    if colon == 0 || colon + 1 == text.len() {
        return false;
    }
    let scheme = &text[..colon];
    let mut chars = scheme.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    first.is_ascii_alphabetic()
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_common_forms() {
        for text in [
            "http://example.org/a",
            "https://example.org/a#Frag",
            "urn:ontomvn:aux:0",
            "file:///tmp/x.owl",
            "a+b-c.d:rest",
        ] {
            assert!(Iri::new(text).is_ok(), "{text}");
        }
    }

    #[test]
    fn rejects_relative_and_malformed() {
        assert_eq!(Iri::new(""), Err(IriError::Empty));
        for text in ["foo", "#frag", ":x", "1http://x/", "scheme:", "a/b:c"] {
            assert!(
                matches!(Iri::new(text), Err(IriError::Relative(_))),
                "{text}"
            );
        }
        // "a/b:c" has '/' before ':', so the scheme is invalid.
        assert!(Iri::new("http://x y").is_err());
        assert!(Iri::new("http://x<y").is_err());
    }

    #[test]
    fn local_name_extraction() {
        let cases = [
            ("http://example.org/onto#Camera", "Camera"),
            ("http://example.org/onto/Camera", "Camera"),
            ("http://example.org/onto/", "example.org/onto/"),
            ("urn:ontomvn:aux:7", "7"),
        ];
        for (iri, local) in cases {
            assert_eq!(Iri::new(iri).unwrap().local_name(), local, "{iri}");
        }
    }

    #[test]
    fn ordering_is_codepoint_order() {
        let a = Iri::new("http://example.org/A").unwrap();
        let b = Iri::new("http://example.org/a").unwrap();
        assert!(a < b);
    }
}
