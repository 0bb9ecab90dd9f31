//! Import catalogs: ordered `name -> locator` redirections kept at the
//! local repository root, in the OASIS XML Catalogs `uri` entry shape.

use thiserror::Error;

use crate::iri::{Iri, IriError};
use crate::markup::{self, MarkupError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    /// The ontology IRI being redirected.
    pub name: Iri,
    /// Where to load it from, relative to the local repository root.
    pub locator: String,
}

/// Ordered redirection list; the first matching entry wins and names are
/// unique, so appends never change the meaning of earlier lookups.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Markup(#[from] MarkupError),
    #[error("expected root element 'catalog', found '{0}'")]
    WrongRoot(String),
    #[error("catalog entry name is not an absolute IRI: {0}")]
    BadName(#[from] IriError),
    #[error("catalog entry is missing the '{0}' attribute")]
    MissingAttribute(&'static str),
    #[error("duplicate catalog entry for {0}")]
    DuplicateName(Iri),
}

#[derive(Debug, Clone)]
pub struct ParsedCatalog {
    pub catalog: Catalog,
    /// One note per ignored non-`uri` entry.
    pub warnings: Vec<String>,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    pub fn lookup(&self, name: &Iri) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| &e.name == name)
            .map(|e| e.locator.as_str())
    }

    pub fn append(&mut self, entry: CatalogEntry) -> Result<(), CatalogError> {
        if self.lookup(&entry.name).is_some() {
            return Err(CatalogError::DuplicateName(entry.name));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads a catalog document. `uri` entries become redirections in document
/// order; other entry kinds are skipped with a warning.
pub fn parse_catalog(text: &str) -> Result<ParsedCatalog, CatalogError> {
    let root = markup::read_markup(text)?;
    if root.name != "catalog" {
        return Err(CatalogError::WrongRoot(root.name));
    }
    let mut catalog = Catalog::new();
    let mut warnings = Vec::new();
    for element in root.elements() {
        if element.name != "uri" {
            warnings.push(format!("ignored catalog entry kind '{}'", element.name));
            continue;
        }
        let name = element
            .attribute("name")
            .ok_or(CatalogError::MissingAttribute("name"))?;
        let locator = element
            .attribute("uri")
            .ok_or(CatalogError::MissingAttribute("uri"))?;
        catalog.append(CatalogEntry {
            name: Iri::new(name)?,
            locator: locator.to_string(),
        })?;
    }
    Ok(ParsedCatalog { catalog, warnings })
}

/// Writes a catalog such that `parse_catalog` reproduces it exactly.
pub fn write_catalog(catalog: &Catalog) -> String {
    let mut out = String::from("<!-- ontomvn import catalog; do not edit by hand -->\n");
    if catalog.is_empty() {
        out.push_str("<catalog></catalog>\n");
        return out;
    }
    out.push_str("<catalog>\n");
    for entry in catalog.entries() {
        out.push_str("  <uri name=\"");
        out.push_str(&markup::escape_attribute(entry.name.as_str()));
        out.push_str("\" uri=\"");
        out.push_str(&markup::escape_attribute(&entry.locator));
        out.push_str("\"/>\n");
    }
    out.push_str("</catalog>\n");
    out
}
