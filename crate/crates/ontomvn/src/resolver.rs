//! Dependency and import resolution: the dependency tree with nearest-wins
//! version mediation, and the transitive import closure backed by the
//! redirection catalog and the local repository.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::catalog::{parse_catalog, write_catalog, Catalog, CatalogEntry, CatalogError};
use crate::descriptor::{Coordinate, ProjectDescriptor, RepositorySpec};
use crate::iri::Iri;
use crate::model::Ontology;
use crate::ofs::parse_ontology;
use crate::repo::{
    self, fetch_descriptor, ArtifactRecord, HttpClient, LocalRepository, RepoError,
};

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("dependency {path} could not be resolved: {source}")]
    Dependency {
        /// The chain of coordinates from the project root to the dependency
        /// that failed.
        path: String,
        #[source]
        source: RepoError,
    },
    #[error("import <{iri}> could not be resolved; attempted: {}", .attempted.join("; "))]
    ImportUnresolvable { iri: String, attempted: Vec<String> },
    #[error("offline, and import <{iri}> is not cached")]
    OfflineMiss { iri: String },
    #[error(
        "imports <{first}> and <{second}> both map to repository coordinate {coordinate}; \
         refusing to overwrite one with the other"
    )]
    CoordinateCollision {
        coordinate: String,
        first: String,
        second: String,
    },
    #[error("document {locator} is not a readable ontology: {message}")]
    BadDocument { locator: String, message: String },
    #[error(transparent)]
    Repo(#[from] RepoError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One node of the dependency tree. Depth 0 is the project root;
/// `declaration_index` is the node's ordinal among its siblings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyNode {
    pub coordinate: Coordinate,
    pub depth: usize,
    pub declaration_index: usize,
    pub children: Vec<DependencyNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Displacement {
    pub loser: Coordinate,
    pub winner: Coordinate,
    pub reason: String,
}

/// What a resolution run decided and did. `selected` holds at most one
/// version per (groupId, artifactId, classifier).
#[derive(Debug, Clone, Default)]
pub struct ResolutionReport {
    pub selected: BTreeSet<Coordinate>,
    pub displaced: Vec<Displacement>,
    pub fetched: Vec<ArtifactRecord>,
    pub catalog_delta: Vec<CatalogEntry>,
}

/// Expands the dependency tree breadth-first, fetching each dependency's
/// descriptor. A (groupId, artifactId) already on the path from the root to
/// the current node is pruned, which cuts cycles.
pub fn build_dependency_graph(
    descriptor: &ProjectDescriptor,
    store: &LocalRepository,
    repositories: &[RepositorySpec],
    offline: bool,
    client: &HttpClient,
) -> Result<DependencyNode, ResolveError> {
    struct Arena {
        coordinate: Coordinate,
        depth: usize,
        declaration_index: usize,
        children: Vec<usize>,
    }
    let mut arena = vec![Arena {
        coordinate: descriptor.coordinate.clone(),
        depth: 0,
        declaration_index: 0,
        children: Vec::new(),
    }];
    // Queue entries carry the (groupId, artifactId) pairs and the labels of
    // the path from the root, self included.
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((
        0usize,
        vec![(
            descriptor.coordinate.group_id.clone(),
            descriptor.coordinate.artifact_id.clone(),
        )],
        descriptor.coordinate.to_string(),
        Some(descriptor.clone()),
    ));
    while let Some((index, path_keys, path_label, known)) = queue.pop_front() {
        let current = match known {
            Some(descriptor) => descriptor,
            None => {
                let coordinate = arena[index].coordinate.clone();
                fetch_descriptor(&coordinate, repositories, store, offline, client).map_err(
                    |source| ResolveError::Dependency {
                        path: path_label.clone(),
                        source,
                    },
                )?
            }
        };
        for (declaration_index, dependency) in current.dependencies.iter().enumerate() {
            let coordinate = &dependency.coordinate;
            let key = (coordinate.group_id.clone(), coordinate.artifact_id.clone());
            if path_keys.contains(&key) {
                continue; // cycle cut
            }
            let child = arena.len();
            arena.push(Arena {
                coordinate: coordinate.clone(),
                depth: arena[index].depth + 1,
                declaration_index,
                children: Vec::new(),
            });
            arena[index].children.push(child);
            let mut child_keys = path_keys.clone();
            child_keys.push(key);
            queue.push_back((
                child,
                child_keys,
                format!("{path_label} > {coordinate}"),
                None,
            ));
        }
    }
    fn materialize(arena: &[Arena], index: usize) -> DependencyNode {
        DependencyNode {
            coordinate: arena[index].coordinate.clone(),
            depth: arena[index].depth,
            declaration_index: arena[index].declaration_index,
            children: arena[index]
                .children
                .iter()
                .map(|&child| materialize(arena, child))
                .collect(),
        }
    }
    Ok(materialize(&arena, 0))
}

/// Nearest-wins version mediation: per (groupId, artifactId, classifier) the
/// node with the smallest depth is selected, ties broken by the smallest
/// declaration-index path. Losing versions land in `displaced`; a losing
/// node carrying the winning version is not a conflict.
pub fn mediate(root: &DependencyNode) -> ResolutionReport {
    struct Entry<'a> {
        coordinate: &'a Coordinate,
        depth: usize,
        path: Vec<usize>,
    }
    fn walk<'a>(
        node: &'a DependencyNode,
        path: &[usize],
        out: &mut BTreeMap<(String, String, Option<String>), Vec<Entry<'a>>>,
    ) {
        out.entry(node.coordinate.key()).or_default().push(Entry {
            coordinate: &node.coordinate,
            depth: node.depth,
            path: path.to_vec(),
        });
        for child in &node.children {
            let mut child_path = path.to_vec();
            child_path.push(child.declaration_index);
            walk(child, &child_path, out);
        }
    }
    let mut groups = BTreeMap::new();
    walk(root, &[], &mut groups);

    let mut report = ResolutionReport::default();
    for entries in groups.values() {
        let winner = entries
            .iter()
            .min_by(|a, b| a.depth.cmp(&b.depth).then_with(|| a.path.cmp(&b.path)))
            .expect("group is non-empty");
        report.selected.insert(winner.coordinate.clone());
        let mut recorded = BTreeSet::new();
        for entry in entries {
            if entry.coordinate.version == winner.coordinate.version {
                continue;
            }
            if !recorded.insert(entry.coordinate.clone()) {
                continue;
            }
            let reason = if entry.depth == winner.depth {
                format!("earlier declaration wins at depth {}", winner.depth)
            } else {
                format!("depth {} beats depth {}", winner.depth, entry.depth)
            };
            report.displaced.push(Displacement {
                loser: entry.coordinate.clone(),
                winner: winner.coordinate.clone(),
                reason,
            });
        }
    }
    report
}

/// Repository coordinate for a raw import IRI: groupId = the host with its
/// labels reversed, artifactId = the last path segment (the host when the
/// path is empty), version `0.0.0-IMPORTED`, packaging `owl`. Ports,
/// queries and fragments are dropped. None when the IRI is not http(s) or
/// yields no valid coordinate.
pub fn synthesized_coordinate(iri: &Iri) -> Option<Coordinate> {
    let text = iri.as_str();
    let rest = text
        .strip_prefix("http://")
        .or_else(|| text.strip_prefix("https://"))?;
    let (host, path) = rest.split_once('/').unwrap_or((rest, ""));
    let host = host.split(':').next().unwrap_or(host);
    if host.is_empty() {
        return None;
    }
    let group: Vec<&str> = host.split('.').rev().collect();
    let path = path.split(['#', '?']).next().unwrap_or("");
    let last = path.rsplit('/').next().unwrap_or("");
    let artifact = if last.is_empty() { host } else { last };
    Coordinate::new(group.join("."), artifact, "0.0.0-IMPORTED", "owl", None).ok()
}

/// What [`resolve_imports`] produced: the closure in first-visit order (root
/// excluded), the updated catalog, and the run's side effects.
#[derive(Debug, Clone)]
pub struct ImportResolution {
    pub closure: Vec<Ontology>,
    pub catalog: Catalog,
    pub catalog_delta: Vec<CatalogEntry>,
    pub fetched: Vec<ArtifactRecord>,
    pub selected: BTreeSet<Coordinate>,
}

struct ImportWalk<'a> {
    store: &'a LocalRepository,
    repositories: &'a [RepositorySpec],
    offline: bool,
    client: &'a HttpClient,
    catalog: Catalog,
    catalog_delta: Vec<CatalogEntry>,
    fetched: Vec<ArtifactRecord>,
    selected: BTreeSet<Coordinate>,
    visited: BTreeSet<String>,
    /// In-run owner of each synthesized coordinate, to refuse collisions.
    claimed: BTreeMap<Coordinate, String>,
    closure: Vec<Ontology>,
}

impl ImportWalk<'_> {
    fn visit(&mut self, imports: &[Iri]) -> Result<(), ResolveError> {
        for import in imports {
            if !self.visited.insert(import.as_str().to_string()) {
                continue;
            }
            let resolved = self.resolve_one(import)?;
            let child_imports = resolved.imports().to_vec();
            self.closure.push(resolved);
            self.visit(&child_imports)?;
        }
        Ok(())
    }

    fn resolve_one(&mut self, iri: &Iri) -> Result<Ontology, ResolveError> {
        let mut attempted = Vec::new();

        // Catalog redirection always wins over any external reference.
        if let Some(locator) = self.catalog.lookup(iri) {
            let locator = locator.to_string();
            let path = self.store.root().join(&locator);
            let text = fs::read_to_string(&path).map_err(|source| ResolveError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let ontology = parse_document(&text, &locator)?;
            if let Some(coordinate) = synthesized_coordinate(iri) {
                self.fetched.push(local_record(&coordinate, text.as_bytes()));
                self.selected.insert(coordinate);
            }
            return Ok(ontology);
        }

        // A previous run may have stored the document under its synthesized
        // coordinate. Only trust it when the document identifies itself as
        // the requested IRI (or carries no ontology IRI at all).
        let coordinate = synthesized_coordinate(iri);
        if let Some(coordinate) = &coordinate {
            attempted.push(format!("local repository ({coordinate})"));
            if self.store.contains(coordinate) {
                let (bytes, record) = self.store.load(coordinate)?;
                let text = String::from_utf8(bytes).map_err(|_| ResolveError::BadDocument {
                    locator: coordinate.to_string(),
                    message: "not valid UTF-8".to_string(),
                })?;
                let ontology = parse_document(&text, &coordinate.to_string())?;
                if identifies_as(&ontology, iri) {
                    self.claim(coordinate, iri)?;
                    self.add_catalog_entry(iri, coordinate)?;
                    self.fetched.push(record);
                    self.selected.insert(coordinate.clone());
                    return Ok(ontology);
                }
            }
        }

        if self.offline {
            return Err(ResolveError::OfflineMiss {
                iri: iri.as_str().to_string(),
            });
        }

        // Direct dereference of the IRI itself.
        if iri.as_str().starts_with("http://") || iri.as_str().starts_with("https://") {
            attempted.push(format!("GET {}", iri.as_str()));
            if let Ok(Some(bytes)) = self.client.get_accept(iri.as_str(), "text/plain") {
                let text = String::from_utf8(bytes).map_err(|_| ResolveError::BadDocument {
                    locator: iri.as_str().to_string(),
                    message: "not valid UTF-8".to_string(),
                })?;
                let ontology = parse_document(&text, iri.as_str())?;
                if let Some(coordinate) = &coordinate {
                    self.claim(coordinate, iri)?;
                    let record = self.store.store_fetched(
                        coordinate,
                        text.as_bytes(),
                        iri.as_str(),
                        None,
                    )?;
                    self.fetched.push(record);
                    self.add_catalog_entry(iri, coordinate)?;
                    self.selected.insert(coordinate.clone());
                }
                return Ok(ontology);
            }
        } else {
            attempted.push(format!("{} (direct fetch skipped: not http)", iri.as_str()));
        }

        // Pre-configured repositories are the alternative source.
        if let Some(coordinate) = &coordinate {
            if !self.repositories.is_empty() {
                match repo::fetch(coordinate, self.repositories, self.store, false, self.client) {
                    Ok((bytes, record)) => {
                        let text =
                            String::from_utf8(bytes).map_err(|_| ResolveError::BadDocument {
                                locator: coordinate.to_string(),
                                message: "not valid UTF-8".to_string(),
                            })?;
                        let ontology = parse_document(&text, &coordinate.to_string())?;
                        self.claim(coordinate, iri)?;
                        self.fetched.push(record);
                        self.add_catalog_entry(iri, coordinate)?;
                        self.selected.insert(coordinate.clone());
                        return Ok(ontology);
                    }
                    Err(RepoError::NotFound { tried, .. }) => attempted.extend(tried),
                    Err(error @ RepoError::ChecksumMismatch { .. }) => return Err(error.into()),
                    Err(error) => attempted.push(error.to_string()),
                }
            }
        }

        Err(ResolveError::ImportUnresolvable {
            iri: iri.as_str().to_string(),
            attempted,
        })
    }

    fn claim(&mut self, coordinate: &Coordinate, iri: &Iri) -> Result<(), ResolveError> {
        match self.claimed.get(coordinate) {
            Some(owner) if owner != iri.as_str() => Err(ResolveError::CoordinateCollision {
                coordinate: coordinate.to_string(),
                first: owner.clone(),
                second: iri.as_str().to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.claimed
                    .insert(coordinate.clone(), iri.as_str().to_string());
                Ok(())
            }
        }
    }

    fn add_catalog_entry(
        &mut self,
        iri: &Iri,
        coordinate: &Coordinate,
    ) -> Result<(), ResolveError> {
        if self.catalog.lookup(iri).is_some() {
            return Ok(());
        }
        let entry = CatalogEntry {
            name: iri.clone(),
            locator: repo::coordinate_to_path(coordinate),
        };
        self.catalog.append(entry.clone())?;
        self.catalog_delta.push(entry);
        Ok(())
    }
}

fn parse_document(text: &str, locator: &str) -> Result<Ontology, ResolveError> {
    parse_ontology(text)
        .map(|parsed| parsed.ontology)
        .map_err(|failure| ResolveError::BadDocument {
            locator: locator.to_string(),
            message: failure.first_error().to_string(),
        })
}

/// The document may legitimately call itself by the IRI it was imported
/// under, by a version IRI, or not at all.
fn identifies_as(ontology: &Ontology, iri: &Iri) -> bool {
    match ontology.ontology_iri() {
        None => true,
        Some(own) => own == iri || ontology.version_iri() == Some(iri),
    }
}

fn local_record(coordinate: &Coordinate, bytes: &[u8]) -> ArtifactRecord {
    ArtifactRecord {
        coordinate: coordinate.clone(),
        content_hash: repo::sha256_hex(bytes),
        size_bytes: bytes.len() as u64,
        stored_at: chrono::Utc::now(),
        origin: repo::Origin::Local,
    }
}

/// Resolves the transitive imports of an ontology. The closure comes back in
/// first-visit order with the root excluded; already-visited IRIs are
/// skipped, which makes import cycles legal.
pub fn resolve_imports(
    ontology: &Ontology,
    catalog: &Catalog,
    store: &LocalRepository,
    repositories: &[RepositorySpec],
    offline: bool,
    client: &HttpClient,
) -> Result<ImportResolution, ResolveError> {
    let mut walk = ImportWalk {
        store,
        repositories,
        offline,
        client,
        catalog: catalog.clone(),
        catalog_delta: Vec::new(),
        fetched: Vec::new(),
        selected: BTreeSet::new(),
        visited: BTreeSet::new(),
        claimed: BTreeMap::new(),
        closure: Vec::new(),
    };
    // The root never appears in its own closure, even through a cycle.
    if let Some(own) = ontology.ontology_iri() {
        walk.visited.insert(own.as_str().to_string());
    }
    if let Some(version) = ontology.version_iri() {
        walk.visited.insert(version.as_str().to_string());
    }
    walk.visit(ontology.imports())?;
    Ok(ImportResolution {
        closure: walk.closure,
        catalog: walk.catalog,
        catalog_delta: walk.catalog_delta,
        fetched: walk.fetched,
        selected: walk.selected,
    })
}

/// Resolves an ontology file's imports and, when `local` is true, persists
/// the updated catalog next to the project so later runs resolve without the
/// network. The ontology document itself is never rewritten.
pub fn import_goal(
    owlfile: &Path,
    local: bool,
    catalog_path: &Path,
    repositories: &[RepositorySpec],
    store: &LocalRepository,
    offline: bool,
    client: &HttpClient,
) -> Result<ResolutionReport, ResolveError> {
    let text = fs::read_to_string(owlfile).map_err(|source| ResolveError::Io {
        path: owlfile.display().to_string(),
        source,
    })?;
    let ontology = parse_document(&text, &owlfile.display().to_string())?;
    let catalog = if catalog_path.is_file() {
        let catalog_text =
            fs::read_to_string(catalog_path).map_err(|source| ResolveError::Io {
                path: catalog_path.display().to_string(),
                source,
            })?;
        parse_catalog(&catalog_text)?.catalog
    } else {
        Catalog::new()
    };
    let resolution = resolve_imports(&ontology, &catalog, store, repositories, offline, client)?;
    if local {
        fs::write(catalog_path, write_catalog(&resolution.catalog)).map_err(|source| {
            ResolveError::Io {
                path: catalog_path.display().to_string(),
                source,
            }
        })?;
    }
    Ok(ResolutionReport {
        selected: resolution.selected,
        displaced: Vec::new(),
        fetched: resolution.fetched,
        catalog_delta: resolution.catalog_delta,
    })
}
