//! Artifact repositories: the standard on-disk folder layout with SHA-256
//! sidecars and version metadata, plus install, fetch and deploy against
//! remote repositories over HTTP.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::{env, process, thread};

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use chrono::{DateTime, Utc};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::descriptor::{
    parse_descriptor, write_descriptor, Coordinate, ProjectDescriptor, RepositorySpec,
};
use crate::markup::read_markup;
use crate::ofs::parse_ontology;

#[derive(Debug, Error)]
pub enum RepoError {
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("artifact {coordinate} is not a readable ontology: {message}")]
    InvalidArtifact { coordinate: String, message: String },
    #[error("refusing to overwrite release artifact {path} with different content")]
    Integrity { path: PathBuf },
    #[error("checksum mismatch for {subject}: sidecar says {expected}, content is {actual}")]
    ChecksumMismatch {
        subject: String,
        expected: String,
        actual: String,
    },
    #[error("{coordinate} not found; tried: {}", list_tried(.tried))]
    NotFound {
        coordinate: String,
        tried: Vec<String>,
    },
    #[error("offline, and {coordinate} is not in the local repository")]
    OfflineMiss { coordinate: String },
    #[error("authentication failed ({status}) for {url}")]
    Auth { status: u16, url: String },
    #[error("remote refused {url} with status {status}")]
    RemoteRefused { status: u16, url: String },
    #[error("snapshot version {version} not accepted by repository {repository}")]
    SnapshotPolicy { version: String, repository: String },
    #[error("transport failure for {url}: {message}")]
    Transport { url: String, message: String },
    #[error("bad metadata document: {0}")]
    Metadata(String),
    #[error("bad project descriptor for {coordinate}: {message}")]
    Descriptor { coordinate: String, message: String },
    #[error("could not lock {path}: another operation holds it")]
    Lock { path: PathBuf },
}

fn list_tried(tried: &[String]) -> String {
    if tried.is_empty() {
        "(no sources attempted)".to_string()
    } else {
        tried.join(", ")
    }
}

fn io_err(path: &Path, source: std::io::Error) -> RepoError {
    RepoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Hex SHA-256 of the bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

/// Sidecar file content: the hex digest and a trailing newline.
fn sidecar_text(bytes: &[u8]) -> String {
    let mut text = sha256_hex(bytes);
    text.push('\n');
    text
}

/// Current time as the 14-digit `YYYYMMDDHHMMSS` UTC stamp used in metadata.
/// Stamps compare chronologically via plain string order.
pub fn utc_stamp() -> String {
    Utc::now().format("%Y%m%d%H%M%S").to_string()
}

/// Relative path of an artifact inside a repository tree:
/// `{groupId with '.'→'/'}/{artifactId}/{version}/{artifactId}-{version}[-{classifier}].{type}`.
pub fn coordinate_to_path(coordinate: &Coordinate) -> String {
    let mut name = format!("{}-{}", coordinate.artifact_id, coordinate.version);
    if let Some(classifier) = &coordinate.classifier {
        name.push('-');
        name.push_str(classifier);
    }
    format!(
        "{}/{}/{}/{}.{}",
        coordinate.group_id.replace('.', "/"),
        coordinate.artifact_id,
        coordinate.version,
        name,
        coordinate.packaging_type
    )
}

/// The sibling project descriptor: the artifact path with extension `.pom`.
pub fn descriptor_to_path(coordinate: &Coordinate) -> String {
    let artifact = coordinate_to_path(coordinate);
    match artifact.rfind('.') {
        Some(dot) => format!("{}.pom", &artifact[..dot]),
        None => format!("{artifact}.pom"),
    }
}

/// Where the version metadata for a (groupId, artifactId) pair lives.
pub fn metadata_to_path(group_id: &str, artifact_id: &str) -> String {
    format!(
        "{}/{}/maven-metadata.xml",
        group_id.replace('.', "/"),
        artifact_id
    )
}

fn join_url(base: &str, relative: &str) -> String {
    format!("{}/{}", base.trim_end_matches('/'), relative)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Local,
    RemoteId(String),
}

/// Receipt for a stored artifact. The hash is re-verifiable against the
/// bytes on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtifactRecord {
    pub coordinate: Coordinate,
    pub content_hash: String,
    pub size_bytes: u64,
    pub stored_at: DateTime<Utc>,
    pub origin: Origin,
}

/// Version listing for one (groupId, artifactId), kept at
/// `{group path}/{artifactId}/maven-metadata.xml`.
///
/// Invariants: `latest` is one of `versions`; `versions` is duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionMetadata {
    pub group_id: String,
    pub artifact_id: String,
    pub versions: Vec<String>,
    pub latest: String,
    /// `YYYYMMDDHHMMSS`, UTC.
    pub last_updated: String,
}

impl VersionMetadata {
    pub fn new(group_id: impl Into<String>, artifact_id: impl Into<String>) -> VersionMetadata {
        VersionMetadata {
            group_id: group_id.into(),
            artifact_id: artifact_id.into(),
            versions: Vec::new(),
            latest: String::new(),
            last_updated: String::new(),
        }
    }

    /// Registers a version and marks it latest. A version already listed
    /// keeps its original position.
    pub fn record_version(&mut self, version: &str, stamp: &str) {
        if !self.versions.iter().any(|v| v == version) {
            self.versions.push(version.to_string());
        }
        self.latest = version.to_string();
        self.last_updated = stamp.to_string();
    }

    pub fn parse(text: &str) -> Result<VersionMetadata, RepoError> {
        let root = read_markup(text).map_err(|e| RepoError::Metadata(e.to_string()))?;
        if root.name != "metadata" {
            return Err(RepoError::Metadata(format!(
                "expected <metadata> root, found <{}>",
                root.name
            )));
        }
        let group_id = root
            .child_text("groupId")
            .ok_or_else(|| RepoError::Metadata("missing <groupId>".to_string()))?;
        let artifact_id = root
            .child_text("artifactId")
            .ok_or_else(|| RepoError::Metadata("missing <artifactId>".to_string()))?;
        let mut versions = Vec::new();
        let mut latest = String::new();
        let mut last_updated = String::new();
        if let Some(versioning) = root.child("versioning") {
            latest = versioning.child_text("latest").unwrap_or_default();
            last_updated = versioning.child_text("lastUpdated").unwrap_or_default();
            if let Some(list) = versioning.child("versions") {
                for node in list.children_named("version") {
                    let version = node.text();
                    if !versions.contains(&version) {
                        versions.push(version);
                    }
                }
            }
        }
        Ok(VersionMetadata {
            group_id,
            artifact_id,
            versions,
            latest,
            last_updated,
        })
    }

    pub fn to_text(&self) -> String {
        use crate::markup::escape_text as esc;
        let mut out = String::new();
        out.push_str("<metadata>\n");
        out.push_str(&format!("  <groupId>{}</groupId>\n", esc(&self.group_id)));
        out.push_str(&format!(
            "  <artifactId>{}</artifactId>\n",
            esc(&self.artifact_id)
        ));
        out.push_str("  <versioning>\n");
        out.push_str(&format!("    <latest>{}</latest>\n", esc(&self.latest)));
        out.push_str("    <versions>\n");
        for version in &self.versions {
            out.push_str(&format!("      <version>{}</version>\n", esc(version)));
        }
        out.push_str("    </versions>\n");
        out.push_str(&format!(
            "    <lastUpdated>{}</lastUpdated>\n",
            esc(&self.last_updated)
        ));
        out.push_str("  </versioning>\n");
        out.push_str("</metadata>\n");
        out
    }
}

/// A write parked beside its destination; nothing is visible at the target
/// path until `commit` renames it into place. Dropping uncommitted removes
/// the temp file; a crash leaves only the temp file behind, never a partial
/// target.
pub(crate) struct StagedWrite {
    temp: PathBuf,
    target: PathBuf,
    committed: bool,
}

impl StagedWrite {
    pub(crate) fn stage(target: &Path, bytes: &[u8]) -> Result<StagedWrite, RepoError> {
        static NONCE: AtomicU64 = AtomicU64::new(0);
        let parent = target.parent().unwrap_or_else(|| Path::new("."));
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        let name = target
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "artifact".to_string());
        let temp = parent.join(format!(
            ".{name}.{}.{}.part",
            process::id(),
            NONCE.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&temp, bytes).map_err(|e| io_err(&temp, e))?;
        Ok(StagedWrite {
            temp,
            target: target.to_path_buf(),
            committed: false,
        })
    }

    pub(crate) fn commit(mut self) -> Result<(), RepoError> {
        fs::rename(&self.temp, &self.target).map_err(|e| io_err(&self.target, e))?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for StagedWrite {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_file(&self.temp);
        }
    }
}

fn atomic_write(target: &Path, bytes: &[u8]) -> Result<(), RepoError> {
    StagedWrite::stage(target, bytes)?.commit()
}

/// Advisory per-path lock: `{path}.lock`, created exclusively, removed on
/// drop. Serializes install/fetch for one coordinate across processes.
pub(crate) struct PathLock {
    lock_file: PathBuf,
}

impl PathLock {
    pub(crate) fn acquire(path: &Path) -> Result<PathLock, RepoError> {
        let lock_file = PathBuf::from(format!("{}.lock", path.display()));
        let parent = lock_file.parent().unwrap_or_else(|| Path::new("."));
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        for _ in 0..40 {
            match fs::OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(&lock_file)
            {
                Ok(_) => return Ok(PathLock { lock_file }),
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    thread::sleep(std::time::Duration::from_millis(25));
                }
                Err(e) => return Err(io_err(&lock_file, e)),
            }
        }
        Err(RepoError::Lock { path: lock_file })
    }
}

impl Drop for PathLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock_file);
    }
}

/// On-disk repository rooted at a directory, laid out by
/// [`coordinate_to_path`].
#[derive(Debug, Clone)]
pub struct LocalRepository {
    root: PathBuf,
}

impl LocalRepository {
    pub fn new(root: impl Into<PathBuf>) -> LocalRepository {
        LocalRepository { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn artifact_file(&self, coordinate: &Coordinate) -> PathBuf {
        self.root.join(coordinate_to_path(coordinate))
    }

    pub fn descriptor_file(&self, coordinate: &Coordinate) -> PathBuf {
        self.root.join(descriptor_to_path(coordinate))
    }

    fn metadata_file(&self, group_id: &str, artifact_id: &str) -> PathBuf {
        self.root.join(metadata_to_path(group_id, artifact_id))
    }

    pub fn contains(&self, coordinate: &Coordinate) -> bool {
        self.artifact_file(coordinate).is_file()
    }

    /// Installs artifact bytes together with their descriptor: artifact,
    /// `.pom`, both checksum sidecars, and a metadata refresh. Release
    /// versions are immutable; re-installing different bytes fails.
    pub fn install(
        &self,
        artifact_bytes: &[u8],
        descriptor: &ProjectDescriptor,
    ) -> Result<ArtifactRecord, RepoError> {
        let coordinate = &descriptor.coordinate;
        if coordinate.packaging_type == "owl" {
            let text = std::str::from_utf8(artifact_bytes).map_err(|_| {
                RepoError::InvalidArtifact {
                    coordinate: coordinate.to_string(),
                    message: "not valid UTF-8".to_string(),
                }
            })?;
            parse_ontology(text).map_err(|failure| RepoError::InvalidArtifact {
                coordinate: coordinate.to_string(),
                message: failure.first_error().to_string(),
            })?;
        }
        let path = self.artifact_file(coordinate);
        let _lock = PathLock::acquire(&path)?;
        self.check_immutable(coordinate, &path, artifact_bytes)?;
        atomic_write(&path, artifact_bytes)?;
        atomic_write(
            &sidecar_file(&path),
            sidecar_text(artifact_bytes).as_bytes(),
        )?;
        let pom = self.descriptor_file(coordinate);
        let pom_text = write_descriptor(descriptor);
        atomic_write(&pom, pom_text.as_bytes())?;
        atomic_write(&sidecar_file(&pom), sidecar_text(pom_text.as_bytes()).as_bytes())?;
        self.bump_metadata(coordinate, &utc_stamp())?;
        Ok(self.record(coordinate, artifact_bytes, Origin::Local))
    }

    /// Non-SNAPSHOT artifacts never change under the same coordinate.
    fn check_immutable(
        &self,
        coordinate: &Coordinate,
        path: &Path,
        incoming: &[u8],
    ) -> Result<(), RepoError> {
        if coordinate.is_snapshot() || !path.is_file() {
            return Ok(());
        }
        let existing = fs::read(path).map_err(|e| io_err(path, e))?;
        if sha256_hex(&existing) != sha256_hex(incoming) {
            return Err(RepoError::Integrity {
                path: path.to_path_buf(),
            });
        }
        Ok(())
    }

    /// Stores bytes that came from a remote repository; no descriptor is
    /// written. The metadata stamp prefers the remote's own lastUpdated so
    /// later freshness checks compare like with like.
    pub(crate) fn store_fetched(
        &self,
        coordinate: &Coordinate,
        bytes: &[u8],
        repository_id: &str,
        remote_stamp: Option<&str>,
    ) -> Result<ArtifactRecord, RepoError> {
        let path = self.artifact_file(coordinate);
        let _lock = PathLock::acquire(&path)?;
        atomic_write(&path, bytes)?;
        atomic_write(&sidecar_file(&path), sidecar_text(bytes).as_bytes())?;
        let stamp = match remote_stamp {
            Some(stamp) if !stamp.is_empty() => stamp.to_string(),
            _ => utc_stamp(),
        };
        self.bump_metadata(coordinate, &stamp)?;
        Ok(self.record(coordinate, bytes, Origin::RemoteId(repository_id.to_string())))
    }

    /// Reads an artifact back, re-verifying the checksum sidecar when
    /// present.
    pub fn load(&self, coordinate: &Coordinate) -> Result<(Vec<u8>, ArtifactRecord), RepoError> {
        let path = self.artifact_file(coordinate);
        let bytes = fs::read(&path).map_err(|e| io_err(&path, e))?;
        let sidecar = sidecar_file(&path);
        if sidecar.is_file() {
            let expected = fs::read_to_string(&sidecar)
                .map_err(|e| io_err(&sidecar, e))?
                .trim()
                .to_string();
            let actual = sha256_hex(&bytes);
            if expected != actual {
                return Err(RepoError::ChecksumMismatch {
                    subject: path.display().to_string(),
                    expected,
                    actual,
                });
            }
        }
        let stored_at = fs::metadata(&path)
            .and_then(|m| m.modified())
            .map(DateTime::<Utc>::from)
            .unwrap_or_else(|_| Utc::now());
        let mut record = self.record(coordinate, &bytes, Origin::Local);
        record.stored_at = stored_at;
        Ok((bytes, record))
    }

    pub fn metadata(
        &self,
        group_id: &str,
        artifact_id: &str,
    ) -> Result<Option<VersionMetadata>, RepoError> {
        let path = self.metadata_file(group_id, artifact_id);
        if !path.is_file() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        VersionMetadata::parse(&text).map(Some)
    }

    fn bump_metadata(&self, coordinate: &Coordinate, stamp: &str) -> Result<(), RepoError> {
        let mut metadata = self
            .metadata(&coordinate.group_id, &coordinate.artifact_id)?
            .unwrap_or_else(|| {
                VersionMetadata::new(&coordinate.group_id, &coordinate.artifact_id)
            });
        metadata.record_version(&coordinate.version, stamp);
        let path = self.metadata_file(&coordinate.group_id, &coordinate.artifact_id);
        atomic_write(&path, metadata.to_text().as_bytes())
    }

    fn record(&self, coordinate: &Coordinate, bytes: &[u8], origin: Origin) -> ArtifactRecord {
        ArtifactRecord {
            coordinate: coordinate.clone(),
            content_hash: sha256_hex(bytes),
            size_bytes: bytes.len() as u64,
            stored_at: Utc::now(),
            origin,
        }
    }
}

fn sidecar_file(path: &Path) -> PathBuf {
    PathBuf::from(format!("{}.sha256", path.display()))
}

#[derive(Debug, Clone)]
pub struct Credentials {
    pub user: String,
    pub password: String,
}

/// HTTP client for repository traffic. Remote failures other than 404 are
/// surfaced as errors; the fetch loop downgrades them to misses so that
/// repository order stays authoritative.
pub struct HttpClient {
    agent: ureq::Agent,
    authorization: Option<String>,
}

impl HttpClient {
    pub fn new(credentials: Option<Credentials>) -> HttpClient {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .build();
        let authorization = credentials
            .map(|c| format!("Basic {}", BASE64.encode(format!("{}:{}", c.user, c.password))));
        HttpClient {
            agent: config.into(),
            authorization,
        }
    }

    /// Credentials from `ONTOMVN_REPO_USER` / `ONTOMVN_REPO_PASS` when both
    /// are set.
    pub fn from_env() -> HttpClient {
        let credentials = match (env::var("ONTOMVN_REPO_USER"), env::var("ONTOMVN_REPO_PASS")) {
            (Ok(user), Ok(password)) => Some(Credentials { user, password }),
            _ => None,
        };
        HttpClient::new(credentials)
    }

    /// GET returning `Ok(None)` for 404.
    pub fn get(&self, url: &str) -> Result<Option<Vec<u8>>, RepoError> {
        self.get_inner(url, None)
    }

    /// GET with an Accept header, returning `Ok(None)` for 404.
    pub fn get_accept(&self, url: &str, accept: &str) -> Result<Option<Vec<u8>>, RepoError> {
        self.get_inner(url, Some(accept))
    }

    fn get_inner(&self, url: &str, accept: Option<&str>) -> Result<Option<Vec<u8>>, RepoError> {
        let mut request = self.agent.get(url);
        if let Some(auth) = &self.authorization {
            request = request.header("Authorization", auth);
        }
        if let Some(accept) = accept {
            request = request.header("Accept", accept);
        }
        let mut response = request.call().map_err(|e| RepoError::Transport {
            url: url.to_string(),
            message: e.to_string(),
        })?;
        match response.status().as_u16() {
            200..=299 => {
                let bytes = response
                    .body_mut()
                    .read_to_vec()
                    .map_err(|e| RepoError::Transport {
                        url: url.to_string(),
                        message: e.to_string(),
                    })?;
                Ok(Some(bytes))
            }
            404 => Ok(None),
            status @ (401 | 403) => Err(RepoError::Auth {
                status,
                url: url.to_string(),
            }),
            status => Err(RepoError::RemoteRefused {
                status,
                url: url.to_string(),
            }),
        }
    }

    pub fn put(&self, url: &str, bytes: &[u8]) -> Result<(), RepoError> {
        let mut request = self.agent.put(url);
        if let Some(auth) = &self.authorization {
            request = request.header("Authorization", auth);
        }
        let response = request.send(bytes).map_err(|e| RepoError::Transport {
            url: url.to_string(),
            message: e.to_string(),
        })?;
        match response.status().as_u16() {
            200..=299 => Ok(()),
            status @ (401 | 403) => Err(RepoError::Auth {
                status,
                url: url.to_string(),
            }),
            status => Err(RepoError::RemoteRefused {
                status,
                url: url.to_string(),
            }),
        }
    }
}

/// Fetches an artifact. A cached release (or anything while offline) is
/// served locally; a cached SNAPSHOT re-checks remotes and prefers one whose
/// metadata is newer; an uncached artifact tries the repositories in order.
pub fn fetch(
    coordinate: &Coordinate,
    repositories: &[RepositorySpec],
    local: &LocalRepository,
    offline: bool,
    client: &HttpClient,
) -> Result<(Vec<u8>, ArtifactRecord), RepoError> {
    let cached = local.contains(coordinate);
    if cached && (offline || !coordinate.is_snapshot()) {
        return local.load(coordinate);
    }
    if offline {
        return Err(RepoError::OfflineMiss {
            coordinate: coordinate.to_string(),
        });
    }
    if cached {
        // SNAPSHOT revalidation: only a remote with strictly newer metadata
        // displaces the local copy.
        let local_stamp = local
            .metadata(&coordinate.group_id, &coordinate.artifact_id)?
            .map(|m| m.last_updated)
            .unwrap_or_default();
        for repository in repositories {
            if !repository.snapshots_enabled {
                continue;
            }
            let Some(remote) = remote_metadata(client, repository, coordinate) else {
                continue;
            };
            if remote.last_updated > local_stamp {
                if let Some(found) =
                    try_repository(client, repository, coordinate, local, Some(&remote))?
                {
                    return Ok(found);
                }
            }
        }
        return local.load(coordinate);
    }
    let mut tried = Vec::new();
    for repository in repositories {
        if coordinate.is_snapshot() && !repository.snapshots_enabled {
            continue;
        }
        tried.push(join_url(&repository.url, &coordinate_to_path(coordinate)));
        if let Some(found) = try_repository(client, repository, coordinate, local, None)? {
            return Ok(found);
        }
    }
    Err(RepoError::NotFound {
        coordinate: coordinate.to_string(),
        tried,
    })
}

/// One repository attempt. GET failures other than a checksum mismatch count
/// as a miss so the next repository gets its turn.
fn try_repository(
    client: &HttpClient,
    repository: &RepositorySpec,
    coordinate: &Coordinate,
    local: &LocalRepository,
    known_metadata: Option<&VersionMetadata>,
) -> Result<Option<(Vec<u8>, ArtifactRecord)>, RepoError> {
    let url = join_url(&repository.url, &coordinate_to_path(coordinate));
    let bytes = match client.get(&url) {
        Ok(Some(bytes)) => bytes,
        Ok(None) => return Ok(None),
        Err(_) => return Ok(None),
    };
    if let Ok(Some(sidecar)) = client.get(&format!("{url}.sha256")) {
        let expected = String::from_utf8_lossy(&sidecar).trim().to_string();
        let actual = sha256_hex(&bytes);
        if !expected.is_empty() && expected != actual {
            return Err(RepoError::ChecksumMismatch {
                subject: url,
                expected,
                actual,
            });
        }
    }
    let remote_stamp = match known_metadata {
        Some(metadata) => Some(metadata.last_updated.clone()),
        None => remote_metadata(client, repository, coordinate).map(|m| m.last_updated),
    };
    let record = local.store_fetched(coordinate, &bytes, &repository.id, remote_stamp.as_deref())?;
    Ok(Some((bytes, record)))
}

fn remote_metadata(
    client: &HttpClient,
    repository: &RepositorySpec,
    coordinate: &Coordinate,
) -> Option<VersionMetadata> {
    let url = join_url(
        &repository.url,
        &metadata_to_path(&coordinate.group_id, &coordinate.artifact_id),
    );
    let bytes = client.get(&url).ok().flatten()?;
    let text = String::from_utf8(bytes).ok()?;
    VersionMetadata::parse(&text).ok()
}

/// Resolves the `.pom` for a coordinate: a local copy wins, then the
/// repositories in order; a remote hit is cached locally.
pub fn fetch_descriptor(
    coordinate: &Coordinate,
    repositories: &[RepositorySpec],
    local: &LocalRepository,
    offline: bool,
    client: &HttpClient,
) -> Result<ProjectDescriptor, RepoError> {
    let path = local.descriptor_file(coordinate);
    if path.is_file() {
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        let parsed = parse_descriptor(&text).map_err(|e| RepoError::Descriptor {
            coordinate: coordinate.to_string(),
            message: e.to_string(),
        })?;
        return Ok(parsed.descriptor);
    }
    if offline {
        return Err(RepoError::OfflineMiss {
            coordinate: coordinate.to_string(),
        });
    }
    let mut tried = Vec::new();
    for repository in repositories {
        if coordinate.is_snapshot() && !repository.snapshots_enabled {
            continue;
        }
        let url = join_url(&repository.url, &descriptor_to_path(coordinate));
        tried.push(url.clone());
        let Ok(Some(bytes)) = client.get(&url) else {
            continue;
        };
        let text = String::from_utf8(bytes).map_err(|_| RepoError::Descriptor {
            coordinate: coordinate.to_string(),
            message: "descriptor is not valid UTF-8".to_string(),
        })?;
        let parsed = parse_descriptor(&text).map_err(|e| RepoError::Descriptor {
            coordinate: coordinate.to_string(),
            message: e.to_string(),
        })?;
        atomic_write(&path, text.as_bytes())?;
        return Ok(parsed.descriptor);
    }
    Err(RepoError::NotFound {
        coordinate: format!("{coordinate} (descriptor)"),
        tried,
    })
}

/// URLs written by a deploy, in upload order.
#[derive(Debug, Clone)]
pub struct DeployReceipt {
    pub uploaded: Vec<String>,
}

/// Uploads artifact, descriptor and checksum sidecars, then refreshes the
/// remote version metadata with a GET-merge-PUT.
pub fn deploy(
    coordinate: &Coordinate,
    artifact_bytes: &[u8],
    descriptor_bytes: &[u8],
    remote: &RepositorySpec,
    client: &HttpClient,
) -> Result<DeployReceipt, RepoError> {
    if coordinate.is_snapshot() && !remote.snapshots_enabled {
        return Err(RepoError::SnapshotPolicy {
            version: coordinate.version.clone(),
            repository: remote.id.clone(),
        });
    }
    let artifact_url = join_url(&remote.url, &coordinate_to_path(coordinate));
    let pom_url = join_url(&remote.url, &descriptor_to_path(coordinate));
    let mut uploaded = Vec::new();
    for (url, bytes) in [
        (artifact_url.clone(), artifact_bytes.to_vec()),
        (
            format!("{artifact_url}.sha256"),
            sidecar_text(artifact_bytes).into_bytes(),
        ),
        (pom_url.clone(), descriptor_bytes.to_vec()),
        (
            format!("{pom_url}.sha256"),
            sidecar_text(descriptor_bytes).into_bytes(),
        ),
    ] {
        client.put(&url, &bytes)?;
        uploaded.push(url);
    }
    let metadata_url = join_url(
        &remote.url,
        &metadata_to_path(&coordinate.group_id, &coordinate.artifact_id),
    );
    let mut metadata = match client.get(&metadata_url)? {
        Some(bytes) => {
            let text = String::from_utf8(bytes)
                .map_err(|_| RepoError::Metadata("metadata is not valid UTF-8".to_string()))?;
            VersionMetadata::parse(&text)?
        }
        None => VersionMetadata::new(&coordinate.group_id, &coordinate.artifact_id),
    };
    metadata.record_version(&coordinate.version, &utc_stamp());
    client.put(&metadata_url, metadata.to_text().as_bytes())?;
    uploaded.push(metadata_url);
    Ok(DeployReceipt { uploaded })
}
