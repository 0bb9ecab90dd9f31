//! The twelve goals. Each takes the loaded project context, reads its
//! parameters (command-line `-D` wins over pom.xml configuration, which
//! wins over the built-in default), does its work, and writes only under
//! target/, the local repository, and catalog.xml.

use std::fs;
use std::path::{Path, PathBuf};

use ontomvn::aspects::{self, AspectSelector, WeaveConfig};
use ontomvn::descriptor::{parse_descriptor, Coordinate, ParamValue, ProjectDescriptor};
use ontomvn::diff::{render_diff, semantic_diff};
use ontomvn::iri::Iri;
use ontomvn::model::Ontology;
use ontomvn::ofs::{parse_ontology, serialize_ontology, Parsed};
use ontomvn::reasoner::{detected_profile, ReasonerConfig};
use ontomvn::repo::{self, HttpClient, LocalRepository, Origin};
use ontomvn::report::{emit_graph, summary_report, technical_report};
use ontomvn::resolver::{build_dependency_graph, import_goal, mediate};
use ontomvn::testkit::{render_report, run_suite, ComplianceMode};

use crate::{local_repo_root, GoalError, GoalInvocation};

/// The loaded project: descriptor, raw pom text (deployed verbatim), the
/// local repository, and the run-wide knobs.
pub struct ProjectContext {
    pub project_dir: PathBuf,
    pub descriptor: ProjectDescriptor,
    pub descriptor_warnings: Vec<String>,
    pub pom_text: String,
    pub store: LocalRepository,
    pub offline: bool,
    pub overrides: Vec<(String, String)>,
}

impl ProjectContext {
    pub fn load(invocation: &GoalInvocation) -> Result<ProjectContext, GoalError> {
        let pom_path = invocation.project_dir.join("pom.xml");
        if !pom_path.is_file() {
            return Err(GoalError::usage(format!(
                "no pom.xml in {}",
                invocation.project_dir.display()
            )));
        }
        let pom_text = fs::read_to_string(&pom_path).map_err(|e| {
            GoalError::usage(format!("cannot read {}: {e}", pom_path.display()))
        })?;
        let parsed = parse_descriptor(&pom_text)
            .map_err(|e| GoalError::usage(format!("{}: {e}", pom_path.display())))?;
        Ok(ProjectContext {
            project_dir: invocation.project_dir.clone(),
            descriptor: parsed.descriptor,
            descriptor_warnings: parsed.warnings,
            pom_text,
            store: LocalRepository::new(local_repo_root(invocation)),
            offline: invocation.offline,
            overrides: invocation.overrides.clone(),
        })
    }

    fn params<'a>(&'a self, goal: &'a str) -> Params<'a> {
        Params { goal, context: self }
    }

    /// The project's main ontology document: the `owlfile` parameter, or
    /// src/main/{artifactId}.{packagingType}.
    fn owlfile(&self, params: &Params) -> Result<PathBuf, GoalError> {
        let coordinate = &self.descriptor.coordinate;
        let default = format!(
            "src/main/{}.{}",
            coordinate.artifact_id, coordinate.packaging_type
        );
        let value = params.single("owlfile")?.unwrap_or(default);
        Ok(resolve_path(&self.project_dir, &value))
    }

    fn target_dir(&self) -> Result<PathBuf, GoalError> {
        let dir = self.project_dir.join("target");
        fs::create_dir_all(&dir)
            .map_err(|e| GoalError::internal(format!("cannot create {}: {e}", dir.display())))?;
        Ok(dir)
    }

    fn reports_dir(&self) -> Result<PathBuf, GoalError> {
        let dir = self.target_dir()?.join("reports");
        fs::create_dir_all(&dir)
            .map_err(|e| GoalError::internal(format!("cannot create {}: {e}", dir.display())))?;
        Ok(dir)
    }

    /// target/{artifactId}-{version}[-{suffix}].{packagingType}. Pure path
    /// arithmetic; writers create target/ via `target_dir` first.
    fn target_artifact(&self, suffix: Option<&str>) -> PathBuf {
        let c = &self.descriptor.coordinate;
        let name = match suffix {
            Some(suffix) => format!("{}-{}-{}.{}", c.artifact_id, c.version, suffix, c.packaging_type),
            None => format!("{}-{}.{}", c.artifact_id, c.version, c.packaging_type),
        };
        self.project_dir.join("target").join(name)
    }
}

/// Parameter lookup for one goal. The last `-D` occurrence of a name wins;
/// pom.xml configuration is consulted next, the caller's default last.
pub struct Params<'a> {
    goal: &'a str,
    context: &'a ProjectContext,
}

impl Params<'_> {
    fn from_cli(&self, name: &str) -> Option<&str> {
        self.context
            .overrides
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn from_pom(&self, name: &str) -> Option<&ParamValue> {
        self.context.descriptor.plugin_params.get(self.goal)?.get(name)
    }

    pub fn single(&self, name: &str) -> Result<Option<String>, GoalError> {
        if let Some(value) = self.from_cli(name) {
            return Ok(Some(value.to_string()));
        }
        match self.from_pom(name) {
            None => Ok(None),
            Some(value) => value.as_single().map(|s| Some(s.to_string())).ok_or_else(|| {
                GoalError::usage(format!(
                    "parameter {name} expects a single value, pom.xml configures a list"
                ))
            }),
        }
    }

    /// List parameter: a `-D` value is split on commas, pom.xml lists are
    /// taken as declared.
    pub fn list(&self, name: &str) -> Vec<String> {
        if let Some(value) = self.from_cli(name) {
            return value
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
        }
        self.from_pom(name)
            .map(|v| v.values().iter().map(|s| s.to_string()).collect())
            .unwrap_or_default()
    }

    pub fn flag(&self, name: &str, default: bool) -> Result<bool, GoalError> {
        match self.single(name)? {
            None => Ok(default),
            Some(value) => match value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(GoalError::usage(format!(
                    "parameter {name} must be true or false, got `{other}`"
                ))),
            },
        }
    }

    pub fn count(&self, name: &str, default: usize) -> Result<usize, GoalError> {
        match self.single(name)? {
            None => Ok(default),
            Some(value) => value.parse().map_err(|_| {
                GoalError::usage(format!(
                    "parameter {name} must be a non-negative integer, got `{value}`"
                ))
            }),
        }
    }
}

fn resolve_path(project_dir: &Path, value: &str) -> PathBuf {
    let path = Path::new(value);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        project_dir.join(path)
    }
}

fn read_ontology(path: &Path) -> Result<Parsed, GoalError> {
    let text = fs::read_to_string(path)
        .map_err(|e| GoalError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_ontology(&text)
        .map_err(|failure| GoalError::parse(format!("{}: {}", path.display(), failure.first_error())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), GoalError> {
    fs::write(path, bytes)
        .map_err(|e| GoalError::internal(format!("cannot write {}: {e}", path.display())))
}

fn compliance_mode(params: &Params) -> Result<ComplianceMode, GoalError> {
    match params.single("compliancemode")? {
        None => Ok(ComplianceMode::Strict),
        Some(value) => value.parse().map_err(GoalError::usage),
    }
}

fn reasoner_config(params: &Params) -> Result<ReasonerConfig, GoalError> {
    let limit = params.count("reasonerAtomLimit", ReasonerConfig::default().atom_limit)?;
    Ok(ReasonerConfig { atom_limit: limit })
}

/// Dispatches one goal. `in_phase` relaxes goals that are pointless without
/// configuration (semantic-diff without operands, test without a manifest):
/// inside a phase they skip, invoked directly they complain.
pub fn run_goal(name: &str, context: &ProjectContext, in_phase: bool) -> Result<(), GoalError> {
    println!("--- {name} ---");
    match name {
        "validate" => validate(context),
        "resolve" => resolve(context),
        "owlimport" => owlimport(context),
        "ontologyreport" => ontology_report(context),
        "technicalreport" => technical_report_goal(context),
        "visualizer" => visualizer(context),
        "semantic-diff" => semantic_diff_goal(context, in_phase),
        "test-syntax" => test_syntax(context),
        "test" => test_goal(context, in_phase),
        "apply-aspects" => apply_aspects_goal(context),
        "install" => install_goal(context),
        "deploy" => deploy_goal(context),
        other => Err(GoalError::usage(format!("unknown goal `{other}`"))),
    }
}

fn validate(context: &ProjectContext) -> Result<(), GoalError> {
    for warning in &context.descriptor_warnings {
        println!("warning: {warning}");
    }
    println!("pom.xml ok: {}", context.descriptor.coordinate);
    let params = context.params("validate");
    let path = context.owlfile(&params)?;
    let parsed = read_ontology(&path)?;
    for diagnostic in &parsed.warnings {
        println!("warning: {diagnostic}");
    }
    println!(
        "ontology ok: {} ({} axioms)",
        path.display(),
        parsed.ontology.axiom_set().len()
    );
    Ok(())
}

fn origin_label(origin: &Origin) -> String {
    match origin {
        Origin::Local => "local".to_string(),
        Origin::RemoteId(id) => format!("remote {id}"),
    }
}

fn resolve(context: &ProjectContext) -> Result<(), GoalError> {
    let client = HttpClient::from_env();
    let repositories = &context.descriptor.repositories;
    let graph = build_dependency_graph(
        &context.descriptor,
        &context.store,
        repositories,
        context.offline,
        &client,
    )?;
    let report = mediate(&graph);
    let root = &context.descriptor.coordinate;
    let mut fetched = 0usize;
    for coordinate in &report.selected {
        if coordinate == root {
            continue;
        }
        let (_, record) = repo::fetch(
            coordinate,
            repositories,
            &context.store,
            context.offline,
            &client,
        )?;
        println!("resolved {} ({})", coordinate, origin_label(&record.origin));
        fetched += 1;
    }
    for displacement in &report.displaced {
        println!(
            "displaced {} -> {} ({})",
            displacement.loser, displacement.winner, displacement.reason
        );
    }
    println!("dependencies resolved: {fetched}");
    Ok(())
}

fn owlimport(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("owlimport");
    let path = context.owlfile(&params)?;
    let local = params.flag("local", true)?;
    let catalog_path = context.project_dir.join("catalog.xml");
    let client = HttpClient::from_env();
    let report = import_goal(
        &path,
        local,
        &catalog_path,
        &context.descriptor.repositories,
        &context.store,
        context.offline,
        &client,
    )?;
    for entry in &report.catalog_delta {
        println!("cataloged {} -> {}", entry.name, entry.locator);
    }
    println!(
        "import closure: {} ontologies, {} fetched",
        report.selected.len(),
        report.fetched.len()
    );
    if !local {
        println!("dry run: catalog.xml not updated");
    }
    Ok(())
}

fn ontology_report(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("ontologyreport");
    let parsed = read_ontology(&context.owlfile(&params)?)?;
    let path = context.reports_dir()?.join("summary.md");
    write_file(&path, summary_report(&parsed.ontology).as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn technical_report_goal(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("technicalreport");
    let max_groups = params.count("maxGroups", 10)?;
    let parsed = read_ontology(&context.owlfile(&params)?)?;
    let path = context.reports_dir()?.join("technical.md");
    write_file(&path, technical_report(&parsed.ontology, max_groups).as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn visualizer(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("visualizer");
    let parsed = read_ontology(&context.owlfile(&params)?)?;
    let path = context.reports_dir()?.join("hierarchy.dot");
    write_file(&path, emit_graph(&parsed.ontology).as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

/// A diff operand: a file path, or a coordinate to pull from the
/// repositories.
fn load_operand(
    context: &ProjectContext,
    value: &str,
    client: &HttpClient,
) -> Result<Ontology, GoalError> {
    let as_path = resolve_path(&context.project_dir, value);
    if as_path.is_file() {
        return Ok(read_ontology(&as_path)?.ontology);
    }
    if let Ok(coordinate) = Coordinate::parse(value) {
        let (bytes, _) = repo::fetch(
            &coordinate,
            &context.descriptor.repositories,
            &context.store,
            context.offline,
            client,
        )?;
        let text = String::from_utf8(bytes)
            .map_err(|_| GoalError::parse(format!("{coordinate}: artifact is not UTF-8 text")))?;
        return parse_ontology(&text)
            .map(|p| p.ontology)
            .map_err(|f| GoalError::parse(format!("{coordinate}: {}", f.first_error())));
    }
    Err(GoalError::usage(format!(
        "`{value}` is neither an existing file nor an artifact coordinate"
    )))
}

fn semantic_diff_goal(context: &ProjectContext, in_phase: bool) -> Result<(), GoalError> {
    let params = context.params("semantic-diff");
    let before = params.single("before")?;
    let after = params.single("after")?;
    let (Some(before), Some(after)) = (before, after) else {
        if in_phase {
            println!("skipped: before/after not configured");
            return Ok(());
        }
        return Err(GoalError::usage(
            "semantic-diff needs -Dbefore=... and -Dafter=... (file path or coordinate)",
        ));
    };
    let client = HttpClient::from_env();
    let before_ontology = load_operand(context, &before, &client)?;
    let after_ontology = load_operand(context, &after, &client)?;
    let config = reasoner_config(&params)?;
    let report = semantic_diff(&before_ontology, &after_ontology, &config)
        .map_err(|e| GoalError::internal(e.to_string()))?;
    let text = render_diff(&report);
    let path = context.target_dir()?.join("semantic-diff.txt");
    write_file(&path, text.as_bytes())?;
    print!("{text}");
    println!("wrote {}", path.display());
    Ok(())
}

fn test_syntax(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("test-syntax");
    let mode = compliance_mode(&params)?;
    let path = context.owlfile(&params)?;
    let text = fs::read_to_string(&path)
        .map_err(|e| GoalError::usage(format!("cannot read {}: {e}", path.display())))?;
    match parse_ontology(&text) {
        Ok(parsed) => {
            for diagnostic in &parsed.warnings {
                println!("{diagnostic}");
            }
            println!("Profile: {}", detected_profile(&parsed.ontology));
            if mode == ComplianceMode::Strict && !parsed.warnings.is_empty() {
                return Err(GoalError::test_failures(format!(
                    "{}: {} compliance warnings in strict mode",
                    path.display(),
                    parsed.warnings.len()
                )));
            }
            println!("syntax ok: {}", path.display());
            Ok(())
        }
        Err(failure) => {
            for diagnostic in &failure.diagnostics {
                println!("{diagnostic}");
            }
            Err(GoalError::test_failures(format!(
                "{}: syntax errors",
                path.display()
            )))
        }
    }
}

fn test_goal(context: &ProjectContext, in_phase: bool) -> Result<(), GoalError> {
    let params = context.params("test");
    let configured = params.single("manifest")?;
    let explicit = configured.is_some();
    let manifest = resolve_path(
        &context.project_dir,
        configured.as_deref().unwrap_or("src/test/ontology-tests.xml"),
    );
    if !manifest.is_file() {
        if explicit {
            return Err(GoalError::usage(format!(
                "manifest not found: {}",
                manifest.display()
            )));
        }
        // No declared tests is not a failure, whether in a phase or direct.
        let _ = in_phase;
        println!("skipped: no {} present", manifest.display());
        return Ok(());
    }
    let mode = compliance_mode(&params)?;
    let config = reasoner_config(&params)?;
    let report =
        run_suite(&manifest, mode, &config).map_err(|e| GoalError::usage(e.to_string()))?;
    let text = render_report(&report);
    let path = context.target_dir()?.join("test-report.txt");
    write_file(&path, text.as_bytes())?;
    print!("{text}");
    if report.is_failing() {
        return Err(GoalError::test_failures(format!(
            "{} ontology tests failed",
            report.failed()
        )));
    }
    Ok(())
}

fn apply_aspects_goal(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("apply-aspects");
    let path = context.owlfile(&params)?;
    let bytes = fs::read(&path)
        .map_err(|e| GoalError::usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| GoalError::parse(format!("{}: not valid UTF-8 text", path.display())))?;
    let parsed = parse_ontology(&text)
        .map_err(|f| GoalError::parse(format!("{}: {}", path.display(), f.first_error())))?;

    let mut config = WeaveConfig::new();
    for pattern in params.list("userAspects") {
        let selector = AspectSelector::parse(pattern.clone())
            .map_err(|e| GoalError::usage(format!("bad aspect selector `{pattern}`: {e}")))?;
        config.user_aspects.push(selector);
    }
    if let Some(iri) = params.single("aspectsIRI")? {
        config.aspects_property =
            Iri::new(iri).map_err(|e| GoalError::usage(format!("bad aspectsIRI: {e}")))?;
    }
    config.include_original_axioms = params.flag("includeOriginalAxioms", true)?;

    let woven = aspects::apply_aspects(&parsed.ontology, &config);
    for selector in &woven.unmatched_selectors {
        println!("warning: selector matched nothing: {selector}");
    }
    context.target_dir()?;
    let base = context.target_artifact(None);
    write_file(&base, &bytes)?;
    let woven_path = context.target_artifact(Some("aspects"));
    write_file(&woven_path, serialize_ontology(&woven.ontology).as_bytes())?;
    println!("wrote {}", base.display());
    println!("wrote {}", woven_path.display());
    Ok(())
}

/// The bytes `install` and `deploy` publish: the packaged artifact when
/// `apply-aspects` ran, the main ontology document otherwise.
fn artifact_bytes(context: &ProjectContext, params: &Params) -> Result<Vec<u8>, GoalError> {
    let packaged = context.target_artifact(None);
    let path = if packaged.is_file() { packaged } else { context.owlfile(params)? };
    fs::read(&path)
        .map_err(|e| GoalError::usage(format!("cannot read artifact {}: {e}", path.display())))
}

fn install_goal(context: &ProjectContext) -> Result<(), GoalError> {
    let params = context.params("install");
    let bytes = artifact_bytes(context, &params)?;
    let record = context.store.install(&bytes, &context.descriptor)?;
    println!("installed {} (sha256 {})", record.coordinate, record.content_hash);
    Ok(())
}

fn deploy_goal(context: &ProjectContext) -> Result<(), GoalError> {
    if context.offline {
        return Err(GoalError::usage("cannot deploy in offline mode"));
    }
    let params = context.params("deploy");
    let repositories = &context.descriptor.repositories;
    let remote = match params.single("deployRepositoryId")? {
        Some(id) => repositories.iter().find(|r| r.id == id).ok_or_else(|| {
            GoalError::usage(format!("no repository with id `{id}` in pom.xml"))
        })?,
        None => repositories.first().ok_or_else(|| {
            GoalError::usage(
                "deploy needs a repository: declare one in pom.xml or pass -DdeployRepositoryId=...",
            )
        })?,
    };
    let bytes = artifact_bytes(context, &params)?;
    let client = HttpClient::from_env();
    let receipt = repo::deploy(
        &context.descriptor.coordinate,
        &bytes,
        context.pom_text.as_bytes(),
        remote,
        &client,
    )?;
    println!(
        "deployed {} ({} files) to {}",
        context.descriptor.coordinate,
        receipt.uploaded.len(),
        remote.url
    );
    Ok(())
}
