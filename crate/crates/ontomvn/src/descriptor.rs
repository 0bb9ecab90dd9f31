//! Project descriptors (`pom.xml`): coordinates, dependencies,
//! repositories and per-goal plugin parameters.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::iri::Iri;
use crate::markup::{self, MarkupError, MarkupNode};

/// Artifact coordinates. `group_id` is dot-separated; every component is
/// validated against path separators and traversal so coordinates always
/// map to safe repository paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate {
    pub group_id: String,
    pub artifact_id: String,
    pub version: String,
    pub packaging_type: String,
    pub classifier: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordinateError {
    #[error("empty coordinate component: {0}")]
    Empty(&'static str),
    #[error("coordinate component {component} contains forbidden text: {value:?}")]
    Forbidden {
        component: &'static str,
        value: String,
    },
}

fn check_component(component: &'static str, value: &str) -> Result<(), CoordinateError> {
    if value.is_empty() {
        return Err(CoordinateError::Empty(component));
    }
    let forbidden = value
        .chars()
        .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '/' | '\\' | ':'));
    if forbidden || value == "." || value == ".." {
        return Err(CoordinateError::Forbidden {
            component,
            value: value.to_string(),
        });
    }
    Ok(())
}

impl Coordinate {
    pub fn new(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
        version: impl Into<String>,
        packaging_type: impl Into<String>,
        classifier: Option<String>,
    ) -> Result<Coordinate, CoordinateError> {
        let group_id = group_id.into();
        let artifact_id = artifact_id.into();
        let version = version.into();
        let packaging_type = packaging_type.into();
        if group_id.is_empty() {
            return Err(CoordinateError::Empty("groupId"));
        }
        for segment in group_id.split('.') {
            if segment.is_empty() {
                return Err(CoordinateError::Forbidden {
                    component: "groupId",
                    value: group_id.clone(),
                });
            }
            check_component("groupId", segment)?;
        }
        check_component("artifactId", &artifact_id)?;
        check_component("version", &version)?;
        check_component("packagingType", &packaging_type)?;
        if let Some(classifier) = &classifier {
            check_component("classifier", classifier)?;
        }
        Ok(Coordinate {
            group_id,
            artifact_id,
            version,
            packaging_type,
            classifier,
        })
    }

    /// Packaging `owl`, no classifier.
    pub fn simple(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
        version: impl Into<String>,
    ) -> Result<Coordinate, CoordinateError> {
        Coordinate::new(group_id, artifact_id, version, "owl", None)
    }

    /// SNAPSHOT versions are mutable and revalidated against remotes;
    /// releases are immutable.
    pub fn is_snapshot(&self) -> bool {
        self.version.ends_with("-SNAPSHOT")
    }

    /// Mediation key: versions compete per (groupId, artifactId, classifier).
    pub fn key(&self) -> (String, String, Option<String>) {
        (
            self.group_id.clone(),
            self.artifact_id.clone(),
            self.classifier.clone(),
        )
    }

    /// Parses `group:artifact:version[:type[:classifier]]`.
    pub fn parse(text: &str) -> Result<Coordinate, CoordinateError> {
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [g, a, v] => Coordinate::simple(*g, *a, *v),
            [g, a, v, t] => Coordinate::new(*g, *a, *v, *t, None),
            [g, a, v, t, c] => Coordinate::new(*g, *a, *v, *t, Some(c.to_string())),
            _ => Err(CoordinateError::Forbidden {
                component: "coordinate",
                value: text.to_string(),
            }),
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.group_id, self.artifact_id, self.version
        )?;
        if self.packaging_type != "owl" || self.classifier.is_some() {
            write!(f, ":{}", self.packaging_type)?;
        }
        if let Some(classifier) = &self.classifier {
            write!(f, ":{classifier}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dependency {
    pub coordinate: Coordinate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepositorySpec {
    pub id: String,
    pub name: Option<String>,
    pub url: String,
    pub snapshots_enabled: bool,
}

/// A plugin parameter value: scalar text or an ordered list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Single(String),
    Multi(Vec<String>),
}

impl ParamValue {
    pub fn as_single(&self) -> Option<&str> {
        match self {
            ParamValue::Single(v) => Some(v),
            ParamValue::Multi(_) => None,
        }
    }

    pub fn values(&self) -> Vec<&str> {
        match self {
            ParamValue::Single(v) => vec![v.as_str()],
            ParamValue::Multi(vs) => vs.iter().map(|v| v.as_str()).collect(),
        }
    }
}

pub type GoalParams = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectDescriptor {
    pub coordinate: Coordinate,
    pub dependencies: Vec<Dependency>,
    /// Directly declared repositories first, then repositories of profiles
    /// with `activeByDefault` true, in document order. Ids are unique.
    pub repositories: Vec<RepositorySpec>,
    /// Goal name to configured parameters.
    pub plugin_params: BTreeMap<String, GoalParams>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error(transparent)]
    Markup(#[from] MarkupError),
    #[error("expected root element 'project', found '{0}'")]
    WrongRoot(String),
    #[error("missing '{field}' in {context}")]
    MissingField { field: String, context: String },
    #[error(transparent)]
    Coordinate(#[from] CoordinateError),
    #[error("duplicate dependency on {0}")]
    DuplicateDependency(String),
    #[error("malformed repository: {0}")]
    MalformedRepository(String),
    #[error("malformed parameter: {0}")]
    MalformedParameter(String),
}

#[derive(Debug, Clone)]
pub struct ParsedDescriptor {
    pub descriptor: ProjectDescriptor,
    pub warnings: Vec<String>,
}

fn required(node: &MarkupNode, field: &str, context: &str) -> Result<String, DescriptorError> {
    node.child_text(field).ok_or_else(|| DescriptorError::MissingField {
        field: field.to_string(),
        context: context.to_string(),
    })
}

fn coordinate_of(node: &MarkupNode, context: &str) -> Result<Coordinate, DescriptorError> {
    let group_id = required(node, "groupId", context)?;
    let artifact_id = required(node, "artifactId", context)?;
    let version = required(node, "version", context)?;
    let packaging = node
        .child_text("packaging")
        .or_else(|| node.child_text("type"))
        .unwrap_or_else(|| "owl".to_string());
    let classifier = node.child_text("classifier");
    Ok(Coordinate::new(
        group_id,
        artifact_id,
        version,
        packaging,
        classifier,
    )?)
}

fn parse_bool(text: &str, context: &str) -> Result<bool, DescriptorError> {
    match text {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(DescriptorError::MalformedParameter(format!(
            "{context}: expected 'true' or 'false', found {other:?}"
        ))),
    }
}

fn parse_repository(node: &MarkupNode) -> Result<RepositorySpec, DescriptorError> {
    let id = node
        .child_text("id")
        .ok_or_else(|| DescriptorError::MalformedRepository("missing 'id'".to_string()))?;
    let url = node
        .child_text("url")
        .ok_or_else(|| DescriptorError::MalformedRepository(format!("repository '{id}' has no 'url'")))?;
    if Iri::new(url.as_str()).is_err() {
        return Err(DescriptorError::MalformedRepository(format!(
            "repository '{id}' url is not absolute: {url:?}"
        )));
    }
    let snapshots_enabled = match node.child("snapshots").and_then(|s| s.child_text("enabled")) {
        Some(text) => parse_bool(&text, &format!("repository '{id}' snapshots/enabled"))?,
        None => false,
    };
    Ok(RepositorySpec {
        id,
        name: node.child_text("name"),
        url,
        snapshots_enabled,
    })
}

/// Reads one `configuration` element into goal parameters. A child with
/// element children is a list value; repeated direct children of the same
/// name aggregate into a list.
fn parse_configuration(
    node: &MarkupNode,
    params: &mut GoalParams,
    warnings: &mut Vec<String>,
) {
    for child in node.elements() {
        let mut name = child.name.clone();
        if name == "ifIncludeOriginalAxioms" {
            warnings.push(
                "parameter 'ifIncludeOriginalAxioms' is accepted as an alias of \
                 'includeOriginalAxioms'"
                    .to_string(),
            );
            name = "includeOriginalAxioms".to_string();
        }
        let incoming: Vec<String> = if child.elements().next().is_some() {
            child.elements().map(|e| e.text()).collect()
        } else {
            vec![child.text()]
        };
        let is_list = child.elements().next().is_some();
        match params.remove(&name) {
            None if is_list => {
                params.insert(name, ParamValue::Multi(incoming));
            }
            None => {
                params.insert(name, ParamValue::Single(incoming.into_iter().next().unwrap()));
            }
            Some(existing) => {
                let mut values = match existing {
                    ParamValue::Single(v) => vec![v],
                    ParamValue::Multi(vs) => vs,
                };
                values.extend(incoming);
                params.insert(name, ParamValue::Multi(values));
            }
        }
    }
}

pub fn parse_descriptor(text: &str) -> Result<ParsedDescriptor, DescriptorError> {
    let root = markup::read_markup(text)?;
    if root.name != "project" {
        return Err(DescriptorError::WrongRoot(root.name));
    }
    let mut warnings = Vec::new();

    let coordinate = {
        let group_id = required(&root, "groupId", "project")?;
        let artifact_id = required(&root, "artifactId", "project")?;
        let version = required(&root, "version", "project")?;
        let packaging = root
            .child_text("packaging")
            .unwrap_or_else(|| "owl".to_string());
        let classifier = root.child_text("classifier");
        Coordinate::new(group_id, artifact_id, version, packaging, classifier)?
    };

    let mut dependencies = Vec::new();
    if let Some(deps) = root.child("dependencies") {
        for dep in deps.children_named("dependency") {
            let coordinate = coordinate_of(dep, "dependency")?;
            let key = coordinate.key();
            if dependencies
                .iter()
                .any(|d: &Dependency| d.coordinate.key() == key)
            {
                return Err(DescriptorError::DuplicateDependency(format!(
                    "{}:{}",
                    key.0, key.1
                )));
            }
            dependencies.push(Dependency { coordinate });
        }
    }

    let mut repositories: Vec<RepositorySpec> = Vec::new();
    let add_repository = |spec: RepositorySpec,
                              repositories: &mut Vec<RepositorySpec>|
     -> Result<(), DescriptorError> {
        if repositories.iter().any(|r| r.id == spec.id) {
            return Err(DescriptorError::MalformedRepository(format!(
                "duplicate repository id '{}'",
                spec.id
            )));
        }
        repositories.push(spec);
        Ok(())
    };
    if let Some(repos) = root.child("repositories") {
        for repo in repos.children_named("repository") {
            add_repository(parse_repository(repo)?, &mut repositories)?;
        }
    }
    if let Some(profiles) = root.child("profiles") {
        for profile in profiles.children_named("profile") {
            let active = profile
                .child("activation")
                .and_then(|a| a.child_text("activeByDefault"))
                .map(|t| t == "true")
                .unwrap_or(false);
            if !active {
                continue;
            }
            if let Some(repos) = profile.child("repositories") {
                for repo in repos.children_named("repository") {
                    add_repository(parse_repository(repo)?, &mut repositories)?;
                }
            }
        }
    }

    let mut plugin_params: BTreeMap<String, GoalParams> = BTreeMap::new();
    if let Some(plugins) = root.child("build").and_then(|b| b.child("plugins")) {
        for plugin in plugins.children_named("plugin") {
            let mut goals: Vec<String> = Vec::new();
            if let Some(executions) = plugin.child("executions") {
                for execution in executions.children_named("execution") {
                    if let Some(goal_list) = execution.child("goals") {
                        for goal in goal_list.children_named("goal") {
                            let name = goal.text();
                            if !name.is_empty() {
                                goals.push(name);
                            }
                        }
                    }
                }
            }
            let configuration = plugin.child("configuration");
            if goals.is_empty() {
                if configuration.is_some() {
                    warnings.push(format!(
                        "plugin '{}' has a configuration but no goals; it is ignored",
                        plugin.child_text("artifactId").unwrap_or_default()
                    ));
                }
                continue;
            }
            for goal in goals {
                let params = plugin_params.entry(goal).or_default();
                if let Some(configuration) = configuration {
                    parse_configuration(configuration, params, &mut warnings);
                }
            }
        }
    }

    Ok(ParsedDescriptor {
        descriptor: ProjectDescriptor {
            coordinate,
            dependencies,
            repositories,
            plugin_params,
        },
        warnings,
    })
}

fn push_element(out: &mut String, indent: usize, name: &str, text: &str) {
    for _ in 0..indent {
        out.push(' ');
    }
    out.push('<');
    out.push_str(name);
    out.push('>');
    out.push_str(&markup::escape_text(text));
    out.push_str("</");
    out.push_str(name);
    out.push_str(">\n");
}

/// Writes a descriptor such that `parse_descriptor` reproduces it exactly.
pub fn write_descriptor(descriptor: &ProjectDescriptor) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<project>\n");
    let c = &descriptor.coordinate;
    push_element(&mut out, 2, "groupId", &c.group_id);
    push_element(&mut out, 2, "artifactId", &c.artifact_id);
    push_element(&mut out, 2, "version", &c.version);
    push_element(&mut out, 2, "packaging", &c.packaging_type);
    if let Some(classifier) = &c.classifier {
        push_element(&mut out, 2, "classifier", classifier);
    }
    if !descriptor.dependencies.is_empty() {
        out.push_str("  <dependencies>\n");
        for dep in &descriptor.dependencies {
            out.push_str("    <dependency>\n");
            let d = &dep.coordinate;
            push_element(&mut out, 6, "groupId", &d.group_id);
            push_element(&mut out, 6, "artifactId", &d.artifact_id);
            push_element(&mut out, 6, "version", &d.version);
            push_element(&mut out, 6, "type", &d.packaging_type);
            if let Some(classifier) = &d.classifier {
                push_element(&mut out, 6, "classifier", classifier);
            }
            out.push_str("    </dependency>\n");
        }
        out.push_str("  </dependencies>\n");
    }
    if !descriptor.repositories.is_empty() {
        out.push_str("  <repositories>\n");
        for repo in &descriptor.repositories {
            out.push_str("    <repository>\n");
            push_element(&mut out, 6, "id", &repo.id);
            if let Some(name) = &repo.name {
                push_element(&mut out, 6, "name", name);
            }
            push_element(&mut out, 6, "url", &repo.url);
            out.push_str("      <snapshots>\n");
            push_element(
                &mut out,
                8,
                "enabled",
                if repo.snapshots_enabled { "true" } else { "false" },
            );
            out.push_str("      </snapshots>\n");
            out.push_str("    </repository>\n");
        }
        out.push_str("  </repositories>\n");
    }
    if !descriptor.plugin_params.is_empty() {
        out.push_str("  <build>\n    <plugins>\n");
        for (goal, params) in &descriptor.plugin_params {
            out.push_str("      <plugin>\n");
            out.push_str("        <executions>\n          <execution>\n            <goals>\n");
            push_element(&mut out, 14, "goal", goal);
            out.push_str("            </goals>\n          </execution>\n        </executions>\n");
            if !params.is_empty() {
                out.push_str("        <configuration>\n");
                for (name, value) in params {
                    match value {
                        ParamValue::Single(v) => push_element(&mut out, 10, name, v),
                        ParamValue::Multi(vs) => {
                            out.push_str("          <");
                            out.push_str(name);
                            out.push_str(">\n");
                            for v in vs {
                                push_element(&mut out, 12, "value", v);
                            }
                            out.push_str("          </");
                            out.push_str(name);
                            out.push_str(">\n");
                        }
                    }
                }
                out.push_str("        </configuration>\n");
            }
            out.push_str("      </plugin>\n");
        }
        out.push_str("    </plugins>\n  </build>\n");
    }
    out.push_str("</project>\n");
    out
}
