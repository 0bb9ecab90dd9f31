//! Test-suite runner for syntax, consistency and entailment checks over
//! ontology documents, driven by a small markup manifest.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::markup::{read_markup, MarkupError};
use crate::ofs::parse_ontology;
use crate::reasoner::{
    detected_profile, entails, is_consistent, ConsistencyVerdict, EntailmentVerdict,
    ReasonerConfig,
};

/// Test kinds are an open enumeration: unknown kinds parse, run as
/// Unknown, and are flagged in the manifest warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestKind {
    Syntax,
    Consistency,
    Inconsistency,
    PositiveEntailment,
    NegativeEntailment,
    Other(String),
}

impl TestKind {
    fn parse(text: &str) -> TestKind {
        match text {
            "SyntaxTest" => TestKind::Syntax,
            "ConsistencyTest" => TestKind::Consistency,
            "InconsistencyTest" => TestKind::Inconsistency,
            "PositiveEntailmentTest" => TestKind::PositiveEntailment,
            "NegativeEntailmentTest" => TestKind::NegativeEntailment,
            other => TestKind::Other(other.to_string()),
        }
    }

    fn is_entailment(&self) -> bool {
        matches!(
            self,
            TestKind::PositiveEntailment | TestKind::NegativeEntailment
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: String,
    pub kind: TestKind,
    /// Path text, resolved against the manifest's directory.
    pub input: String,
    /// Present exactly for the entailment kinds.
    pub conclusion: Option<String>,
    /// Syntax tests only.
    pub expected_profile: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplianceMode {
    #[default]
    Strict,
    Lenient,
}

impl FromStr for ComplianceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ComplianceMode::Strict),
            "lenient" => Ok(ComplianceMode::Lenient),
            other => Err(format!(
                "compliancemode must be `strict` or `lenient`, got `{other}`"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestOutcome {
    pub case_id: String,
    pub verdict: Verdict,
    /// The engine's result value or the first diagnostic.
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct TestManifest {
    pub cases: Vec<TestCase>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest markup: {0}")]
    Markup(#[from] MarkupError),
    #[error("manifest root must be <testsuite>, found <{0}>")]
    WrongRoot(String),
    #[error("<test> element missing attribute `{0}`")]
    MissingAttribute(&'static str),
    #[error("test `{id}`: {message}")]
    BadCase { id: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest references missing file: {0}")]
    MissingFile(PathBuf),
}

/// Parses `<testsuite>` with `<test id kind input [conclusion]
/// [expectedProfile]/>` children, in document order.
pub fn parse_manifest(text: &str) -> Result<TestManifest, ManifestError> {
    let root = read_markup(text)?;
    if root.name != "testsuite" {
        return Err(ManifestError::WrongRoot(root.name.clone()));
    }
    let mut manifest = TestManifest::default();
    for element in root.elements() {
        if element.name != "test" {
            manifest
                .warnings
                .push(format!("ignoring <{}> in testsuite", element.name));
            continue;
        }
        let id = element
            .attribute("id")
            .ok_or(ManifestError::MissingAttribute("id"))?
            .to_string();
        let kind = TestKind::parse(
            element
                .attribute("kind")
                .ok_or(ManifestError::MissingAttribute("kind"))?,
        );
        let input = element
            .attribute("input")
            .ok_or(ManifestError::MissingAttribute("input"))?
            .to_string();
        let conclusion = element.attribute("conclusion").map(str::to_string);
        let expected_profile = element.attribute("expectedProfile").map(str::to_string);
        if let TestKind::Other(name) = &kind {
            manifest
                .warnings
                .push(format!("test `{id}`: unknown kind `{name}`"));
        } else {
            if kind.is_entailment() != conclusion.is_some() {
                let message = if kind.is_entailment() {
                    "entailment tests need a `conclusion` attribute"
                } else {
                    "only entailment tests take a `conclusion` attribute"
                };
                return Err(ManifestError::BadCase {
                    id,
                    message: message.to_string(),
                });
            }
            if expected_profile.is_some() && kind != TestKind::Syntax {
                return Err(ManifestError::BadCase {
                    id,
                    message: "`expectedProfile` applies to SyntaxTest only".to_string(),
                });
            }
        }
        manifest.cases.push(TestCase {
            id,
            kind,
            input,
            conclusion,
            expected_profile,
        });
    }
    Ok(manifest)
}

enum Loaded {
    Ontology(crate::model::Ontology),
    Unparseable(String),
    Unreadable(String),
}

fn load_document(base_dir: &Path, relative: &str) -> Loaded {
    let path = base_dir.join(relative);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(err) => return Loaded::Unreadable(format!("cannot read {}: {err}", path.display())),
    };
    match parse_ontology(&text) {
        Ok(parsed) => Loaded::Ontology(parsed.ontology),
        Err(failure) => Loaded::Unparseable(failure.first_error().to_string()),
    }
}

/// Runs a single case. Files are read relative to `base_dir`; IO and
/// parse problems become Fail outcomes, reasoner resource exhaustion
/// becomes Unknown.
pub fn run_case(
    case: &TestCase,
    base_dir: &Path,
    mode: ComplianceMode,
    config: &ReasonerConfig,
) -> TestOutcome {
    let outcome = |verdict: Verdict, detail: String| TestOutcome {
        case_id: case.id.clone(),
        verdict,
        detail,
    };
    let input = match load_document(base_dir, &case.input) {
        Loaded::Ontology(ontology) => ontology,
        Loaded::Unparseable(detail) | Loaded::Unreadable(detail) => {
            return outcome(Verdict::Fail, detail);
        }
    };
    match &case.kind {
        TestKind::Syntax => {
            let profile = detected_profile(&input);
            let verdict = match (&case.expected_profile, mode) {
                (Some(expected), ComplianceMode::Strict) if *expected != profile => Verdict::Fail,
                _ => Verdict::Pass,
            };
            outcome(verdict, profile)
        }
        TestKind::Consistency | TestKind::Inconsistency => {
            let result = match is_consistent(&input, config) {
                Ok(result) => result,
                Err(err) => return outcome(Verdict::Unknown, err.to_string()),
            };
            let expected = if case.kind == TestKind::Consistency {
                ConsistencyVerdict::Consistent
            } else {
                ConsistencyVerdict::Inconsistent
            };
            let verdict = match result {
                ConsistencyVerdict::Unknown => Verdict::Unknown,
                r if r == expected => Verdict::Pass,
                _ => Verdict::Fail,
            };
            outcome(verdict, result.to_string())
        }
        TestKind::PositiveEntailment | TestKind::NegativeEntailment => {
            let conclusion_path = case.conclusion.as_deref().unwrap_or_default();
            let conclusion = match load_document(base_dir, conclusion_path) {
                Loaded::Ontology(ontology) => ontology,
                Loaded::Unparseable(detail) | Loaded::Unreadable(detail) => {
                    return outcome(Verdict::Fail, detail);
                }
            };
            let result = match entails(&input, &conclusion, config) {
                Ok(result) => result,
                Err(err) => return outcome(Verdict::Unknown, err.to_string()),
            };
            let expected = if case.kind == TestKind::PositiveEntailment {
                EntailmentVerdict::Entailment
            } else {
                EntailmentVerdict::NoEntailment
            };
            let verdict = match result {
                EntailmentVerdict::Unknown => Verdict::Unknown,
                r if r == expected => Verdict::Pass,
                _ => Verdict::Fail,
            };
            outcome(verdict, result.to_string())
        }
        TestKind::Other(name) => outcome(Verdict::Unknown, format!("unknown test kind `{name}`")),
    }
}

#[derive(Debug, Clone, Default)]
pub struct TestReport {
    pub outcomes: Vec<TestOutcome>,
}

impl TestReport {
    fn count(&self, verdict: Verdict) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.verdict == verdict)
            .count()
    }

    pub fn passed(&self) -> usize {
        self.count(Verdict::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(Verdict::Fail)
    }

    pub fn unknown(&self) -> usize {
        self.count(Verdict::Unknown)
    }

    /// Any Fail makes the suite failing; Unknown alone does not.
    pub fn is_failing(&self) -> bool {
        self.failed() > 0
    }
}

/// Parses the manifest, verifies every referenced file exists, then runs
/// the cases in manifest order.
pub fn run_suite(
    manifest_path: &Path,
    mode: ComplianceMode,
    config: &ReasonerConfig,
) -> Result<TestReport, ManifestError> {
    let text = fs::read_to_string(manifest_path).map_err(|source| ManifestError::Io {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let manifest = parse_manifest(&text)?;
    let base_dir = manifest_path.parent().unwrap_or(Path::new(".")).to_owned();
    for case in &manifest.cases {
        for relative in std::iter::once(&case.input).chain(case.conclusion.iter()) {
            let path = base_dir.join(relative);
            if !path.is_file() {
                return Err(ManifestError::MissingFile(path));
            }
        }
    }
    let outcomes = manifest
        .cases
        .iter()
        .map(|case| run_case(case, &base_dir, mode, config))
        .collect();
    Ok(TestReport { outcomes })
}

/// One line per case plus a summary row; byte-identical for equal input.
pub fn render_report(report: &TestReport) -> String {
    let mut out = String::new();
    for outcome in &report.outcomes {
        out.push_str(&format!(
            "{}: {} ({})\n",
            outcome.case_id, outcome.verdict, outcome.detail
        ));
    }
    out.push_str(&format!(
        "Summary: {} passed, {} failed, {} unknown\n",
        report.passed(),
        report.failed(),
        report.unknown()
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    const CONSISTENT: &str = "Ontology(SubClassOf(<http://e/A> <http://e/B>))";
    const INCONSISTENT: &str = "Ontology(
        ClassAssertion(<http://e/A> <http://e/i>)
        SubClassOf(<http://e/A> <http://www.w3.org/2002/07/owl#Nothing>)
    )";
    const PREMISE: &str = "Ontology(
        SubClassOf(<http://e/A> <http://e/B>)
        SubClassOf(<http://e/B> <http://e/C>)
    )";
    const CONCLUSION: &str = "Ontology(SubClassOf(<http://e/A> <http://e/C>))";
    const OUTSIDE_SUBSET: &str = "Ontology(
        SubClassOf(<http://e/A> <http://e/B>)
        DisjointClasses(<http://e/A> <http://e/B>)
    )";

    fn cfg() -> ReasonerConfig {
        ReasonerConfig::default()
    }

    fn case(id: &str, kind: TestKind, input: &str) -> TestCase {
        TestCase {
            id: id.to_string(),
            kind,
            input: input.to_string(),
            conclusion: None,
            expected_profile: None,
        }
    }

    fn fixture_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [
            ("consistent.owl", CONSISTENT),
            ("inconsistent.owl", INCONSISTENT),
            ("premise.owl", PREMISE),
            ("conclusion.owl", CONCLUSION),
            ("outside.owl", OUTSIDE_SUBSET),
            ("broken.owl", "Ontology(SubClassOf("),
        ] {
            fs::write(dir.path().join(name), text).unwrap();
        }
        dir
    }

    #[test]
    fn manifest_round_trip_of_attributes() {
        let manifest = parse_manifest(
            r#"<testsuite>
                 <test id="t1" kind="ConsistencyTest" input="a.owl"/>
                 <test id="t2" kind="PositiveEntailmentTest" input="p.owl" conclusion="c.owl"/>
                 <test id="t3" kind="SyntaxTest" input="s.owl" expectedProfile="EL"/>
               </testsuite>"#,
        )
        .unwrap();
        assert_eq!(manifest.cases.len(), 3);
        assert_eq!(manifest.cases[0].kind, TestKind::Consistency);
        assert_eq!(manifest.cases[1].conclusion.as_deref(), Some("c.owl"));
        assert_eq!(manifest.cases[2].expected_profile.as_deref(), Some("EL"));
        assert!(manifest.warnings.is_empty());
    }

    #[test]
    fn manifest_enforces_conclusion_rule() {
        let missing = parse_manifest(
            r#"<testsuite><test id="t" kind="PositiveEntailmentTest" input="p.owl"/></testsuite>"#,
        );
        assert!(matches!(missing, Err(ManifestError::BadCase { .. })));
        let extra = parse_manifest(
            r#"<testsuite><test id="t" kind="ConsistencyTest" input="p.owl" conclusion="c.owl"/></testsuite>"#,
        );
        assert!(matches!(extra, Err(ManifestError::BadCase { .. })));
    }

    #[test]
    fn manifest_accepts_unknown_kinds_with_warning() {
        let manifest = parse_manifest(
            r#"<testsuite><test id="t" kind="FancyTest" input="a.owl"/></testsuite>"#,
        )
        .unwrap();
        assert_eq!(
            manifest.cases[0].kind,
            TestKind::Other("FancyTest".to_string())
        );
        assert_eq!(manifest.warnings.len(), 1);
    }

    #[test]
    fn manifest_rejects_wrong_root_and_missing_attributes() {
        assert!(matches!(
            parse_manifest("<tests></tests>"),
            Err(ManifestError::WrongRoot(_))
        ));
        assert!(matches!(
            parse_manifest(r#"<testsuite><test id="t" input="a.owl"/></testsuite>"#),
            Err(ManifestError::MissingAttribute("kind"))
        ));
    }

    #[test]
    fn consistency_cases_compare_against_expectation() {
        let dir = fixture_dir();
        let run = |kind: TestKind, input: &str| {
            run_case(
                &case("t", kind, input),
                dir.path(),
                ComplianceMode::Strict,
                &cfg(),
            )
        };
        let pass = run(TestKind::Inconsistency, "inconsistent.owl");
        assert_eq!(pass.verdict, Verdict::Pass);
        assert_eq!(pass.detail, "inconsistent");
        let fail = run(TestKind::Consistency, "inconsistent.owl");
        assert_eq!(fail.verdict, Verdict::Fail);
        let unknown = run(TestKind::Consistency, "outside.owl");
        assert_eq!(unknown.verdict, Verdict::Unknown);
        assert_eq!(unknown.detail, "unknown");
    }

    #[test]
    fn entailment_cases_compare_against_expectation() {
        let dir = fixture_dir();
        let run = |kind: TestKind| {
            let mut c = case("t", kind, "premise.owl");
            c.conclusion = Some("conclusion.owl".to_string());
            run_case(&c, dir.path(), ComplianceMode::Strict, &cfg())
        };
        let positive = run(TestKind::PositiveEntailment);
        assert_eq!(positive.verdict, Verdict::Pass);
        assert_eq!(positive.detail, "Entailment");
        let negative = run(TestKind::NegativeEntailment);
        assert_eq!(negative.verdict, Verdict::Fail);
        assert_eq!(negative.detail, "Entailment");
    }

    #[test]
    fn syntax_cases_respect_compliance_mode() {
        let dir = fixture_dir();
        let mut c = case("t", TestKind::Syntax, "outside.owl");
        c.expected_profile = Some("EL".to_string());
        let strict = run_case(&c, dir.path(), ComplianceMode::Strict, &cfg());
        assert_eq!(strict.verdict, Verdict::Fail);
        assert_eq!(strict.detail, "UNSUPPORTED(DisjointClasses)");
        let lenient = run_case(&c, dir.path(), ComplianceMode::Lenient, &cfg());
        assert_eq!(lenient.verdict, Verdict::Pass);
        assert_eq!(lenient.detail, "UNSUPPORTED(DisjointClasses)");
    }

    #[test]
    fn unparseable_input_fails_with_position() {
        let dir = fixture_dir();
        let outcome = run_case(
            &case("t", TestKind::Syntax, "broken.owl"),
            dir.path(),
            ComplianceMode::Lenient,
            &cfg(),
        );
        assert_eq!(outcome.verdict, Verdict::Fail);
        assert!(outcome.detail.contains("error at 1:"), "{}", outcome.detail);
    }

    #[test]
    fn unknown_kind_runs_as_unknown() {
        let dir = fixture_dir();
        let outcome = run_case(
            &case("t", TestKind::Other("FancyTest".into()), "consistent.owl"),
            dir.path(),
            ComplianceMode::Strict,
            &cfg(),
        );
        assert_eq!(outcome.verdict, Verdict::Unknown);
    }

    #[test]
    fn suite_runs_in_manifest_order_and_counts() {
        let dir = fixture_dir();
        fs::write(
            dir.path().join("suite.xml"),
            r#"<testsuite>
                 <test id="ok" kind="ConsistencyTest" input="consistent.owl"/>
                 <test id="bad" kind="ConsistencyTest" input="inconsistent.owl"/>
                 <test id="odd" kind="ConsistencyTest" input="outside.owl"/>
                 <test id="ent" kind="PositiveEntailmentTest" input="premise.owl" conclusion="conclusion.owl"/>
               </testsuite>"#,
        )
        .unwrap();
        let report = run_suite(
            &dir.path().join("suite.xml"),
            ComplianceMode::Strict,
            &cfg(),
        )
        .unwrap();
        assert_eq!(report.passed(), 2);
        assert_eq!(report.failed(), 1);
        assert_eq!(report.unknown(), 1);
        assert!(report.is_failing());
        let ids: Vec<&str> = report.outcomes.iter().map(|o| o.case_id.as_str()).collect();
        assert_eq!(ids, ["ok", "bad", "odd", "ent"]);
        let text = render_report(&report);
        assert!(text.ends_with("Summary: 2 passed, 1 failed, 1 unknown\n"));
        assert!(text.contains("ok: Pass (consistent)\n"));
    }

    #[test]
    fn empty_suite_passes() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("suite.xml"), "<testsuite></testsuite>").unwrap();
        let report = run_suite(
            &dir.path().join("suite.xml"),
            ComplianceMode::Strict,
            &cfg(),
        )
        .unwrap();
        assert!(report.outcomes.is_empty());
        assert!(!report.is_failing());
        assert_eq!(render_report(&report), "Summary: 0 passed, 0 failed, 0 unknown\n");
    }

    #[test]
    fn missing_fixture_is_a_manifest_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("suite.xml"),
            r#"<testsuite><test id="t" kind="ConsistencyTest" input="ghost.owl"/></testsuite>"#,
        )
        .unwrap();
        let err = run_suite(
            &dir.path().join("suite.xml"),
            ComplianceMode::Strict,
            &cfg(),
        )
        .unwrap_err();
        match err {
            ManifestError::MissingFile(path) => {
                assert!(path.ends_with("ghost.owl"));
            }
            other => panic!("expected MissingFile, got {other:?}"),
        }
    }
}
