//! Release gates for the whole toolchain. Each test checks one gate and
//! prints a single PASS/FAIL line. Expected values come from independently
//! coded oracles or hand-computed fixtures, never from the code under test.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use ontomvn::aspects::{apply_aspects, AspectSelector, WeaveConfig, DEFAULT_ASPECTS_IRI};
use ontomvn::catalog::Catalog;
use ontomvn::descriptor::{parse_descriptor, Coordinate};
use ontomvn::diff::{semantic_diff, structural_diff};
use ontomvn::iri::Iri;
use ontomvn::model::Ontology;
use ontomvn::ofs::{parse_ontology, serialize_ontology};
use ontomvn::reasoner::{classify, detected_profile, Atom, ReasonerConfig};
use ontomvn::repo::{coordinate_to_path, sha256_hex, HttpClient, LocalRepository, RepoError};
use ontomvn::report::{emit_graph, summary_report, technical_report};
use ontomvn::resolver::{mediate, resolve_imports, DependencyNode};
use ontomvn::stub::StubRepository;
use ontomvn::testkit::{render_report, run_suite, ComplianceMode};

/// Early-returns a formatted failure out of a criterion body.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(number: u32, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {number:02} {name}: PASS ({detail})"),
        Err(detail) => {
            println!("criterion {number:02} {name}: FAIL ({detail})");
            panic!("criterion {number:02} {name}: {detail}");
        }
    }
}

// ---------------------------------------------------------------- generators

/// One generated axiom over small class/role id spaces. Mirrors exactly what
/// `render_el_axiom` prints, so oracles can work off the plan alone.
#[derive(Clone, Copy)]
enum ElAxiom {
    /// A ⊑ B
    Sub(u32, u32),
    /// A ⊓ B ⊑ C
    ConjLhs(u32, u32, u32),
    /// A ⊑ B ⊓ C
    ConjRhs(u32, u32, u32),
    /// A ⊑ ∃r.B — fields (A, r, B)
    ExistsRhs(u32, u32, u32),
    /// ∃r.A ⊑ B — fields (r, A, B)
    ExistsLhs(u32, u32, u32),
}

fn el_class(i: u32) -> String {
    format!("http://el.example/C{i}")
}

fn el_role(i: u32) -> String {
    format!("http://el.example/r{i}")
}

fn render_el_axiom(axiom: &ElAxiom) -> String {
    match *axiom {
        ElAxiom::Sub(a, b) => format!("  SubClassOf(<{}> <{}>)", el_class(a), el_class(b)),
        ElAxiom::ConjLhs(a, b, c) => format!(
            "  SubClassOf(ObjectIntersectionOf(<{}> <{}>) <{}>)",
            el_class(a),
            el_class(b),
            el_class(c)
        ),
        ElAxiom::ConjRhs(a, b, c) => format!(
            "  SubClassOf(<{}> ObjectIntersectionOf(<{}> <{}>))",
            el_class(a),
            el_class(b),
            el_class(c)
        ),
        ElAxiom::ExistsRhs(a, r, b) => format!(
            "  SubClassOf(<{}> ObjectSomeValuesFrom(<{}> <{}>))",
            el_class(a),
            el_role(r),
            el_class(b)
        ),
        ElAxiom::ExistsLhs(r, a, b) => format!(
            "  SubClassOf(ObjectSomeValuesFrom(<{}> <{}>) <{}>)",
            el_role(r),
            el_class(a),
            el_class(b)
        ),
    }
}

fn random_el_plan(rng: &mut ChaCha8Rng) -> Vec<ElAxiom> {
    let classes = rng.random_range(2..=6u32);
    let roles = rng.random_range(1..=2u32);
    let count = rng.random_range(1..=10usize);
    let mut plan = Vec::with_capacity(count);
    for _ in 0..count {
        let shape = rng.random_range(0..5u32);
        let a = rng.random_range(0..classes);
        let b = rng.random_range(0..classes);
        let c = rng.random_range(0..classes);
        let r = rng.random_range(0..roles);
        plan.push(match shape {
            0 => ElAxiom::Sub(a, b),
            1 => ElAxiom::ConjLhs(a, b, c),
            2 => ElAxiom::ConjRhs(a, b, c),
            3 => ElAxiom::ExistsRhs(a, r, b),
            _ => ElAxiom::ExistsLhs(r, a, b),
        });
    }
    plan
}

fn el_document(plan: &[ElAxiom]) -> String {
    let body: Vec<String> = plan.iter().map(render_el_axiom).collect();
    format!("Ontology(<http://el.example/case>\n{}\n)\n", body.join("\n"))
}

/// Naive completion oracle: saturates per-class subsumer sets and role edges
/// until nothing changes. Returns the used class ids and the subsumer map.
#[allow(clippy::type_complexity)]
fn el_oracle(plan: &[ElAxiom]) -> (BTreeSet<u32>, BTreeMap<u32, BTreeSet<u32>>) {
    let mut used: BTreeSet<u32> = BTreeSet::new();
    let mut subs: Vec<(u32, u32)> = Vec::new();
    let mut conj: Vec<(u32, u32, u32)> = Vec::new();
    let mut exists_rhs: Vec<(u32, u32, u32)> = Vec::new();
    let mut exists_lhs: Vec<(u32, u32, u32)> = Vec::new();
    for axiom in plan {
        match *axiom {
            ElAxiom::Sub(a, b) => {
                used.extend([a, b]);
                subs.push((a, b));
            }
            ElAxiom::ConjLhs(a, b, c) => {
                used.extend([a, b, c]);
                conj.push((a, b, c));
            }
            // A ⊑ B ⊓ C is just the two plain inclusions.
            ElAxiom::ConjRhs(a, b, c) => {
                used.extend([a, b, c]);
                subs.push((a, b));
                subs.push((a, c));
            }
            ElAxiom::ExistsRhs(a, r, b) => {
                used.extend([a, b]);
                exists_rhs.push((a, r, b));
            }
            ElAxiom::ExistsLhs(r, a, b) => {
                used.extend([a, b]);
                exists_lhs.push((r, a, b));
            }
        }
    }
    let mut s: BTreeMap<u32, BTreeSet<u32>> =
        used.iter().map(|&x| (x, BTreeSet::from([x]))).collect();
    let mut edges: BTreeSet<(u32, u32, u32)> = BTreeSet::new(); // (role, from, filler)
    loop {
        let mut add_s: Vec<(u32, u32)> = Vec::new();
        let mut add_e: Vec<(u32, u32, u32)> = Vec::new();
        for (&x, row) in &s {
            for &(a, b) in &subs {
                if row.contains(&a) && !row.contains(&b) {
                    add_s.push((x, b));
                }
            }
            for &(a, b, c) in &conj {
                if row.contains(&a) && row.contains(&b) && !row.contains(&c) {
                    add_s.push((x, c));
                }
            }
            for &(a, r, b) in &exists_rhs {
                if row.contains(&a) && !edges.contains(&(r, x, b)) {
                    add_e.push((r, x, b));
                }
            }
        }
        for &(r, x, y) in &edges {
            for &(rr, a, b) in &exists_lhs {
                if rr == r && s[&y].contains(&a) && !s[&x].contains(&b) {
                    add_s.push((x, b));
                }
            }
        }
        let mut changed = false;
        for (x, b) in add_s {
            if s.get_mut(&x).expect("seeded above").insert(b) {
                changed = true;
            }
        }
        for edge in add_e {
            if edges.insert(edge) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (used, s)
}

/// Lifts the oracle's subsumer map into the classifier's output shape:
/// reflexive pairs, everything below Top, Bottom below everything.
fn expected_subsumptions(
    used: &BTreeSet<u32>,
    s: &BTreeMap<u32, BTreeSet<u32>>,
) -> BTreeSet<(Atom, Atom)> {
    let named = |i: u32| Atom::Named(Iri::new(el_class(i)).expect("well-formed"));
    let mut domain: Vec<Atom> = used.iter().map(|&i| named(i)).collect();
    domain.push(Atom::Top);
    domain.push(Atom::Bottom);
    let mut expected = BTreeSet::new();
    for atom in &domain {
        expected.insert((atom.clone(), atom.clone()));
        expected.insert((atom.clone(), Atom::Top));
        expected.insert((Atom::Bottom, atom.clone()));
    }
    for (&x, row) in s {
        for &b in row {
            expected.insert((named(x), named(b)));
        }
    }
    expected
}

// --------------------------------------------------------------- criterion 1

#[test]
fn criterion_01_weaving_matches_a_filter_oracle() {
    criterion(1, "aspect weaving vs filter oracle", (|| {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pool: Vec<String> = (0..6)
            .map(|i| format!("http://example.org/aspects#A{i}"))
            .collect();
        for case in 0..500u32 {
            let axiom_count = rng.random_range(1..=50usize);
            let property = if rng.random_bool(0.3) {
                "http://example.org/meta#taggedWith"
            } else {
                DEFAULT_ASPECTS_IRI
            };
            let decoy = if property == DEFAULT_ASPECTS_IRI {
                "http://example.org/meta#taggedWith"
            } else {
                DEFAULT_ASPECTS_IRI
            };
            let mut tags: Vec<Vec<usize>> = Vec::with_capacity(axiom_count);
            let mut lines: Vec<String> = Vec::with_capacity(axiom_count);
            for i in 0..axiom_count {
                let mut tag = Vec::new();
                for a in 0..pool.len() {
                    if rng.random_bool(0.25) {
                        tag.push(a);
                    }
                }
                let mut annotations = String::new();
                for &a in &tag {
                    annotations.push_str(&format!("Annotation(<{property}> <{}>) ", pool[a]));
                }
                // Tags under an unrelated property must not count as aspects.
                if rng.random_bool(0.2) {
                    let a = rng.random_range(0..pool.len());
                    annotations.push_str(&format!("Annotation(<{decoy}> <{}>) ", pool[a]));
                }
                lines.push(format!(
                    "  SubClassOf({annotations}<http://example.org/w#C{i}> <http://example.org/w#D{i}>)"
                ));
                tags.push(tag);
            }
            let mut selectors: Vec<String> = Vec::new();
            for aspect in &pool {
                if rng.random_bool(0.3) {
                    selectors.push(aspect.clone());
                }
            }
            if rng.random_bool(0.25) {
                selectors.push("http://example.org/aspects#A*".to_string());
            }
            if rng.random_bool(0.25) {
                selectors.push("http://example.org/other#Zed".to_string());
            }
            let include_base = rng.random_bool(0.5);

            let document = format!(
                "Ontology(<http://example.org/w>\n{}\n)\n",
                lines.join("\n")
            );
            let parsed = parse_ontology(&document)
                .map_err(|e| format!("case {case}: generated document: {}", e.first_error()))?;

            // Oracle: re-coded selector matching over the generation plan.
            let hits = |selector: &str, aspect: &str| match selector.strip_suffix('*') {
                Some(prefix) => aspect.starts_with(prefix),
                None => selector == aspect,
            };
            let mut kept: Vec<String> = Vec::new();
            for (i, tag) in tags.iter().enumerate() {
                let keep = if tag.is_empty() {
                    include_base
                } else {
                    tag.iter()
                        .any(|&a| selectors.iter().any(|s| hits(s, &pool[a])))
                };
                if keep {
                    kept.push(lines[i].clone());
                }
            }
            let expected_doc = format!(
                "Ontology(<http://example.org/w>\n{}\n)\n",
                kept.join("\n")
            );
            let expected = parse_ontology(&expected_doc)
                .map_err(|e| format!("case {case}: oracle document: {}", e.first_error()))?;

            let config = WeaveConfig {
                user_aspects: selectors
                    .iter()
                    .map(|s| AspectSelector::parse(s.clone()).expect("generated selectors parse"))
                    .collect(),
                aspects_property: Iri::new(property).expect("well-formed"),
                include_original_axioms: include_base,
            };
            let woven = apply_aspects(&parsed.ontology, &config);
            ensure!(
                woven.ontology.axiom_set() == expected.ontology.axiom_set(),
                "case {case}: woven axioms diverge from the filter oracle ({} selectors, include_base={include_base})",
                selectors.len()
            );

            let mut expected_unmatched: BTreeSet<String> = BTreeSet::new();
            for selector in &selectors {
                let used = tags
                    .iter()
                    .any(|tag| tag.iter().any(|&a| hits(selector, &pool[a])));
                if !used {
                    expected_unmatched.insert(selector.clone());
                }
            }
            let reported: BTreeSet<String> = woven.unmatched_selectors.iter().cloned().collect();
            ensure!(
                reported == expected_unmatched,
                "case {case}: unmatched selector report diverges (got {reported:?}, want {expected_unmatched:?})"
            );
        }
        let elapsed = started.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 5.0,
            "500 cases took {elapsed:?}; budget is 5s"
        );
        Ok(format!("500 seeded weave cases match in {elapsed:.2?}"))
    })());
}

// --------------------------------------------------------------- criterion 2

const WEAVE_POM: &str = r#"<project>
  <groupId>de.example</groupId>
  <artifactId>reputation</artifactId>
  <version>1.0</version>
  <build>
    <plugins>
      <plugin>
        <artifactId>ontomvn-plugin</artifactId>
        <executions>
          <execution>
            <goals>
              <goal>apply-aspects</goal>
            </goals>
          </execution>
        </executions>
        <configuration>
          <userAspects>
            <aspect>http://example.org/reputation#Reputation123</aspect>
            <aspect>http://example.org/provenance#prov_789</aspect>
          </userAspects>
          <aspectsIRI>http://corporate-semantic-web.de/aspectOWL#hasAspect</aspectsIRI>
          <includeOriginalAxioms>true</includeOriginalAxioms>
        </configuration>
      </plugin>
    </plugins>
  </build>
</project>
"#;

fn weave_fixture_line(tags: &[&str], i: usize) -> String {
    let annotations: String = tags
        .iter()
        .map(|t| {
            format!("Annotation(<http://corporate-semantic-web.de/aspectOWL#hasAspect> <{t}>) ")
        })
        .collect();
    format!("  SubClassOf({annotations}<http://example.org/rep#S{i}> <http://example.org/rep#T{i}>)")
}

#[test]
fn criterion_02_configured_weave_keeps_hand_picked_axioms() {
    criterion(2, "configured weave fixture", (|| {
        let parsed_pom = parse_descriptor(WEAVE_POM).map_err(|e| format!("pom: {e}"))?;
        let params = parsed_pom
            .descriptor
            .plugin_params
            .get("apply-aspects")
            .ok_or("pom carries no apply-aspects configuration")?;
        let selector_patterns: Vec<String> = params
            .get("userAspects")
            .map(|v| v.values().into_iter().map(str::to_string).collect())
            .unwrap_or_default();
        ensure!(
            selector_patterns.len() == 2,
            "expected two configured selectors, got {selector_patterns:?}"
        );
        let property = params
            .get("aspectsIRI")
            .and_then(|v| v.as_single())
            .ok_or("pom carries no aspectsIRI")?;
        let include = params
            .get("includeOriginalAxioms")
            .and_then(|v| v.as_single())
            .ok_or("pom carries no includeOriginalAxioms")?;
        ensure!(include == "true", "configured flag should read true, got {include}");

        let rep = "http://example.org/reputation#Reputation123";
        let prov = "http://example.org/provenance#prov_789";
        let sec = "http://example.org/security#sec_1";
        let lines = [
            weave_fixture_line(&[rep], 0),
            weave_fixture_line(&[rep], 1),
            weave_fixture_line(&[prov], 2),
            weave_fixture_line(&[rep, prov], 3),
            weave_fixture_line(&[sec], 4),
            weave_fixture_line(&[], 5),
        ];
        let document = |keep: &[usize]| {
            let body: Vec<String> = keep.iter().map(|&i| lines[i].clone()).collect();
            format!("Ontology(<http://example.org/rep>\n{}\n)\n", body.join("\n"))
        };
        let base = parse_ontology(&document(&[0, 1, 2, 3, 4, 5]))
            .map_err(|e| format!("fixture: {}", e.first_error()))?;

        let config = WeaveConfig {
            user_aspects: selector_patterns
                .iter()
                .map(|s| AspectSelector::parse(s.clone()))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("selector: {e}"))?,
            aspects_property: Iri::new(property).map_err(|e| format!("aspectsIRI: {e}"))?,
            include_original_axioms: include == "true",
        };
        let woven = apply_aspects(&base.ontology, &config);
        let expected = parse_ontology(&document(&[0, 1, 2, 3, 5])).expect("fixture parses");
        ensure!(
            woven.ontology.axiom_set() == expected.ontology.axiom_set(),
            "weave with originals kept the wrong rows"
        );
        ensure!(
            woven.unmatched_selectors.is_empty(),
            "both selectors tag axioms; none should come back unmatched"
        );
        let serialized = serialize_ontology(&woven.ontology);
        ensure!(
            serialized.contains("appliedAspects"),
            "woven ontology must record what was selected"
        );
        ensure!(
            serialized.contains(&format!("{rep}, {prov}")),
            "selection note must join the patterns in declaration order"
        );

        let mut without = config;
        without.include_original_axioms = false;
        let woven = apply_aspects(&base.ontology, &without);
        let expected = parse_ontology(&document(&[0, 1, 2, 3])).expect("fixture parses");
        ensure!(
            woven.ontology.axiom_set() == expected.ontology.axiom_set(),
            "weave without originals kept the wrong rows"
        );
        Ok("tagged rows follow the selectors, untagged rows follow includeOriginalAxioms".to_string())
    })());
}

// --------------------------------------------------------------- criterion 3

#[test]
fn criterion_03_classification_matches_a_fixpoint_oracle() {
    criterion(3, "classification vs fixpoint oracle", (|| {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let config = ReasonerConfig::default();
        for case in 0..1000u32 {
            let plan = random_el_plan(&mut rng);
            let document = el_document(&plan);
            let parsed = parse_ontology(&document)
                .map_err(|e| format!("case {case}: {}", e.first_error()))?;
            ensure!(
                parsed.warnings.is_empty(),
                "case {case}: generator produced a non-clean document"
            );
            let result = classify(&parsed.ontology, &config)
                .map_err(|e| format!("case {case}: {e}"))?;
            ensure!(
                result.violations.is_empty(),
                "case {case}: unexpected profile violations"
            );
            let (used, s) = el_oracle(&plan);
            let expected = expected_subsumptions(&used, &s);
            ensure!(
                result.subsumptions == expected,
                "case {case}: subsumption set diverges from the oracle\ndocument:\n{document}"
            );
        }
        let elapsed = started.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 30.0,
            "1000 cases took {elapsed:?}; budget is 30s"
        );
        Ok(format!("1000 seeded taxonomies match in {elapsed:.2?}"))
    })());
}

// --------------------------------------------------------------- criterion 4

#[test]
fn criterion_04_test_harness_vocabulary_is_exact() {
    criterion(4, "test harness vocabulary", (|| {
        let dir = TempDir::new().map_err(|e| e.to_string())?;
        let write = |name: &str, text: &str| {
            fs::write(dir.path().join(name), text).map_err(|e| format!("{name}: {e}"))
        };
        write(
            "consistent.owl",
            "Ontology(<http://cases.example/consistent>\n  SubClassOf(<http://cases.example#A> <http://cases.example#B>)\n  SubClassOf(<http://cases.example#B> <http://cases.example#C>)\n)\n",
        )?;
        write(
            "inconsistent.owl",
            "Ontology(<http://cases.example/inconsistent>\n  ClassAssertion(<http://cases.example#A> <http://cases.example#a1>)\n  SubClassOf(<http://cases.example#A> <http://www.w3.org/2002/07/owl#Nothing>)\n)\n",
        )?;
        write(
            "union.owl",
            "Ontology(<http://cases.example/union>\n  SubClassOf(<http://cases.example#A> ObjectUnionOf(<http://cases.example#B> <http://cases.example#C>))\n)\n",
        )?;
        write(
            "entailed.owl",
            "Ontology(SubClassOf(<http://cases.example#A> <http://cases.example#C>))\n",
        )?;
        write(
            "unrelated.owl",
            "Ontology(SubClassOf(<http://cases.example#X> <http://cases.example#Y>))\n",
        )?;
        write(
            "distant.owl",
            "Ontology(SubClassOf(<http://cases.example#A> <http://cases.example#D>))\n",
        )?;
        write(
            "manifest.xml",
            r#"<testsuite>
  <test id="c1" kind="ConsistencyTest" input="consistent.owl"/>
  <test id="c2" kind="InconsistencyTest" input="inconsistent.owl"/>
  <test id="c3" kind="ConsistencyTest" input="union.owl"/>
  <test id="e1" kind="PositiveEntailmentTest" input="consistent.owl" conclusion="entailed.owl"/>
  <test id="e2" kind="NegativeEntailmentTest" input="consistent.owl" conclusion="unrelated.owl"/>
  <test id="e3" kind="PositiveEntailmentTest" input="union.owl" conclusion="distant.owl"/>
  <test id="f1" kind="InconsistencyTest" input="consistent.owl"/>
</testsuite>
"#,
        )?;
        let report = run_suite(
            &dir.path().join("manifest.xml"),
            ComplianceMode::Strict,
            &ReasonerConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        let rendered = render_report(&report);
        let expected = "c1: Pass (consistent)\n\
                        c2: Pass (inconsistent)\n\
                        c3: Unknown (unknown)\n\
                        e1: Pass (Entailment)\n\
                        e2: Pass (NoEntailment)\n\
                        e3: Unknown (Unknown)\n\
                        f1: Fail (consistent)\n\
                        Summary: 4 passed, 1 failed, 2 unknown\n";
        ensure!(
            rendered == expected,
            "report text diverges\n--- got ---\n{rendered}--- want ---\n{expected}"
        );
        ensure!(report.is_failing(), "a Fail outcome must fail the suite");
        ensure!(
            report.passed() == 4 && report.failed() == 1 && report.unknown() == 2,
            "counters disagree with the rendered summary"
        );

        let clean = parse_ontology(
            "Ontology(SubClassOf(<http://cases.example#A> <http://cases.example#B>))",
        )
        .expect("parses");
        ensure!(
            detected_profile(&clean.ontology) == "EL",
            "clean taxonomy must report profile EL, got {}",
            detected_profile(&clean.ontology)
        );
        let union = parse_ontology(
            "Ontology(SubClassOf(<http://cases.example#A> ObjectUnionOf(<http://cases.example#B> <http://cases.example#C>)))",
        )
        .expect("parses with a warning");
        ensure!(
            detected_profile(&union.ontology) == "UNSUPPORTED(ObjectUnionOf)",
            "union must name the offending construct, got {}",
            detected_profile(&union.ontology)
        );
        Ok("verdict lines, summary and profile strings match the published vocabulary".to_string())
    })());
}

// --------------------------------------------------------------- criterion 5

#[test]
fn criterion_05_import_closure_and_offline_replay() {
    criterion(5, "import closure + offline replay", (|| {
        let stub = StubRepository::serve();
        let scratch = TempDir::new().map_err(|e| e.to_string())?;
        let client = HttpClient::new(None);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for case in 0..200u32 {
            let nodes = rng.random_range(1..=8usize);
            // adjacency[i] lists which stub documents i imports; 0 is the
            // local root and is never itself served.
            let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); nodes];
            for (i, row) in adjacency.iter_mut().enumerate() {
                for j in 1..nodes {
                    if i != j && rng.random_bool(0.22) {
                        row.push(j);
                    }
                }
            }
            let url_of = |j: usize| format!("{}/c{case}/o{j}.owl", stub.url());
            for i in 1..nodes {
                let imports: String = adjacency[i]
                    .iter()
                    .map(|&j| format!("  Import(<{}>)\n", url_of(j)))
                    .collect();
                let document = format!("Ontology(<{}>\n{imports})\n", url_of(i));
                stub.put_document(&format!("c{case}/o{i}.owl"), document.as_bytes());
            }
            let imports: String = adjacency[0]
                .iter()
                .map(|&j| format!("  Import(<{}>)\n", url_of(j)))
                .collect();
            let root_doc =
                format!("Ontology(<http://imports.example/c{case}/root>\n{imports})\n");
            let root = parse_ontology(&root_doc)
                .map_err(|e| format!("case {case}: {}", e.first_error()))?;

            // Oracle: plain reachability from the root, root excluded.
            let mut reachable: BTreeSet<usize> = BTreeSet::new();
            let mut queue: Vec<usize> = adjacency[0].clone();
            while let Some(j) = queue.pop() {
                if reachable.insert(j) {
                    queue.extend(adjacency[j].iter().copied());
                }
            }
            let expected: BTreeSet<String> = reachable.iter().map(|&j| url_of(j)).collect();

            let store = LocalRepository::new(scratch.path().join(format!("store{case}")));
            let online = resolve_imports(&root.ontology, &Catalog::new(), &store, &[], false, &client)
                .map_err(|e| format!("case {case}: online resolution: {e}"))?;
            let closure: BTreeSet<String> = online
                .closure
                .iter()
                .map(|o| o.ontology_iri().map(|iri| iri.to_string()).unwrap_or_default())
                .collect();
            ensure!(
                closure == expected,
                "case {case}: closure diverges from the reachability oracle\ngot  {closure:?}\nwant {expected:?}"
            );
            ensure!(
                online.closure.len() == expected.len(),
                "case {case}: a document was visited twice"
            );

            let hits_before = stub.hits();
            let offline = resolve_imports(&root.ontology, &online.catalog, &store, &[], true, &client)
                .map_err(|e| format!("case {case}: offline replay: {e}"))?;
            let replay: BTreeSet<String> = offline
                .closure
                .iter()
                .map(|o| o.ontology_iri().map(|iri| iri.to_string()).unwrap_or_default())
                .collect();
            ensure!(replay == expected, "case {case}: offline closure diverges");
            ensure!(
                stub.hits() == hits_before,
                "case {case}: offline replay touched the network"
            );
        }
        Ok("200 random import graphs resolve to the reachable set and replay offline".to_string())
    })());
}

// --------------------------------------------------------------- criterion 6

type TreeKey = (String, String, Option<String>);

fn tree_key(coordinate: &Coordinate) -> TreeKey {
    (
        coordinate.group_id.clone(),
        coordinate.artifact_id.clone(),
        coordinate.classifier.clone(),
    )
}

fn random_tree(rng: &mut ChaCha8Rng) -> DependencyNode {
    fn grow(rng: &mut ChaCha8Rng, depth: usize, budget: &mut usize) -> Vec<DependencyNode> {
        if depth >= 5 {
            return Vec::new();
        }
        let want = rng.random_range(0..=3usize);
        let mut children = Vec::new();
        for index in 0..want {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            let artifact = rng.random_range(0..5u32);
            let version = rng.random_range(1..=4u32);
            let mut node = DependencyNode {
                coordinate: Coordinate::new(
                    "dep.pool",
                    format!("a{artifact}"),
                    format!("{version}.0"),
                    "owl",
                    None,
                )
                .expect("valid coordinate"),
                depth: depth + 1,
                declaration_index: index,
                children: Vec::new(),
            };
            node.children = grow(rng, depth + 1, budget);
            children.push(node);
        }
        children
    }
    let mut budget = rng.random_range(1..=14usize);
    let mut root = DependencyNode {
        coordinate: Coordinate::new("dep.pool", "root", "1.0", "owl", None).expect("valid"),
        depth: 0,
        declaration_index: 0,
        children: Vec::new(),
    };
    root.children = grow(rng, 0, &mut budget);
    root
}

/// Brute force: every node ranked by (depth, declaration-index path); the
/// smallest rank wins its (group, artifact, classifier) key.
fn mediation_oracle(root: &DependencyNode) -> BTreeMap<TreeKey, Coordinate> {
    fn walk<'a>(
        node: &'a DependencyNode,
        path: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, &'a DependencyNode)>,
    ) {
        out.push((path.clone(), node));
        for child in &node.children {
            path.push(child.declaration_index);
            walk(child, path, out);
            path.pop();
        }
    }
    let mut entries = Vec::new();
    walk(root, &mut Vec::new(), &mut entries);
    let mut best: BTreeMap<TreeKey, (usize, Vec<usize>, Coordinate)> = BTreeMap::new();
    for (path, node) in entries {
        let key = tree_key(&node.coordinate);
        let keep_existing = match best.get(&key) {
            Some((depth, existing, _)) => (*depth, existing.clone()) <= (node.depth, path.clone()),
            None => false,
        };
        if !keep_existing {
            best.insert(key, (node.depth, path, node.coordinate.clone()));
        }
    }
    best.into_iter().map(|(k, (_, _, c))| (k, c)).collect()
}

fn keys_under(node: &DependencyNode, out: &mut BTreeSet<TreeKey>) {
    out.insert(tree_key(&node.coordinate));
    for child in &node.children {
        keys_under(child, out);
    }
}

#[test]
fn criterion_06_mediation_matches_brute_force_and_ignores_sibling_swaps() {
    criterion(6, "version mediation", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for case in 0..300u32 {
            let tree = random_tree(&mut rng);
            let report = mediate(&tree);
            let expected: BTreeSet<Coordinate> = mediation_oracle(&tree).into_values().collect();
            ensure!(
                report.selected == expected,
                "case {case}: selection diverges from brute force\ngot  {:?}\nwant {expected:?}",
                report.selected
            );
        }
        let mut swaps = 0u32;
        while swaps < 100 {
            let tree = random_tree(&mut rng);
            if tree.children.len() < 2 {
                continue;
            }
            swaps += 1;
            let mut swapped = tree.clone();
            swapped.children.swap(0, 1);
            swapped.children[0].declaration_index = 0;
            swapped.children[1].declaration_index = 1;

            let before: BTreeMap<TreeKey, String> = mediate(&tree)
                .selected
                .into_iter()
                .map(|c| (tree_key(&c), c.version.clone()))
                .collect();
            let after: BTreeMap<TreeKey, String> = mediate(&swapped)
                .selected
                .into_iter()
                .map(|c| (tree_key(&c), c.version.clone()))
                .collect();
            ensure!(
                before.keys().eq(after.keys()),
                "swap {swaps}: the set of selected keys changed"
            );

            // Only keys present under BOTH swapped subtrees can see their
            // tie-break flip; everything else must keep its version.
            let mut first = BTreeSet::new();
            let mut second = BTreeSet::new();
            keys_under(&tree.children[0], &mut first);
            keys_under(&tree.children[1], &mut second);
            let contested: BTreeSet<&TreeKey> = first.intersection(&second).collect();
            for (key, version) in &before {
                if !contested.contains(key) {
                    ensure!(
                        after[key] == *version,
                        "swap {swaps}: uncontested {key:?} moved from {version} to {}",
                        after[key]
                    );
                }
            }
        }
        Ok("300 trees match brute force; 100 sibling swaps leave uncontested picks alone".to_string())
    })());
}

// --------------------------------------------------------------- criterion 7

#[test]
fn criterion_07_diff_is_self_empty_antisymmetric_and_entailment_aware() {
    criterion(7, "diff laws", (|| {
        let config = ReasonerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let decorated = |rng: &mut ChaCha8Rng| -> String {
            let plan = random_el_plan(rng);
            let mut header = String::new();
            if rng.random_bool(0.3) {
                let n = rng.random_range(0..3u32);
                header.push_str(&format!("Prefix(p{n}:=<http://prefixes.example/{n}#>)\n"));
            }
            let mut body: Vec<String> = plan.iter().map(render_el_axiom).collect();
            if rng.random_bool(0.3) {
                let n = rng.random_range(0..3u32);
                body.insert(0, format!("  Import(<http://libs.example/lib{n}>)"));
            }
            format!(
                "{header}Ontology(<http://el.example/case>\n{}\n)\n",
                body.join("\n")
            )
        };
        for case in 0..150u32 {
            let doc = decorated(&mut rng);
            let parsed =
                parse_ontology(&doc).map_err(|e| format!("case {case}: {}", e.first_error()))?;
            let (added, removed) = structural_diff(&parsed.ontology, &parsed.ontology);
            ensure!(
                added.is_empty() && removed.is_empty(),
                "case {case}: structural self-diff is not empty"
            );
            let r = semantic_diff(&parsed.ontology, &parsed.ontology, &config)
                .map_err(|e| format!("case {case}: {e}"))?;
            ensure!(
                r.structural_added.is_empty()
                    && r.structural_removed.is_empty()
                    && r.semantic_added.is_empty()
                    && r.semantic_removed.is_empty()
                    && r.imports_added.is_empty()
                    && r.imports_removed.is_empty()
                    && r.prefixes_added.is_empty()
                    && r.prefixes_removed.is_empty(),
                "case {case}: semantic self-diff is not empty"
            );
        }
        for case in 0..150u32 {
            let a = parse_ontology(&decorated(&mut rng))
                .map_err(|e| format!("pair {case}: {}", e.first_error()))?;
            let b = parse_ontology(&decorated(&mut rng))
                .map_err(|e| format!("pair {case}: {}", e.first_error()))?;
            let forward = semantic_diff(&a.ontology, &b.ontology, &config)
                .map_err(|e| format!("pair {case}: {e}"))?;
            let backward = semantic_diff(&b.ontology, &a.ontology, &config)
                .map_err(|e| format!("pair {case}: {e}"))?;
            ensure!(
                forward.structural_added == backward.structural_removed
                    && forward.structural_removed == backward.structural_added,
                "pair {case}: structural diff is not antisymmetric"
            );
            ensure!(
                forward.semantic_added == backward.semantic_removed
                    && forward.semantic_removed == backward.semantic_added,
                "pair {case}: semantic diff is not antisymmetric"
            );
            let iri_set = |v: &[Iri]| v.iter().cloned().collect::<BTreeSet<Iri>>();
            ensure!(
                iri_set(&forward.imports_added) == iri_set(&backward.imports_removed)
                    && iri_set(&forward.imports_removed) == iri_set(&backward.imports_added),
                "pair {case}: import diff is not antisymmetric"
            );
            let prefix_set =
                |v: &[(String, String)]| v.iter().cloned().collect::<BTreeSet<(String, String)>>();
            ensure!(
                prefix_set(&forward.prefixes_added) == prefix_set(&backward.prefixes_removed)
                    && prefix_set(&forward.prefixes_removed)
                        == prefix_set(&backward.prefixes_added),
                "pair {case}: prefix diff is not antisymmetric"
            );
        }
        // Adding an axiom the old version already entailed is a structural
        // change with no semantic movement, in both directions.
        let before = parse_ontology(
            "Ontology(\n  SubClassOf(<http://d/A> <http://d/B>)\n  SubClassOf(<http://d/B> <http://d/C>)\n)",
        )
        .expect("parses");
        let after = parse_ontology(
            "Ontology(\n  SubClassOf(<http://d/A> <http://d/B>)\n  SubClassOf(<http://d/B> <http://d/C>)\n  SubClassOf(<http://d/A> <http://d/C>)\n)",
        )
        .expect("parses");
        let report = semantic_diff(&before.ontology, &after.ontology, &config)
            .map_err(|e| e.to_string())?;
        ensure!(
            report.structural_added.len() == 1 && report.structural_removed.is_empty(),
            "exactly one axiom was added"
        );
        ensure!(
            report.semantic_added.is_empty() && report.semantic_removed.is_empty(),
            "an already-entailed addition must not move the inferred taxonomy"
        );
        let reverse = semantic_diff(&after.ontology, &before.ontology, &config)
            .map_err(|e| e.to_string())?;
        ensure!(
            reverse.structural_removed.len() == 1
                && reverse.semantic_added.is_empty()
                && reverse.semantic_removed.is_empty(),
            "removing a redundant axiom must not move the inferred taxonomy"
        );
        Ok("self-diffs empty, 150 pairs antisymmetric, redundant edits semantically silent".to_string())
    })());
}

// --------------------------------------------------------------- criterion 8

const FIXPOINT_CORPUS: &[&str] = &[
    "Ontology()",
    "Ontology(<http://fix.example/empty>)",
    "Ontology(<http://fix.example/versioned> <http://fix.example/versioned/2.0>)",
    "Prefix(ex:=<http://fix.example/ns#>)\nOntology(<http://fix.example/prefixed>\n  SubClassOf(ex:Sub ex:Sup)\n)",
    "Ontology(<http://fix.example/imports>\n  Import(<http://fix.example/upstream>)\n  SubClassOf(<http://fix.example/ns#A> <http://fix.example/ns#B>)\n)",
    "Ontology(<http://fix.example/annotated>\n  Annotation(<http://fix.example/ns#note> \"top level\")\n  SubClassOf(<http://f/A> <http://f/B>)\n)",
    "Ontology(\n  Declaration(Class(<http://f/C>))\n  Declaration(ObjectProperty(<http://f/r>))\n  Declaration(NamedIndividual(<http://f/i>))\n  Declaration(AnnotationProperty(<http://f/note>))\n)",
    "Ontology(\n  SubClassOf(<http://f/A> ObjectIntersectionOf(<http://f/B> <http://f/C>))\n)",
    "Ontology(\n  SubClassOf(ObjectIntersectionOf(<http://f/A> <http://f/B>) ObjectSomeValuesFrom(<http://f/r> <http://f/C>))\n)",
    "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)\nOntology(\n  SubClassOf(<http://f/A> ObjectSomeValuesFrom(<http://f/r> ObjectIntersectionOf(<http://f/B> owl:Thing)))\n)",
    "Ontology(\n  EquivalentClasses(<http://f/A> <http://f/B> <http://f/C>)\n)",
    "Ontology(\n  ClassAssertion(<http://f/A> <http://f/i>)\n  ObjectPropertyAssertion(<http://f/r> <http://f/i> <http://f/j>)\n)",
    "Ontology(\n  AnnotationAssertion(<http://f/note> <http://f/A> \"plain text\")\n)",
    "Ontology(\n  SubClassOf(Annotation(<http://f/tag> <http://f/aspects#one>) Annotation(<http://f/note> \"literal note\") <http://f/A> <http://f/B>)\n)",
    "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)\nOntology(\n  SubClassOf(<http://f/A> owl:Thing)\n  SubClassOf(owl:Nothing <http://f/B>)\n)",
    "Ontology(\n  SubClassOf(<http://f/A> ObjectUnionOf(<http://f/B> <http://f/C>))\n)",
    "Ontology(\n  DisjointClasses(<http://f/A> <http://f/B>)\n  FunctionalObjectProperty(<http://f/r>)\n)",
];

#[test]
fn criterion_08_serialization_fixpoint_and_deterministic_reports() {
    criterion(8, "serialization fixpoint + report determinism", (|| {
        let mut docs: Vec<String> = FIXPOINT_CORPUS.iter().map(|s| s.to_string()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            docs.push(el_document(&random_el_plan(&mut rng)));
        }
        for (i, doc) in docs.iter().enumerate() {
            let first =
                parse_ontology(doc).map_err(|e| format!("doc {i}: {}", e.first_error()))?;
            let s1 = serialize_ontology(&first.ontology);
            let second = parse_ontology(&s1)
                .map_err(|e| format!("doc {i}: reparse: {}", e.first_error()))?;
            let s2 = serialize_ontology(&second.ontology);
            ensure!(
                s1 == s2,
                "doc {i}: serialize is not a fixpoint\n--- first ---\n{s1}--- second ---\n{s2}"
            );
            ensure!(
                first.ontology.axiom_set() == second.ontology.axiom_set(),
                "doc {i}: axioms change across a round trip"
            );
            ensure!(
                first.ontology.ontology_iri() == second.ontology.ontology_iri(),
                "doc {i}: ontology name changes across a round trip"
            );
            ensure!(
                first.ontology.imports() == second.ontology.imports(),
                "doc {i}: imports change across a round trip"
            );
            ensure!(
                first.ontology.prefixes() == second.ontology.prefixes(),
                "doc {i}: prefixes change across a round trip"
            );
        }
        let renderers: [(&str, fn(&Ontology) -> String); 3] = [
            ("summary", |o| summary_report(o)),
            ("technical", |o| technical_report(o, 10)),
            ("graph", |o| emit_graph(o)),
        ];
        for (i, doc) in docs.iter().enumerate().take(FIXPOINT_CORPUS.len()) {
            let first = parse_ontology(doc).expect("parsed above");
            let reparsed =
                parse_ontology(&serialize_ontology(&first.ontology)).expect("reparsed above");
            for (label, render) in renderers {
                let r1 = render(&first.ontology);
                let r2 = render(&first.ontology);
                ensure!(r1 == r2, "doc {i}: {label} report differs between two runs");
                let r3 = render(&reparsed.ontology);
                ensure!(
                    r1 == r3,
                    "doc {i}: {label} report differs after a round trip"
                );
            }
        }
        Ok(format!(
            "{} documents reach a serialization fixpoint; reports render byte-identical",
            docs.len()
        ))
    })());
}

// --------------------------------------------------------------- criterion 9

#[test]
fn criterion_09_store_layout_and_integrity() {
    criterion(9, "store layout + integrity", (|| {
        let camera = Coordinate::parse("xfront.com.owl.ontologies:Camera-OWL-Ontology:1.0-SNAPSHOT:owl")
            .map_err(|e| e.to_string())?;
        let camera_path = coordinate_to_path(&camera);
        ensure!(
            camera_path
                == "xfront/com/owl/ontologies/Camera-OWL-Ontology/1.0-SNAPSHOT/Camera-OWL-Ontology-1.0-SNAPSHOT.owl",
            "snapshot artifact path diverges: {camera_path}"
        );

        let home = TempDir::new().map_err(|e| e.to_string())?;
        let store = LocalRepository::new(home.path());
        let pom = "<project>\n  <groupId>de.csw.ontomaven</groupId>\n  <artifactId>OntoMvnImport</artifactId>\n  <version>1.0-SNAPSHOT</version>\n</project>\n";
        let parsed = parse_descriptor(pom).map_err(|e| e.to_string())?;
        let document = "Ontology(<http://www.corporate-semantic-web.de/import>\n  SubClassOf(<http://i/A> <http://i/B>)\n)\n";
        let record = store
            .install(document.as_bytes(), &parsed.descriptor)
            .map_err(|e| e.to_string())?;

        let artifact = home
            .path()
            .join("de/csw/ontomaven/OntoMvnImport/1.0-SNAPSHOT/OntoMvnImport-1.0-SNAPSHOT.owl");
        ensure!(artifact.is_file(), "artifact missing at the groupId-derived path");
        ensure!(
            fs::read(&artifact).map_err(|e| e.to_string())? == document.as_bytes(),
            "installed bytes differ from the input"
        );
        let sidecar = artifact.with_extension("owl.sha256");
        ensure!(sidecar.is_file(), "checksum sidecar missing");
        let digest = fs::read_to_string(&sidecar).map_err(|e| e.to_string())?;
        ensure!(
            digest.trim() == sha256_hex(document.as_bytes()),
            "sidecar digest is not the artifact digest"
        );
        ensure!(
            record.content_hash == digest.trim(),
            "install record digest differs from the sidecar"
        );
        let pom_copy = artifact.with_file_name("OntoMvnImport-1.0-SNAPSHOT.pom");
        ensure!(pom_copy.is_file(), "descriptor copy missing next to the artifact");
        ensure!(
            home.path()
                .join("de/csw/ontomaven/OntoMvnImport/maven-metadata.xml")
                .is_file(),
            "version metadata missing at the artifact level"
        );

        let (bytes, _) = store
            .load(&parsed.descriptor.coordinate)
            .map_err(|e| e.to_string())?;
        ensure!(bytes == document.as_bytes(), "loaded bytes differ from installed bytes");

        fs::write(&sidecar, format!("{}\n", sha256_hex(b"something else")))
            .map_err(|e| e.to_string())?;
        match store.load(&parsed.descriptor.coordinate) {
            Err(RepoError::ChecksumMismatch { .. }) => {}
            Ok(_) => ensure!(false, "tampered sidecar must fail the load"),
            Err(other) => ensure!(false, "wrong error class for tampering: {other}"),
        }
        Ok("paths, sidecars, descriptor copies and tamper detection all check out".to_string())
    })());
}

// -------------------------------------------------------------- criterion 10

#[test]
fn criterion_10_publish_and_consume_pipeline() {
    criterion(10, "publish/consume pipeline", (|| {
        let started = Instant::now();
        let stub = StubRepository::serve();
        let producer = TempDir::new().map_err(|e| e.to_string())?;
        let consumer = TempDir::new().map_err(|e| e.to_string())?;
        let home_a = TempDir::new().map_err(|e| e.to_string())?;
        let home_b = TempDir::new().map_err(|e| e.to_string())?;

        let write = |root: &Path, rel: &str, text: &str| {
            let path = root.join(rel);
            fs::create_dir_all(path.parent().expect("has parent")).expect("mkdir");
            fs::write(&path, text).expect("write fixture");
        };

        write(
            producer.path(),
            "pom.xml",
            &format!(
                r#"<project>
  <groupId>de.pipeline</groupId>
  <artifactId>lib</artifactId>
  <version>1.0</version>
  <repositories>
    <repository>
      <id>hub</id>
      <url>{}</url>
    </repository>
  </repositories>
</project>
"#,
                stub.url()
            ),
        );
        write(
            producer.path(),
            "src/main/lib.owl",
            "Ontology(<http://pipeline.example/lib>\n  SubClassOf(<http://pipeline.example/lib#Base> <http://pipeline.example/lib#Thing>)\n)\n",
        );

        let run = |dir: &Path, home: &Path, args: &[&str]| {
            let output = Command::new(env!("CARGO_BIN_EXE_ontomvn"))
                .args(args)
                .current_dir(dir)
                .env("ONTOMVN_HOME", home)
                .env_remove("ONTOMVN_REPO_USER")
                .env_remove("ONTOMVN_REPO_PASS")
                .output()
                .expect("binary runs");
            (
                output.status.code().unwrap_or(-1),
                String::from_utf8_lossy(&output.stdout).to_string(),
                String::from_utf8_lossy(&output.stderr).to_string(),
            )
        };

        let (code, stdout, stderr) = run(producer.path(), home_a.path(), &["deploy"]);
        ensure!(
            code == 0,
            "publish run exited {code}\nstdout:\n{stdout}\nstderr:\n{stderr}"
        );
        ensure!(
            stub.document("de/pipeline/lib/1.0/lib-1.0.owl").is_some(),
            "artifact never reached the shared repository"
        );
        ensure!(
            stub.document("de/pipeline/lib/1.0/lib-1.0.pom").is_some(),
            "descriptor never reached the shared repository"
        );

        write(
            consumer.path(),
            "pom.xml",
            &format!(
                r#"<project>
  <groupId>de.pipeline</groupId>
  <artifactId>app</artifactId>
  <version>2.0</version>
  <dependencies>
    <dependency>
      <groupId>de.pipeline</groupId>
      <artifactId>lib</artifactId>
      <version>1.0</version>
    </dependency>
  </dependencies>
  <repositories>
    <repository>
      <id>hub</id>
      <url>{}</url>
    </repository>
  </repositories>
  <build>
    <plugins>
      <plugin>
        <artifactId>ontomvn-plugin</artifactId>
        <executions>
          <execution>
            <goals>
              <goal>apply-aspects</goal>
            </goals>
          </execution>
        </executions>
        <configuration>
          <userAspects>
            <aspect>http://pipeline.example/aspects#Keep</aspect>
          </userAspects>
        </configuration>
      </plugin>
    </plugins>
  </build>
</project>
"#,
                stub.url()
            ),
        );
        write(
            consumer.path(),
            "src/main/app.owl",
            "Ontology(<http://pipeline.example/app>\n  SubClassOf(Annotation(<http://corporate-semantic-web.de/aspectOWL#hasAspect> <http://pipeline.example/aspects#Keep>) <http://pipeline.example/app#A> <http://pipeline.example/app#B>)\n  SubClassOf(Annotation(<http://corporate-semantic-web.de/aspectOWL#hasAspect> <http://pipeline.example/aspects#Drop>) <http://pipeline.example/app#C> <http://pipeline.example/app#D>)\n  SubClassOf(<http://pipeline.example/app#B> <http://pipeline.example/app#E>)\n)\n",
        );
        write(
            consumer.path(),
            "src/test/ontology-tests.xml",
            r#"<testsuite>
  <test id="sane" kind="ConsistencyTest" input="cases/plain.owl"/>
  <test id="chain" kind="PositiveEntailmentTest" input="cases/plain.owl" conclusion="cases/goal.owl"/>
</testsuite>
"#,
        );
        write(
            consumer.path(),
            "src/test/cases/plain.owl",
            "Ontology(\n  SubClassOf(<http://t/A> <http://t/B>)\n  SubClassOf(<http://t/B> <http://t/C>)\n)\n",
        );
        write(
            consumer.path(),
            "src/test/cases/goal.owl",
            "Ontology(SubClassOf(<http://t/A> <http://t/C>))\n",
        );

        let (code, stdout, stderr) = run(consumer.path(), home_b.path(), &["package"]);
        ensure!(
            code == 0,
            "consume run exited {code}\nstdout:\n{stdout}\nstderr:\n{stderr}"
        );
        ensure!(
            stdout.contains("resolved de.pipeline:lib:1.0") && stdout.contains("remote hub"),
            "dependency did not come from the shared repository:\n{stdout}"
        );
        ensure!(
            stdout.contains("Summary: 2 passed, 0 failed, 0 unknown"),
            "bundled test suite did not pass:\n{stdout}"
        );
        let base = consumer.path().join("target/app-2.0.owl");
        let woven = consumer.path().join("target/app-2.0-aspects.owl");
        ensure!(base.is_file() && woven.is_file(), "packaged artifacts missing");
        let woven_text = fs::read_to_string(&woven).map_err(|e| e.to_string())?;
        ensure!(
            woven_text.contains("app#A") && !woven_text.contains("app#C"),
            "woven artifact selected the wrong axioms"
        );
        ensure!(
            woven_text.contains("app#E"),
            "untagged axiom should survive with originals included by default"
        );
        ensure!(
            home_b
                .path()
                .join("repository/de/pipeline/lib/1.0/lib-1.0.owl")
                .is_file(),
            "fetched dependency not cached in the local store"
        );
        ensure!(stub.hits() > 0, "pipeline never touched the shared repository");
        let elapsed = started.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 10.0,
            "pipeline took {elapsed:?}; budget is 10s"
        );
        Ok(format!("publish + consume round trip in {elapsed:.2?}"))
    })());
}
