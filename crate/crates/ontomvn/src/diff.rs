//! Structural and semantic comparison of two ontology documents.
//!
//! The structural diff is a plain set difference over canonicalized
//! axioms (annotations participate in identity). The semantic diff
//! classifies both documents and compares the entailed subsumptions over
//! the union of their class signatures, so a rephrased but logically
//! equal document diffs as structurally changed and semantically empty.

use std::collections::BTreeSet;

use crate::iri::Iri;
use crate::model::{named_classes, Axiom, Ontology, OWL_NOTHING, OWL_THING};
use crate::reasoner::{classify, Atom, ReasonerConfig, ReasonerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictNote {
    Exact,
    /// At least one document contained axioms the reasoner cannot
    /// interpret; the semantic sets cover only the interpretable part.
    ApproximateDueToProfileViolations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub structural_added: BTreeSet<Axiom>,
    pub structural_removed: BTreeSet<Axiom>,
    pub imports_added: Vec<Iri>,
    pub imports_removed: Vec<Iri>,
    /// (prefix name, expansion); a rebound prefix shows up as removed+added.
    pub prefixes_added: Vec<(String, String)>,
    pub prefixes_removed: Vec<(String, String)>,
    /// Named-class subsumptions entailed by `after` but not `before`.
    /// Top and Bottom appear under their owl: IRIs. Reflexive pairs and
    /// the always-true rows are excluded.
    pub semantic_added: BTreeSet<(Iri, Iri)>,
    pub semantic_removed: BTreeSet<(Iri, Iri)>,
    pub verdict_note: VerdictNote,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.structural_added.is_empty()
            && self.structural_removed.is_empty()
            && self.imports_added.is_empty()
            && self.imports_removed.is_empty()
            && self.prefixes_added.is_empty()
            && self.prefixes_removed.is_empty()
            && self.semantic_added.is_empty()
            && self.semantic_removed.is_empty()
    }
}

/// Axiom-set difference: (added, removed).
pub fn structural_diff(
    before: &Ontology,
    after: &Ontology,
) -> (BTreeSet<Axiom>, BTreeSet<Axiom>) {
    let before_set = before.axiom_set();
    let after_set = after.axiom_set();
    let added = after_set
        .difference(&before_set)
        .map(|a| (*a).clone())
        .collect();
    let removed = before_set
        .difference(&after_set)
        .map(|a| (*a).clone())
        .collect();
    (added, removed)
}

/// Entailed subsumption pairs over a fixed atom domain. Classes outside
/// the ontology's own signature only contribute the always-true rows;
/// an inconsistent ontology entails every pair.
fn entailed_pairs(
    ontology: &Ontology,
    domain: &BTreeSet<Atom>,
    config: &ReasonerConfig,
) -> Result<(BTreeSet<(Atom, Atom)>, bool), ReasonerError> {
    let classification = classify(ontology, config)?;
    let violated = !classification.violations.is_empty();
    let mut pairs = BTreeSet::new();
    if classification
        .subsumptions
        .contains(&(Atom::Top, Atom::Bottom))
    {
        for a in domain {
            for b in domain {
                pairs.insert((a.clone(), b.clone()));
            }
        }
        return Ok((pairs, violated));
    }
    for atom in domain {
        pairs.insert((atom.clone(), atom.clone()));
        pairs.insert((atom.clone(), Atom::Top));
        pairs.insert((Atom::Bottom, atom.clone()));
    }
    for (a, b) in classification.subsumptions {
        if domain.contains(&a) && domain.contains(&b) {
            pairs.insert((a, b));
        }
    }
    Ok((pairs, violated))
}

fn atom_iri(atom: &Atom) -> Iri {
    match atom {
        Atom::Top => Iri::new(OWL_THING).expect("well-formed constant"),
        Atom::Bottom => Iri::new(OWL_NOTHING).expect("well-formed constant"),
        Atom::Named(iri) => iri.clone(),
        Atom::Aux(_) | Atom::Individual(_) => unreachable!("internal atom in public diff"),
    }
}

/// Full comparison: structural axiom/import/prefix changes plus the
/// semantic subsumption delta over the union signature.
pub fn semantic_diff(
    before: &Ontology,
    after: &Ontology,
    config: &ReasonerConfig,
) -> Result<DiffReport, ReasonerError> {
    let (structural_added, structural_removed) = structural_diff(before, after);

    let before_imports: BTreeSet<&Iri> = before.imports().iter().collect();
    let after_imports: BTreeSet<&Iri> = after.imports().iter().collect();
    let imports_added = after_imports
        .difference(&before_imports)
        .map(|i| (*i).clone())
        .collect();
    let imports_removed = before_imports
        .difference(&after_imports)
        .map(|i| (*i).clone())
        .collect();

    let before_prefixes: BTreeSet<(&String, &String)> = before.prefixes().iter().collect();
    let after_prefixes: BTreeSet<(&String, &String)> = after.prefixes().iter().collect();
    let prefixes_added = after_prefixes
        .difference(&before_prefixes)
        .map(|(n, e)| ((*n).clone(), (*e).clone()))
        .collect();
    let prefixes_removed = before_prefixes
        .difference(&after_prefixes)
        .map(|(n, e)| ((*n).clone(), (*e).clone()))
        .collect();

    let mut domain: BTreeSet<Atom> = named_classes(before)
        .into_iter()
        .chain(named_classes(after))
        .map(Atom::Named)
        .collect();
    domain.insert(Atom::Top);
    domain.insert(Atom::Bottom);

    let (before_pairs, before_violated) = entailed_pairs(before, &domain, config)?;
    let (after_pairs, after_violated) = entailed_pairs(after, &domain, config)?;

    let to_public = |(a, b): &(Atom, Atom)| (atom_iri(a), atom_iri(b));
    let semantic_added = after_pairs
        .difference(&before_pairs)
        .filter(|(a, b)| a != b)
        .map(to_public)
        .collect();
    let semantic_removed = before_pairs
        .difference(&after_pairs)
        .filter(|(a, b)| a != b)
        .map(to_public)
        .collect();

    Ok(DiffReport {
        structural_added,
        structural_removed,
        imports_added,
        imports_removed,
        prefixes_added,
        prefixes_removed,
        semantic_added,
        semantic_removed,
        verdict_note: if before_violated || after_violated {
            VerdictNote::ApproximateDueToProfileViolations
        } else {
            VerdictNote::Exact
        },
    })
}

/// Deterministic plain-text rendering: a `== Structural ==` section with
/// import, prefix and axiom lines and a `== Semantic ==` section with
/// subsumption lines; removals (`-`) before additions (`+`), each sorted.
pub fn render_diff(report: &DiffReport) -> String {
    let mut out = String::new();
    out.push_str("== Structural ==\n");
    for import in &report.imports_removed {
        out.push_str(&format!("- Import(<{import}>)\n"));
    }
    for import in &report.imports_added {
        out.push_str(&format!("+ Import(<{import}>)\n"));
    }
    for (name, expansion) in &report.prefixes_removed {
        out.push_str(&format!("- Prefix({name}:=<{expansion}>)\n"));
    }
    for (name, expansion) in &report.prefixes_added {
        out.push_str(&format!("+ Prefix({name}:=<{expansion}>)\n"));
    }
    for axiom in &report.structural_removed {
        out.push_str(&format!("- {}\n", axiom.canonical_text()));
    }
    for axiom in &report.structural_added {
        out.push_str(&format!("+ {}\n", axiom.canonical_text()));
    }
    out.push_str("== Semantic ==\n");
    for (sub, sup) in &report.semantic_removed {
        out.push_str(&format!("- {sub} SubClassOf {sup}\n"));
    }
    for (sub, sup) in &report.semantic_added {
        out.push_str(&format!("+ {sub} SubClassOf {sup}\n"));
    }
    if report.verdict_note == VerdictNote::ApproximateDueToProfileViolations {
        out.push_str("note: approximate (unsupported constructs present)\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofs::parse_ontology;

    fn ont(text: &str) -> Ontology {
        parse_ontology(text).expect("test ontology parses").ontology
    }

    fn cfg() -> ReasonerConfig {
        ReasonerConfig::default()
    }

    fn pair(sub: &str, sup: &str) -> (Iri, Iri) {
        (
            Iri::new(format!("http://e/{sub}")).unwrap(),
            Iri::new(format!("http://e/{sup}")).unwrap(),
        )
    }

    #[test]
    fn identical_documents_diff_empty() {
        let o = ont(
            "Ontology(<http://e/o>
               SubClassOf(<http://e/A> <http://e/B>)
               ClassAssertion(<http://e/A> <http://e/i>)
             )",
        );
        let report = semantic_diff(&o, &o, &cfg()).unwrap();
        assert!(report.is_empty());
        assert_eq!(report.verdict_note, VerdictNote::Exact);
    }

    #[test]
    fn added_axiom_shows_structurally_and_semantically() {
        let before = ont("Ontology(SubClassOf(<http://e/A> <http://e/B>))");
        let after = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               SubClassOf(<http://e/B> <http://e/C>)
             )",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert_eq!(report.structural_added.len(), 1);
        assert!(report.structural_removed.is_empty());
        let expected: BTreeSet<(Iri, Iri)> =
            [pair("B", "C"), pair("A", "C")].into_iter().collect();
        assert_eq!(report.semantic_added, expected);
        assert!(report.semantic_removed.is_empty());
    }

    #[test]
    fn redundant_axiom_is_structural_only() {
        let before = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               SubClassOf(<http://e/B> <http://e/C>)
             )",
        );
        let after = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               SubClassOf(<http://e/B> <http://e/C>)
               SubClassOf(<http://e/A> <http://e/C>)
             )",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert_eq!(report.structural_added.len(), 1);
        assert!(report.semantic_added.is_empty());
        assert!(report.semantic_removed.is_empty());
    }

    #[test]
    fn swapping_arguments_swaps_the_report() {
        let a = ont("Ontology(SubClassOf(<http://e/A> <http://e/B>))");
        let b = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               SubClassOf(<http://e/B> <http://e/C>)
             )",
        );
        let forward = semantic_diff(&a, &b, &cfg()).unwrap();
        let backward = semantic_diff(&b, &a, &cfg()).unwrap();
        assert_eq!(forward.semantic_added, backward.semantic_removed);
        assert_eq!(forward.semantic_removed, backward.semantic_added);
        assert_eq!(forward.structural_added, backward.structural_removed);
    }

    #[test]
    fn annotation_change_is_a_structural_replacement() {
        let before = ont("Ontology(SubClassOf(<http://e/A> <http://e/B>))");
        let after = ont(
            "Ontology(SubClassOf(Annotation(<http://e/p> \"v2\") <http://e/A> <http://e/B>))",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert_eq!(report.structural_added.len(), 1);
        assert_eq!(report.structural_removed.len(), 1);
        assert!(report.semantic_added.is_empty());
    }

    #[test]
    fn import_and_prefix_changes_are_reported_separately() {
        let before = ont(
            "Prefix(a:=<http://e/a#>)
             Ontology(<http://e/o>
               Import(<http://e/old>)
             )",
        );
        let after = ont(
            "Prefix(b:=<http://e/b#>)
             Ontology(<http://e/o>
               Import(<http://e/new>)
             )",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert_eq!(report.imports_added, vec![Iri::new("http://e/new").unwrap()]);
        assert_eq!(
            report.imports_removed,
            vec![Iri::new("http://e/old").unwrap()]
        );
        assert_eq!(
            report.prefixes_added,
            vec![("b".to_string(), "http://e/b#".to_string())]
        );
        assert_eq!(
            report.prefixes_removed,
            vec![("a".to_string(), "http://e/a#".to_string())]
        );
        assert!(report.structural_added.is_empty());
    }

    #[test]
    fn unsatisfiable_class_surfaces_as_bottom_pair() {
        let before = ont("Ontology(Declaration(Class(<http://e/A>)))");
        let after = ont(
            "Ontology(SubClassOf(<http://e/A> <http://www.w3.org/2002/07/owl#Nothing>))",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert!(report
            .semantic_added
            .contains(&(Iri::new("http://e/A").unwrap(), Iri::new(OWL_NOTHING).unwrap())));
    }

    #[test]
    fn violations_mark_the_report_approximate() {
        let before = ont("Ontology(SubClassOf(<http://e/A> <http://e/B>))");
        let after = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               DisjointClasses(<http://e/A> <http://e/B>)
             )",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        assert_eq!(
            report.verdict_note,
            VerdictNote::ApproximateDueToProfileViolations
        );
        // The unsupported axiom still shows structurally.
        assert_eq!(report.structural_added.len(), 1);
    }

    #[test]
    fn render_is_deterministic_with_fixed_sections() {
        let before = ont("Ontology(SubClassOf(<http://e/A> <http://e/B>))");
        let after = ont(
            "Ontology(
               SubClassOf(<http://e/A> <http://e/B>)
               SubClassOf(<http://e/B> <http://e/C>)
             )",
        );
        let report = semantic_diff(&before, &after, &cfg()).unwrap();
        let text = render_diff(&report);
        assert_eq!(
            text,
            "== Structural ==\n\
             + SubClassOf(<http://e/B> <http://e/C>)\n\
             == Semantic ==\n\
             + http://e/A SubClassOf http://e/C\n\
             + http://e/B SubClassOf http://e/C\n"
        );
        assert_eq!(text, render_diff(&report));
    }

    #[test]
    fn render_of_empty_report_has_bare_sections() {
        let o = ont("Ontology()");
        let report = semantic_diff(&o, &o, &cfg()).unwrap();
        assert_eq!(render_diff(&report), "== Structural ==\n== Semantic ==\n");
    }
}
