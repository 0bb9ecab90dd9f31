//! Aspect-oriented ontology configuration: axioms are tagged with aspect
//! IRIs through annotations, and weaving selects the modules named by the
//! configured selectors, optionally together with the untagged base module.

use std::collections::BTreeMap;
use std::fmt;

use crate::iri::{Iri, IriError};
use crate::model::{Annotation, Ontology};

/// Annotation property linking an axiom to its aspects, unless overridden.
pub const DEFAULT_ASPECTS_IRI: &str = "http://corporate-semantic-web.de/aspectOWL#hasAspect";

/// Ontology-level provenance annotation recording which selectors produced
/// a woven document.
pub const APPLIED_ASPECTS_IRI: &str = "http://corporate-semantic-web.de/aspectOWL#appliedAspects";

/// An aspect pattern: either a full IRI (exact match) or an IRI prefix
/// followed by `*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AspectSelector {
    pattern: String,
    prefix_len: Option<usize>,
}

impl AspectSelector {
    /// Parses a selector; the pattern minus any trailing `*` must be an
    /// absolute IRI.
    pub fn parse(pattern: impl Into<String>) -> Result<AspectSelector, IriError> {
        let pattern = pattern.into();
        let (body, prefix_len) = match pattern.strip_suffix('*') {
            Some(prefix) => (prefix, Some(prefix.len())),
            None => (pattern.as_str(), None),
        };
        Iri::new(body)?;
        Ok(AspectSelector {
            prefix_len,
            pattern,
        })
    }

    pub fn matches(&self, aspect: &Iri) -> bool {
        match self.prefix_len {
            Some(len) => aspect.as_str().starts_with(&self.pattern[..len]),
            None => aspect.as_str() == self.pattern,
        }
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }
}

impl fmt::Display for AspectSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeaveConfig {
    pub user_aspects: Vec<AspectSelector>,
    pub aspects_property: Iri,
    pub include_original_axioms: bool,
}

impl WeaveConfig {
    /// No selectors, default aspect property, base module included.
    pub fn new() -> WeaveConfig {
        WeaveConfig {
            user_aspects: Vec::new(),
            aspects_property: Iri::new(DEFAULT_ASPECTS_IRI).expect("well-formed constant"),
            include_original_axioms: true,
        }
    }
}

impl Default for WeaveConfig {
    fn default() -> Self {
        WeaveConfig::new()
    }
}

/// Every aspect IRI in use, with the number of axioms carrying it. An
/// axiom tagged with several aspects counts once under each.
pub fn list_aspects(ontology: &Ontology, aspects_property: &Iri) -> BTreeMap<Iri, usize> {
    let mut counts = BTreeMap::new();
    for axiom in ontology.axioms() {
        for aspect in axiom.aspects(aspects_property) {
            *counts.entry(aspect).or_insert(0) += 1;
        }
    }
    counts
}

#[derive(Debug, Clone)]
pub struct Woven {
    pub ontology: Ontology,
    /// Selector patterns that matched no axiom — reported, never fatal.
    pub unmatched_selectors: Vec<String>,
}

/// Extracts the module named by the configuration: axioms whose aspects
/// match at least one selector, plus the aspect-free base module when
/// `include_original_axioms` is set. Axioms are kept verbatim; header,
/// imports and prefixes are preserved, and an ontology-level
/// `appliedAspects` annotation records the selector patterns.
pub fn apply_aspects(ontology: &Ontology, config: &WeaveConfig) -> Woven {
    let mut woven = ontology.clone();
    let mut matched = vec![false; config.user_aspects.len()];
    let keep: Vec<bool> = ontology
        .axioms()
        .iter()
        .map(|axiom| {
            let aspects = axiom.aspects(&config.aspects_property);
            if aspects.is_empty() {
                return config.include_original_axioms;
            }
            let mut hit = false;
            for aspect in &aspects {
                for (i, selector) in config.user_aspects.iter().enumerate() {
                    if selector.matches(aspect) {
                        matched[i] = true;
                        hit = true;
                    }
                }
            }
            hit
        })
        .collect();
    woven.retain_axioms(|i, _| keep[i]);
    let joined = config
        .user_aspects
        .iter()
        .map(AspectSelector::pattern)
        .collect::<Vec<_>>()
        .join(", ");
    woven.add_annotation(Annotation::literal(
        Iri::new(APPLIED_ASPECTS_IRI).expect("well-formed constant"),
        joined,
    ));
    let unmatched_selectors = config
        .user_aspects
        .iter()
        .zip(&matched)
        .filter(|(_, hit)| !**hit)
        .map(|(s, _)| s.pattern.clone())
        .collect();
    Woven {
        ontology: woven,
        unmatched_selectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axiom, ClassExpression};

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn tagged(n: u32, aspects: &[&str]) -> Axiom {
        let sub = ClassExpression::named(iri(&format!("http://e/Sub{n}")));
        let sup = ClassExpression::named(iri(&format!("http://e/Sup{n}")));
        Axiom::sub_class_of(sub, sup).with_annotations(
            aspects
                .iter()
                .map(|a| Annotation::iri(iri(DEFAULT_ASPECTS_IRI), iri(a))),
        )
    }

    fn fixture() -> Ontology {
        // Three axioms tagged Reputation123, one tagged prov_789, one
        // carrying both, one untagged.
        let mut o = Ontology::new();
        o.set_ontology_iri(iri("http://example.org/reputation"));
        o.add_axiom(tagged(1, &["http://example.org/reputation#Reputation123"]));
        o.add_axiom(tagged(2, &["http://example.org/reputation#Reputation123"]));
        o.add_axiom(tagged(3, &["http://example.org/reputation#Reputation123"]));
        o.add_axiom(tagged(4, &["http://example.org/provenance#prov_789"]));
        o.add_axiom(tagged(
            5,
            &[
                "http://example.org/reputation#Reputation123",
                "http://example.org/provenance#prov_789",
            ],
        ));
        o.add_axiom(tagged(6, &[]));
        o
    }

    fn weave(o: &Ontology, patterns: &[&str], include_base: bool) -> Woven {
        let config = WeaveConfig {
            user_aspects: patterns
                .iter()
                .map(|p| AspectSelector::parse(*p).unwrap())
                .collect(),
            include_original_axioms: include_base,
            ..WeaveConfig::new()
        };
        apply_aspects(o, &config)
    }

    #[test]
    fn selector_exact_and_prefix() {
        let exact = AspectSelector::parse("http://e/a#X").unwrap();
        assert!(exact.matches(&iri("http://e/a#X")));
        assert!(!exact.matches(&iri("http://e/a#XY")));
        let prefix = AspectSelector::parse("http://e/a#*").unwrap();
        assert!(prefix.matches(&iri("http://e/a#X")));
        assert!(prefix.matches(&iri("http://e/a#anything")));
        assert!(!prefix.matches(&iri("http://e/b#X")));
        assert_eq!(prefix.to_string(), "http://e/a#*");
    }

    #[test]
    fn selector_pattern_must_be_absolute() {
        assert!(AspectSelector::parse("relative#x").is_err());
        assert!(AspectSelector::parse("*").is_err());
    }

    #[test]
    fn aspect_counts() {
        let counts = list_aspects(&fixture(), &iri(DEFAULT_ASPECTS_IRI));
        assert_eq!(
            counts.get(&iri("http://example.org/reputation#Reputation123")),
            Some(&4)
        );
        assert_eq!(
            counts.get(&iri("http://example.org/provenance#prov_789")),
            Some(&2)
        );
        assert_eq!(counts.len(), 2);
        assert!(list_aspects(&Ontology::new(), &iri(DEFAULT_ASPECTS_IRI)).is_empty());
    }

    #[test]
    fn weave_selects_modules_and_base() {
        let o = fixture();
        let both = weave(
            &o,
            &[
                "http://example.org/reputation#Reputation123",
                "http://example.org/provenance#prov_789",
            ],
            true,
        );
        assert_eq!(both.ontology.axioms().len(), 6);
        assert!(both.unmatched_selectors.is_empty());

        let only_tagged = weave(
            &o,
            &[
                "http://example.org/reputation#Reputation123",
                "http://example.org/provenance#prov_789",
            ],
            false,
        );
        assert_eq!(only_tagged.ontology.axioms().len(), 5);

        let reputation_only = weave(&o, &["http://example.org/reputation#Reputation123"], false);
        // Axioms 1, 2, 3 and the doubly tagged 5.
        assert_eq!(reputation_only.ontology.axioms().len(), 4);
    }

    #[test]
    fn empty_config_without_base_is_empty() {
        let woven = weave(&fixture(), &[], false);
        assert!(woven.ontology.axioms().is_empty());
        // Header survives.
        assert_eq!(
            woven.ontology.ontology_iri(),
            Some(&iri("http://example.org/reputation"))
        );
    }

    #[test]
    fn prefix_selector_pulls_whole_namespace() {
        let woven = weave(&fixture(), &["http://example.org/reputation#*"], false);
        assert_eq!(woven.ontology.axioms().len(), 4);
    }

    #[test]
    fn overlapping_aspects_yield_the_axiom_once() {
        let woven = weave(
            &fixture(),
            &[
                "http://example.org/reputation#Reputation123",
                "http://example.org/provenance#prov_789",
            ],
            false,
        );
        let doubly: Vec<_> = woven
            .ontology
            .axioms()
            .iter()
            .filter(|a| a.aspects(&iri(DEFAULT_ASPECTS_IRI)).len() == 2)
            .collect();
        assert_eq!(doubly.len(), 1);
    }

    #[test]
    fn unmatched_selectors_are_reported() {
        let woven = weave(
            &fixture(),
            &[
                "http://example.org/reputation#Reputation123",
                "http://nowhere/없#*",
            ],
            true,
        );
        assert_eq!(woven.unmatched_selectors, vec!["http://nowhere/없#*"]);
    }

    #[test]
    fn provenance_annotation_records_patterns() {
        let woven = weave(
            &fixture(),
            &[
                "http://example.org/reputation#Reputation123",
                "http://example.org/provenance#prov_789",
            ],
            true,
        );
        let expected = Annotation::literal(
            iri(APPLIED_ASPECTS_IRI),
            "http://example.org/reputation#Reputation123, http://example.org/provenance#prov_789",
        );
        assert!(woven.ontology.annotations().contains(&expected));
    }

    #[test]
    fn weaving_twice_is_stable() {
        let config = WeaveConfig {
            user_aspects: vec![
                AspectSelector::parse("http://example.org/provenance#*").unwrap()
            ],
            include_original_axioms: true,
            ..WeaveConfig::new()
        };
        let once = apply_aspects(&fixture(), &config);
        let twice = apply_aspects(&once.ontology, &config);
        assert_eq!(once.ontology.axiom_set(), twice.ontology.axiom_set());
        assert_eq!(once.ontology.annotations(), twice.ontology.annotations());
    }

    #[test]
    fn enlarging_selectors_is_monotone() {
        let o = fixture();
        let small = weave(&o, &["http://example.org/provenance#prov_789"], false);
        let large = weave(
            &o,
            &[
                "http://example.org/provenance#prov_789",
                "http://example.org/reputation#*",
            ],
            false,
        );
        for axiom in small.ontology.axioms() {
            assert!(large.ontology.contains_axiom(axiom));
        }
    }
}
