//! Ontology document model: class expressions, axioms, annotations.
//!
//! Values are canonical by construction. Conjunction and equivalence
//! operands are sorted by their serialized form and deduplicated, axiom
//! annotations live in an ordered set, and every constructor collapses
//! degenerate shapes (single-operand conjunctions). As a consequence two
//! axioms are equal exactly when their canonical serializations are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::iri::Iri;

pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("conjunction requires at least one operand")]
    EmptyConjunction,
    #[error("EquivalentClasses requires two distinct operands after deduplication")]
    DegenerateEquivalence,
    #[error("version IRI requires an ontology IRI")]
    VersionWithoutOntologyIri,
    #[error("IRI {iri} is declared both as {first:?} and as {second:?}")]
    ConflictingDeclaration {
        iri: Iri,
        first: EntityKind,
        second: EntityKind,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpression {
    /// owl:Thing
    Top,
    /// owl:Nothing
    Bottom,
    Named(Iri),
    /// ObjectIntersectionOf. Operands sorted by canonical text, deduplicated,
    /// always two or more, never directly nested conjunctions from the
    /// constructor's point of view (nested ones stay as written, they are
    /// still canonical values in their own right).
    Conjunction(Vec<ClassExpression>),
    /// ObjectSomeValuesFrom over an object property.
    Existential { role: Iri, filler: Box<ClassExpression> },
}

impl ClassExpression {
    pub fn named(iri: Iri) -> ClassExpression {
        match iri.as_str() {
            OWL_THING => ClassExpression::Top,
            OWL_NOTHING => ClassExpression::Bottom,
            _ => ClassExpression::Named(iri),
        }
    }

    /// Builds a conjunction: operands are canonicalized, sorted and
    /// deduplicated; a single distinct operand collapses to that operand.
    pub fn conjunction(operands: Vec<ClassExpression>) -> Result<ClassExpression, ModelError> {
        if operands.is_empty() {
            return Err(ModelError::EmptyConjunction);
        }
        let mut ops: Vec<ClassExpression> =
            operands.into_iter().map(|o| o.into_canonical()).collect();
        ops.sort_by(|a, b| a.canonical_text().cmp(&b.canonical_text()));
        ops.dedup();
        if ops.len() == 1 {
            Ok(ops.pop().unwrap())
        } else {
            Ok(ClassExpression::Conjunction(ops))
        }
    }

    pub fn existential(role: Iri, filler: ClassExpression) -> ClassExpression {
        ClassExpression::Existential {
            role,
            filler: Box::new(filler.into_canonical()),
        }
    }

    /// Re-establishes the constructor invariants on an arbitrary value.
    pub fn into_canonical(self) -> ClassExpression {
        match self {
            ClassExpression::Top | ClassExpression::Bottom => self,
            ClassExpression::Named(iri) => ClassExpression::named(iri),
            ClassExpression::Conjunction(ops) => {
                ClassExpression::conjunction(ops).expect("non-empty by construction")
            }
            ClassExpression::Existential { role, filler } => {
                ClassExpression::existential(role, *filler)
            }
        }
    }

    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        match self {
            ClassExpression::Top => {
                out.push('<');
                out.push_str(OWL_THING);
                out.push('>');
            }
            ClassExpression::Bottom => {
                out.push('<');
                out.push_str(OWL_NOTHING);
                out.push('>');
            }
            ClassExpression::Named(iri) => {
                out.push('<');
                out.push_str(iri.as_str());
                out.push('>');
            }
            ClassExpression::Conjunction(ops) => {
                out.push_str("ObjectIntersectionOf(");
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    op.write_canonical(out);
                }
                out.push(')');
            }
            ClassExpression::Existential { role, filler } => {
                out.push_str("ObjectSomeValuesFrom(<");
                out.push_str(role.as_str());
                out.push_str("> ");
                filler.write_canonical(out);
                out.push(')');
            }
        }
    }

    /// All class IRIs mentioned at class positions.
    pub fn named_classes(&self, into: &mut BTreeSet<Iri>) {
        match self {
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Named(iri) => {
                into.insert(iri.clone());
            }
            ClassExpression::Conjunction(ops) => {
                for op in ops {
                    op.named_classes(into);
                }
            }
            ClassExpression::Existential { filler, .. } => filler.named_classes(into),
        }
    }

    /// All object property IRIs mentioned at role positions.
    pub fn roles(&self, into: &mut BTreeSet<Iri>) {
        match self {
            ClassExpression::Top | ClassExpression::Bottom | ClassExpression::Named(_) => {}
            ClassExpression::Conjunction(ops) => {
                for op in ops {
                    op.roles(into);
                }
            }
            ClassExpression::Existential { role, filler } => {
                into.insert(role.clone());
                filler.roles(into);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    AnnotationProperty,
    NamedIndividual,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Class => "Class",
            EntityKind::ObjectProperty => "ObjectProperty",
            EntityKind::DataProperty => "DataProperty",
            EntityKind::AnnotationProperty => "AnnotationProperty",
            EntityKind::NamedIndividual => "NamedIndividual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnnotationValue {
    Iri(Iri),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Annotation {
    pub property: Iri,
    pub value: AnnotationValue,
}

impl Annotation {
    pub fn iri(property: Iri, value: Iri) -> Annotation {
        Annotation {
            property,
            value: AnnotationValue::Iri(value),
        }
    }

    pub fn literal(property: Iri, value: impl Into<String>) -> Annotation {
        Annotation {
            property,
            value: AnnotationValue::Literal(value.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    SubClassOf {
        sub: ClassExpression,
        sup: ClassExpression,
    },
    /// Operands sorted by canonical text, deduplicated, two or more.
    EquivalentClasses(Vec<ClassExpression>),
    ClassAssertion {
        class: ClassExpression,
        individual: Iri,
    },
    /// ObjectPropertyAssertion.
    PropertyAssertion {
        role: Iri,
        subject: Iri,
        object: Iri,
    },
    Declaration {
        kind: EntityKind,
        entity: Iri,
    },
    AnnotationAssertion {
        property: Iri,
        subject: Iri,
        value: AnnotationValue,
    },
    /// A recognized OWL construct outside the supported subset, kept
    /// verbatim (single-space token form) so documents survive round trips
    /// and reasoning can degrade to three-valued verdicts.
    Unsupported {
        construct: String,
        text: String,
    },
}

/// An axiom with its annotations. Construct through [`Axiom::new`] (or the
/// shorthand constructors), which canonicalizes; fields are read through
/// accessors so the invariants cannot be broken after the fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Axiom {
    kind: AxiomKind,
    annotations: BTreeSet<Annotation>,
}

impl Axiom {
    pub fn new(
        kind: AxiomKind,
        annotations: impl IntoIterator<Item = Annotation>,
    ) -> Result<Axiom, ModelError> {
        let kind = match kind {
            AxiomKind::SubClassOf { sub, sup } => AxiomKind::SubClassOf {
                sub: sub.into_canonical(),
                sup: sup.into_canonical(),
            },
            AxiomKind::EquivalentClasses(ops) => {
                let mut ops: Vec<ClassExpression> =
                    ops.into_iter().map(|o| o.into_canonical()).collect();
                ops.sort_by(|a, b| a.canonical_text().cmp(&b.canonical_text()));
                ops.dedup();
                if ops.len() < 2 {
                    return Err(ModelError::DegenerateEquivalence);
                }
                AxiomKind::EquivalentClasses(ops)
            }
            AxiomKind::ClassAssertion { class, individual } => AxiomKind::ClassAssertion {
                class: class.into_canonical(),
                individual,
            },
            other @ (AxiomKind::PropertyAssertion { .. }
            | AxiomKind::Declaration { .. }
            | AxiomKind::AnnotationAssertion { .. }
            | AxiomKind::Unsupported { .. }) => other,
        };
        Ok(Axiom {
            kind,
            annotations: annotations.into_iter().collect(),
        })
    }

    pub fn sub_class_of(sub: ClassExpression, sup: ClassExpression) -> Axiom {
        Axiom::new(AxiomKind::SubClassOf { sub, sup }, []).expect("cannot fail")
    }

    pub fn declaration(kind: EntityKind, entity: Iri) -> Axiom {
        Axiom::new(AxiomKind::Declaration { kind, entity }, []).expect("cannot fail")
    }

    pub fn kind(&self) -> &AxiomKind {
        &self.kind
    }

    pub fn annotations(&self) -> &BTreeSet<Annotation> {
        &self.annotations
    }

    pub fn with_annotations(mut self, annotations: impl IntoIterator<Item = Annotation>) -> Axiom {
        self.annotations.extend(annotations);
        self
    }

    /// Aspect IRIs carried by this axiom: values of annotations whose
    /// property equals `aspect_property` and whose value is an IRI.
    /// Literal-valued annotations under the same property are ignored.
    pub fn aspects(&self, aspect_property: &Iri) -> BTreeSet<Iri> {
        self.annotations
            .iter()
            .filter(|a| &a.property == aspect_property)
            .filter_map(|a| match &a.value {
                AnnotationValue::Iri(iri) => Some(iri.clone()),
                AnnotationValue::Literal(_) => None,
            })
            .collect()
    }

    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        let (keyword, write_args): (&str, Box<dyn Fn(&mut String) + '_>) = match &self.kind {
            AxiomKind::SubClassOf { sub, sup } => (
                "SubClassOf",
                Box::new(move |out: &mut String| {
                    sub.write_canonical(out);
                    out.push(' ');
                    sup.write_canonical(out);
                }),
            ),
            AxiomKind::EquivalentClasses(ops) => (
                "EquivalentClasses",
                Box::new(move |out: &mut String| {
                    for (i, op) in ops.iter().enumerate() {
                        if i > 0 {
                            out.push(' ');
                        }
                        op.write_canonical(out);
                    }
                }),
            ),
            AxiomKind::ClassAssertion { class, individual } => (
                "ClassAssertion",
                Box::new(move |out: &mut String| {
                    class.write_canonical(out);
                    out.push(' ');
                    write_iri(out, individual);
                }),
            ),
            AxiomKind::PropertyAssertion {
                role,
                subject,
                object,
            } => (
                "ObjectPropertyAssertion",
                Box::new(move |out: &mut String| {
                    write_iri(out, role);
                    out.push(' ');
                    write_iri(out, subject);
                    out.push(' ');
                    write_iri(out, object);
                }),
            ),
            AxiomKind::Declaration { kind, entity } => (
                "Declaration",
                Box::new(move |out: &mut String| {
                    out.push_str(kind.keyword());
                    out.push('(');
                    write_iri(out, entity);
                    out.push(')');
                }),
            ),
            AxiomKind::AnnotationAssertion {
                property,
                subject,
                value,
            } => (
                "AnnotationAssertion",
                Box::new(move |out: &mut String| {
                    write_iri(out, property);
                    out.push(' ');
                    write_iri(out, subject);
                    out.push(' ');
                    write_annotation_value(out, value);
                }),
            ),
            AxiomKind::Unsupported { text, .. } => {
                // Verbatim text, annotations are already part of it.
                out.push_str(text);
                return;
            }
        };
        out.push_str(keyword);
        out.push('(');
        let mut first = true;
        for ann in &self.annotations {
            if !first {
                out.push(' ');
            }
            write_annotation(out, ann);
            out.push(' ');
            first = false;
        }
        write_args(out);
        out.push(')');
    }
}

pub(crate) fn write_iri(out: &mut String, iri: &Iri) {
    out.push('<');
    out.push_str(iri.as_str());
    out.push('>');
}

pub(crate) fn write_annotation_value(out: &mut String, value: &AnnotationValue) {
    match value {
        AnnotationValue::Iri(iri) => write_iri(out, iri),
        AnnotationValue::Literal(text) => {
            out.push('"');
            for c in text.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    _ => out.push(c),
                }
            }
            out.push('"');
        }
    }
}

pub(crate) fn write_annotation(out: &mut String, ann: &Annotation) {
    out.push_str("Annotation(");
    write_iri(out, &ann.property);
    out.push(' ');
    write_annotation_value(out, &ann.value);
    out.push(')');
}

/// An ontology document. Axioms keep their first-insertion order and are
/// duplicate free; imports are ordered and pairwise distinct; prefixes map
/// names to expansion IRIs.
#[derive(Debug, Clone, Default)]
pub struct Ontology {
    ontology_iri: Option<Iri>,
    version_iri: Option<Iri>,
    imports: Vec<Iri>,
    annotations: BTreeSet<Annotation>,
    axioms: Vec<Axiom>,
    prefixes: BTreeMap<String, String>,
}

impl Ontology {
    pub fn new() -> Ontology {
        Ontology::default()
    }

    pub fn ontology_iri(&self) -> Option<&Iri> {
        self.ontology_iri.as_ref()
    }

    pub fn version_iri(&self) -> Option<&Iri> {
        self.version_iri.as_ref()
    }

    pub fn set_ontology_iri(&mut self, iri: Iri) {
        self.ontology_iri = Some(iri);
    }

    pub fn set_version_iri(&mut self, iri: Iri) -> Result<(), ModelError> {
        if self.ontology_iri.is_none() {
            return Err(ModelError::VersionWithoutOntologyIri);
        }
        self.version_iri = Some(iri);
        Ok(())
    }

    pub fn imports(&self) -> &[Iri] {
        &self.imports
    }

    /// Appends an import; duplicates are ignored. Returns whether it was new.
    pub fn add_import(&mut self, iri: Iri) -> bool {
        if self.imports.contains(&iri) {
            return false;
        }
        self.imports.push(iri);
        true
    }

    pub fn annotations(&self) -> &BTreeSet<Annotation> {
        &self.annotations
    }

    pub fn add_annotation(&mut self, annotation: Annotation) -> bool {
        self.annotations.insert(annotation)
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Inserts an axiom; inserting an equal axiom again leaves the ontology
    /// unchanged. Returns whether it was new.
    pub fn add_axiom(&mut self, axiom: Axiom) -> bool {
        if self.axioms.contains(&axiom) {
            return false;
        }
        self.axioms.push(axiom);
        true
    }

    pub fn contains_axiom(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    /// Keeps the axioms the predicate accepts, preserving order. The index
    /// is the axiom's position before filtering.
    pub fn retain_axioms(&mut self, mut keep: impl FnMut(usize, &Axiom) -> bool) {
        let mut index = 0;
        self.axioms.retain(|axiom| {
            let kept = keep(index, axiom);
            index += 1;
            kept
        });
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, name: impl Into<String>, expansion: impl Into<String>) {
        self.prefixes.insert(name.into(), expansion.into());
    }

    /// The axiom set as a sorted canonical-text view. Useful for set
    /// comparison independent of insertion order.
    pub fn axiom_set(&self) -> BTreeSet<&Axiom> {
        self.axioms.iter().collect()
    }
}

impl PartialEq for Ontology {
    /// Equality ignores axiom insertion order: two documents with the same
    /// axiom set, imports (in order), annotations and prefixes are equal.
    fn eq(&self, other: &Self) -> bool {
        self.ontology_iri == other.ontology_iri
            && self.version_iri == other.version_iri
            && self.imports == other.imports
            && self.annotations == other.annotations
            && self.prefixes == other.prefixes
            && self.axiom_set() == other.axiom_set()
    }
}

impl Eq for Ontology {}

/// Entity partition of an ontology: everything mentioned in axioms or
/// declarations, keyed by kind. Declarations win over usage inference; an
/// undeclared IRI used in two roles appears in both partitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub classes: BTreeSet<Iri>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
    pub annotation_properties: BTreeSet<Iri>,
    pub individuals: BTreeSet<Iri>,
}

impl Signature {
    fn partition_mut(&mut self, kind: EntityKind) -> &mut BTreeSet<Iri> {
        match kind {
            EntityKind::Class => &mut self.classes,
            EntityKind::ObjectProperty => &mut self.object_properties,
            EntityKind::DataProperty => &mut self.data_properties,
            EntityKind::AnnotationProperty => &mut self.annotation_properties,
            EntityKind::NamedIndividual => &mut self.individuals,
        }
    }
}

/// Computes the signature; IRIs declared under two different kinds are
/// reported, with the first declaration (in axiom order) winning in the
/// returned partition.
pub fn signature_lenient(ontology: &Ontology) -> (Signature, Vec<ModelError>) {
    let mut declared: BTreeMap<Iri, EntityKind> = BTreeMap::new();
    let mut conflicts = Vec::new();
    for axiom in ontology.axioms() {
        if let AxiomKind::Declaration { kind, entity } = axiom.kind() {
            match declared.get(entity) {
                None => {
                    declared.insert(entity.clone(), *kind);
                }
                Some(first) if first != kind => conflicts.push(ModelError::ConflictingDeclaration {
                    iri: entity.clone(),
                    first: *first,
                    second: *kind,
                }),
                Some(_) => {}
            }
        }
    }

    type Usage = BTreeMap<Iri, BTreeSet<EntityKind>>;
    fn record(used: &mut Usage, iri: &Iri, kind: EntityKind) {
        used.entry(iri.clone()).or_default().insert(kind);
    }
    fn record_expr(used: &mut Usage, expr: &ClassExpression) {
        let mut classes = BTreeSet::new();
        let mut roles = BTreeSet::new();
        expr.named_classes(&mut classes);
        expr.roles(&mut roles);
        for c in classes {
            used.entry(c).or_default().insert(EntityKind::Class);
        }
        for r in roles {
            used.entry(r).or_default().insert(EntityKind::ObjectProperty);
        }
    }

    let mut used: Usage = BTreeMap::new();
    for axiom in ontology.axioms() {
        for ann in axiom.annotations() {
            record(&mut used, &ann.property, EntityKind::AnnotationProperty);
        }
        match axiom.kind() {
            AxiomKind::SubClassOf { sub, sup } => {
                record_expr(&mut used, sub);
                record_expr(&mut used, sup);
            }
            AxiomKind::EquivalentClasses(ops) => {
                for op in ops {
                    record_expr(&mut used, op);
                }
            }
            AxiomKind::ClassAssertion { class, individual } => {
                record_expr(&mut used, class);
                record(&mut used, individual, EntityKind::NamedIndividual);
            }
            AxiomKind::PropertyAssertion {
                role,
                subject,
                object,
            } => {
                record(&mut used, role, EntityKind::ObjectProperty);
                record(&mut used, subject, EntityKind::NamedIndividual);
                record(&mut used, object, EntityKind::NamedIndividual);
            }
            AxiomKind::Declaration { .. } => {}
            AxiomKind::AnnotationAssertion { property, .. } => {
                // Subjects and IRI values are deliberately not classified:
                // annotations may point at anything.
                record(&mut used, property, EntityKind::AnnotationProperty);
            }
            AxiomKind::Unsupported { .. } => {}
        }
    }

    let mut sig = Signature::default();
    for (iri, kind) in &declared {
        sig.partition_mut(*kind).insert(iri.clone());
    }
    for (iri, kinds) in used {
        if let Some(kind) = declared.get(&iri) {
            sig.partition_mut(*kind).insert(iri);
        } else {
            for kind in kinds {
                sig.partition_mut(kind).insert(iri.clone());
            }
        }
    }
    (sig, conflicts)
}

/// Strict signature: errors when any IRI carries two declarations of
/// different kinds.
pub fn signature(ontology: &Ontology) -> Result<Signature, ModelError> {
    let (sig, mut conflicts) = signature_lenient(ontology);
    match conflicts.len() {
        0 => Ok(sig),
        _ => Err(conflicts.remove(0)),
    }
}

/// Class IRIs used at class positions or declared as classes. A usage-based
/// collection that never fails, for consumers that must tolerate
/// conflicting declarations.
pub fn named_classes(ontology: &Ontology) -> BTreeSet<Iri> {
    let mut classes = BTreeSet::new();
    for axiom in ontology.axioms() {
        match axiom.kind() {
            AxiomKind::SubClassOf { sub, sup } => {
                sub.named_classes(&mut classes);
                sup.named_classes(&mut classes);
            }
            AxiomKind::EquivalentClasses(ops) => {
                for op in ops {
                    op.named_classes(&mut classes);
                }
            }
            AxiomKind::ClassAssertion { class, .. } => class.named_classes(&mut classes),
            AxiomKind::Declaration {
                kind: EntityKind::Class,
                entity,
            } => {
                classes.insert(entity.clone());
            }
            _ => {}
        }
    }
    classes
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}
