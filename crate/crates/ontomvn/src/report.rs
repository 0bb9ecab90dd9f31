//! Documentation output: ontology summary, technical report with concept
//! groupings, and a DOT rendering of the told class hierarchy. All output
//! is deterministic — fixed section order, entities in IRI order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::iri::Iri;
use crate::model::{
    named_classes, signature_lenient, write_annotation, write_annotation_value, Axiom, AxiomKind,
    ClassExpression, Ontology,
};
use crate::reasoner::detected_profile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyStats {
    pub class_count: usize,
    pub object_property_count: usize,
    pub data_property_count: usize,
    pub annotation_property_count: usize,
    pub individual_count: usize,
    pub axiom_count: usize,
    pub import_count: usize,
    pub detected_profile: String,
}

pub fn stats(ontology: &Ontology) -> OntologyStats {
    let (signature, _) = signature_lenient(ontology);
    OntologyStats {
        class_count: signature.classes.len(),
        object_property_count: signature.object_properties.len(),
        data_property_count: signature.data_properties.len(),
        annotation_property_count: signature.annotation_properties.len(),
        individual_count: signature.individuals.len(),
        axiom_count: ontology.axioms().len(),
        import_count: ontology.imports().len(),
        detected_profile: detected_profile(ontology),
    }
}

/// A non-negative fraction kept in unreduced counted form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: usize,
    pub denominator: usize,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptGroup {
    pub representative: Iri,
    pub members: BTreeSet<Iri>,
    /// Internal subclass edges over all edges touching the group.
    pub cohesion: Ratio,
}

/// Undirected relatedness graph over named classes: subclass edges come
/// from told atomic subsumptions (SubClassOf and pairwise
/// EquivalentClasses), role edges connect each class mentioned outside an
/// existential to each class inside one, within the same axiom.
#[derive(Debug, Default)]
struct ClassGraph {
    nodes: BTreeSet<Iri>,
    subclass_edges: BTreeSet<(Iri, Iri)>,
    role_edges: BTreeSet<(Iri, Iri)>,
}

fn unordered(a: &Iri, b: &Iri) -> (Iri, Iri) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Splits an expression's named classes into those outside existential
/// fillers (anchors) and those inside (fillers).
fn split_named(
    expr: &ClassExpression,
    in_filler: bool,
    anchors: &mut BTreeSet<Iri>,
    fillers: &mut BTreeSet<Iri>,
) {
    match expr {
        ClassExpression::Top | ClassExpression::Bottom => {}
        ClassExpression::Named(iri) => {
            if in_filler {
                fillers.insert(iri.clone());
            } else {
                anchors.insert(iri.clone());
            }
        }
        ClassExpression::Conjunction(ops) => {
            for op in ops {
                split_named(op, in_filler, anchors, fillers);
            }
        }
        ClassExpression::Existential { filler, .. } => {
            split_named(filler, true, anchors, fillers);
        }
    }
}

fn class_graph(ontology: &Ontology) -> ClassGraph {
    let mut graph = ClassGraph {
        nodes: named_classes(ontology),
        ..ClassGraph::default()
    };
    for axiom in ontology.axioms() {
        let exprs: Vec<&ClassExpression> = match axiom.kind() {
            AxiomKind::SubClassOf { sub, sup } => vec![sub, sup],
            AxiomKind::EquivalentClasses(ops) => ops.iter().collect(),
            AxiomKind::ClassAssertion { class, .. } => vec![class],
            _ => continue,
        };
        // Told atomic subsumptions.
        match axiom.kind() {
            AxiomKind::SubClassOf {
                sub: ClassExpression::Named(a),
                sup: ClassExpression::Named(b),
            } if a != b => {
                graph.subclass_edges.insert(unordered(a, b));
            }
            AxiomKind::EquivalentClasses(ops) => {
                let atoms: Vec<&Iri> = ops
                    .iter()
                    .filter_map(|op| match op {
                        ClassExpression::Named(iri) => Some(iri),
                        _ => None,
                    })
                    .collect();
                for (i, a) in atoms.iter().enumerate() {
                    for b in &atoms[i + 1..] {
                        graph.subclass_edges.insert(unordered(a, b));
                    }
                }
            }
            _ => {}
        }
        let mut anchors = BTreeSet::new();
        let mut fillers = BTreeSet::new();
        for expr in exprs {
            split_named(expr, false, &mut anchors, &mut fillers);
        }
        if fillers.is_empty() {
            continue;
        }
        if anchors.is_empty() {
            // No class outside the existentials; relate the fillers.
            let list: Vec<&Iri> = fillers.iter().collect();
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    graph.role_edges.insert(unordered(a, b));
                }
            }
        } else {
            for anchor in &anchors {
                for filler in &fillers {
                    if anchor != filler {
                        graph.role_edges.insert(unordered(anchor, filler));
                    }
                }
            }
        }
    }
    graph
}

impl ClassGraph {
    fn adjacency(&self) -> BTreeMap<&Iri, BTreeSet<&Iri>> {
        let mut adjacency: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
        for node in &self.nodes {
            adjacency.entry(node).or_default();
        }
        for (a, b) in self.subclass_edges.iter().chain(&self.role_edges) {
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
        }
        adjacency
    }
}

/// Connected components of the relatedness graph, merged smallest-first
/// until at most `max_groups` remain. Representatives are the
/// highest-degree members (IRI order breaking ties); output is largest
/// group first.
pub fn concept_groups(ontology: &Ontology, max_groups: usize) -> Vec<ConceptGroup> {
    assert!(max_groups >= 1, "max_groups must be positive");
    let graph = class_graph(ontology);
    let adjacency = graph.adjacency();

    let mut components: Vec<BTreeSet<Iri>> = Vec::new();
    let mut seen: BTreeSet<&Iri> = BTreeSet::new();
    for start in &graph.nodes {
        if !seen.insert(start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        component.insert(start.clone());
        while let Some(node) = queue.pop_front() {
            for &next in &adjacency[node] {
                if seen.insert(next) {
                    component.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        components.push(component);
    }

    let degree = |iri: &Iri| adjacency.get(iri).map_or(0, |n| n.len());
    let representative = |members: &BTreeSet<Iri>| -> Iri {
        members
            .iter()
            .max_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a)))
            .expect("groups are non-empty")
            .clone()
    };

    while components.len() > max_groups {
        // The two smallest components merge; ties fall to the smaller
        // representative IRI.
        let mut order: Vec<usize> = (0..components.len()).collect();
        order.sort_by_key(|&i| (components[i].len(), representative(&components[i])));
        let (keep, drop) = (order[0], order[1]);
        let merged = components.remove(keep.max(drop));
        components[keep.min(drop)].extend(merged);
    }

    let mut groups: Vec<ConceptGroup> = components
        .into_iter()
        .map(|members| {
            let internal_subclass = graph
                .subclass_edges
                .iter()
                .filter(|(a, b)| members.contains(a) && members.contains(b))
                .count();
            let touching = graph
                .subclass_edges
                .iter()
                .chain(&graph.role_edges)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|(a, b)| members.contains(a) || members.contains(b))
                .count();
            let cohesion = if touching == 0 {
                Ratio {
                    numerator: 1,
                    denominator: 1,
                }
            } else {
                Ratio {
                    numerator: internal_subclass,
                    denominator: touching,
                }
            };
            ConceptGroup {
                representative: representative(&members),
                members,
                cohesion,
            }
        })
        .collect();
    groups.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then_with(|| a.representative.cmp(&b.representative))
    });
    groups
}

fn write_iri_row(out: &mut String, label: &str, iri: Option<&Iri>) {
    out.push_str("- ");
    out.push_str(label);
    out.push_str(": ");
    match iri {
        Some(iri) => out.push_str(iri.as_str()),
        None => out.push_str("(none)"),
    }
    out.push('\n');
}

/// Markdown summary: General, Format, Profile, Imports, Statistics.
pub fn summary_report(ontology: &Ontology) -> String {
    let stats = stats(ontology);
    let mut out = String::from("# Ontology Summary\n\n## General\n");
    write_iri_row(&mut out, "Ontology IRI", ontology.ontology_iri());
    write_iri_row(&mut out, "Version IRI", ontology.version_iri());
    if ontology.annotations().is_empty() {
        out.push_str("- Annotations: (none)\n");
    } else {
        out.push_str("- Annotations:\n");
        for annotation in ontology.annotations() {
            out.push_str("  - ");
            write_annotation(&mut out, annotation);
            out.push('\n');
        }
    }
    out.push_str("\n## Format\nOWL 2 Functional-Style Syntax (subset)\n");
    out.push_str("\n## Profile\n");
    out.push_str(&stats.detected_profile);
    out.push('\n');
    out.push_str("\n## Imports\n");
    if ontology.imports().is_empty() {
        out.push_str("(none)\n");
    } else {
        for import in ontology.imports() {
            out.push_str(&format!("- {import}\n"));
        }
    }
    out.push_str("\n## Statistics\n| Metric | Count |\n| --- | --- |\n");
    for (metric, count) in [
        ("Classes", stats.class_count),
        ("Object properties", stats.object_property_count),
        ("Data properties", stats.data_property_count),
        ("Annotation properties", stats.annotation_property_count),
        ("Individuals", stats.individual_count),
        ("Axioms", stats.axiom_count),
        ("Imports", stats.import_count),
    ] {
        out.push_str(&format!("| {metric} | {count} |\n"));
    }
    out
}

/// Every IRI an axiom mentions, including annotation properties and
/// IRI-valued annotation values. Unsupported axioms contribute nothing.
fn axiom_iris(axiom: &Axiom) -> BTreeSet<Iri> {
    fn expr_iris(expr: &ClassExpression, into: &mut BTreeSet<Iri>) {
        expr.named_classes(into);
        expr.roles(into);
    }
    let mut set = BTreeSet::new();
    match axiom.kind() {
        AxiomKind::SubClassOf { sub, sup } => {
            expr_iris(sub, &mut set);
            expr_iris(sup, &mut set);
        }
        AxiomKind::EquivalentClasses(ops) => {
            for op in ops {
                expr_iris(op, &mut set);
            }
        }
        AxiomKind::ClassAssertion { class, individual } => {
            expr_iris(class, &mut set);
            set.insert(individual.clone());
        }
        AxiomKind::PropertyAssertion {
            role,
            subject,
            object,
        } => {
            set.extend([role.clone(), subject.clone(), object.clone()]);
        }
        AxiomKind::Declaration { entity, .. } => {
            set.insert(entity.clone());
        }
        AxiomKind::AnnotationAssertion {
            property,
            subject,
            value,
        } => {
            set.insert(property.clone());
            set.insert(subject.clone());
            if let crate::model::AnnotationValue::Iri(iri) = value {
                set.insert(iri.clone());
            }
        }
        AxiomKind::Unsupported { .. } => {}
    }
    for annotation in axiom.annotations() {
        set.insert(annotation.property.clone());
        if let crate::model::AnnotationValue::Iri(iri) = &annotation.value {
            set.insert(iri.clone());
        }
    }
    set
}

fn comma_list(iris: &BTreeSet<Iri>) -> String {
    if iris.is_empty() {
        return "(none)".to_string();
    }
    iris.iter()
        .map(Iri::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Markdown report: one section per concept group with per-class detail
/// (direct told super-/subclasses, annotations, mention count), then
/// per-property usage.
pub fn technical_report(ontology: &Ontology, max_groups: usize) -> String {
    let groups = concept_groups(ontology, max_groups);
    let mentions: Vec<BTreeSet<Iri>> = ontology.axioms().iter().map(axiom_iris).collect();
    let mention_count =
        |iri: &Iri| -> usize { mentions.iter().filter(|set| set.contains(iri)).count() };

    let mut supers: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    let mut subs: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    for axiom in ontology.axioms() {
        if let AxiomKind::SubClassOf {
            sub: ClassExpression::Named(a),
            sup: ClassExpression::Named(b),
        } = axiom.kind()
        {
            supers.entry(a).or_default().insert(b);
            subs.entry(b).or_default().insert(a);
        }
    }

    let mut out = String::from("# Technical Report\n");
    for (number, group) in groups.iter().enumerate() {
        out.push_str(&format!(
            "\n## Group {}: {}\nMembers: {}; cohesion: {}\n",
            number + 1,
            group.representative,
            group.members.len(),
            group.cohesion
        ));
        for class in &group.members {
            out.push_str(&format!("\n### Class {class}\n"));
            let list = |map: &BTreeMap<&Iri, BTreeSet<&Iri>>| {
                map.get(class)
                    .map(|set| set.iter().map(|i| (*i).clone()).collect::<BTreeSet<_>>())
                    .unwrap_or_default()
            };
            out.push_str(&format!("- Superclasses: {}\n", comma_list(&list(&supers))));
            out.push_str(&format!("- Subclasses: {}\n", comma_list(&list(&subs))));
            let mut annotation_lines = Vec::new();
            for axiom in ontology.axioms() {
                if let AxiomKind::AnnotationAssertion {
                    property,
                    subject,
                    value,
                } = axiom.kind()
                {
                    if subject == class {
                        let mut line = format!("  - {property} = ");
                        write_annotation_value(&mut line, value);
                        annotation_lines.push(line);
                    }
                }
            }
            if annotation_lines.is_empty() {
                out.push_str("- Annotations: (none)\n");
            } else {
                annotation_lines.sort();
                out.push_str("- Annotations:\n");
                for line in annotation_lines {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            out.push_str(&format!("- Axioms mentioning: {}\n", mention_count(class)));
        }
    }
    let (signature, _) = signature_lenient(ontology);
    out.push_str("\n## Properties\n");
    let property_kinds = [
        (&signature.object_properties, "object"),
        (&signature.data_properties, "data"),
        (&signature.annotation_properties, "annotation"),
    ];
    if property_kinds.iter().all(|(set, _)| set.is_empty()) {
        out.push_str("(none)\n");
    } else {
        for (set, kind) in property_kinds {
            for property in set {
                out.push_str(&format!(
                    "\n### Property {property}\n- Kind: {kind}\n- Usage count: {}\n",
                    mention_count(property)
                ));
            }
        }
    }
    out
}

/// DOT digraph of the told atomic class hierarchy. Node identifiers are
/// local names, falling back to the full IRI for classes whose local name
/// is ambiguous; labels are always the local name.
pub fn emit_graph(ontology: &Ontology) -> String {
    let classes = named_classes(ontology);
    let mut by_local: BTreeMap<&str, usize> = BTreeMap::new();
    for class in &classes {
        *by_local.entry(class.local_name()).or_insert(0) += 1;
    }
    let node_id = |class: &Iri| -> String {
        if by_local[class.local_name()] == 1 {
            class.local_name().to_string()
        } else {
            class.as_str().to_string()
        }
    };
    let mut out = String::from("digraph hierarchy {\n");
    for class in &classes {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\"];\n",
            node_id(class),
            class.local_name()
        ));
    }
    let mut edges = BTreeSet::new();
    for axiom in ontology.axioms() {
        if let AxiomKind::SubClassOf {
            sub: ClassExpression::Named(a),
            sup: ClassExpression::Named(b),
        } = axiom.kind()
        {
            edges.insert((a.clone(), b.clone()));
        }
    }
    for (a, b) in edges {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", node_id(&a), node_id(&b)));
    }
    out.push_str("}\n");
    out
}
