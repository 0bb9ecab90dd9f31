//! EL classification, consistency and entailment checking.
//!
//! Supported axioms are normalized to four shapes (`A ⊑ B`,
//! `A ⊓ B ⊑ C`, `A ⊑ ∃r.B`, `∃r.A ⊑ B`) over atoms, then saturated with
//! the usual completion rules until fixpoint. Named individuals are
//! represented by one concept atom each. Axioms outside the supported
//! subset become profile violations and push answers to three-valued
//! verdicts: inconsistency and entailment remain definite when derivable
//! from the supported part (monotonicity), everything else degrades to
//! Unknown rather than guessing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::iri::Iri;
use crate::model::{named_classes, AxiomKind, ClassExpression, EntityKind, Ontology};

/// Fresh names introduced by normalization use this reserved prefix; they
/// must never leak into public results or serialized output.
pub const AUX_PREFIX: &str = "urn:ontomvn:aux:";

/// A saturation atom. Public results only ever contain `Top`, `Bottom`
/// and `Named`; `Aux` and `Individual` are internal bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Top,
    Bottom,
    Named(Iri),
    Aux(u32),
    Individual(Iri),
}

impl Atom {
    pub fn is_public(&self) -> bool {
        matches!(self, Atom::Top | Atom::Bottom | Atom::Named(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Top => write!(f, "owl:Thing"),
            Atom::Bottom => write!(f, "owl:Nothing"),
            Atom::Named(iri) => write!(f, "{iri}"),
            Atom::Aux(n) => write!(f, "{AUX_PREFIX}x{n}"),
            Atom::Individual(iri) => write!(f, "{AUX_PREFIX}indiv:{iri}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormalizedAxiom {
    /// A ⊑ B
    AtomSub(Atom, Atom),
    /// A ⊓ B ⊑ C
    ConjSub(Atom, Atom, Atom),
    /// A ⊑ ∃r.B
    ExistsRhs(Atom, Iri, Atom),
    /// ∃r.A ⊑ B
    ExistsLhs(Iri, Atom, Atom),
}

/// An axiom the reasoner cannot interpret, with the construct that made
/// it uninterpretable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileViolation {
    pub construct: String,
    pub axiom_text: String,
}

#[derive(Debug, Clone, Default)]
pub struct Normalization {
    pub axioms: Vec<NormalizedAxiom>,
    pub violations: Vec<ProfileViolation>,
    /// Every atom mentioned, including individuals and declared classes.
    pub atoms: BTreeSet<Atom>,
}

struct Normalizer {
    axioms: Vec<NormalizedAxiom>,
    atoms: BTreeSet<Atom>,
    next_aux: u32,
}

impl Normalizer {
    fn fresh(&mut self) -> Atom {
        let atom = Atom::Aux(self.next_aux);
        self.next_aux += 1;
        self.atoms.insert(atom.clone());
        atom
    }

    fn push(&mut self, axiom: NormalizedAxiom) {
        self.axioms.push(axiom);
    }

    fn atom_of(&mut self, expr: &ClassExpression) -> Option<Atom> {
        let atom = match expr {
            ClassExpression::Top => Atom::Top,
            ClassExpression::Bottom => Atom::Bottom,
            ClassExpression::Named(iri) => Atom::Named(iri.clone()),
            _ => return None,
        };
        self.atoms.insert(atom.clone());
        Some(atom)
    }

    /// An atom `a` with `expr ⊑ a`, for subexpressions in subclass
    /// position.
    fn lhs_atom(&mut self, expr: &ClassExpression) -> Atom {
        if let Some(atom) = self.atom_of(expr) {
            return atom;
        }
        let fresh = self.fresh();
        self.inclusion(expr, &ClassExpressionRef::Atom(fresh.clone()));
        fresh
    }

    /// An atom `a` with `a ⊑ expr`, for subexpressions in superclass
    /// position.
    fn rhs_atom(&mut self, expr: &ClassExpression) -> Atom {
        if let Some(atom) = self.atom_of(expr) {
            return atom;
        }
        let fresh = self.fresh();
        self.inclusion_from_atom(fresh.clone(), expr);
        fresh
    }

    /// `atom ⊑ expr`.
    fn inclusion_from_atom(&mut self, atom: Atom, expr: &ClassExpression) {
        match expr {
            ClassExpression::Conjunction(ops) => {
                for op in ops {
                    self.inclusion_from_atom(atom.clone(), op);
                }
            }
            ClassExpression::Existential { role, filler } => {
                let filler_atom = self.rhs_atom(filler);
                self.push(NormalizedAxiom::ExistsRhs(atom, role.clone(), filler_atom));
            }
            _ => {
                let target = self.atom_of(expr).expect("atomic");
                self.push(NormalizedAxiom::AtomSub(atom, target));
            }
        }
    }

    /// `sub ⊑ target` where the target is already reduced to an atom or an
    /// arbitrary expression.
    fn inclusion(&mut self, sub: &ClassExpression, target: &ClassExpressionRef<'_>) {
        // Split conjunctions on the right first.
        if let ClassExpressionRef::Expr(ClassExpression::Conjunction(ops)) = target {
            for op in ops.iter() {
                self.inclusion(sub, &ClassExpressionRef::Expr(op));
            }
            return;
        }
        match sub {
            ClassExpression::Conjunction(ops) => {
                let atoms: Vec<Atom> = ops.iter().map(|op| self.lhs_atom(op)).collect();
                let target_atom = self.target_atom(target);
                // Left fold: A1 ⊓ A2 ⊑ F1, F1 ⊓ A3 ⊑ F2, ..., last into the
                // target directly.
                let mut current = atoms[0].clone();
                for (i, atom) in atoms[1..].iter().enumerate() {
                    let is_last = i == atoms.len() - 2;
                    let out = if is_last {
                        target_atom.clone()
                    } else {
                        self.fresh()
                    };
                    self.push(NormalizedAxiom::ConjSub(current, atom.clone(), out.clone()));
                    current = out;
                }
            }
            ClassExpression::Existential { role, filler } => {
                let filler_atom = self.lhs_atom(filler);
                let target_atom = self.target_atom(target);
                self.push(NormalizedAxiom::ExistsLhs(
                    role.clone(),
                    filler_atom,
                    target_atom,
                ));
            }
            atomic => {
                let sub_atom = self.atom_of(atomic).expect("atomic");
                match target {
                    ClassExpressionRef::Atom(atom) => {
                        self.push(NormalizedAxiom::AtomSub(sub_atom, atom.clone()));
                    }
                    ClassExpressionRef::Expr(expr) => {
                        self.inclusion_from_atom(sub_atom, expr);
                    }
                }
            }
        }
    }

    /// Reduces an inclusion target to an atom, defining a fresh one for
    /// complex targets.
    fn target_atom(&mut self, target: &ClassExpressionRef<'_>) -> Atom {
        match target {
            ClassExpressionRef::Atom(atom) => atom.clone(),
            ClassExpressionRef::Expr(expr) => {
                if let Some(atom) = self.atom_of(expr) {
                    atom
                } else {
                    let fresh = self.fresh();
                    self.inclusion_from_atom(fresh.clone(), expr);
                    fresh
                }
            }
        }
    }
}

enum ClassExpressionRef<'a> {
    Atom(Atom),
    Expr(&'a ClassExpression),
}

fn individual_atom(iri: &Iri) -> Atom {
    Atom::Individual(iri.clone())
}

/// Translates the supported axioms to normal form and collects profile
/// violations for everything else.
pub fn normalize(ontology: &Ontology) -> Normalization {
    let mut normalizer = Normalizer {
        axioms: Vec::new(),
        atoms: BTreeSet::new(),
        next_aux: 0,
    };
    normalizer.atoms.insert(Atom::Top);
    normalizer.atoms.insert(Atom::Bottom);
    let mut violations = Vec::new();
    for iri in named_classes(ontology) {
        normalizer.atoms.insert(Atom::Named(iri));
    }
    for axiom in ontology.axioms() {
        match axiom.kind() {
            AxiomKind::SubClassOf { sub, sup } => {
                normalizer.inclusion(sub, &ClassExpressionRef::Expr(sup));
            }
            AxiomKind::EquivalentClasses(ops) => {
                let first = &ops[0];
                for other in &ops[1..] {
                    normalizer.inclusion(first, &ClassExpressionRef::Expr(other));
                    normalizer.inclusion(other, &ClassExpressionRef::Expr(first));
                }
            }
            AxiomKind::ClassAssertion { class, individual } => {
                let atom = individual_atom(individual);
                normalizer.atoms.insert(atom.clone());
                normalizer.inclusion_from_atom(atom, class);
            }
            AxiomKind::PropertyAssertion {
                role,
                subject,
                object,
            } => {
                let subject = individual_atom(subject);
                let object = individual_atom(object);
                normalizer.atoms.insert(subject.clone());
                normalizer.atoms.insert(object.clone());
                normalizer.push(NormalizedAxiom::ExistsRhs(subject, role.clone(), object));
            }
            AxiomKind::Declaration { kind, entity } => {
                if *kind == EntityKind::NamedIndividual {
                    normalizer.atoms.insert(individual_atom(entity));
                }
            }
            AxiomKind::AnnotationAssertion { .. } => {}
            AxiomKind::Unsupported { construct, text } => {
                violations.push(ProfileViolation {
                    construct: construct.clone(),
                    axiom_text: text.clone(),
                });
            }
        }
    }
    Normalization {
        axioms: normalizer.axioms,
        violations,
        atoms: normalizer.atoms,
    }
}

/// `EL` when everything was interpretable, otherwise
/// `UNSUPPORTED(construct, ...)` listing the offending constructs.
pub fn detected_profile(ontology: &Ontology) -> String {
    let normalization = normalize(ontology);
    if normalization.violations.is_empty() {
        return "EL".to_string();
    }
    let constructs: BTreeSet<&str> = normalization
        .violations
        .iter()
        .map(|v| v.construct.as_str())
        .collect();
    let list: Vec<&str> = constructs.into_iter().collect();
    format!("UNSUPPORTED({})", list.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerConfig {
    /// Upper bound on saturation atoms (named + auxiliary + individuals).
    pub atom_limit: usize,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        ReasonerConfig { atom_limit: 100_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonerError {
    #[error("saturation would need {atoms} atoms, above the limit of {limit}")]
    AtomLimit { atoms: usize, limit: usize },
}

/// Completion sets: `subsumers[A]` holds every derived `B` with `A ⊑ B`,
/// `role_edges[r]` every derived pair `A ⊑ ∃r.B`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Saturation {
    pub subsumers: BTreeMap<Atom, BTreeSet<Atom>>,
    pub role_edges: BTreeMap<Iri, BTreeSet<(Atom, Atom)>>,
}

impl Saturation {
    /// Raw derived subsumption including the unsatisfiable-subclass and
    /// global-inconsistency escapes.
    pub fn subsumed(&self, a: &Atom, b: &Atom) -> bool {
        if self.inconsistent() {
            return true;
        }
        match self.subsumers.get(a) {
            Some(set) => set.contains(b) || set.contains(&Atom::Bottom),
            // Atoms outside the domain only have the trivial subsumers.
            None => a == b || *b == Atom::Top,
        }
    }

    /// The ontology admits no model: Top is subsumed by Bottom or some
    /// individual representative is.
    pub fn inconsistent(&self) -> bool {
        let bottom_in = |atom: &Atom| {
            self.subsumers
                .get(atom)
                .is_some_and(|s| s.contains(&Atom::Bottom))
        };
        bottom_in(&Atom::Top)
            || self
                .subsumers
                .keys()
                .filter(|a| matches!(a, Atom::Individual(_)))
                .any(bottom_in)
    }
}

/// Saturates to fixpoint with the completion rules:
/// adding told subsumers (CR1), conjunction firing (CR2), existential
/// introduction (CR3), existential application (CR4) and bottom
/// propagation over role edges (CR5). The fixpoint is unique, so the
/// result does not depend on processing order.
pub(crate) fn saturate(
    normalization: &Normalization,
    config: &ReasonerConfig,
) -> Result<Saturation, ReasonerError> {
    let atoms = &normalization.atoms;
    if atoms.len() > config.atom_limit {
        return Err(ReasonerError::AtomLimit {
            atoms: atoms.len(),
            limit: config.atom_limit,
        });
    }

    let mut atom_subs: BTreeMap<Atom, Vec<Atom>> = BTreeMap::new();
    let mut conj_subs: BTreeMap<Atom, Vec<(Atom, Atom)>> = BTreeMap::new();
    let mut exists_rhs: BTreeMap<Atom, Vec<(Iri, Atom)>> = BTreeMap::new();
    let mut exists_lhs: BTreeMap<(Iri, Atom), Vec<Atom>> = BTreeMap::new();
    // Same axioms keyed by filler alone, for the subsumption-side of CR4.
    let mut exists_lhs_by_filler: BTreeMap<Atom, Vec<(Iri, Atom)>> = BTreeMap::new();
    for axiom in &normalization.axioms {
        match axiom {
            NormalizedAxiom::AtomSub(a, b) => {
                atom_subs.entry(a.clone()).or_default().push(b.clone());
            }
            NormalizedAxiom::ConjSub(a, b, c) => {
                conj_subs
                    .entry(a.clone())
                    .or_default()
                    .push((b.clone(), c.clone()));
                conj_subs
                    .entry(b.clone())
                    .or_default()
                    .push((a.clone(), c.clone()));
            }
            NormalizedAxiom::ExistsRhs(a, r, b) => {
                exists_rhs
                    .entry(a.clone())
                    .or_default()
                    .push((r.clone(), b.clone()));
            }
            NormalizedAxiom::ExistsLhs(r, a, b) => {
                exists_lhs
                    .entry((r.clone(), a.clone()))
                    .or_default()
                    .push(b.clone());
                exists_lhs_by_filler
                    .entry(a.clone())
                    .or_default()
                    .push((r.clone(), b.clone()));
            }
        }
    }

    #[derive(Debug)]
    enum Event {
        Sub(Atom, Atom),
        Edge(Iri, Atom, Atom),
    }

    let mut sat = Saturation::default();
    // Predecessors: for each atom B, the (r, A) pairs with (A, B) in R(r).
    let mut predecessors: BTreeMap<Atom, BTreeSet<(Iri, Atom)>> = BTreeMap::new();
    let mut queue: VecDeque<Event> = VecDeque::new();

    for atom in atoms {
        let row = sat.subsumers.entry(atom.clone()).or_default();
        row.insert(atom.clone());
        row.insert(Atom::Top);
        queue.push_back(Event::Sub(atom.clone(), atom.clone()));
        queue.push_back(Event::Sub(atom.clone(), Atom::Top));
    }

    while let Some(event) = queue.pop_front() {
        match event {
            Event::Sub(a, b) => {
                // CR1
                if let Some(targets) = atom_subs.get(&b) {
                    for c in targets.clone() {
                        if sat.subsumers.entry(a.clone()).or_default().insert(c.clone()) {
                            queue.push_back(Event::Sub(a.clone(), c));
                        }
                    }
                }
                // CR2: b is one operand; the other must already subsume a.
                if let Some(pairs) = conj_subs.get(&b) {
                    let row = sat.subsumers.get(&a).cloned().unwrap_or_default();
                    for (other, c) in pairs.clone() {
                        if row.contains(&other)
                            && sat.subsumers.entry(a.clone()).or_default().insert(c.clone())
                        {
                            queue.push_back(Event::Sub(a.clone(), c));
                        }
                    }
                }
                // CR3
                if let Some(exists) = exists_rhs.get(&b) {
                    for (r, c) in exists.clone() {
                        if sat
                            .role_edges
                            .entry(r.clone())
                            .or_default()
                            .insert((a.clone(), c.clone()))
                        {
                            queue.push_back(Event::Edge(r, a.clone(), c));
                        }
                    }
                }
                // CR4 from the subsumer side: some X ⊑ ∃r.a and now a ⊑ b.
                if let Some(targets) = exists_lhs_by_filler.get(&b) {
                    for (r, c) in targets.clone() {
                        for (pr, x) in predecessors.get(&a).cloned().unwrap_or_default() {
                            if pr != r {
                                continue;
                            }
                            if sat
                                .subsumers
                                .entry(x.clone())
                                .or_default()
                                .insert(c.clone())
                            {
                                queue.push_back(Event::Sub(x, c.clone()));
                            }
                        }
                    }
                }
                // CR5 from the subsumer side.
                if b == Atom::Bottom {
                    for (_, x) in predecessors.get(&a).cloned().unwrap_or_default() {
                        if sat
                            .subsumers
                            .entry(x.clone())
                            .or_default()
                            .insert(Atom::Bottom)
                        {
                            queue.push_back(Event::Sub(x, Atom::Bottom));
                        }
                    }
                }
            }
            Event::Edge(r, a, b) => {
                predecessors
                    .entry(b.clone())
                    .or_default()
                    .insert((r.clone(), a.clone()));
                let b_subsumers = sat.subsumers.get(&b).cloned().unwrap_or_default();
                // CR4 from the edge side.
                for b_sub in &b_subsumers {
                    if let Some(targets) = exists_lhs.get(&(r.clone(), b_sub.clone())) {
                        for c in targets.clone() {
                            if sat
                                .subsumers
                                .entry(a.clone())
                                .or_default()
                                .insert(c.clone())
                            {
                                queue.push_back(Event::Sub(a.clone(), c));
                            }
                        }
                    }
                }
                // CR5 from the edge side.
                if b_subsumers.contains(&Atom::Bottom)
                    && sat
                        .subsumers
                        .entry(a.clone())
                        .or_default()
                        .insert(Atom::Bottom)
                {
                    queue.push_back(Event::Sub(a, Atom::Bottom));
                }
            }
        }
    }
    Ok(sat)
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    /// Derived subsumptions over the ontology's named classes plus Top and
    /// Bottom. Reflexive pairs, `(A, Top)` and `(Bottom, A)` are always
    /// present; an inconsistent ontology subsumes everything.
    pub subsumptions: BTreeSet<(Atom, Atom)>,
    pub violations: Vec<ProfileViolation>,
}

pub fn classify(
    ontology: &Ontology,
    config: &ReasonerConfig,
) -> Result<ClassificationResult, ReasonerError> {
    let normalization = normalize(ontology);
    let sat = saturate(&normalization, config)?;

    let mut domain: BTreeSet<Atom> = named_classes(ontology)
        .into_iter()
        .map(Atom::Named)
        .collect();
    domain.insert(Atom::Top);
    domain.insert(Atom::Bottom);

    let mut subsumptions = BTreeSet::new();
    if sat.inconsistent() {
        for a in &domain {
            for b in &domain {
                subsumptions.insert((a.clone(), b.clone()));
            }
        }
    } else {
        for a in &domain {
            subsumptions.insert((a.clone(), a.clone()));
            subsumptions.insert((a.clone(), Atom::Top));
            subsumptions.insert((Atom::Bottom, a.clone()));
            let Some(row) = sat.subsumers.get(a) else {
                continue;
            };
            if row.contains(&Atom::Bottom) {
                for b in &domain {
                    subsumptions.insert((a.clone(), b.clone()));
                }
                continue;
            }
            for b in row {
                if domain.contains(b) {
                    subsumptions.insert((a.clone(), b.clone()));
                }
            }
        }
    }
    debug_assert!(subsumptions.iter().all(|(a, b)| a.is_public() && b.is_public()));
    Ok(ClassificationResult {
        subsumptions,
        violations: normalization.violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Consistent,
    Inconsistent,
    Unknown,
}

impl fmt::Display for ConsistencyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConsistencyVerdict::Consistent => "consistent",
            ConsistencyVerdict::Inconsistent => "inconsistent",
            ConsistencyVerdict::Unknown => "unknown",
        })
    }
}

/// Three-valued consistency. Inconsistency derived from the supported
/// subset is definite even with profile violations present; consistency
/// is only definite when the whole ontology was interpretable.
pub fn is_consistent(
    ontology: &Ontology,
    config: &ReasonerConfig,
) -> Result<ConsistencyVerdict, ReasonerError> {
    let normalization = normalize(ontology);
    let sat = saturate(&normalization, config)?;
    if sat.inconsistent() {
        return Ok(ConsistencyVerdict::Inconsistent);
    }
    if normalization.violations.is_empty() {
        Ok(ConsistencyVerdict::Consistent)
    } else {
        Ok(ConsistencyVerdict::Unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntailmentVerdict {
    Entailment,
    NoEntailment,
    Unknown,
}

impl fmt::Display for EntailmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntailmentVerdict::Entailment => "Entailment",
            EntailmentVerdict::NoEntailment => "NoEntailment",
            EntailmentVerdict::Unknown => "Unknown",
        })
    }
}

/// One subsumption probe: holds iff `target ∈ S(probe)` after saturation.
struct Query {
    probe: Atom,
    target: Atom,
}

/// Does `premise ⊨ conclusion`? Checked by extending the premise with
/// fresh probe names for every conclusion axiom (a conservative
/// extension) and saturating once.
///
/// Verdict policy with profile violations: derived entailment is definite
/// (dropping uninterpretable premise axioms only loses entailments, and an
/// inconsistent premise entails everything). A missing derivation is
/// `NoEntailment` only when both documents were fully interpretable,
/// otherwise `Unknown`.
pub fn entails(
    premise: &Ontology,
    conclusion: &Ontology,
    config: &ReasonerConfig,
) -> Result<EntailmentVerdict, ReasonerError> {
    let mut normalization = normalize(premise);
    let premise_violations = !normalization.violations.is_empty();

    let mut conclusion_violations = false;
    let mut queries: Vec<Query> = Vec::new();
    let mut role_queries: Vec<(Iri, Atom, Atom)> = Vec::new();
    {
        // Probe names must not collide with the premise's own fresh atoms.
        let first_free = normalization
            .atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Aux(n) => Some(n + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let mut normalizer = Normalizer {
            axioms: Vec::new(),
            atoms: BTreeSet::new(),
            next_aux: first_free,
        };
        let add_inclusion_query =
            |normalizer: &mut Normalizer,
             queries: &mut Vec<Query>,
             sub: &ClassExpression,
             sup: &ClassExpression| {
                let probe = normalizer.rhs_atom(sub);
                let target = normalizer.lhs_atom(sup);
                queries.push(Query { probe, target });
            };
        for axiom in conclusion.axioms() {
            match axiom.kind() {
                AxiomKind::SubClassOf { sub, sup } => {
                    add_inclusion_query(&mut normalizer, &mut queries, sub, sup);
                }
                AxiomKind::EquivalentClasses(ops) => {
                    let first = &ops[0];
                    for other in &ops[1..] {
                        add_inclusion_query(&mut normalizer, &mut queries, first, other);
                        add_inclusion_query(&mut normalizer, &mut queries, other, first);
                    }
                }
                AxiomKind::ClassAssertion { class, individual } => {
                    let probe = individual_atom(individual);
                    normalizer.atoms.insert(probe.clone());
                    let target = normalizer.lhs_atom(class);
                    queries.push(Query { probe, target });
                }
                AxiomKind::PropertyAssertion {
                    role,
                    subject,
                    object,
                } => {
                    let subject = individual_atom(subject);
                    let object = individual_atom(object);
                    normalizer.atoms.insert(subject.clone());
                    normalizer.atoms.insert(object.clone());
                    role_queries.push((role.clone(), subject, object));
                }
                // No logical content; entailed by anything.
                AxiomKind::Declaration { .. } | AxiomKind::AnnotationAssertion { .. } => {}
                AxiomKind::Unsupported { .. } => {
                    conclusion_violations = true;
                }
            }
        }
        normalization.axioms.extend(normalizer.axioms);
        normalization.atoms.extend(normalizer.atoms);
    }

    let sat = saturate(&normalization, config)?;
    if sat.inconsistent() {
        // Ex falso: everything is entailed, even what we cannot interpret.
        return Ok(EntailmentVerdict::Entailment);
    }
    if conclusion_violations {
        return Ok(EntailmentVerdict::Unknown);
    }

    let subsumption_holds = |q: &Query| sat.subsumed(&q.probe, &q.target);
    let role_holds = |(role, subject, object): &(Iri, Atom, Atom)| {
        if sat.subsumed(subject, &Atom::Bottom) {
            return true;
        }
        let Some(edges) = sat.role_edges.get(role) else {
            return false;
        };
        edges
            .iter()
            .filter(|(a, _)| a == subject)
            .any(|(_, b)| sat.subsumed(b, object))
    };

    let all_hold = queries.iter().all(subsumption_holds) && role_queries.iter().all(role_holds);
    if all_hold {
        Ok(EntailmentVerdict::Entailment)
    } else if premise_violations {
        Ok(EntailmentVerdict::Unknown)
    } else {
        Ok(EntailmentVerdict::NoEntailment)
    }
}
