//! The fixed lifecycle: seven phases, each owning an ordered list of goals.
//! Running a phase runs every goal of all phases up to and including it,
//! each exactly once, in order.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Validate,
    Resolve,
    Process,
    Test,
    Package,
    Install,
    Deploy,
}

impl Phase {
    pub const ALL: [Phase; 7] = [
        Phase::Validate,
        Phase::Resolve,
        Phase::Process,
        Phase::Test,
        Phase::Package,
        Phase::Install,
        Phase::Deploy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Validate => "validate",
            Phase::Resolve => "resolve",
            Phase::Process => "process",
            Phase::Test => "test",
            Phase::Install => "install",
            Phase::Package => "package",
            Phase::Deploy => "deploy",
        }
    }

    pub fn parse(name: &str) -> Option<Phase> {
        Phase::ALL.into_iter().find(|phase| phase.name() == name)
    }

    /// The goals this phase itself contributes, in execution order.
    pub fn goals(self) -> &'static [&'static str] {
        match self {
            Phase::Validate => &["validate"],
            Phase::Resolve => &["resolve", "owlimport"],
            Phase::Process => &[
                "ontologyreport",
                "technicalreport",
                "visualizer",
                "semantic-diff",
            ],
            Phase::Test => &["test-syntax", "test"],
            Phase::Package => &["apply-aspects"],
            Phase::Install => &["install"],
            Phase::Deploy => &["deploy"],
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every goal the tool knows, in lifecycle order.
pub const GOALS: [&str; 12] = [
    "validate",
    "resolve",
    "owlimport",
    "ontologyreport",
    "technicalreport",
    "visualizer",
    "semantic-diff",
    "test-syntax",
    "test",
    "apply-aspects",
    "install",
    "deploy",
];

/// The (phase, goal) sequence a run of `through` executes.
pub fn plan_through(through: Phase) -> Vec<(Phase, &'static str)> {
    Phase::ALL
        .into_iter()
        .take_while(|phase| *phase <= through)
        .flat_map(|phase| phase.goals().iter().map(move |goal| (phase, *goal)))
        .collect()
}

/// One line per goal the phase would run, without executing anything.
pub fn print_plan(through: Phase) -> String {
    let mut out = String::new();
    for (phase, goal) in plan_through(through) {
        out.push_str(&format!("{phase}: {goal}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_are_ordered_and_named() {
        let names: Vec<_> = Phase::ALL.iter().map(|p| p.name()).collect();
        assert_eq!(
            names,
            vec!["validate", "resolve", "process", "test", "package", "install", "deploy"]
        );
        for phase in Phase::ALL {
            assert_eq!(Phase::parse(phase.name()), Some(phase));
        }
        assert_eq!(Phase::parse("compile"), None);
    }

    #[test]
    fn every_goal_belongs_to_exactly_one_phase() {
        let mut seen = Vec::new();
        for phase in Phase::ALL {
            seen.extend_from_slice(phase.goals());
        }
        assert_eq!(seen, GOALS);
    }

    #[test]
    fn plan_is_cumulative_and_duplicate_free() {
        let test_plan = plan_through(Phase::Test);
        let goals: Vec<_> = test_plan.iter().map(|(_, g)| *g).collect();
        assert_eq!(
            goals,
            vec![
                "validate",
                "resolve",
                "owlimport",
                "ontologyreport",
                "technicalreport",
                "visualizer",
                "semantic-diff",
                "test-syntax",
                "test"
            ]
        );
        let full = plan_through(Phase::Deploy);
        assert_eq!(full.len(), GOALS.len());
        assert_eq!(plan_through(Phase::Validate).len(), 1);
    }

    #[test]
    fn printed_plan_pairs_phase_and_goal() {
        let text = print_plan(Phase::Resolve);
        assert_eq!(text, "validate: validate\nresolve: resolve\nresolve: owlimport\n");
    }
}
