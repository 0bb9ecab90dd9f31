//! Command-line front end: argument parsing, the goal/phase lifecycle, and
//! the exit-code contract. All real work lives in the library crate; this
//! crate decides what to run, merges parameters, and maps errors to codes.

pub mod goals;
pub mod lifecycle;

use std::path::PathBuf;

use clap::Parser;
use ontomvn::repo::RepoError;
use ontomvn::resolver::ResolveError;

pub use lifecycle::{Phase, GOALS};

/// Everything went through; test goals saw no failures.
pub const EXIT_OK: i32 = 0;
/// Ontology tests or syntax compliance checks failed.
pub const EXIT_TEST_FAILURES: i32 = 1;
/// Bad invocation or bad project configuration.
pub const EXIT_USAGE: i32 = 2;
/// A dependency or import could not be resolved.
pub const EXIT_RESOLUTION: i32 = 3;
/// An ontology document failed to parse.
pub const EXIT_PARSE: i32 = 4;
/// Internal error or resource limit.
pub const EXIT_INTERNAL: i32 = 5;

/// A goal's failure: the process exit code plus a message for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalError {
    pub code: i32,
    pub message: String,
}

impl GoalError {
    pub fn usage(message: impl Into<String>) -> GoalError {
        GoalError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn test_failures(message: impl Into<String>) -> GoalError {
        GoalError { code: EXIT_TEST_FAILURES, message: message.into() }
    }

    pub fn resolution(message: impl Into<String>) -> GoalError {
        GoalError { code: EXIT_RESOLUTION, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> GoalError {
        GoalError { code: EXIT_PARSE, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> GoalError {
        GoalError { code: EXIT_INTERNAL, message: message.into() }
    }
}

fn repo_exit_code(err: &RepoError) -> i32 {
    match err {
        RepoError::SnapshotPolicy { .. } => EXIT_USAGE,
        RepoError::InvalidArtifact { .. } => EXIT_PARSE,
        RepoError::Io { .. } | RepoError::Lock { .. } => EXIT_INTERNAL,
        _ => EXIT_RESOLUTION,
    }
}

impl From<RepoError> for GoalError {
    fn from(err: RepoError) -> GoalError {
        GoalError { code: repo_exit_code(&err), message: err.to_string() }
    }
}

impl From<ResolveError> for GoalError {
    fn from(err: ResolveError) -> GoalError {
        let code = match &err {
            ResolveError::BadDocument { .. } => EXIT_PARSE,
            ResolveError::Io { .. } | ResolveError::Catalog(_) => EXIT_USAGE,
            ResolveError::Repo(repo) => repo_exit_code(repo),
            _ => EXIT_RESOLUTION,
        };
        GoalError { code, message: err.to_string() }
    }
}

/// A validated invocation: which goal (or phase, or `plan`) to run and with
/// what knobs. `project_dir` is the directory holding pom.xml.
#[derive(Debug, Clone)]
pub struct GoalInvocation {
    pub name: String,
    pub argument: Option<String>,
    /// `-Dname=value` pairs in command-line order.
    pub overrides: Vec<(String, String)>,
    pub offline: bool,
    pub local_repo: Option<PathBuf>,
    pub project_dir: PathBuf,
}

#[derive(Parser, Debug)]
#[command(
    name = "ontomvn",
    version,
    about = "Build, test, and share ontologies through a Maven-style lifecycle",
    disable_help_subcommand = true
)]
struct Cli {
    /// Goal or lifecycle phase to run; `plan <phase>` prints what a phase
    /// would execute.
    name: String,
    /// Extra positional argument; only `plan` takes one (the phase).
    argument: Option<String>,
    /// Override a plugin parameter, repeatable. Wins over pom.xml.
    #[arg(short = 'D', value_name = "NAME=VALUE", action = clap::ArgAction::Append)]
    define: Vec<String>,
    /// Never touch the network; fail when an artifact is not cached.
    #[arg(long, short = 'o')]
    offline: bool,
    /// Local repository root (wins over $ONTOMVN_HOME and ~/.ontomvn).
    #[arg(long, value_name = "PATH")]
    local_repo: Option<PathBuf>,
}

/// Parses the arguments after the program name. Errors carry the exit code
/// to use; `--help`/`--version` come back as code 0 with the text to print.
pub fn parse_invocation<I, S>(args: I) -> Result<GoalInvocation, GoalError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv = vec!["ontomvn".to_string()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|err| {
        let code = match err.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                EXIT_OK
            }
            _ => EXIT_USAGE,
        };
        GoalError { code, message: err.render().to_string().trim_end().to_string() }
    })?;

    let known = cli.name == "plan"
        || Phase::parse(&cli.name).is_some()
        || GOALS.contains(&cli.name.as_str());
    if !known {
        return Err(GoalError::usage(format!(
            "unknown goal or phase `{}`; goals: {}; phases: validate resolve process test package install deploy",
            cli.name,
            GOALS.join(" ")
        )));
    }
    if cli.name != "plan" && cli.argument.is_some() {
        return Err(GoalError::usage(format!(
            "`{}` takes no positional argument",
            cli.name
        )));
    }

    let mut overrides = Vec::new();
    for pair in &cli.define {
        let (name, value) = pair.split_once('=').ok_or_else(|| {
            GoalError::usage(format!("-D expects NAME=VALUE, got `{pair}`"))
        })?;
        if name.is_empty() {
            return Err(GoalError::usage(format!(
                "-D expects a non-empty parameter name, got `{pair}`"
            )));
        }
        overrides.push((name.to_string(), value.to_string()));
    }

    let project_dir = std::env::current_dir().unwrap_or_else(|_| PathBuf::from("."));
    Ok(GoalInvocation {
        name: cli.name,
        argument: cli.argument,
        overrides,
        offline: cli.offline,
        local_repo: cli.local_repo,
        project_dir,
    })
}

/// Where installed artifacts live: the --local-repo flag, then
/// $ONTOMVN_HOME/repository, then ~/.ontomvn/repository.
pub fn local_repo_root(invocation: &GoalInvocation) -> PathBuf {
    if let Some(path) = &invocation.local_repo {
        return path.clone();
    }
    if let Ok(home) = std::env::var("ONTOMVN_HOME") {
        if !home.is_empty() {
            return PathBuf::from(home).join("repository");
        }
    }
    let home = std::env::var("HOME").unwrap_or_else(|_| ".".to_string());
    PathBuf::from(home).join(".ontomvn").join("repository")
}

/// Runs the invocation. A phase runs every goal of all phases up to and
/// including it; on a name collision the phase wins. `plan` never touches
/// the project.
pub fn execute(invocation: &GoalInvocation) -> Result<(), GoalError> {
    if invocation.name == "plan" {
        let argument = invocation
            .argument
            .as_deref()
            .ok_or_else(|| GoalError::usage("plan needs a phase argument, e.g. `plan test`"))?;
        let phase = Phase::parse(argument).ok_or_else(|| {
            GoalError::usage(format!(
                "unknown phase `{argument}`; phases: validate resolve process test package install deploy"
            ))
        })?;
        print!("{}", lifecycle::print_plan(phase));
        return Ok(());
    }
    if let Some(phase) = Phase::parse(&invocation.name) {
        let context = goals::ProjectContext::load(invocation)?;
        for (_, goal) in lifecycle::plan_through(phase) {
            goals::run_goal(goal, &context, true)?;
        }
        return Ok(());
    }
    if GOALS.contains(&invocation.name.as_str()) {
        let context = goals::ProjectContext::load(invocation)?;
        return goals::run_goal(&invocation.name, &context, false);
    }
    Err(GoalError::usage(format!("unknown goal or phase `{}`", invocation.name)))
}

/// `execute` plus error reporting; returns the process exit code.
pub fn run(invocation: &GoalInvocation) -> i32 {
    match execute(invocation) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}
