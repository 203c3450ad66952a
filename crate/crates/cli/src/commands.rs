use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use nashvop::equilibrium::{
    best_response_graph, generalized_ne, intersection_superset, shared_constraint_ne, union_subset,
    vector_point_check, Exactness, NashSet,
};
use nashvop::oracle::GridSpec;
use nashvop::rational::parse_rational;
use nashvop::{Error, FeasibleSelector, LinearGame, Polytope, QVector, Rational};
use thiserror::Error as ThisError;

use crate::format::{
    format_point, parse_point, CheckRecord, DiagnosticRecord, FilterRecord, GameFile, LoadError,
    LoadedGame, PlayerCheck, ResultFile, Q,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nashvop",
    version,
    about = "Exact Nash equilibrium sets of linear games"
)]
pub struct Cli {
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an equilibrium set.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        mode: SolveMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one player's best-response graph as maximal efficient faces.
    BestResponse {
        #[arg(long)]
        game: PathBuf,
        /// One-based player index.
        #[arg(long)]
        player: usize,
        #[arg(long, value_enum)]
        set: BestResponseSet,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List grid points with no improving grid deviation.
    Oracle {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        step: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether one point is an equilibrium.
    Check {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated joint strategy, e.g. "1/2,0,3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Grid step; required for games given only by cost expressions.
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Shared,
    Intersection,
    Union,
    Generalized,
}

impl SolveMode {
    fn name(self) -> &'static str {
        match self {
            SolveMode::Shared => "shared",
            SolveMode::Intersection => "intersection",
            SolveMode::Union => "union",
            SolveMode::Generalized => "generalized",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BestResponseSet {
    Shared,
    Intersection,
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Invalid {
        message: String,
        diagnostics: Vec<DiagnosticRecord>,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid { .. } => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn diagnostics(&self) -> Vec<DiagnosticRecord> {
        match self {
            CliError::Invalid { diagnostics, .. } => diagnostics.clone(),
            CliError::Usage(m) => vec![DiagnosticRecord::new("usage", m.clone())],
            CliError::Internal(m) => vec![DiagnosticRecord::new("internal", m.clone())],
        }
    }
}

fn invalid(kind: &str, message: String) -> CliError {
    CliError::Invalid {
        diagnostics: vec![DiagnosticRecord::new(kind, message.clone())],
        message,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InfeasibleCandidate | Error::EmptyDomain | Error::EmptyInput => {
                return CliError::Internal(e.to_string())
            }
            Error::InfeasiblePoint => "infeasible_point",
            Error::EmptyFeasible | Error::EmptySet(_) => "empty_feasible_set",
            Error::EmptyIntersection => "empty_intersection",
            Error::NotShared => "not_shared",
            Error::NotScalar(_) => "not_scalar",
            Error::InvalidPlayer(_) => "invalid_player",
            Error::InvalidGrid(_) | Error::EmptyGrid => "invalid_grid",
            Error::UnboundedInput => "unbounded",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            _ => "invalid_input",
        };
        invalid(kind, e.to_string())
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Core(inner) => inner.into(),
            other => invalid("game_file", other.to_string()),
        }
    }
}

/// A finished command: exit code, optional result document and the stdout
/// summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub result: ResultFile,
    pub summary: String,
}

fn exactness_name(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::Superset => "superset",
        Exactness::Subset => "subset",
    }
}

fn linear(game: &LoadedGame) -> Result<&LinearGame, CliError> {
    let g = game.linear.as_ref().ok_or_else(|| {
        CliError::Usage("this command needs linear objectives for every player".into())
    })?;
    let diagnostics = g.validate();
    if let Some(first) = diagnostics.first() {
        return Err(CliError::Invalid {
            message: first.to_string(),
            diagnostics: diagnostics.iter().map(DiagnosticRecord::from).collect(),
        });
    }
    Ok(g)
}

fn parse_step(src: &str) -> Result<Rational, CliError> {
    let step = parse_rational(src).map_err(|e| CliError::Usage(e.to_string()))?;
    if step <= Rational::from_integer(0.into()) {
        return Err(CliError::Usage(format!(
            "grid step must be positive, got {step}"
        )));
    }
    Ok(step)
}

fn component_summary(title: &str, parts: &[Polytope]) -> String {
    let mut s = String::new();
    let mut points: Vec<QVector> = parts.iter().flat_map(|p| p.vertices().to_vec()).collect();
    points.sort();
    points.dedup();
    let _ = writeln!(s, "{title}: {}", parts.len());
    for (k, p) in parts.iter().enumerate() {
        let _ = writeln!(
            s,
            "  [{}] dim {}, {} vertices",
            k + 1,
            p.dim(),
            p.vertices().len()
        );
        for v in p.vertices() {
            let _ = writeln!(s, "      {}", format_point(v));
        }
    }
    let _ = writeln!(s, "extremal points: {}", points.len());
    for v in &points {
        let _ = writeln!(s, "  {}", format_point(v));
    }
    s
}

pub fn cmd_solve(game: &LoadedGame, mode: SolveMode) -> Result<Outcome, CliError> {
    let g = linear(game)?;
    info!("solving in {} mode", mode.name());
    let (set, report): (NashSet, Option<FilterRecord>) = match mode {
        SolveMode::Shared => (shared_constraint_ne(g)?, None),
        SolveMode::Intersection => (intersection_superset(g)?, None),
        SolveMode::Union => (union_subset(g)?, None),
        SolveMode::Generalized => {
            let (set, report) = generalized_ne(g)?;
            (set, report.as_ref().map(FilterRecord::from))
        }
    };
    let exactness = exactness_name(set.exactness);
    let mut result = ResultFile::new(mode.name()).with_components(&set.components);
    result.exactness = Some(exactness.into());
    result.filter_report = report;
    let summary = format!(
        "mode: {}\nexactness: {exactness}\n{}",
        mode.name(),
        component_summary("components", &set.components)
    );
    Ok(Outcome {
        code: EXIT_OK,
        result,
        summary,
    })
}

pub fn cmd_best_response(
    game: &LoadedGame,
    player: usize,
    set: BestResponseSet,
) -> Result<Outcome, CliError> {
    let g = linear(game)?;
    if player == 0 || player > g.num_players() {
        return Err(Error::InvalidPlayer(player).into());
    }
    let set_name = match set {
        BestResponseSet::Shared => {
            if !g.kind().is_shared() {
                return Err(Error::NotShared.into());
            }
            "shared"
        }
        BestResponseSet::Intersection => "intersection",
    };
    let x = g.feasible_set(FeasibleSelector::Intersection)?;
    let graph = best_response_graph(g, player - 1, &x)?;
    let mut result = ResultFile::new("best-response").with_components(&graph.faces);
    result.exactness = Some("exact".into());
    result.player = Some(player);
    result.set = Some(set_name.into());
    let summary = format!(
        "mode: best-response\nplayer: {player}\nset: {set_name}\n{}",
        component_summary("faces", &graph.faces)
    );
    Ok(Outcome {
        code: EXIT_OK,
        result,
        summary,
    })
}

pub fn cmd_oracle(game: &LoadedGame, step: &str) -> Result<Outcome, CliError> {
    let step = parse_step(step)?;
    let oracle = game.oracle_game()?;
    let grid = GridSpec::uniform(step.clone(), oracle.boxes.len());
    grid.validate(&oracle.boxes)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let points = oracle.grid_nash(&grid)?;
    let parts: Vec<Polytope> = points
        .iter()
        .map(|x| Polytope::from_points(std::slice::from_ref(x)))
        .collect::<Result<_, _>>()?;
    let mut result = ResultFile::new("oracle").with_components(&parts);
    result.exactness = Some("grid".into());
    result.step = Some(Q(step.clone()));
    let mut summary = format!(
        "mode: oracle\nstep: {step}\naccepted points: {}\n",
        points.len()
    );
    for x in &points {
        let _ = writeln!(summary, "  {}", format_point(x));
    }
    Ok(Outcome {
        code: EXIT_OK,
        result,
        summary,
    })
}

pub fn cmd_check(game: &LoadedGame, point: &str, step: Option<&str>) -> Result<Outcome, CliError> {
    let x = parse_point(point).map_err(|e| CliError::Usage(format!("malformed point: {e}")))?;
    let to_q = |v: &[Rational]| v.iter().cloned().map(Q).collect::<Vec<_>>();
    let (method, players) = match &game.linear {
        Some(_) => {
            let g = linear(game)?;
            let verdicts = vector_point_check(g, &x)?;
            let players = verdicts
                .iter()
                .map(|v| PlayerCheck {
                    player: v.player + 1,
                    equilibrium: v.equilibrium,
                    deviation: v.deviation.as_deref().map(to_q),
                })
                .collect::<Vec<_>>();
            ("lp", players)
        }
        None => {
            let step = parse_step(step.ok_or_else(|| {
                CliError::Usage("--step is required for games given by cost expressions".into())
            })?)?;
            let oracle = game.oracle_game()?;
            let grid = GridSpec::uniform(step, oracle.boxes.len());
            grid.validate(&oracle.boxes)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let violation = oracle.check_point(&x, &grid)?;
            let players = (0..oracle.costs.len())
                .map(|i| {
                    let hit = violation.as_ref().filter(|v| v.player == i);
                    PlayerCheck {
                        player: i + 1,
                        equilibrium: hit.is_none(),
                        deviation: hit.map(|v| to_q(&v.deviation)),
                    }
                })
                .collect::<Vec<_>>();
            ("grid", players)
        }
    };
    let equilibrium = players.iter().all(|p| p.equilibrium);
    let mut summary = String::new();
    let push_point = |s: &mut String, v: &[Q]| {
        let xs: QVector = v.iter().map(|q| q.0.clone()).collect();
        let _ = write!(s, "{}", format_point(&xs));
    };
    if equilibrium {
        summary.push_str("EQUILIBRIUM\n");
    } else {
        for p in players.iter().filter(|p| !p.equilibrium) {
            let _ = write!(summary, "VIOLATION by player {}", p.player);
            if let Some(d) = &p.deviation {
                summary.push_str(": deviation ");
                push_point(&mut summary, d);
            }
            summary.push('\n');
        }
    }
    let mut result = ResultFile::new("check");
    result.check = Some(CheckRecord {
        method: method.into(),
        point: to_q(&x),
        equilibrium,
        players,
    });
    Ok(Outcome {
        code: if equilibrium { EXIT_OK } else { EXIT_VIOLATION },
        result,
        summary,
    })
}

fn mode_name(c: &Command) -> &'static str {
    match c {
        Command::Solve { mode, .. } => mode.name(),
        Command::BestResponse { .. } => "best-response",
        Command::Oracle { .. } => "oracle",
        Command::Check { .. } => "check",
    }
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    let path = match command {
        Command::Solve { game, .. }
        | Command::BestResponse { game, .. }
        | Command::Oracle { game, .. }
        | Command::Check { game, .. } => game,
    };
    let game = GameFile::load(path)?;
    match command {
        Command::Solve { mode, .. } => cmd_solve(&game, *mode),
        Command::BestResponse { player, set, .. } => cmd_best_response(&game, *player, *set),
        Command::Oracle { step, .. } => cmd_oracle(&game, step),
        Command::Check { point, step, .. } => cmd_check(&game, point, step.as_deref()),
    }
}

fn out_path(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Solve { out, .. }
        | Command::BestResponse { out, .. }
        | Command::Oracle { out, .. }
        | Command::Check { out, .. } => out.as_ref(),
    }
}

/// Runs one parsed invocation, writing the summary to `stdout`, errors to
/// `stderr` and the result document to `--out` when given.
pub fn run_command(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (code, result) = match execute(&cli.command) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.summary.as_bytes());
            (outcome.code, outcome.result)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let mut result = ResultFile::new(mode_name(&cli.command));
            result.diagnostics = e.diagnostics();
            (e.exit_code(), result)
        }
    };
    if let Some(path) = out_path(&cli.command) {
        if let Err(e) = std::fs::write(path, result.to_json()) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_INTERNAL;
        }
    }
    code
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli, stdout, stderr),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            if code == EXIT_OK {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
    }
}
