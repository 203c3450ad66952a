//! Command-line front end: game-file ingestion, pipeline orchestration and
//! result documents.

pub mod commands;
pub mod format;

pub use commands::{
    cmd_best_response, cmd_check, cmd_oracle, cmd_solve, run, run_command, BestResponseSet, Cli,
    CliError, Command, Outcome, SolveMode, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION,
};
pub use format::{GameFile, LoadError, LoadedGame, ResultFile, SCHEMA};
