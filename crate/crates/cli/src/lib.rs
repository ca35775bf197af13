//! Library half of the `skolem` command-line tool: wire documents and
//! subcommand logic.

pub mod commands;
pub mod wire;

pub use commands::{exit, CommandError, RunOptions};
pub use wire::{ProblemInstance, ResultDocument};
