//! Command-line front end for the blindfolded counter game: JSON formats,
//! a parallel verifier, seeded refutation fuzzing and an interactive mode.

pub mod cli;
pub mod error;
pub mod format;
pub mod fuzz;
pub mod parallel;
pub mod play;

pub use cli::run;
pub use error::CliError;
