//! Command-line layer for the hybrid qubit and continuous-variable
//! simulator: a sampled-grid backend, scenario and program files, the
//! validation suites and the commands behind the `qhist` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod grid;
pub mod random;
pub mod scenario;
pub mod validate;

pub use error::{CliError, CliResult};
