//! Command-line front end: surface configuration files, the analysis
//! commands and their CSV/JSON output.
//!
//! Exit status: 0 success, 1 selftest failure or unclassified error,
//! 2 invalid input (schema, values, flags, tolerance overrides), 3 non-convex
//! surface, 4 no intersection, 5 tangential contact, 6 I/O error,
//! 7 numerical failure during tracing or analysis.

pub mod commands;
pub mod config;
pub mod output;
pub mod tolerances;

pub use commands::{exit_code, RunReport};
pub use config::{InputError, SurfaceConfig};
pub use tolerances::Tolerances;
