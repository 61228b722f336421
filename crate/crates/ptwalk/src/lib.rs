//! Command-line front end for the lossy split-step walk: run configuration,
//! parallel sweeps, CSV tables and SVG plots. The numerics live in
//! [`ptwalk_core`].

pub mod config;
pub mod csv;
pub mod plot;
pub mod run;

pub use config::{parse_config, Command, ConfigError, RunConfig};
pub use run::{execute, run, AppError};
