//! Experiment runner around the `flexling` library: JSON configuration,
//! the `infer` / `compare` / `approx` / `report` subcommands and their CSV
//! and SVG outputs.

pub mod commands;
pub mod config;
pub mod output;
