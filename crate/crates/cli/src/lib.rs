//! Config-driven pipeline commands behind the `autolabel` binary.
//!
//! Every command reads one [`PipelineConfig`], writes its outputs into the
//! configured output directory, and records their SHA-256 digests together
//! with the config hash in `manifest.json`.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run, Command};
pub use config::PipelineConfig;
pub use output::Format;
