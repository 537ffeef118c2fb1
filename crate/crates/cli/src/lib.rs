//! Command-line pipeline: configuration, the end-to-end run, report
//! validation and markdown rendering.

pub mod config;
pub mod pipeline;
pub mod render;
pub mod schema;

pub use config::{Emit, InputFormat, ModelChoice, Overrides, RunConfig};
pub use pipeline::{run, run_with, Report, StageError};
pub use render::render_tables;
pub use schema::validate_report;
