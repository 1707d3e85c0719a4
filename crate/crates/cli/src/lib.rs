//! Command-line front end for `depthcut`: scene generation, cutting,
//! verification, benchmarking and SVG rendering.

mod app;
pub mod bench;
pub mod render;

pub use app::{run_cli, SEED_VAR};
