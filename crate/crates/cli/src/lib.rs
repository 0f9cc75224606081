//! File formats, JSON reports and the `cohere` command line.

pub mod app;
pub mod conjecture;
pub mod io;
pub mod json;
pub mod suite;

pub use app::run;
