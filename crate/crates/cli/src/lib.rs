//! Command-line front end for the ezcasp solver: answer-set printing, CLP
//! export, the benchmark harness and post-checks for the toy domains.

pub mod app;
pub mod bench;
pub mod checks;
pub mod clp;
pub mod output;
