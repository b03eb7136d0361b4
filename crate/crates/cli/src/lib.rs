//! Scenario files, the check runner, and report rendering behind the `morita` binary.

pub mod emit;
pub mod runner;
pub mod scenario;
