//! Command-line surface for the `g2flow` verification engine.
//!
//! Three commands are exposed by the `g2flow` binary:
//! - `verify` runs per-algebra check suites ([`verify`]) and reports one
//!   pass/fail line per (algebra, suite) pair, with a witness on failure;
//! - `solve` prints the exact flow and coflow parameters of a catalog
//!   algebra ([`solve`]), optionally sampling the coframe numerically;
//! - `report` regenerates the golden data tables ([`reports`]) as
//!   deterministic, byte-identical files.

pub mod reports;
pub mod solve;
pub mod verify;
