//! Exact symbolic verification engine for Laplacian flows and coflows of
//! locally conformal parallel (LCP) G2-structures on rank-one solvable
//! extensions of six-dimensional nilpotent Lie groups.
//!
//! The crate works over an exact coefficient ring of finite sums
//! `c · m^p · u^q` where `c, q` are arbitrary rationals, `p` is an integer,
//! `m > 0` is a free metric parameter and `u = 1 + κ m² t` is an opaque
//! time-dependent base that is never expanded. All geometry (exterior
//! algebra, Hodge star, Hodge Laplacian, Levi-Civita curvature) is computed
//! symbolically in an orthonormal coframe, so flow and coflow solutions,
//! soliton constants and curvature tables are certified exactly rather than
//! numerically.
//!
//! Module map:
//! - [`scalar`]: the exact coefficient ring (`Scalar`, `RingContext`).
//! - [`exterior`]: multi-indices, sparse forms, wedge / Hodge star /
//!   interior product in dimension seven.
//! - [`liealg`]: the catalog of solvable Lie algebras, frame scalings and
//!   the Chevalley-Eilenberg differential.
//! - [`g2ops`]: G2-structure operations — induced metric, torsion
//!   classification, codifferential and Hodge Laplacian.
//! - [`flow`]: Laplacian flow and coflow solutions, soliton certificates
//!   and the flow/coflow parameter correspondence.
//! - [`curvature`]: Levi-Civita connection, Riemann and Ricci tensors,
//!   flat-limit and Ricci-ratio checks.

pub mod curvature;
pub mod exterior;
pub mod flow;
pub mod g2ops;
pub mod liealg;
mod ratlin;
pub mod scalar;
