//! A data-selection and summarization engine built on submodular objective
//! functions with memoized lazy-greedy optimization.
//!
//! The crate is organized around three layers:
//!
//! - objectives ([`functions`]) over kernels and distance matrices
//!   ([`similarity`]) built from ingested features ([`ingest`]),
//! - constrained greedy solvers ([`optimize`]) sharing a memoized
//!   gain/commit interface ([`ground::Objective`]),
//! - end-to-end pipelines ([`pipelines`]) for summarization, subset
//!   selection, and diversified active learning, plus evaluation
//!   ([`metrics`]) and a timing harness ([`bench`]).
//!
//! Data-parallel inner loops (kernel construction, fresh-gain scans) use
//! rayon behind the default `parallel` feature and fall back to identical
//! sequential loops without it.

pub mod bench;
pub mod error;
pub mod functions;
pub mod ground;
pub mod ingest;
pub mod metrics;
pub mod optimize;
pub(crate) mod par;
pub mod pipelines;
pub mod similarity;
pub mod synth;

pub use error::{Error, Result};
pub use ground::{Family, GroundSet, ModelInfo, Objective, Selection};

/// Absolute-or-relative 1e-9 agreement used by the gain/eval consistency
/// contracts.
pub fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * 1f64.max(a.abs()).max(b.abs())
}
