//! Sparsification of convex combinations (exact and approximate Carathéodory)
//! and a compiler from public-coin to private-coin communication protocols.
//!
//! The pipeline embeds every deterministic protocol as its 0/1 output table in
//! `R^N` with `N = 2^{2n}`, treats a public-coin protocol as a convex
//! combination of those points, and replaces it by a sparse combination whose
//! support index Alice can send to Bob with `ceil(log2 k)` bits.
//!
//! With the default `parallel` feature the exhaustive verification loops run
//! on rayon; every reduction is done in a fixed order so results are
//! bit-identical to the sequential build.

pub mod compiler;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod harness;
pub mod json;
pub mod protocol;

pub use compiler::{
    empirical_frequency, measured_cost_bound_check, newman_transform, run_private_protocol,
    CompilationReport, NewmanOptions, PrivateCoinProtocol, ReductionMode, ScalingRow,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{
    approx_caratheodory_sample, caratheodory_reduce, eval_combination, find_affine_dependence,
    ConvexCombination, Point, PointSet, PointSource, SampledCombination, SamplingPlan,
};
pub use harness::{brute_force_best_error, build_equality, build_random_mixture};
pub use protocol::{
    comm_cost, error_linf, mixture_table, output_table, DeterministicProtocol, ProbabilityTable,
    PublicCoinProtocol, TruthTable,
};
