//! Convex combinations of points and their exact / approximate sparsification.

mod combination;
mod points;
mod reduce;
mod sample;

pub use combination::{
    eval_combination, eval_combination_with, linf_distance, ConvexCombination, WEIGHT_SUM_TOL,
};
pub use points::{CombinationFile, Point, PointSet, PointSource, WeightEntry};
pub use reduce::{caratheodory_reduce, find_affine_dependence, PIVOT_TOL};
pub use sample::{
    approx_caratheodory_sample, sample_toward, SampledCombination, SamplingPlan, DEFAULT_ETA,
    DEFAULT_MAX_RETRIES,
};
