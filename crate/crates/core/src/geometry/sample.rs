//! Approximate Carathéodory by i.i.d. sampling with exact verification.
//!
//! Drawing `k` indices from the weights and averaging gives, per coordinate, a
//! mean of `k` bounded variables in `[-1, 1]`. Hoeffding plus a union bound
//! over the `d` coordinates makes the L-inf deviation exceed `delta` with
//! probability at most `eta` when `k >= 2 ln(2d / eta) / delta^2`. The sampler
//! measures the deviation exactly and redraws on failure, so the returned
//! combination always meets the bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{eval_combination, linf_distance, ConvexCombination, PointSource};

pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_MAX_RETRIES: usize = 16;

/// Slack on the `||p||_inf <= 1` precondition.
const RADIUS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingPlan {
    delta: f64,
    eta: f64,
    k: usize,
    max_retries: usize,
}

impl SamplingPlan {
    pub fn new(delta: f64, eta: f64, dimension: usize, max_retries: usize) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "eta must lie in (0, 1), got {eta}"
            )));
        }
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if max_retries == 0 {
            return Err(Error::InvalidInput("max_retries must be positive".into()));
        }
        let k = Self::sample_count(delta, eta, dimension);
        if !(k.is_finite() && k <= u32::MAX as f64) {
            return Err(Error::SizeGuard(format!("sample count {k} is too large")));
        }
        Ok(SamplingPlan {
            delta,
            eta,
            k: k as usize,
            max_retries,
        })
    }

    pub fn with_defaults(delta: f64, dimension: usize) -> Result<Self> {
        Self::new(delta, DEFAULT_ETA, dimension, DEFAULT_MAX_RETRIES)
    }

    /// `ceil(2 ln(2d / eta) / delta^2)`.
    pub fn sample_count(delta: f64, eta: f64, dimension: usize) -> f64 {
        (2.0 * (2.0 * dimension as f64 / eta).ln() / (delta * delta)).ceil()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_retries(&self) -> usize {
        self.max_retries
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledCombination {
    /// Weights are `count / samples`.
    pub combination: ConvexCombination,
    /// `(point index, multiplicity)` in ascending index order.
    pub counts: Vec<(usize, u64)>,
    pub samples: usize,
    /// Exact L-inf distance to the target, at most `plan.delta()`.
    pub distance: f64,
    /// Draws taken, 1 when the first draw passed.
    pub attempts: usize,
}

/// Samples a sparse combination within `plan.delta()` of `eval_combination(c)`.
pub fn approx_caratheodory_sample<P: PointSource + ?Sized>(
    points: &P,
    c: &ConvexCombination,
    plan: &SamplingPlan,
    seed: u64,
) -> Result<SampledCombination> {
    let target = eval_combination(points, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_toward(points, c, &target, plan, &mut rng)
}

/// Like [`approx_caratheodory_sample`], but verifies against an explicit
/// `target` (which need not be exactly `eval_combination(c)`).
pub fn sample_toward<P: PointSource + ?Sized, R: Rng + ?Sized>(
    points: &P,
    c: &ConvexCombination,
    target: &[f64],
    plan: &SamplingPlan,
    rng: &mut R,
) -> Result<SampledCombination> {
    c.check_against(points)?;
    if target.len() != points.dimension() {
        return Err(Error::DimensionMismatch {
            expected: points.dimension(),
            found: target.len(),
        });
    }
    let radius = points.linf_radius();
    if radius > 1.0 + RADIUS_TOL {
        return Err(Error::InvalidInput(format!(
            "points must satisfy ||p||_inf <= 1, found {radius}"
        )));
    }

    let mut cumulative = Vec::with_capacity(c.len());
    let mut acc = 0.0;
    for &(_, w) in c.support() {
        acc += w;
        cumulative.push(acc);
    }
    let last = cumulative.len() - 1;

    let mut best = f64::INFINITY;
    for attempt in 1..=plan.max_retries() {
        let mut hits = vec![0u64; c.len()];
        for _ in 0..plan.k() {
            let u = rng.gen::<f64>() * acc;
            let pos = cumulative.partition_point(|&cdf| cdf <= u).min(last);
            hits[pos] += 1;
        }
        let counts: Vec<(usize, u64)> = c.indices().zip(hits).filter(|&(_, h)| h > 0).collect();
        let k = plan.k() as f64;
        let sampled = ConvexCombination::from_sorted_unchecked(
            counts.iter().map(|&(i, h)| (i, h as f64 / k)).collect(),
            c.num_points(),
        );
        let distance = linf_distance(&eval_combination(points, &sampled)?, target);
        if distance <= plan.delta() {
            return Ok(SampledCombination {
                combination: sampled,
                counts,
                samples: plan.k(),
                distance,
                attempts: attempt,
            });
        }
        best = best.min(distance);
    }
    Err(Error::SamplingFailed {
        attempts: plan.max_retries(),
        best_distance: best,
        delta: plan.delta(),
    })
}
