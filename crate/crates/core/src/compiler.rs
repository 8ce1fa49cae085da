//! Public-coin to private-coin compilation.
//!
//! A public-coin protocol is a point `P` in the convex hull of its members'
//! output tables. Sampling `k` members and averaging gives `P'` with
//! `||P - P'||_inf <= delta`; Alice then draws one of the sampled members with
//! her private coins, sends its index in `ceil(log2 k)` bits, and both run it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{
    caratheodory_reduce, linf_distance, sample_toward, ConvexCombination, PointSource,
    SamplingPlan, DEFAULT_ETA, DEFAULT_MAX_RETRIES,
};
use crate::protocol::{
    comm_cost, error_linf, output_tables_with, DeterministicProtocol, ProbabilityTable,
    ProtocolPoints, PublicCoinProtocol, TruthTable, MAX_N,
};

/// Largest embedding dimension for which [`ReductionMode::Auto`] runs the exact reduction.
pub const AUTO_REDUCTION_MAX_DIMENSION: usize = 4096;

/// Floating-point slack on the `error <= epsilon + delta` check.
pub const GUARANTEE_SLACK: f64 = 1e-12;

/// Coordinates per work unit when tabulating a compiled protocol.
const TABLE_CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionMode {
    /// Reduce when the support exceeds `N + 1` and `N <= 4096`.
    #[default]
    Auto,
    /// Reduce whenever the support exceeds `N + 1`.
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewmanOptions {
    pub delta: f64,
    pub eta: f64,
    pub max_retries: usize,
    pub reduction: ReductionMode,
    pub seed: u64,
}

impl NewmanOptions {
    pub fn new(delta: f64, seed: u64) -> Self {
        NewmanOptions {
            delta,
            eta: DEFAULT_ETA,
            max_retries: DEFAULT_MAX_RETRIES,
            reduction: ReductionMode::Auto,
            seed,
        }
    }
}

/// One member of a compiled protocol, chosen `multiplicity` times out of
/// the protocol's denominator.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Position of the protocol in the public-coin family it came from.
    pub source_index: usize,
    pub multiplicity: u64,
    pub protocol: DeterministicProtocol,
}

/// Private-coin protocol: Alice draws branch `i` with probability
/// `multiplicity_i / denominator`, sends `i`, then both parties run it.
#[derive(Clone, Debug)]
pub struct PrivateCoinProtocol {
    n: u32,
    branches: Vec<Branch>,
    denominator: u64,
    index_bits: u32,
    total_cost: u32,
}

/// `ceil(log2 k)`, and 0 for `k <= 1`.
pub fn index_bits_for(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        (k - 1).ilog2() + 1
    }
}

impl PrivateCoinProtocol {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let first = branches.first().ok_or_else(|| {
            Error::InvalidInput("private protocol needs at least one branch".into())
        })?;
        let n = first.protocol.n();
        if branches.iter().any(|b| b.protocol.n() != n) {
            return Err(Error::InvalidInput(
                "branches disagree on input length".into(),
            ));
        }
        if branches.iter().any(|b| b.multiplicity == 0) {
            return Err(Error::InvalidInput("branch with zero multiplicity".into()));
        }
        let denominator = branches
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b.multiplicity))
            .ok_or_else(|| Error::InvalidInput("multiplicities overflow".into()))?;
        let index_bits = index_bits_for(branches.len());
        let max_cost = branches
            .iter()
            .map(|b| b.protocol.declared_cost())
            .max()
            .unwrap_or(0);
        Ok(PrivateCoinProtocol {
            n,
            branches,
            denominator,
            index_bits,
            total_cost: index_bits + max_cost,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Number of branches.
    pub fn k(&self) -> usize {
        self.branches.len()
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn weights(&self) -> Vec<f64> {
        self.branches
            .iter()
            .map(|b| b.multiplicity as f64 / self.denominator as f64)
            .collect()
    }

    pub fn index_bits(&self) -> u32 {
        self.index_bits
    }

    /// `index_bits + max declared cost`.
    pub fn total_cost(&self) -> u32 {
        self.total_cost
    }

    /// Acceptance probability on every input, by exhaustive evaluation of
    /// each branch. Entries are `(sum of multiplicities accepting) / denominator`,
    /// so they are exact whenever the true value is 0 or 1.
    pub fn mixture_table(&self) -> Result<ProbabilityTable> {
        self.mixture_table_with(Exec::default())
    }

    pub fn mixture_table_with(&self, exec: Exec) -> Result<ProbabilityTable> {
        let protocols: Vec<DeterministicProtocol> =
            self.branches.iter().map(|b| b.protocol.clone()).collect();
        let tables = output_tables_with(&protocols, exec)?;
        let multiplicities: Vec<u64> = self.branches.iter().map(|b| b.multiplicity).collect();
        Ok(tabulate_counts(
            self.n,
            &tables,
            &multiplicities,
            self.denominator,
            exec,
        ))
    }

    fn draw_branch<R: Rng + ?Sized>(&self, rng: &mut R) -> &Branch {
        let mut u = rng.gen_range(0..self.denominator);
        for b in &self.branches {
            if u < b.multiplicity {
                return b;
            }
            u -= b.multiplicity;
        }
        unreachable!("draw below the multiplicity total")
    }
}

fn tabulate_counts(
    n: u32,
    tables: &[TruthTable],
    multiplicities: &[u64],
    denominator: u64,
    exec: Exec,
) -> ProbabilityTable {
    let mut values = vec![0.0; 1usize << (2 * n)];
    exec.for_each_chunk(&mut values, TABLE_CHUNK, |offset, out| {
        let mut hits = vec![0u64; out.len()];
        for (t, &m) in tables.iter().zip(multiplicities) {
            for (j, h) in hits.iter_mut().enumerate() {
                if t.get_index(offset + j) {
                    *h += m;
                }
            }
        }
        for (v, h) in out.iter_mut().zip(hits) {
            *v = h as f64 / denominator as f64;
        }
    });
    ProbabilityTable::new(n, values).expect("count ratios lie in [0, 1]")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationReport {
    pub n: u32,
    /// `||f - P||_inf` of the input public-coin protocol.
    pub epsilon_measured: f64,
    pub delta_target: f64,
    pub eta: f64,
    /// `||f - P'||_inf` of the compiled protocol.
    pub error_measured: f64,
    /// `||P - P'||_inf`.
    pub distance_measured: f64,
    /// Number of branches of the compiled protocol.
    pub k: usize,
    /// Draws taken by the sampler (the denominator of the branch weights).
    pub samples: usize,
    pub index_bits: u32,
    pub public_cost: u32,
    pub private_cost: u32,
    pub reduction_used: bool,
    pub public_support: usize,
    pub reduced_support: usize,
    pub attempts: usize,
    pub seed: u64,
    pub guarantee_holds: bool,
}

/// Compiles `public` into a private-coin protocol for `f`.
///
/// The returned report records the measured input error `epsilon`, the
/// compiled error and whether `error <= epsilon + delta` held on all inputs.
/// A violated guarantee is reported, not returned as an error.
pub fn newman_transform(
    f: &TruthTable,
    public: &PublicCoinProtocol,
    options: &NewmanOptions,
) -> Result<(PrivateCoinProtocol, CompilationReport)> {
    newman_transform_with(f, public, options, Exec::default())
}

pub fn newman_transform_with(
    f: &TruthTable,
    public: &PublicCoinProtocol,
    options: &NewmanOptions,
    exec: Exec,
) -> Result<(PrivateCoinProtocol, CompilationReport)> {
    if f.n() != public.n() {
        return Err(Error::InvalidInput(format!(
            "function has n = {} but protocol has n = {}",
            f.n(),
            public.n()
        )));
    }
    let points = ProtocolPoints::new(output_tables_with(public.protocols(), exec)?)?;
    let dimension = points.dimension();
    let plan = SamplingPlan::new(options.delta, options.eta, dimension, options.max_retries)?;

    let mixture = crate::geometry::eval_combination_with(&points, public.weights(), exec)?;
    let mixture = ProbabilityTable::new(f.n(), mixture.into_inner())?;
    let epsilon = error_linf(f, &mixture)?;

    let reduce = public.weights().len() > dimension + 1
        && match options.reduction {
            ReductionMode::Auto => dimension <= AUTO_REDUCTION_MAX_DIMENSION,
            ReductionMode::On => true,
            ReductionMode::Off => false,
        };
    let combination: ConvexCombination = if reduce {
        caratheodory_reduce(&points, public.weights())?
    } else {
        public.weights().clone()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let sampled = sample_toward(&points, &combination, mixture.values(), &plan, &mut rng)?;

    let branches = sampled
        .counts
        .iter()
        .map(|&(i, m)| Branch {
            source_index: i,
            multiplicity: m,
            protocol: public.protocols()[i].clone(),
        })
        .collect();
    let private = PrivateCoinProtocol::new(branches)?;
    let compiled = private.mixture_table_with(exec)?;
    let error = error_linf(f, &compiled)?;

    let report = CompilationReport {
        n: f.n(),
        epsilon_measured: epsilon,
        delta_target: options.delta,
        eta: options.eta,
        error_measured: error,
        distance_measured: linf_distance(mixture.values(), compiled.values()),
        k: private.k(),
        samples: sampled.samples,
        index_bits: private.index_bits(),
        public_cost: comm_cost(public)?,
        private_cost: private.total_cost(),
        reduction_used: reduce,
        public_support: public.weights().len(),
        reduced_support: combination.len(),
        attempts: sampled.attempts,
        seed: options.seed,
        guarantee_holds: error <= epsilon + options.delta + GUARANTEE_SLACK,
    };
    Ok((private, report))
}

/// One run of `p` on `(x, y)`: Alice draws a branch from `seed`, sends its
/// index, and both run it. Returns the output and the bits exchanged.
pub fn run_private_protocol(
    p: &PrivateCoinProtocol,
    x: u32,
    y: u32,
    seed: u64,
) -> Result<(bool, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_private_protocol_rng(p, x, y, &mut rng)
}

pub fn run_private_protocol_rng<R: Rng + ?Sized>(
    p: &PrivateCoinProtocol,
    x: u32,
    y: u32,
    rng: &mut R,
) -> Result<(bool, u32)> {
    let branch = p.draw_branch(rng);
    branch.protocol.check_input(x, y)?;
    let (out, cost) = branch.protocol.evaluate(x, y);
    Ok((out, p.index_bits() + cost))
}

/// Fraction of `trials` runs on `(x, y)` that output 1, using seeds
/// `base_seed, base_seed + 1, ...`.
pub fn empirical_frequency(
    p: &PrivateCoinProtocol,
    x: u32,
    y: u32,
    trials: u64,
    base_seed: u64,
) -> Result<f64> {
    empirical_frequency_with(p, x, y, trials, base_seed, Exec::default())
}

pub fn empirical_frequency_with(
    p: &PrivateCoinProtocol,
    x: u32,
    y: u32,
    trials: u64,
    base_seed: u64,
    exec: Exec,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    p.branches[0].protocol.check_input(x, y)?;
    let hits = exec.count_range(0..trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(t));
        p.draw_branch(&mut rng).protocol.evaluate(x, y).0
    });
    Ok(hits as f64 / trials as f64)
}

/// Three-sigma binomial tolerance plus fixed slack for `trials` runs.
pub fn frequency_tolerance(trials: u64) -> f64 {
    3.0 * (0.25 / trials as f64).sqrt() + 0.005
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: u32,
    pub dimension: u64,
    pub k: u64,
    pub index_bits: u32,
    pub log2_k: f64,
}

/// Sample count and index length of the compiled protocol for each `n`,
/// with `d = 2^{2n}`.
pub fn measured_cost_bound_check(
    n_values: &[u32],
    delta: f64,
    eta: f64,
) -> Result<Vec<ScalingRow>> {
    n_values
        .iter()
        .map(|&n| {
            if n == 0 || n > MAX_N {
                return Err(Error::SizeGuard(format!("n = {n} outside 1..={MAX_N}")));
            }
            let dimension = 1usize << (2 * n);
            let k = SamplingPlan::new(delta, eta, dimension, 1)?.k();
            Ok(ScalingRow {
                n,
                dimension: dimension as u64,
                k: k as u64,
                index_bits: index_bits_for(k),
                log2_k: (k as f64).log2(),
            })
        })
        .collect()
}

/// For every pair `n > n'`: `bits(n) - bits(n') <= ceil(log2(n / n')) + 1`,
/// and bits never decrease with `n`.
pub fn logarithmic_growth(rows: &[ScalingRow]) -> bool {
    rows.iter().all(|a| {
        rows.iter().filter(|b| a.n > b.n).all(|b| {
            let allowed = (a.n as f64 / b.n as f64).log2().ceil() as i64 + 1;
            let grew = a.index_bits as i64 - b.index_bits as i64;
            grew >= 0 && grew <= allowed
        })
    })
}
