use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use newman_core::compiler::{frequency_tolerance, logarithmic_growth, ReductionMode};
use newman_core::geometry::{linf_distance, sample_toward, CombinationFile};
use newman_core::json;
use newman_core::{
    build_equality, caratheodory_reduce, empirical_frequency, eval_combination,
    measured_cost_bound_check, newman_transform, CompilationReport, NewmanOptions, PointSource,
    SamplingPlan, ScalingRow,
};

use crate::failure::Failure;
use crate::{NewmanArgs, ScalingArgs, SparsifyArgs, VerifyArgs};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sparsify(args: SparsifyArgs) -> Result<(), Failure> {
    let file = CombinationFile::from_json(&read(&args.input)?)?;
    let points = file.point_set()?;
    let input = file
        .combination()?
        .ok_or_else(|| Failure::Usage("input has no \"weights\" field".into()))?;
    let target = eval_combination(&points, &input)?;
    let s = &args.sampling;
    let plan = SamplingPlan::new(s.delta, s.eta, points.dimension(), s.max_retries)?;

    let start = if args.exact {
        caratheodory_reduce(&points, &input)?
    } else {
        input.clone()
    };
    let result = if start.len() == 1 {
        start
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        sample_toward(&points, &start, &target, &plan, &mut rng)?.combination
    };

    let distance = linf_distance(&eval_combination(&points, &result)?, &target);
    emit(
        &CombinationFile::from_parts(&points, Some(&result)).to_json()?,
        args.output.as_deref(),
    )?;
    eprintln!(
        "distance {} support {} (input support {}, delta {})",
        json::format_f64(distance),
        result.len(),
        input.len(),
        json::format_f64(s.delta)
    );
    if distance <= s.delta {
        Ok(())
    } else {
        Err(Failure::Algorithmic(format!(
            "distance {distance} exceeds delta {}",
            s.delta
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub kind: String,
    pub n: u32,
    pub t: u32,
}

/// Report of one `newman` run plus what is needed to rebuild it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationRun {
    pub family: Family,
    pub reduction_mode: ReductionMode,
    pub max_retries: usize,
    #[serde(flatten)]
    pub report: CompilationReport,
}

fn compile_equality(
    n: u32,
    t: u32,
    options: &NewmanOptions,
) -> Result<(newman_core::PrivateCoinProtocol, CompilationRun), Failure> {
    let (f, public) = build_equality(n, t)?;
    let (private, report) = newman_transform(&f, &public, options)?;
    let run = CompilationRun {
        family: Family {
            kind: "equality".into(),
            n,
            t,
        },
        reduction_mode: options.reduction,
        max_retries: options.max_retries,
        report,
    };
    Ok((private, run))
}

pub fn newman(args: NewmanArgs) -> Result<(), Failure> {
    let s = &args.sampling;
    let options = NewmanOptions {
        delta: s.delta,
        eta: s.eta,
        max_retries: s.max_retries,
        reduction: match (args.exact_reduction, args.no_exact_reduction) {
            (true, _) => ReductionMode::On,
            (_, true) => ReductionMode::Off,
            _ => ReductionMode::Auto,
        },
        seed: s.seed,
    };
    // validate before the (possibly large) family is built
    SamplingPlan::new(options.delta, options.eta, 1, options.max_retries)?;
    let (_, run) = compile_equality(args.n, args.t, &options)?;
    emit(&json::to_string(&run)?, args.output.as_deref())?;
    let r = &run.report;
    if r.guarantee_holds {
        Ok(())
    } else {
        Err(Failure::Algorithmic(format!(
            "compiled error {} exceeds epsilon {} + delta {}",
            r.error_measured, r.epsilon_measured, r.delta_target
        )))
    }
}

#[derive(Debug, Serialize)]
struct InputCheck {
    x: u32,
    y: u32,
    expected: f64,
    empirical: f64,
    deviation: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    trials: u64,
    seed: u64,
    tolerance: f64,
    k: usize,
    index_bits: u32,
    max_bits_used: u32,
    total_cost: u32,
    inputs: Vec<InputCheck>,
    all_pass: bool,
}

pub fn verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(Failure::Usage("trials must be positive".into()));
    }
    let stored: CompilationRun = serde_json::from_str(&read(&args.report)?)?;
    if stored.family.kind != "equality" {
        return Err(Failure::Usage(format!(
            "unknown protocol family {:?}",
            stored.family.kind
        )));
    }
    let options = NewmanOptions {
        delta: stored.report.delta_target,
        eta: stored.report.eta,
        max_retries: stored.max_retries,
        reduction: stored.reduction_mode,
        seed: stored.report.seed,
    };
    let (private, rebuilt) = compile_equality(stored.family.n, stored.family.t, &options)?;
    if rebuilt != stored {
        return Err(Failure::Usage(
            "report does not match a recompilation of its parameters".into(),
        ));
    }

    let table = private.mixture_table()?;
    let side = 1u32 << private.n();
    let total = (side as usize) * (side as usize);
    let picks: Vec<usize> = if args.inputs == 0 || args.inputs >= total {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut v = index::sample(&mut rng, total, args.inputs).into_vec();
        v.sort_unstable();
        v
    };

    let tolerance = frequency_tolerance(args.trials);
    let mut inputs = Vec::with_capacity(picks.len());
    for idx in picks {
        let (x, y) = ((idx >> private.n()) as u32, (idx as u32) & (side - 1));
        let expected = table.get(x, y);
        let empirical = empirical_frequency(&private, x, y, args.trials, args.seed)?;
        let deviation = (empirical - expected).abs();
        // deterministic entries must be reproduced exactly
        let pass = if expected == 0.0 || expected == 1.0 {
            deviation == 0.0
        } else {
            deviation <= tolerance
        };
        inputs.push(InputCheck {
            x,
            y,
            expected,
            empirical,
            deviation,
            pass,
        });
    }
    let max_bits_used = (0..64u64)
        .map(|s| {
            newman_core::run_private_protocol(&private, 0, side - 1, args.seed.wrapping_add(s))
        })
        .map(|r| r.map(|(_, bits)| bits))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let all_pass = inputs.iter().all(|c| c.pass) && max_bits_used <= private.total_cost();
    let report = VerifyReport {
        trials: args.trials,
        seed: args.seed,
        tolerance,
        k: private.k(),
        index_bits: private.index_bits(),
        max_bits_used,
        total_cost: private.total_cost(),
        inputs,
        all_pass,
    };
    emit(&json::to_string(&report)?, args.output.as_deref())?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Algorithmic(
            "empirical frequencies outside tolerance".into(),
        ))
    }
}

#[derive(Debug, Serialize)]
struct HalvedDelta {
    delta: f64,
    rows: Vec<ScalingRow>,
    /// `log2 k(delta / 2) - log2 k(delta)` per n.
    log2_k_increase: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ScalingReport {
    delta: f64,
    eta: f64,
    rows: Vec<ScalingRow>,
    logarithmic_growth: bool,
    halved: HalvedDelta,
}

pub fn scaling(args: ScalingArgs) -> Result<(), Failure> {
    if args.n_values.is_empty() {
        return Err(Failure::Usage("no n values given".into()));
    }
    let rows = measured_cost_bound_check(&args.n_values, args.delta, args.eta)?;
    let halved_rows = measured_cost_bound_check(&args.n_values, args.delta / 2.0, args.eta)?;
    let increase = rows
        .iter()
        .zip(&halved_rows)
        .map(|(a, b)| b.log2_k - a.log2_k)
        .collect();
    let report = ScalingReport {
        delta: args.delta,
        eta: args.eta,
        logarithmic_growth: logarithmic_growth(&rows),
        rows,
        halved: HalvedDelta {
            delta: args.delta / 2.0,
            rows: halved_rows,
            log2_k_increase: increase,
        },
    };
    emit(&json::to_string(&report)?, args.output.as_deref())?;
    if report.logarithmic_growth {
        Ok(())
    } else {
        Err(Failure::Algorithmic(
            "index length grows faster than log n".into(),
        ))
    }
}
