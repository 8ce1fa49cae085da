use std::ops::Range;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{eval_combination_with, ConvexCombination, PointSource};
use crate::protocol::table::check_n;
use crate::protocol::{DeterministicProtocol, ProbabilityTable, TruthTable};

/// A distribution over deterministic protocols sharing one input length.
#[derive(Clone, Debug)]
pub struct PublicCoinProtocol {
    n: u32,
    protocols: Vec<DeterministicProtocol>,
    weights: ConvexCombination,
}

impl PublicCoinProtocol {
    pub fn new(protocols: Vec<DeterministicProtocol>, weights: ConvexCombination) -> Result<Self> {
        let n = protocols
            .first()
            .ok_or_else(|| Error::InvalidInput("no protocols".into()))?
            .n();
        if let Some(p) = protocols.iter().find(|p| p.n() != n) {
            return Err(Error::InvalidInput(format!(
                "protocols disagree on input length ({} vs {n})",
                p.n()
            )));
        }
        if weights.num_points() != protocols.len() {
            return Err(Error::DimensionMismatch {
                expected: protocols.len(),
                found: weights.num_points(),
            });
        }
        Ok(PublicCoinProtocol {
            n,
            protocols,
            weights,
        })
    }

    pub fn uniform(protocols: Vec<DeterministicProtocol>) -> Result<Self> {
        let weights = ConvexCombination::uniform(protocols.len())?;
        Self::new(protocols, weights)
    }

    pub fn point_mass(protocol: DeterministicProtocol) -> Self {
        PublicCoinProtocol {
            n: protocol.n(),
            protocols: vec![protocol],
            weights: ConvexCombination::point_mass(0, 1).expect("valid point mass"),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn protocols(&self) -> &[DeterministicProtocol] {
        &self.protocols
    }

    pub fn weights(&self) -> &ConvexCombination {
        &self.weights
    }
}

/// Output tables of a protocol family viewed as 0/1 points of `R^{4^n}`.
#[derive(Clone, Debug)]
pub struct ProtocolPoints {
    n: u32,
    tables: Vec<TruthTable>,
}

impl ProtocolPoints {
    pub fn new(tables: Vec<TruthTable>) -> Result<Self> {
        let n = tables
            .first()
            .ok_or_else(|| Error::InvalidInput("no tables".into()))?
            .n();
        if tables.iter().any(|t| t.n() != n) {
            return Err(Error::InvalidInput(
                "tables disagree on input length".into(),
            ));
        }
        Ok(ProtocolPoints { n, tables })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tables(&self) -> &[TruthTable] {
        &self.tables
    }
}

impl PointSource for ProtocolPoints {
    fn dimension(&self) -> usize {
        1usize << (2 * self.n)
    }

    fn len(&self) -> usize {
        self.tables.len()
    }

    fn coordinate(&self, index: usize, coord: usize) -> f64 {
        if self.tables[index].get_index(coord) {
            1.0
        } else {
            0.0
        }
    }

    fn accumulate(&self, index: usize, weight: f64, coords: Range<usize>, acc: &mut [f64]) {
        let table = &self.tables[index];
        for (a, j) in acc.iter_mut().zip(coords) {
            if table.get_index(j) {
                *a += weight;
            }
        }
    }

    fn linf_radius(&self) -> f64 {
        if self.tables.iter().any(|t| t.count_ones() > 0) {
            1.0
        } else {
            0.0
        }
    }
}

/// Enumerates all `4^n` inputs of `p`, checking each cost against the declared one.
pub fn output_table(p: &DeterministicProtocol) -> Result<TruthTable> {
    check_n(p.n())?;
    let mut table = TruthTable::zeros(p.n())?;
    let side = 1u32 << p.n();
    for x in 0..side {
        for y in 0..side {
            let (bit, cost) = p.evaluate(x, y);
            if cost > p.declared_cost() {
                return Err(Error::CostExceeded {
                    x,
                    y,
                    cost,
                    declared: p.declared_cost(),
                });
            }
            if bit {
                let i = table.index(x, y);
                table.set_index(i, true);
            }
        }
    }
    Ok(table)
}

pub fn output_tables(protocols: &[DeterministicProtocol]) -> Result<Vec<TruthTable>> {
    output_tables_with(protocols, Exec::default())
}

pub fn output_tables_with(
    protocols: &[DeterministicProtocol],
    exec: Exec,
) -> Result<Vec<TruthTable>> {
    exec.map(protocols, output_table).into_iter().collect()
}

/// `sum_i w_i * output_i(x, y)` for every input pair.
pub fn mixture_table(public: &PublicCoinProtocol) -> Result<ProbabilityTable> {
    mixture_table_with(public, Exec::default())
}

pub fn mixture_table_with(public: &PublicCoinProtocol, exec: Exec) -> Result<ProbabilityTable> {
    // Only supported protocols are enumerated; others are all-zero placeholders.
    let mut tables = vec![TruthTable::zeros(public.n())?; public.protocols().len()];
    let supported: Vec<usize> = public.weights().indices().collect();
    let computed = exec.map(&supported, |&i| output_table(&public.protocols()[i]));
    for (i, t) in supported.into_iter().zip(computed) {
        tables[i] = t?;
    }
    let points = ProtocolPoints::new(tables)?;
    let values = eval_combination_with(&points, public.weights(), exec)?;
    ProbabilityTable::new(public.n(), values.into_inner())
}

/// Worst-case error `max_{x,y} |f(x, y) - t(x, y)|`.
pub fn error_linf(f: &TruthTable, t: &ProbabilityTable) -> Result<f64> {
    if f.n() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: t.values().len(),
        });
    }
    let values = t.values();
    Ok(Exec::default().max_range(0..f.len(), |i| {
        let truth = if f.get_index(i) { 1.0 } else { 0.0 };
        (truth - values[i]).abs()
    }))
}

/// Worst-case bits over protocols that carry positive weight.
pub fn comm_cost(public: &PublicCoinProtocol) -> Result<u32> {
    public
        .weights()
        .indices()
        .map(|i| public.protocols()[i].declared_cost())
        .max()
        .ok_or_else(|| Error::InvalidInput("empty support".into()))
}
