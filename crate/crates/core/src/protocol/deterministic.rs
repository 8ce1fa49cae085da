use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::protocol::table::check_n;
use crate::protocol::TruthTable;

type Evaluator = dyn Fn(u32, u32) -> (bool, u32) + Send + Sync;

/// A deterministic two-party protocol given by its evaluator.
///
/// The evaluator maps `(x, y)` to the output bit and the number of bits
/// exchanged on that input, counting the final answer bit. It must be pure.
#[derive(Clone)]
pub struct DeterministicProtocol {
    n: u32,
    declared_cost: u32,
    evaluator: Arc<Evaluator>,
}

impl DeterministicProtocol {
    pub fn new<F>(n: u32, declared_cost: u32, evaluator: F) -> Result<Self>
    where
        F: Fn(u32, u32) -> (bool, u32) + Send + Sync + 'static,
    {
        check_n(n)?;
        Ok(DeterministicProtocol {
            n,
            declared_cost,
            evaluator: Arc::new(evaluator),
        })
    }

    /// Looks the answer up in `table`, charging `cost` bits on every input.
    pub fn from_table(table: TruthTable, cost: u32) -> Self {
        let n = table.n();
        let table = Arc::new(table);
        DeterministicProtocol {
            n,
            declared_cost: cost,
            evaluator: Arc::new(move |x, y| (table.get(x, y), cost)),
        }
    }

    /// Always answers `bit`; one bit to announce it.
    pub fn constant(n: u32, bit: bool) -> Result<Self> {
        Self::new(n, 1, move |_, _| (bit, 1))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn declared_cost(&self) -> u32 {
        self.declared_cost
    }

    /// `(output, bits exchanged)`; inputs must be below `2^n`.
    pub fn evaluate(&self, x: u32, y: u32) -> (bool, u32) {
        debug_assert!(x >> self.n == 0 && y >> self.n == 0);
        (self.evaluator)(x, y)
    }

    pub(crate) fn check_input(&self, x: u32, y: u32) -> Result<()> {
        if x >> self.n != 0 || y >> self.n != 0 {
            return Err(Error::InvalidInput(format!(
                "input ({x}, {y}) out of range for n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for DeterministicProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeterministicProtocol")
            .field("n", &self.n)
            .field("declared_cost", &self.declared_cost)
            .finish_non_exhaustive()
    }
}
