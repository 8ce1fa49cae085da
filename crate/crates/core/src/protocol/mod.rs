//! Boolean functions on `{0,1}^n x {0,1}^n`, deterministic and public-coin
//! protocols, and their embedding as points of `R^N` with `N = 2^{2n}`.
//!
//! Input pairs are packed as `x * 2^n + y`.

mod deterministic;
mod public;
mod table;

pub use deterministic::DeterministicProtocol;
pub use public::{
    comm_cost, error_linf, mixture_table, mixture_table_with, output_table, output_tables,
    output_tables_with, ProtocolPoints, PublicCoinProtocol,
};
pub use table::{ProbabilityTable, ProbabilityTableFile, TruthTable, TruthTableFile, MAX_N};
