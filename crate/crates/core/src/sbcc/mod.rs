//! Edge removal for unit costs and a uniform transmission probability:
//! sparsify by percolation, solve a source-based budgeted cut on the sample,
//! and lift the resulting source side back to the full network.

mod flow;
mod karger;
mod sweep;

pub use flow::FlowNetwork;
pub use karger::{solve_karger, KargerCandidate, KargerParams, KargerReport};
pub use sweep::{min_sbcc, min_sbcc_exact, SbccSolution, UnitGraph, SBCC_EXACT_CAP};
