//! Sample-average approximation: draw percolation samples, solve the LP
//! relaxation of the sampled problem, then round.

mod brute;
mod lp;
mod pipeline;
mod rounding;
mod samples;

use serde::{Deserialize, Serialize};

use crate::netcore::InterventionKind;

pub use brute::{brute_force_optimum, BRUTE_FORCE_CAP};
pub use lp::{build_lp, candidates, solve_lp, FractionalSolution, LpModel, Scenario, SolverStatus};
pub use pipeline::{solve_saa, Rounding, SaaParams, SaaReport};
pub use rounding::{deterministic_threshold, hit_sets, inflated_probability, round_deterministic, round_randomized};
pub use samples::{draw_samples, sample_count, SampleSet};

/// What an intervention removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Edge,
    Node,
}

impl Mode {
    pub fn kind(self) -> InterventionKind {
        match self {
            Mode::Edge => InterventionKind::EdgeRemoval,
            Mode::Node => InterventionKind::NodeRemoval,
        }
    }
}
