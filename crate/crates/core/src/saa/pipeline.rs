use serde::{Deserialize, Serialize};

use super::lp::{build_lp, solve_lp, SolverStatus};
use super::rounding::{round_deterministic, round_randomized};
use super::samples::{draw_samples, sample_count};
use super::Mode;
use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, Intervention};
use crate::percolate::{empirical_h, estimate_infections};
use crate::rng::{self, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Randomized,
    Deterministic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaaParams {
    pub budget: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub rounding: Rounding,
    pub mode: Mode,
    pub seed: u64,
    /// Overrides the sample count derived from `epsilon`.
    pub num_samples: Option<u64>,
    /// Fresh samples for re-evaluating the rounded intervention.
    pub eval_samples: u64,
}

impl Default for SaaParams {
    fn default() -> Self {
        SaaParams {
            budget: 1.0,
            epsilon: 0.5,
            gamma: 2.0,
            rounding: Rounding::Randomized,
            mode: Mode::Edge,
            seed: 0,
            num_samples: None,
            eval_samples: 10_000,
        }
    }
}

/// Outcome of [`solve_saa`]. Infection counts include the source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaaReport {
    pub intervention: Intervention,
    /// LP optimum plus one, comparable to `empirical_h`.
    pub lp_objective: f64,
    pub solver_status: Option<SolverStatus>,
    pub n_samples: u64,
    /// Sample count the accuracy target calls for.
    pub theory_samples: Option<u64>,
    /// `n_samples` is below `theory_samples`: the guarantees do not apply.
    pub samples_overridden: bool,
    pub rounding: Rounding,
    pub mode: Mode,
    pub cost: f64,
    pub budget: f64,
    pub cost_ratio: f64,
    pub empirical_h: f64,
    pub fresh_mc_mean: f64,
    pub fresh_mc_half_width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Samples, LP, rounding and a fresh Monte Carlo evaluation in one call.
pub fn solve_saa(network: &ContactNetwork, params: &SaaParams) -> Result<SaaReport> {
    let SaaParams { budget, epsilon, gamma, rounding, mode, seed, num_samples, eval_samples } = *params;
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if eval_samples == 0 {
        return Err(Error::InvalidParameter("eval_samples must be at least 1".into()));
    }
    let theory_samples = sample_count(network.n(), network.m(), epsilon).ok();
    let n_samples = match (num_samples, theory_samples) {
        (Some(n), _) => n,
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::InvalidParameter(
                "cannot size the sample set for this network; pass num_samples".into(),
            ))
        }
    };
    let samples = draw_samples(network, n_samples, seed)?.with_epsilon(Some(epsilon));

    let (intervention, lp_objective, solver_status) = if budget == 0.0 {
        let none = Intervention::empty(mode.kind()).with_provenance("zero-budget");
        let h = empirical_h(samples.samples(), network, &none)?;
        (none, h, None)
    } else {
        let frac = solve_lp(&build_lp(&samples, budget, mode)?)?;
        let f = match rounding {
            Rounding::Randomized => round_randomized(&frac, network, gamma, epsilon, seed)?,
            Rounding::Deterministic => round_deterministic(&frac, network)?,
        };
        (f, frac.objective + 1.0, Some(frac.solver_status))
    };

    let empirical = empirical_h(samples.samples(), network, &intervention)?;
    let fresh = estimate_infections(network, &intervention, eval_samples, rng::rebase(seed, Domain::Evaluation))?;
    let cost = intervention.cost();
    let cost_ratio = if budget > 0.0 {
        cost / budget
    } else if cost == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(SaaReport {
        intervention,
        lp_objective,
        solver_status,
        n_samples,
        theory_samples,
        samples_overridden: theory_samples.is_some_and(|t| n_samples < t),
        rounding,
        mode,
        cost,
        budget,
        cost_ratio,
        empirical_h: empirical,
        fresh_mc_mean: fresh.mean,
        fresh_mc_half_width: fresh.half_width,
        runtime_ms: None,
    })
}
