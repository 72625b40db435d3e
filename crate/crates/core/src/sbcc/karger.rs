use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{min_sbcc, UnitGraph};
use crate::error::{Error, Result};
use crate::netcore::{boundary_of, karger_regime, ContactNetwork, Intervention, KargerRegime};
use crate::percolate::{estimate_many, sample_subgraph};
use crate::rng::{self, Domain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KargerParams {
    pub budget: f64,
    /// Must exceed 2.
    pub gamma: f64,
    pub lambda: f64,
    /// Defaults to `ceil(4 ln n)`.
    pub repetitions: Option<u64>,
    pub eval_samples: u64,
    /// Exponent in the sparsification failure probability `n^-d`.
    pub d: f64,
    pub seed: u64,
}

impl Default for KargerParams {
    fn default() -> Self {
        KargerParams {
            budget: 1.0,
            gamma: 4.0,
            lambda: 0.5,
            repetitions: None,
            eval_samples: 10_000,
            d: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KargerCandidate {
    pub repetition: u64,
    /// Edges cut in the sampled graph.
    pub sampled_cut_size: usize,
    /// `|F|` for the boundary `F` of the source side in the full network.
    pub cut_cost: f64,
    pub component_size: usize,
    pub mc_mean: f64,
    pub mc_half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KargerReport {
    pub intervention: Intervention,
    pub candidates: Vec<KargerCandidate>,
    pub chosen_index: usize,
    pub p: f64,
    pub budget: f64,
    pub sampled_budget: f64,
    pub cost: f64,
    /// `None` when the minimum cut is 0 and the bound is undefined.
    pub epsilon_regime: Option<f64>,
    pub in_regime: bool,
    /// `gamma / ((1 - eps) lambda) B`; infinite when `eps >= 1`.
    pub lemma23_bound: f64,
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Repeats: sample `H` from the network, cut `H` with budget `gamma B p`,
/// and lift the source side `S` back to its boundary in the full network.
/// The candidate with the fewest estimated infections wins; all candidates
/// share the same evaluation samples.
pub fn solve_karger(network: &ContactNetwork, params: &KargerParams) -> Result<KargerReport> {
    let KargerParams { budget, gamma, lambda, repetitions, eval_samples, d, seed } = *params;
    if !network.has_unit_costs() {
        return Err(Error::NonUnitCost);
    }
    let p = match network.uniform_probability() {
        Some(p) => p,
        None if network.m() == 0 => 1.0,
        None => return Err(Error::NonUniformProbability),
    };
    if gamma.is_nan() || gamma <= 2.0 {
        return Err(Error::InvalidParameter(format!("gamma must exceed 2, got {gamma}")));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    if eval_samples == 0 {
        return Err(Error::InvalidParameter("eval_samples must be at least 1".into()));
    }
    let regime: Option<KargerRegime> = match karger_regime(network, p, d) {
        Ok(r) => Some(r),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    let reps = repetitions.unwrap_or_else(|| (4.0 * (network.n().max(2) as f64).ln()).ceil() as u64).max(1);
    let sampled_budget = gamma * budget * p;

    let runs: Vec<(u64, usize, Vec<usize>, usize)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let h = UnitGraph::from_sample(network, &sample_subgraph(network, seed, r));
            let sol = min_sbcc(&h, sampled_budget, lambda)?;
            let mut inside = vec![false; network.n()];
            for &v in &sol.component {
                inside[v] = true;
            }
            Ok((r, sol.cut_size, boundary_of(network, &inside), sol.component_size))
        })
        .collect::<Result<_>>()?;
    let interventions: Vec<Intervention> = runs
        .iter()
        .map(|(_, _, f, _)| Intervention::edges(network, f.iter().copied(), "karger"))
        .collect::<Result<_>>()?;
    let estimates = estimate_many(network, &interventions, eval_samples, rng::rebase(seed, Domain::Evaluation))?;
    let candidates: Vec<KargerCandidate> = runs
        .iter()
        .zip(&interventions)
        .zip(&estimates)
        .map(|(((r, sampled, _, size), f), est)| KargerCandidate {
            repetition: *r,
            sampled_cut_size: *sampled,
            cut_cost: f.cost(),
            component_size: *size,
            mc_mean: est.mean,
            mc_half_width: est.half_width,
        })
        .collect();
    let chosen_index = (0..candidates.len())
        .min_by(|&a, &b| {
            let (ca, cb) = (&candidates[a], &candidates[b]);
            ca.mc_mean.total_cmp(&cb.mc_mean).then(ca.cut_cost.total_cmp(&cb.cut_cost)).then(a.cmp(&b))
        })
        .expect("at least one repetition");

    let epsilon_regime = regime.map(|r| r.epsilon);
    let in_regime = regime.is_some_and(|r| r.in_regime);
    let lemma23_bound = match epsilon_regime {
        Some(eps) if eps < 1.0 => gamma / ((1.0 - eps) * lambda) * budget,
        _ => f64::INFINITY,
    };
    let intervention = interventions[chosen_index].clone();
    Ok(KargerReport {
        cost: intervention.cost(),
        intervention,
        candidates,
        chosen_index,
        p,
        budget,
        sampled_budget,
        epsilon_regime,
        in_regime,
        lemma23_bound,
        note: (!in_regime).then(|| "out-of-regime: guarantees void".to_string()),
        runtime_ms: None,
    })
}
