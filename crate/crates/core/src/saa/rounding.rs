use rand::Rng;

use super::lp::{item_cost, FractionalSolution};
use super::Mode;
use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, Intervention, VertexId};
use crate::rng::{self, Domain};

fn check_gamma_epsilon(gamma: f64, epsilon: f64) -> Result<()> {
    if gamma.is_nan() || gamma <= 1.0 {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// `min((gamma + 5) x ln n / epsilon, 1)`.
pub fn inflated_probability(x: f64, gamma: f64, epsilon: f64, n: usize) -> f64 {
    ((gamma + 5.0) * x * (n as f64).ln() / epsilon).min(1.0)
}

fn build(network: &ContactNetwork, mode: Mode, members: Vec<usize>, provenance: &str) -> Result<Intervention> {
    match mode {
        Mode::Edge => Intervention::edges(network, members, provenance),
        Mode::Node => Intervention::nodes(network, members, provenance),
    }
}

/// Keeps each item independently with its inflated probability. Item `i`
/// (in id order) consumes draw `i` of the rounding stream for `seed`.
pub fn round_randomized(
    frac: &FractionalSolution,
    network: &ContactNetwork,
    gamma: f64,
    epsilon: f64,
    seed: u64,
) -> Result<Intervention> {
    check_gamma_epsilon(gamma, epsilon)?;
    let mut rng = rng::stream(seed, Domain::Rounding, 0);
    let members: Vec<usize> = frac
        .x
        .iter()
        .enumerate()
        .filter_map(|(i, &x)| {
            let u: f64 = rng.random();
            (u < inflated_probability(x, gamma, epsilon, frac.n)).then_some(i)
        })
        .collect();
    build(network, frac.mode, members, "saa-randomized")
}

/// `1 / (4 n^(2/3))`.
pub fn deterministic_threshold(n: usize) -> f64 {
    let c = (n as f64).cbrt();
    1.0 / (4.0 * c * c)
}

/// Keeps every item with `x >= 1/(4 n^(2/3))`. The cost of the result is at
/// most `4 n^(2/3)` times the fractional cost, hence `4 n^(2/3) B`; this is
/// checked, not assumed.
pub fn round_deterministic(frac: &FractionalSolution, network: &ContactNetwork) -> Result<Intervention> {
    let threshold = deterministic_threshold(frac.n);
    let members: Vec<usize> = frac
        .x
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x > 0.0 && x >= threshold)
        .map(|(i, _)| i)
        .collect();
    let chosen = build(network, frac.mode, members, "saa-deterministic")?;
    let factor = 1.0 / threshold;
    let limit = factor * frac.budget;
    // The LP is solved to 1e-7 feasibility in normalized units.
    if chosen.cost() > limit * (1.0 + 1e-6) {
        return Err(Error::GuaranteeViolated(format!(
            "threshold rounding cost {} exceeds {factor} * B = {limit}",
            chosen.cost()
        )));
    }
    debug_assert!(chosen.members().iter().all(|&i| item_cost(network, frac.mode, i) <= frac.budget));
    Ok(chosen)
}

/// `S(j) = {v : y_vj >= epsilon}` for every sample `j`.
pub fn hit_sets(frac: &FractionalSolution, epsilon: f64) -> Result<Vec<Vec<VertexId>>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok((0..frac.num_samples())
        .map(|j| {
            frac.y_sample(j)
                .iter()
                .enumerate()
                .filter(|&(_, &y)| y >= epsilon)
                .map(|(v, _)| v)
                .collect()
        })
        .collect())
}
