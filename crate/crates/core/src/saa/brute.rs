use rayon::prelude::*;

use super::lp::{candidates, item_cost};
use super::samples::SampleSet;
use super::Mode;
use crate::error::{Error, Result};
use crate::netcore::{Intervention, Reacher, RemovalMask};

/// Largest number of removable items the exhaustive search accepts.
pub const BRUTE_FORCE_CAP: usize = 20;

/// Exhaustive minimizer of the sample-average objective over every subset
/// of removable items whose cost fits in `budget`. Ties go to the
/// lexicographically smallest member list. Returns the set and its `h`.
pub fn brute_force_optimum(samples: &SampleSet, budget: f64, mode: Mode) -> Result<(Intervention, f64)> {
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    let network = samples.network();
    let items: Vec<usize> = candidates(network, mode)
        .into_iter()
        .filter(|&i| item_cost(network, mode, i) <= budget)
        .collect();
    if items.len() > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge(format!(
            "{} removable items exceed the brute-force cap of {BRUTE_FORCE_CAP}",
            items.len()
        )));
    }
    let costs: Vec<f64> = items.iter().map(|&i| item_cost(network, mode, i)).collect();
    let masks: Vec<Vec<bool>> = samples.samples().iter().map(|s| s.mask()).collect();

    let best = (0u32..1 << items.len())
        .into_par_iter()
        .filter(|&bits| {
            let cost: f64 = (0..items.len()).filter(|&b| bits >> b & 1 == 1).map(|b| costs[b]).sum();
            cost <= budget
        })
        .map_init(
            || (Reacher::new(network.n()), RemovalMask::none(network)),
            |(reach, removal), bits| {
                let members: Vec<usize> = (0..items.len()).filter(|&b| bits >> b & 1 == 1).map(|b| items[b]).collect();
                for &i in &members {
                    match mode {
                        Mode::Edge => removal.edges[i] = true,
                        Mode::Node => removal.vertices[i] = true,
                    }
                }
                let total: u64 = masks.iter().map(|kept| reach.count_masked(network, kept, removal) as u64).sum();
                for &i in &members {
                    match mode {
                        Mode::Edge => removal.edges[i] = false,
                        Mode::Node => removal.vertices[i] = false,
                    }
                }
                (total, members)
            },
        )
        .min()
        .expect("the empty set is always feasible");

    let (total, members) = best;
    let chosen = match mode {
        Mode::Edge => Intervention::edges(network, members, "brute-force")?,
        Mode::Node => Intervention::nodes(network, members, "brute-force")?,
    };
    Ok((chosen, total as f64 / samples.len() as f64))
}
