//! Edge percolation and expected infection counts.
//!
//! The expected number of infections under an intervention is the expected
//! size of the source's component after deleting the intervention and then
//! keeping every edge `e` independently with probability `p_e`.

mod exact;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, EdgeId, Intervention, Reacher, RemovalMask};
use crate::rng::{self, Domain};
use crate::stats::{IntMoments, CONFIDENCE};

pub use exact::{exact_expected_infections, EXACT_RANDOM_EDGE_CAP};

/// One realized subgraph `G_j`: the edges retained in sample `sample_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PercolationSample {
    pub kept_edges: Vec<EdgeId>,
    pub sample_index: u64,
    pub seed: u64,
    /// Edge count of the network the sample was drawn from.
    pub num_edges: usize,
}

impl PercolationSample {
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.num_edges];
        for &e in &self.kept_edges {
            mask[e] = true;
        }
        mask
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.kept_edges.binary_search(&e).is_ok()
    }

    /// Checks that this sample could have been drawn from `network`.
    pub fn check_against(&self, network: &ContactNetwork) -> Result<()> {
        if self.num_edges != network.m() {
            return Err(Error::SampleMismatch(format!(
                "sample {} was drawn from a network with {} edges, this one has {}",
                self.sample_index,
                self.num_edges,
                network.m()
            )));
        }
        let mask = self.mask_checked(network.m())?;
        for (e, edge) in network.edges().iter().enumerate() {
            if (edge.prob == 1.0 && !mask[e]) || (edge.prob == 0.0 && mask[e]) {
                return Err(Error::SampleMismatch(format!(
                    "edge {e} with probability {} is inconsistent with sample {}",
                    edge.prob, self.sample_index
                )));
            }
        }
        Ok(())
    }

    fn mask_checked(&self, m: usize) -> Result<Vec<bool>> {
        let mut mask = vec![false; m];
        for &e in &self.kept_edges {
            if e >= m {
                return Err(Error::SampleMismatch(format!("edge id {e} out of range")));
            }
            mask[e] = true;
        }
        Ok(mask)
    }
}

/// Fills `mask` with the retention pattern of sample `index`.
///
/// Edge `e` consumes the `e`-th draw of the `(seed, index)` stream whatever
/// its probability, so a given `(seed, index, edge)` always sees the same
/// uniform variate.
pub fn fill_sample_mask(network: &ContactNetwork, seed: u64, index: u64, mask: &mut Vec<bool>) {
    let mut rng = rng::stream(seed, Domain::Percolation, index);
    mask.clear();
    mask.extend(network.edges().iter().map(|e| {
        let u: f64 = rng.random();
        u < e.prob
    }));
}

pub fn sample_subgraph(network: &ContactNetwork, seed: u64, index: u64) -> PercolationSample {
    let mut mask = Vec::with_capacity(network.m());
    fill_sample_mask(network, seed, index, &mut mask);
    PercolationSample {
        kept_edges: mask
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(e, _)| e)
            .collect(),
        sample_index: index,
        seed,
        num_edges: network.m(),
    }
}

/// Mean number of infections with a confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfectionEstimate {
    pub mean: f64,
    /// Normal-approximation half-width at `confidence`; 0 when exact.
    pub half_width: f64,
    pub num_samples: u64,
    pub exact: bool,
    pub confidence: f64,
    /// Standard error of the mean (0 when exact).
    pub std_error: f64,
}

impl InfectionEstimate {
    fn from_moments(m: &IntMoments) -> Self {
        let (half_width, std_error) = if m.count < 2 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (m.half_width(), m.std_error())
        };
        InfectionEstimate {
            mean: m.mean(),
            half_width,
            num_samples: m.count,
            exact: false,
            confidence: CONFIDENCE,
            std_error,
        }
    }
}

/// Monte Carlo estimate of the expected infections under `intervention`,
/// using samples `0..num_samples` of the `seed` stream.
///
/// Samples are processed in parallel; sums are kept as integers so the
/// result does not depend on the thread schedule.
pub fn estimate_infections(
    network: &ContactNetwork,
    intervention: &Intervention,
    num_samples: u64,
    seed: u64,
) -> Result<InfectionEstimate> {
    Ok(estimate_many(network, std::slice::from_ref(intervention), num_samples, seed)?[0])
}

/// Estimates several interventions on the same percolation samples (common
/// random numbers), so their differences are not blurred by sampling noise.
pub fn estimate_many(
    network: &ContactNetwork,
    interventions: &[Intervention],
    num_samples: u64,
    seed: u64,
) -> Result<Vec<InfectionEstimate>> {
    if num_samples == 0 {
        return Err(Error::InvalidParameter("num_samples must be at least 1".into()));
    }
    for f in interventions {
        f.validate(network)?;
    }
    let masks: Vec<RemovalMask> = interventions.iter().map(|f| f.removal_mask(network)).collect();
    let k = masks.len();
    let moments = (0..num_samples)
        .into_par_iter()
        .fold(
            || (Reacher::new(network.n()), Vec::new(), vec![IntMoments::default(); k]),
            |(mut reach, mut kept, mut acc), j| {
                fill_sample_mask(network, seed, j, &mut kept);
                for (a, removal) in acc.iter_mut().zip(&masks) {
                    a.push(reach.count_masked(network, &kept, removal) as u64);
                }
                (reach, kept, acc)
            },
        )
        .map(|(_, _, acc)| acc)
        .reduce(
            || vec![IntMoments::default(); k],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
        );
    Ok(moments.iter().map(InfectionEstimate::from_moments).collect())
}

/// Average component size of the source over a fixed list of samples: the
/// sample-average objective `h(G, F)`. No fresh randomness.
pub fn empirical_h(
    samples: &[PercolationSample],
    network: &ContactNetwork,
    intervention: &Intervention,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample list".into()));
    }
    intervention.validate(network)?;
    let removal = intervention.removal_mask(network);
    let mut reach = Reacher::new(network.n());
    let mut total: u64 = 0;
    for s in samples {
        s.check_against(network)?;
        let kept = s.mask();
        total += reach.count_masked(network, &kept, &removal) as u64;
    }
    Ok(total as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::InterventionKind;

    fn path3(p: f64) -> ContactNetwork {
        ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, p), (1, 2, 1.0, p)]).unwrap()
    }

    fn no_removal() -> Intervention {
        Intervention::empty(InterventionKind::EdgeRemoval)
    }

    #[test]
    fn deterministic_probabilities() {
        let g = ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 1.0), (1, 2, 1.0, 1.0)]).unwrap();
        assert_eq!(sample_subgraph(&g, 3, 0).kept_edges, vec![0, 1]);
        let g0 = path3(0.0);
        assert!(sample_subgraph(&g0, 3, 0).kept_edges.is_empty());
    }

    #[test]
    fn samples_are_reproducible() {
        let g = path3(0.5);
        for j in 0..20 {
            assert_eq!(sample_subgraph(&g, 11, j), sample_subgraph(&g, 11, j));
        }
    }

    #[test]
    fn kept_count_is_binomial() {
        // m = 10 edges at p = 0.5: mean 5, variance 2.5 per sample.
        let g = ContactNetwork::from_tuples(11, 0, (1..11).map(|v| (0, v, 1.0, 0.5))).unwrap();
        let trials = 10_000u64;
        let total: usize = (0..trials).map(|j| sample_subgraph(&g, 5, j).kept_edges.len()).sum();
        let mean = total as f64 / trials as f64;
        let sigma = (2.5f64 / trials as f64).sqrt();
        assert!((mean - 5.0).abs() <= 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn path_estimate_near_one_point_seven_five() {
        let est = estimate_infections(&path3(0.5), &no_removal(), 200_000, 1).unwrap();
        assert!((est.mean - 1.75).abs() <= 4.0 * est.std_error, "{est:?}");
        assert!(!est.exact);
    }

    #[test]
    fn isolated_source_has_zero_variance() {
        let g = path3(0.7);
        let f = Intervention::edges(&g, [0], "t").unwrap();
        let est = estimate_infections(&g, &f, 1000, 2).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.half_width, 0.0);
    }

    #[test]
    fn full_probability_reaches_everyone() {
        let est = estimate_infections(&path3(1.0), &no_removal(), 50, 2).unwrap();
        assert_eq!(est.mean, 3.0);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(estimate_infections(&path3(0.5), &no_removal(), 0, 2).is_err());
    }

    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let g = path3(0.4);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_infections(&g, &no_removal(), 5000, 9).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn empirical_h_on_fixed_samples() {
        let g = path3(0.5);
        let mk = |kept: Vec<usize>, j| PercolationSample { kept_edges: kept, sample_index: j, seed: 0, num_edges: 2 };
        let samples = vec![mk(vec![0], 0), mk(vec![0, 1], 1)];
        assert_eq!(empirical_h(&samples, &g, &no_removal()).unwrap(), 2.5);
        let empty = vec![mk(vec![], 0), mk(vec![], 1)];
        assert_eq!(empirical_h(&empty, &g, &no_removal()).unwrap(), 1.0);
        let g1 = path3(1.0);
        let full = vec![mk(vec![0, 1], 0)];
        assert_eq!(empirical_h(&full, &g1, &no_removal()).unwrap(), 3.0);
    }

    #[test]
    fn empirical_h_rejects_foreign_samples() {
        let g = path3(0.5);
        let wrong = PercolationSample { kept_edges: vec![0], sample_index: 0, seed: 0, num_edges: 5 };
        assert!(matches!(
            empirical_h(&[wrong], &g, &no_removal()),
            Err(Error::SampleMismatch(_))
        ));
        let g1 = path3(1.0);
        let missing = PercolationSample { kept_edges: vec![0], sample_index: 0, seed: 0, num_edges: 2 };
        assert!(empirical_h(&[missing], &g1, &no_removal()).is_err());
    }
}
