use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::netcore::ContactNetwork;
use crate::percolate::{sample_subgraph, PercolationSample};

/// Number of samples that makes every empirical objective an
/// `epsilon`-relative approximation with high probability:
/// `ceil(3n / eps^2 * ln(n^2 2^(m+1)))`.
pub fn sample_count(n: usize, m: usize, epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and m >= 1, got n={n}, m={m}")));
    }
    let nf = n as f64;
    let log_term = 2.0 * nf.ln() + (m as f64 + 1.0) * std::f64::consts::LN_2;
    let count = (3.0 * nf / (epsilon * epsilon) * log_term).ceil();
    if count > u64::MAX as f64 {
        return Err(Error::TooLarge(format!("sample count {count:e}")));
    }
    Ok(count as u64)
}

/// `N` percolation samples of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    network: ContactNetwork,
    samples: Vec<PercolationSample>,
    pub seed: u64,
    /// The accuracy `N` was sized for, when it came from [`sample_count`].
    pub epsilon: Option<f64>,
}

pub fn draw_samples(network: &ContactNetwork, num_samples: u64, seed: u64) -> Result<SampleSet> {
    if num_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let samples = (0..num_samples)
        .into_par_iter()
        .map(|j| sample_subgraph(network, seed, j))
        .collect();
    Ok(SampleSet { network: network.clone(), samples, seed, epsilon: None })
}

impl SampleSet {
    /// Wraps samples drawn elsewhere, checking they fit `network`.
    pub fn from_samples(network: &ContactNetwork, samples: Vec<PercolationSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("need at least one sample".into()));
        }
        for s in &samples {
            s.check_against(network)?;
        }
        let seed = samples[0].seed;
        Ok(SampleSet { network: network.clone(), samples, seed, epsilon: None })
    }

    pub fn with_epsilon(mut self, epsilon: Option<f64>) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn network(&self) -> &ContactNetwork {
        &self.network
    }

    pub fn samples(&self) -> &[PercolationSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}
