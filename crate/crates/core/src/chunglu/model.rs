use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// JSON model description: `{"n": .., "beta": .., "w_min": .., "w_max": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    pub beta: f64,
    pub w_min: u32,
    pub w_max: u32,
}

/// A power-law Chung-Lu model.
///
/// `n_i`, the number of vertices of weight `i`, is proportional to
/// `n / i^beta` for `i` in `[w_min, w_max]`, apportioned by largest
/// remainder so that the classes sum to exactly `n`. Upper classes may be
/// empty for small `n`. Vertex ids are assigned in ascending weight order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChungLuModel {
    pub n: usize,
    pub beta: f64,
    pub w_min: u32,
    pub w_max: u32,
    class_sizes: Vec<usize>,
    weights: Vec<u32>,
    total_weight: u64,
    /// Expected number of edges, `sum_v w_v / 2`.
    pub expected_edges: f64,
    /// `beta - 2`.
    pub c1: f64,
    /// `beta > 3`: path counts grow at most like `poly(n, 2^k)`.
    pub supercritical_safe: bool,
    /// Empirical percolation ceiling, when a sweep has been run.
    pub c0_estimate: Option<f64>,
}

/// Upper limit on the number of weight classes.
pub const MAX_WEIGHT_CLASSES: u32 = 1 << 20;

pub fn build_model(n: usize, beta: f64, w_min: u32, w_max: u32) -> Result<ChungLuModel> {
    if beta.is_nan() || beta <= 2.0 {
        return Err(Error::InvalidParameter(format!("beta must exceed 2, got {beta}")));
    }
    if w_min < 1 || w_min > w_max {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= w_min <= w_max, got {w_min}..{w_max}"
        )));
    }
    if w_max - w_min >= MAX_WEIGHT_CLASSES {
        return Err(Error::TooLarge(format!("{} weight classes", w_max - w_min + 1)));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let class_sizes = apportion(n, beta, w_min, w_max);
    let mut weights = Vec::with_capacity(n);
    for (offset, &count) in class_sizes.iter().enumerate() {
        weights.extend(std::iter::repeat_n(w_min + offset as u32, count));
    }
    let total_weight: u64 = weights.iter().map(|&w| w as u64).sum();
    let top = *weights.last().expect("n >= 1") as u64;
    if top * top > total_weight {
        return Err(Error::InvalidParameter(format!(
            "q(u,v) = {top}*{top}/{total_weight} exceeds 1; lower w_max or raise n"
        )));
    }
    Ok(ChungLuModel {
        n,
        beta,
        w_min,
        w_max,
        class_sizes,
        weights,
        total_weight,
        expected_edges: total_weight as f64 / 2.0,
        c1: beta - 2.0,
        supercritical_safe: beta > 3.0,
        c0_estimate: None,
    })
}

/// Largest-remainder apportionment of `n` over weights `w_min..=w_max` with
/// quotas proportional to `i^-beta`. Ties in the remainder go to the lower
/// weight.
fn apportion(n: usize, beta: f64, w_min: u32, w_max: u32) -> Vec<usize> {
    let shares: Vec<f64> = (w_min..=w_max).map(|i| (i as f64).powf(-beta)).collect();
    let total: f64 = shares.iter().sum();
    let quotas: Vec<f64> = shares.iter().map(|s| n as f64 * s / total).collect();
    let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        sizes[i] += 1;
    }
    sizes
}

impl ChungLuModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        build_model(spec.n, spec.beta, spec.w_min, spec.w_max)
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec { n: self.n, beta: self.beta, w_min: self.w_min, w_max: self.w_max }
    }

    /// `n_i` for `i` in `w_min..=w_max` (index 0 is `w_min`).
    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// `n_i` for weight `i`; 0 outside the range.
    pub fn class_size(&self, i: u32) -> usize {
        if i < self.w_min || i > self.w_max {
            0
        } else {
            self.class_sizes[(i - self.w_min) as usize]
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Edge probability `w_u w_v / sum_r w_r`.
    pub fn q(&self, u: usize, v: usize) -> f64 {
        (self.weights[u] as f64 * self.weights[v] as f64) / self.total_weight as f64
    }

    pub fn with_c0_estimate(mut self, c0: Option<f64>) -> Self {
        self.c0_estimate = c0;
        self
    }
}
