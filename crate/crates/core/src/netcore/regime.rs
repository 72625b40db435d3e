use serde::Serialize;

use super::mincut::global_min_cut;
use super::network::ContactNetwork;
use crate::error::{Error, Result};

/// Cut-sparsification regime of a unit-cost, uniform-probability network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KargerRegime {
    /// Relative deviation bound for all sampled cuts.
    pub epsilon: f64,
    /// Whether `c_min * p >= 9 ln n`.
    pub in_regime: bool,
    pub c_min: f64,
    pub p: f64,
    pub d: f64,
}

/// `sqrt(3 (d + 2) ln n / (c_min p))`.
pub fn karger_epsilon(c_min: f64, p: f64, d: f64, n: usize) -> Result<f64> {
    if d <= 0.0 || d.is_nan() {
        return Err(Error::InvalidParameter(format!("d must be positive, got {d}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    let denom = c_min * p;
    if denom <= 0.0 || denom.is_nan() {
        return Err(Error::Domain(format!(
            "c_min * p = {denom} leaves the sparsification bound undefined"
        )));
    }
    Ok((3.0 * (d + 2.0) * (n as f64).ln() / denom).sqrt())
}

/// `c_min * p >= 9 ln n`.
pub fn in_karger_regime(c_min: f64, p: f64, n: usize) -> bool {
    c_min * p >= 9.0 * (n as f64).ln()
}

/// Evaluates the sparsification regime for `network`, whose edges must all
/// have unit cost and transmission probability `p`.
pub fn karger_regime(network: &ContactNetwork, p: f64, d: f64) -> Result<KargerRegime> {
    if !network.has_unit_costs() {
        return Err(Error::NonUnitCost);
    }
    match network.uniform_probability() {
        Some(q) if q == p => {}
        None if network.m() == 0 => {}
        _ => return Err(Error::NonUniformProbability),
    }
    let c_min = global_min_cut(network);
    let epsilon = karger_epsilon(c_min, p, d, network.n())?;
    Ok(KargerRegime {
        epsilon,
        in_regime: in_karger_regime(c_min, p, network.n()),
        c_min,
        p,
        d,
    })
}
