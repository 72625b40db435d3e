use statrs::function::factorial::{ln_binomial, ln_factorial};

use super::model::ChungLuModel;
use crate::error::{Error, Result};
use crate::stats::{compensated_sum, log_sum_exp};

/// Largest number of compositions a direct summation will visit.
pub const ENUMERATION_CAP: f64 = 1e7;

/// Number of ways to write `k` as an ordered sum of `parts` nonnegative
/// integers, `C(parts - 1 + k, k)`.
pub fn composition_count(parts: u64, k: u64) -> f64 {
    if parts == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    ln_binomial(parts - 1 + k, k).exp().round()
}

fn check_enumerable(parts: u64, k: u64) -> Result<()> {
    let count = composition_count(parts, k);
    if count > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge { count, cap: ENUMERATION_CAP });
    }
    Ok(())
}

/// Calls `visit` with every vector of `parts` nonnegative integers summing to `k`.
pub fn for_each_composition(parts: usize, k: u32, mut visit: impl FnMut(&[u32])) {
    fn rec(a: &mut Vec<u32>, idx: usize, left: u32, visit: &mut dyn FnMut(&[u32])) {
        if idx + 1 == a.len() {
            a[idx] = left;
            visit(a);
            return;
        }
        for x in 0..=left {
            a[idx] = x;
            rec(a, idx + 1, left - x, visit);
        }
    }
    if parts == 0 {
        if k == 0 {
            visit(&[]);
        }
        return;
    }
    let mut a = vec![0; parts];
    rec(&mut a, 0, k, &mut visit);
}

/// The path-count bound
/// `l_k <= n (2^k k! / m^k) sum_a prod_i C(n_i, a_i) i^(2 a_i)`
/// over weight vectors `a` on `[w_min, w_max]` summing to `k`, with
/// `m = total_weight / 2`. `k = 0` gives `n`.
pub fn lemma41_bound(model: &ChungLuModel, k: u32) -> Result<f64> {
    lemma41_log_bound(model, k).map(f64::exp)
}

/// Natural log of [`lemma41_bound`].
pub fn lemma41_log_bound(model: &ChungLuModel, k: u32) -> Result<f64> {
    let n = model.n as f64;
    if k == 0 {
        return Ok(n.ln());
    }
    let parts = model.class_sizes().len();
    check_enumerable(parts as u64, k as u64)?;
    let m = model.total_weight() as f64 / 2.0;
    let kf = k as f64;
    let prefix = n.ln() + kf * std::f64::consts::LN_2 + ln_factorial(k as u64) - kf * m.ln();
    let mut terms = Vec::new();
    for_each_composition(parts, k, |a| {
        let mut log_term = 0.0;
        for (idx, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ni = model.class_sizes()[idx] as u64;
            if (ai as u64) > ni {
                return;
            }
            let weight = (model.w_min as usize + idx) as f64;
            log_term += ln_binomial(ni, ai as u64) + 2.0 * ai as f64 * weight.ln();
        }
        terms.push(log_term);
    });
    Ok(prefix + log_sum_exp(&terms))
}

fn check_n_args(d: u32, c1: f64, w_min: u32) -> Result<()> {
    if w_min < 1 || d < w_min {
        return Err(Error::InvalidParameter(format!("need 1 <= w_min <= D, got w_min={w_min}, D={d}")));
    }
    if c1.is_nan() || c1 <= 0.0 {
        return Err(Error::InvalidParameter(format!("c1 must be positive, got {c1}")));
    }
    Ok(())
}

/// `N(D, k)` by the recurrence
/// `N(D, k) = sum_j N(D-1, k-j) / (D^(c1 j) j!)`,
/// with `N(w_min, k) = 1 / (w_min^(c1 k) k!)`.
pub fn n_recurrence(d: u32, k: u32, c1: f64, w_min: u32) -> Result<f64> {
    check_n_args(d, c1, w_min)?;
    let k = k as usize;
    let step = |base: u32, j: usize| (-(c1 * j as f64 * (base as f64).ln()) - ln_factorial(j as u64)).exp();
    let mut row: Vec<f64> = (0..=k).map(|j| step(w_min, j)).collect();
    for level in w_min + 1..=d {
        let factors: Vec<f64> = (0..=k).map(|j| step(level, j)).collect();
        row = (0..=k)
            .map(|kk| compensated_sum((0..=kk).map(|j| row[kk - j] * factors[j])))
            .collect();
    }
    Ok(row[k])
}

/// `N(D, k)` by direct summation over every vector `a` on `[w_min, D]`
/// summing to `k` of `prod_i 1 / (i^(c1 a_i) a_i!)`.
pub fn n_enumeration(d: u32, k: u32, c1: f64, w_min: u32) -> Result<f64> {
    check_n_args(d, c1, w_min)?;
    let parts = (d - w_min + 1) as usize;
    check_enumerable(parts as u64, k as u64)?;
    let mut terms = Vec::new();
    for_each_composition(parts, k, |a| {
        let mut term = 1.0;
        for (idx, &ai) in a.iter().enumerate() {
            let i = (w_min as usize + idx) as f64;
            let factorial: f64 = (1..=ai).map(f64::from).product();
            term /= i.powf(c1 * ai as f64) * factorial;
        }
        terms.push(term);
    });
    Ok(compensated_sum(terms))
}

/// `(1/k!) prod_{i = w_min+1}^{D} (1 + i^-c1)^k`, an upper bound on
/// `N(D, k)` when `c1 > 1`.
pub fn lemma42_bound(d: u32, k: u32, c1: f64, w_min: u32) -> Result<f64> {
    check_n_args(d, c1, w_min)?;
    if c1 <= 1.0 {
        return Err(Error::Domain(format!("the closed-form bound needs c1 > 1, got {c1}")));
    }
    let kf = k as f64;
    let log_prod: f64 = (w_min + 1..=d).map(|i| (i as f64).powf(-c1).ln_1p()).sum();
    Ok((kf * log_prod - ln_factorial(k as u64)).exp())
}
