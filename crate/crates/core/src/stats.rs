//! Small statistics helpers shared by the Monte Carlo estimators.

use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided confidence level used for reported half-widths.
pub const CONFIDENCE: f64 = 0.99;

/// Standard normal quantile `z` with `P(|Z| <= z) = level`.
pub fn two_sided_z(level: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(0.5 + level / 2.0)
}

/// Exact running sums of integer observations. Integer accumulation keeps
/// parallel reductions independent of the order of combination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntMoments {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl IntMoments {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum as f64 / self.count as f64
    }

    /// Unbiased sample variance; zero-spread data gives exactly 0.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = self.count as u128;
        // n * sum_sq - sum^2 is exact in integers.
        let centered = n * self.sum_sq - self.sum * self.sum;
        centered as f64 / (self.count as f64 * (self.count as f64 - 1.0))
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    /// Normal-approximation half-width at [`CONFIDENCE`]; infinite for a
    /// single observation.
    pub fn half_width(&self) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        two_sided_z(CONFIDENCE) * self.std_error()
    }
}

/// Neumaier compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ln(sum(exp(x)))` over finite and `-inf` terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s = compensated_sum(terms.iter().map(|t| (t - max).exp()));
    max + s.ln()
}
