//! Exact tails of sums of independent indicators, with Chernoff fallbacks.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Largest number of terms summed exactly by [`binomial_tail`].
pub const EXACT_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `P[S ≤ k]`
    Lower,
    /// `P[S ≥ k]`
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailValue {
    pub value: f64,
    /// False when `value` is a Chernoff upper bound rather than the tail itself.
    pub exact: bool,
}

impl TailValue {
    fn exact(value: f64) -> Self {
        TailValue { value: value.clamp(0.0, 1.0), exact: true }
    }
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Tail of `Binomial(n, p)` at `k` on the given side.
pub fn binomial_tail(n: u64, p: f64, k: i64, side: Side) -> Result<TailValue> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    let n_i = n as i64;
    // reduce to P[S ≤ k] or P[S ≥ k] over the non-trivial range
    let (lo, hi) = match side {
        Side::Lower if k < 0 => return Ok(TailValue::exact(0.0)),
        Side::Lower if k >= n_i => return Ok(TailValue::exact(1.0)),
        Side::Upper if k <= 0 => return Ok(TailValue::exact(1.0)),
        Side::Upper if k > n_i => return Ok(TailValue::exact(0.0)),
        Side::Lower => (0, k as u64),
        Side::Upper => (k as u64, n),
    };
    if p == 0.0 || p == 1.0 {
        let s = if p == 0.0 { 0 } else { n };
        return Ok(TailValue::exact(if (lo..=hi).contains(&s) { 1.0 } else { 0.0 }));
    }
    if hi - lo < EXACT_TERMS {
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        let terms = (lo..=hi).map(|j| ln_binomial(n, j) + j as f64 * lp + (n - j) as f64 * lq);
        return Ok(TailValue::exact(log_sum_exp(terms).exp()));
    }
    let mean = n as f64 * p;
    let k = k as f64;
    let value = match side {
        Side::Lower if k < mean => {
            let delta = (mean - k) / mean;
            (-delta * delta * mean / 2.0).exp()
        }
        Side::Upper if k > mean => {
            let delta = (k - mean) / mean;
            if delta <= 1.0 {
                (-delta * delta * mean / 3.0).exp()
            } else {
                (-delta * mean / 3.0).exp()
            }
        }
        _ => 1.0,
    };
    Ok(TailValue { value, exact: false })
}

/// `P[Σ Bernoulli(p_i) ≥ k]`, exactly, by the `O(n·k)` convolution with an
/// absorbing state for "already at least `k`".
pub fn poisson_binomial_tail(probs: &[f64], k: i64) -> Result<f64> {
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    if k <= 0 {
        return Ok(1.0);
    }
    if k as usize > probs.len() {
        return Ok(0.0);
    }
    let k = k as usize;
    let mut dist = vec![0.0; k + 1];
    dist[0] = 1.0;
    for &p in probs {
        dist[k] += dist[k - 1] * p;
        for j in (1..k).rev() {
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        }
        dist[0] *= 1.0 - p;
    }
    Ok(dist[k].clamp(0.0, 1.0))
}

/// Two-sided Wilson score interval for `successes / n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if p == 1.0 { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct pmf summation with exact binomial coefficients.
    fn brute_binomial(n: u64, p: f64, range: std::ops::RangeInclusive<u64>) -> f64 {
        let mut total = 0.0;
        for j in range {
            let mut c = 1.0f64;
            for i in 0..j {
                c = c * (n - i) as f64 / (i + 1) as f64;
            }
            total += c * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32);
        }
        total
    }

    /// Enumerates all 2^n outcomes.
    fn brute_poisson_binomial(probs: &[f64], k: usize) -> f64 {
        let n = probs.len();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize >= k)
            .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { probs[i] } else { 1.0 - probs[i] }).product::<f64>())
            .sum()
    }

    #[test]
    fn fair_coin_lower_tail() {
        let t = binomial_tail(10, 0.5, 4, Side::Lower).unwrap();
        assert!(t.exact);
        assert!((t.value - 0.376953125).abs() < 1e-12);
        assert!((brute_binomial(10, 0.5, 0..=4) - 0.376953125).abs() < 1e-15);
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(binomial_tail(10, 0.3, -1, Side::Lower).unwrap().value, 0.0);
        assert_eq!(binomial_tail(10, 0.0, 1, Side::Upper).unwrap().value, 0.0);
        assert_eq!(binomial_tail(10, 1.0, 10, Side::Upper).unwrap().value, 1.0);
        assert_eq!(binomial_tail(10, 0.3, 0, Side::Upper).unwrap().value, 1.0);
        assert_eq!(binomial_tail(10, 0.3, 11, Side::Upper).unwrap().value, 0.0);
        assert!(binomial_tail(10, 1.5, 3, Side::Upper).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for (n, p) in [(7u64, 0.2), (30, 0.55), (60, 0.9)] {
            for k in 0..=n {
                let lo = binomial_tail(n, p, k as i64, Side::Lower).unwrap().value;
                let hi = binomial_tail(n, p, k as i64, Side::Upper).unwrap().value;
                assert!((lo - brute_binomial(n, p, 0..=k)).abs() < 1e-12);
                assert!((hi - brute_binomial(n, p, k..=n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chernoff_beyond_exact_range() {
        let n = 10_000_000u64;
        let t = binomial_tail(n, 0.5, 4_900_000, Side::Lower).unwrap();
        assert!(!t.exact);
        let delta: f64 = 0.02;
        assert!((t.value - (-delta * delta * 5e6 / 2.0).exp()).abs() < 1e-15);
        let u = binomial_tail(n, 0.5, 5_100_000, Side::Upper).unwrap();
        assert!(!u.exact && u.value < 1e-100);
    }

    #[test]
    fn poisson_binomial_small_cases() {
        assert!((poisson_binomial_tail(&[1.0, 0.5], 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(poisson_binomial_tail(&[0.3, 0.4], 0).unwrap(), 1.0);
        assert_eq!(poisson_binomial_tail(&[0.3, 0.4], 3).unwrap(), 0.0);
        assert!(poisson_binomial_tail(&[0.3, -0.1], 1).is_err());
        let probs = [0.1, 0.9, 0.35, 0.5, 0.77, 0.02, 0.64, 0.3, 1.0, 0.0, 0.45];
        for k in 0..=probs.len() {
            let a = poisson_binomial_tail(&probs, k as i64).unwrap();
            assert!((a - brute_poisson_binomial(&probs, k)).abs() < 1e-13);
        }
    }

    #[test]
    fn poisson_binomial_reduces_to_binomial() {
        for (n, p) in [(25usize, 0.3), (100, 0.71)] {
            let probs = vec![p; n];
            for k in 0..=n as i64 {
                let a = poisson_binomial_tail(&probs, k).unwrap();
                let b = binomial_tail(n as u64, p, k, Side::Upper).unwrap().value;
                assert!((a - b).abs() < 1e-12, "n={n} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(90, 100, 1.96);
        assert!(lo < 0.9 && 0.9 < hi);
        assert_eq!(wilson_interval(0, 0, 1.96), (0.0, 1.0));
        let (lo, hi) = wilson_interval(100, 100, 1.96);
        assert!(lo > 0.95 && hi == 1.0);
        assert_eq!(wilson_interval(0, 10, 1.96).0, 0.0);
    }
}
