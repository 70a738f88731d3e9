//! The numerical non-fixation certificate.
//!
//! With `ε = (μ−1)/2`, `N = ⌈(1+ε)|B|⌉` and `a = (1−ε/2)E[W]`:
//!
//! ```text
//! P[V < εM/4] ≤ P[W ≤ a + εM/4] + P[L̂ ≥ a]
//! ```
//!
//! `W ~ Binomial(N, Σh/|B|)` and `L̂` is the Poisson-binomial sum of the
//! `h(x)`, so both terms are computed exactly from the solver's `h`.

use serde::{Deserialize, Serialize};

use super::experiments::VSummary;
use super::init::{epsilon_for, released_count};
use super::tails::{binomial_tail, poisson_binomial_tail, Side};
use crate::error::{Error, Result};
use crate::lattice::{Ball, Norm};
use crate::potential::{elhat_exact, GreenTable};

/// Largest ε the inequality chain is run with.
pub const EPSILON_CAP: f64 = 0.49;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub dim: usize,
    pub radius: u32,
    pub norm: Norm,
    pub mu: f64,
    pub epsilon: f64,
    pub epsilon_clamped: bool,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub ball_size: u64,
    /// `E[W] = (N/|B|) Σh`.
    pub e_w: f64,
    /// `E[L̂] = Σh`.
    pub e_lhat: f64,
    /// `E_0[τ_M] / G_M(0,0)`, the second route to `E[L̂]`.
    pub e_lhat_via_exit_time: f64,
    pub a: f64,
    /// `εM/4`.
    pub v_threshold: f64,
    /// `P[W ≤ a + εM/4]`.
    pub bound_w: f64,
    pub bound_w_exact: bool,
    /// `P[L̂ ≥ ⌈a⌉]`.
    pub bound_l: f64,
    pub total_bound: f64,
    /// Empirical `P[V > εM/4 | F]` when a simulation was attached.
    pub empirical: Option<f64>,
    pub empirical_stderr: Option<f64>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    /// The bound and the simulation agree when the empirical probability is
    /// at least `1 − total_bound − 3σ`.
    pub fn consistent_with_simulation(&self) -> Option<bool> {
        Some(self.empirical? >= 1.0 - self.total_bound - 3.0 * self.empirical_stderr?)
    }

    pub fn attach(&mut self, summary: &VSummary) {
        self.empirical = summary.p_exceeds;
        self.empirical_stderr = summary.p_stderr();
        if summary.p_exceeds.is_none() {
            self.notes.push("no trial satisfied F; conditional probability undefined".into());
        }
    }
}

pub fn certificate(dim: usize, radius: u32, mu: f64, norm: Norm) -> Result<CertificateReport> {
    let ball = Ball::new(dim, radius, norm)?;
    let table = GreenTable::compute(&ball)?;
    certificate_from_table(&table, mu)
}

pub fn certificate_from_table(table: &GreenTable<'_>, mu: f64) -> Result<CertificateReport> {
    let ball = table.ball;
    let m = ball.radius() as f64;
    let mut notes = Vec::new();
    let raw = epsilon_for(mu)?;
    let epsilon = raw.min(EPSILON_CAP);
    let epsilon_clamped = epsilon < raw;
    if epsilon_clamped {
        notes.push(format!("epsilon {raw} clamped to {EPSILON_CAP}; the chain needs epsilon < 1/2"));
    }

    let size = ball.len() as u64;
    let big_n = released_count(ball, epsilon);
    let e_lhat = elhat_exact(table)?;
    let e_w = big_n as f64 / size as f64 * e_lhat;
    if e_w < (1.0 + epsilon) * e_lhat * (1.0 - 1e-12) {
        return Err(Error::Inconsistent(format!("E[W] = {e_w} below (1+eps) E[L-hat]")));
    }
    if e_lhat < m * (1.0 - 1e-9) {
        return Err(Error::Inconsistent(format!("E[L-hat] = {e_lhat} below M = {m}")));
    }

    let a = (1.0 - epsilon / 2.0) * e_w;
    let v_threshold = epsilon * m / 4.0;
    let p_w = (e_lhat / size as f64).min(1.0);
    let w_tail = binomial_tail(big_n, p_w, (a + v_threshold).floor() as i64, Side::Lower)?;
    let bound_l = poisson_binomial_tail(&table.h.iter().map(|h| h.clamp(0.0, 1.0)).collect::<Vec<_>>(), a.ceil() as i64)?;
    if !w_tail.exact {
        notes.push("bound_w is a Chernoff bound".into());
    }

    Ok(CertificateReport {
        dim: ball.dim(),
        radius: ball.radius(),
        norm: ball.norm(),
        mu,
        epsilon,
        epsilon_clamped,
        big_n,
        ball_size: size,
        e_w,
        e_lhat,
        e_lhat_via_exit_time: table.exit_time_origin() / table.g00,
        a,
        v_threshold,
        bound_w: w_tail.value,
        bound_w_exact: w_tail.exact,
        bound_l,
        total_bound: w_tail.value + bound_l,
        empirical: None,
        empirical_stderr: None,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_quantities() {
        let r = certificate(1, 20, 1.5, Norm::Euclidean).unwrap();
        assert_eq!(r.epsilon, 0.25);
        assert_eq!(r.ball_size, 39);
        assert_eq!(r.big_n, 49);
        assert!((r.e_lhat - 20.0).abs() < 1e-9);
        assert!((r.e_w - 49.0 / 39.0 * 20.0).abs() < 1e-9);
        assert!((r.a - 0.875 * r.e_w).abs() < 1e-12);
        // E[W] = (1+ε')E[L̂] with ε' = N/|B| − 1 ≥ ε
        let eps_prime = r.big_n as f64 / r.ball_size as f64 - 1.0;
        assert!(eps_prime >= r.epsilon);
        assert!((r.e_w - (1.0 + eps_prime) * r.e_lhat).abs() < 1e-9);
        assert!(r.total_bound >= 0.0 && r.total_bound <= 2.0);
    }

    #[test]
    fn decays_with_radius() {
        let bounds: Vec<f64> = [20, 40, 80]
            .iter()
            .map(|&m| certificate(1, m, 1.5, Norm::Euclidean).unwrap().total_bound)
            .collect();
        assert!(bounds[1] < 0.5);
        assert!(bounds[0] > bounds[1] && bounds[1] > bounds[2], "{bounds:?}");
    }

    #[test]
    fn large_density_is_clamped() {
        let r = certificate(2, 6, 3.0, Norm::Euclidean).unwrap();
        assert!(r.epsilon_clamped);
        assert_eq!(r.epsilon, EPSILON_CAP);
        assert!(!r.notes.is_empty());
        assert!(r.e_lhat >= 6.0);
    }

    #[test]
    fn rejects_subcritical_density() {
        assert!(certificate(1, 10, 0.9, Norm::Euclidean).is_err());
    }
}
