//! Experiment driver: initial conditions, Monte Carlo estimators, exact
//! tails and the certificate, plus the file formats they are exported in.

mod campaigns;
mod certificate;
mod experiments;
mod init;
mod output;
mod tails;

use serde::{Deserialize, Serialize};

pub use campaigns::{abelian_campaign, monotone_campaign, CampaignSpec, CheckRecord};
pub use certificate::{certificate, certificate_from_table, CertificateReport, EPSILON_CAP};
pub use experiments::{
    estimate_ar, estimate_ar_trials, estimate_v, estimate_v_trials, idla_trial, run_trials, scan,
    stabilize_run, stabilize_trial, trial_seed, ArRow, IdlaRecord, ScanRow, StabilizeTrial, VSummary,
};
pub use init::{
    epsilon_for, event_f, init_poisson, released_count, select_particles, ManyParticles,
    INVERSION_LIMIT,
};
pub use output::{
    write_ar_csv, write_certificate_csv, write_json, write_scan_csv, write_v_csv,
};
pub use tails::{binomial_tail, poisson_binomial_tail, wilson_interval, Side, TailValue};

use crate::error::{Error, Result};
use crate::gr::DEFAULT_STEP_CAP;
use crate::lattice::Norm;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Stabilize,
    Idla,
    Certificate,
    Scan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dim: usize,
    pub radii: Vec<u32>,
    pub norm: Norm,
    pub mu: f64,
    pub lambda: f64,
    pub r: u64,
    pub trials: usize,
    pub seed: u64,
    pub step_cap: u64,
    pub mode: Mode,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            dim: 1,
            radii: vec![20],
            norm: Norm::Euclidean,
            mu: 1.5,
            lambda: 1.0,
            r: 1,
            trials: 100,
            seed: 0,
            step_cap: DEFAULT_STEP_CAP,
            mode: Mode::Stabilize,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.dim < 1 {
            return Err(Error::InvalidDimension(self.dim));
        }
        if self.radii.is_empty() {
            return bad("no radius given".into());
        }
        if let Some(&m) = self.radii.iter().find(|&&m| m < 1) {
            return Err(Error::InvalidRadius(m as i64));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return bad(format!("mu must be positive, got {}", self.mu));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be non-negative, got {}", self.lambda));
        }
        if self.r < 1 {
            return bad("r must be at least 1".into());
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        Ok(())
    }
}
