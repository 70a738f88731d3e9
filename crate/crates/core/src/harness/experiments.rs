//! Monte Carlo drivers. Trial `i` of radius index `j` is seeded with
//! `derive(derive(master, TRIAL, j), TRIAL, i)` and trials run in parallel;
//! results are collected in trial order so output never depends on the
//! thread schedule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::init::{event_f, init_poisson, select_particles};
use super::tails::wilson_interval;
use super::{ExperimentSpec, Z_95};
use crate::error::Result;
use crate::gr::{stabilize, Configuration, OrderPolicy, StabilizeOutcome, TapeParams, TapeSet};
use crate::idla::{run_coupled_ids, run_embedded_ids, sample_lhat};
use crate::lattice::Ball;
use crate::seed;

pub fn trial_seed(master: u64, radius_index: usize, trial: usize) -> u64 {
    let per_radius = seed::derive(master, seed::DOMAIN_TRIAL, radius_index as u64);
    seed::derive(per_radius, seed::DOMAIN_TRIAL, trial as u64)
}

/// Runs `f(0..n)` in parallel, returning results in index order.
pub fn run_trials<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// One stabilization trial from a Poisson start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizeTrial {
    pub radius: u32,
    pub trial: usize,
    pub seed: u64,
    pub particles: u64,
    pub origin_visits: u64,
    pub fixated: bool,
    pub steps: u64,
    pub absorbed: u64,
}

/// The Poisson start and its stabilization for one trial seed.
pub fn stabilize_run(ball: &Ball, spec: &ExperimentSpec, seed: u64) -> Result<(Configuration, StabilizeOutcome)> {
    let config = init_poisson(ball, spec.mu, seed)?;
    let params = TapeParams::new(seed, spec.lambda, ball.dim())?;
    let mut tapes = TapeSet::new(params, ball.len());
    let out = stabilize(&config, &mut tapes, OrderPolicy::Fifo, ball, spec.step_cap);
    Ok((config, out))
}

pub fn stabilize_trial(ball: &Ball, spec: &ExperimentSpec, trial: usize, seed: u64) -> Result<StabilizeTrial> {
    let (config, out) = stabilize_run(ball, spec, seed)?;
    Ok(StabilizeTrial {
        radius: ball.radius(),
        trial,
        seed,
        particles: config.total(),
        origin_visits: out.odometer.origin_visits,
        fixated: out.fixated,
        steps: out.steps,
        absorbed: out.absorbed,
    })
}

/// Empirical probability of at least `r` origin visits at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArRow {
    pub radius: u32,
    pub trials: u64,
    pub successes: u64,
    /// Trials that hit the step cap; never counted as successes.
    pub exhausted: u64,
    pub p: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_visits: f64,
}

impl ArRow {
    fn from_trials(radius: u32, r: u64, trials: &[StabilizeTrial]) -> Self {
        let n = trials.len() as u64;
        let successes = trials.iter().filter(|t| t.fixated && t.origin_visits >= r).count() as u64;
        let exhausted = trials.iter().filter(|t| !t.fixated).count() as u64;
        let (ci_lo, ci_hi) = wilson_interval(successes, n, Z_95);
        let mean_visits = trials.iter().map(|t| t.origin_visits as f64).sum::<f64>() / n as f64;
        ArRow { radius, trials: n, successes, exhausted, p: successes as f64 / n as f64, ci_lo, ci_hi, mean_visits }
    }
}

pub fn estimate_ar_trials(spec: &ExperimentSpec) -> Result<Vec<(ArRow, Vec<StabilizeTrial>)>> {
    spec.validate()?;
    let mut table = Vec::with_capacity(spec.radii.len());
    for (j, &radius) in spec.radii.iter().enumerate() {
        let ball = Ball::new(spec.dim, radius, spec.norm)?;
        let trials: Vec<StabilizeTrial> = run_trials(spec.trials, |i| {
            stabilize_trial(&ball, spec, i, trial_seed(spec.seed, j, i))
        })
        .into_iter()
        .collect::<Result<_>>()?;
        table.push((ArRow::from_trials(radius, spec.r, &trials), trials));
    }
    Ok(table)
}

/// Per-radius estimate of `P_M(A_r)`.
pub fn estimate_ar(spec: &ExperimentSpec) -> Result<Vec<ArRow>> {
    Ok(estimate_ar_trials(spec)?.into_iter().map(|(row, _)| row).collect())
}

/// One run of the embedded process from a Poisson configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdlaRecord {
    pub radius: u32,
    pub trial: usize,
    pub seed: u64,
    pub particles: u64,
    pub f_holds: bool,
    #[serde(rename = "N")]
    pub big_n: u64,
    /// Released particles that started at the origin.
    pub origin_starts: u64,
    #[serde(rename = "V")]
    pub v: Option<u64>,
    #[serde(rename = "W")]
    pub w: Option<u64>,
    #[serde(rename = "L")]
    pub l: Option<u64>,
    pub lhat: Option<u64>,
}

/// Poisson start, `F` check, random choice of `N` particles, then the
/// embedded and coupled runs on shared walk streams plus an `L̂` sample.
/// Counters are `None` when `F` fails.
pub fn idla_trial(ball: &Ball, mu: f64, trial: usize, seed: u64) -> Result<IdlaRecord> {
    let config = init_poisson(ball, mu, seed)?;
    let f = event_f(&config, ball, mu)?;
    let mut rec = IdlaRecord {
        radius: ball.radius(),
        trial,
        seed,
        particles: f.n,
        f_holds: f.holds,
        big_n: f.big_n,
        origin_starts: 0,
        v: None,
        w: None,
        l: None,
        lhat: None,
    };
    if !f.holds {
        return Ok(rec);
    }
    let starts = select_particles(&config, f.big_n as usize, seed)?;
    let embedded = run_embedded_ids(&starts, ball, seed);
    let coupled = run_coupled_ids(&starts, ball, seed);
    rec.origin_starts = starts.iter().filter(|&&s| s == ball.origin()).count() as u64;
    rec.v = Some(embedded.v);
    rec.w = Some(coupled.w);
    rec.l = Some(coupled.l);
    rec.lhat = Some(sample_lhat(ball, seed).total);
    Ok(rec)
}

/// Distribution of `V` conditioned on `F`, at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VSummary {
    pub radius: u32,
    pub trials: u64,
    /// Trials on which `F` held; the conditional statistics use only these.
    pub f_trials: u64,
    pub epsilon: f64,
    pub big_n: u64,
    /// `εM/4`.
    pub threshold: f64,
    /// Empirical `P[V > εM/4 | F]`; `None` when no trial satisfied `F`.
    pub p_exceeds: Option<f64>,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_v: f64,
    pub sd_v: f64,
    pub mean_w: f64,
    pub mean_l: f64,
    pub mean_lhat: f64,
    /// `histogram[k]` trials had `V = k`.
    pub histogram: Vec<u64>,
}

impl VSummary {
    /// Standard error of `p_exceeds`.
    pub fn p_stderr(&self) -> Option<f64> {
        self.p_exceeds.map(|p| (p * (1.0 - p) / self.f_trials as f64).sqrt())
    }

    fn from_records(radius: u32, epsilon: f64, big_n: u64, records: &[IdlaRecord]) -> Self {
        let kept: Vec<&IdlaRecord> = records.iter().filter(|r| r.f_holds).collect();
        let n = kept.len() as u64;
        let threshold = epsilon * radius as f64 / 4.0;
        let vs: Vec<f64> = kept.iter().map(|r| r.v.unwrap_or(0) as f64).collect();
        let mean = |xs: &mut dyn Iterator<Item = f64>| {
            if n == 0 {
                f64::NAN
            } else {
                xs.sum::<f64>() / n as f64
            }
        };
        let mean_v = mean(&mut vs.iter().copied());
        let sd_v = if n > 1 {
            (vs.iter().map(|v| (v - mean_v).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            f64::NAN
        };
        let exceed = vs.iter().filter(|&&v| v > threshold).count() as u64;
        let (ci_lo, ci_hi) = wilson_interval(exceed, n, Z_95);
        let max_v = kept.iter().filter_map(|r| r.v).max().unwrap_or(0) as usize;
        let mut histogram = vec![0u64; if n == 0 { 0 } else { max_v + 1 }];
        for r in &kept {
            histogram[r.v.unwrap_or(0) as usize] += 1;
        }
        VSummary {
            radius,
            trials: records.len() as u64,
            f_trials: n,
            epsilon,
            big_n,
            threshold,
            p_exceeds: (n > 0).then(|| exceed as f64 / n as f64),
            ci_lo,
            ci_hi,
            mean_v,
            sd_v,
            mean_w: mean(&mut kept.iter().map(|r| r.w.unwrap_or(0) as f64)),
            mean_l: mean(&mut kept.iter().map(|r| r.l.unwrap_or(0) as f64)),
            mean_lhat: mean(&mut kept.iter().map(|r| r.lhat.unwrap_or(0) as f64)),
            histogram,
        }
    }
}

pub fn estimate_v_trials(spec: &ExperimentSpec) -> Result<Vec<(VSummary, Vec<IdlaRecord>)>> {
    spec.validate()?;
    let epsilon = super::init::epsilon_for(spec.mu)?;
    let mut out = Vec::with_capacity(spec.radii.len());
    for (j, &radius) in spec.radii.iter().enumerate() {
        let ball = Ball::new(spec.dim, radius, spec.norm)?;
        let records: Vec<IdlaRecord> =
            run_trials(spec.trials, |i| idla_trial(&ball, spec.mu, i, trial_seed(spec.seed, j, i)))
                .into_iter()
                .collect::<Result<_>>()?;
        let big_n = super::init::released_count(&ball, epsilon);
        out.push((VSummary::from_records(radius, epsilon, big_n, &records), records));
    }
    Ok(out)
}

/// Per-radius distribution of `V` given `F`.
pub fn estimate_v(spec: &ExperimentSpec) -> Result<Vec<VSummary>> {
    Ok(estimate_v_trials(spec)?.into_iter().map(|(s, _)| s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub mu: f64,
    pub lambda: f64,
    #[serde(flatten)]
    pub row: ArRow,
}

/// `estimate_ar` over a grid of `(μ, λ)`, each cell with the master seed of
/// `spec`. Cells are emitted in grid order, radii ascending as given.
pub fn scan(spec: &ExperimentSpec, grid: &[(f64, f64)]) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(crate::Error::InvalidParameter("empty (mu, lambda) grid".into()));
    }
    let mut rows = Vec::new();
    for &(mu, lambda) in grid {
        let cell = ExperimentSpec { mu, lambda, ..spec.clone() };
        for row in estimate_ar(&cell)? {
            rows.push(ScanRow { mu, lambda, row });
        }
    }
    Ok(rows)
}
