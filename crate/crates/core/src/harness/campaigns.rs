//! Randomized campaigns for the abelian and monotonicity checkers.

use serde::{Deserialize, Serialize};

use super::experiments::run_trials;
use crate::error::Result;
use crate::gr::{
    compare_outcomes, random_instance, random_modification, stabilize, verify_monotone, CheckReport,
    CheckStatus, Instance, OrderPolicy, TapeSet,
};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub instances: usize,
    pub max_radius: u32,
    pub max_particles: u32,
    pub lambdas: Vec<f64>,
    pub seed: u64,
    pub step_cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub instance: usize,
    pub dim: usize,
    pub radius: u32,
    pub particles: u64,
    pub lambda: f64,
    /// Original envelopes burned in the reference run.
    pub burned: u64,
    pub report: CheckReport,
}

fn instance_for(spec: &CampaignSpec, i: usize) -> Result<(Instance, rand_chacha::ChaCha8Rng)> {
    let mut rng = seed::stream_rng(seed::derive(spec.seed, seed::DOMAIN_INSTANCE, i as u64), 0);
    let inst = random_instance(&mut rng, spec.max_radius, spec.max_particles, &spec.lambdas)?;
    Ok((inst, rng))
}

fn record(i: usize, inst: &Instance, burned: u64, report: CheckReport) -> CheckRecord {
    CheckRecord {
        instance: i,
        dim: inst.ball.dim(),
        radius: inst.ball.radius(),
        particles: inst.config.total(),
        lambda: inst.params.lambda(),
        burned,
        report,
    }
}

/// Stabilizes each instance under random, FIFO, LIFO and site-sweep order
/// and compares every run with the first.
pub fn abelian_campaign(spec: &CampaignSpec) -> Result<Vec<CheckRecord>> {
    run_trials(spec.instances, |i| {
        let (inst, _) = instance_for(spec, i)?;
        let policies = [
            OrderPolicy::Random(seed::derive(spec.seed, seed::DOMAIN_POLICY, i as u64)),
            OrderPolicy::Fifo,
            OrderPolicy::Lifo,
            OrderPolicy::SiteSweep,
        ];
        let runs: Vec<_> = policies
            .iter()
            .map(|&p| {
                stabilize(&inst.config, &mut TapeSet::new(inst.params, inst.ball.len()), p, &inst.ball, spec.step_cap)
            })
            .collect();
        let report = runs[1..]
            .iter()
            .map(|r| compare_outcomes(&runs[0], r))
            .find(|r| r.status != CheckStatus::Pass)
            .unwrap_or_else(|| compare_outcomes(&runs[0], &runs[0]));
        Ok(record(i, &inst, runs[0].odometer.total_burned(), report))
    })
    .into_iter()
    .collect()
}

/// Draws an instance and a random modification of it, and checks pointwise
/// domination of the burned counts.
pub fn monotone_campaign(spec: &CampaignSpec) -> Result<Vec<CheckRecord>> {
    run_trials(spec.instances, |i| {
        let (inst, mut rng) = instance_for(spec, i)?;
        let policy = OrderPolicy::Random(seed::derive(spec.seed, seed::DOMAIN_POLICY, i as u64));
        let base = stabilize(
            &inst.config,
            &mut TapeSet::new(inst.params, inst.ball.len()),
            OrderPolicy::Fifo,
            &inst.ball,
            spec.step_cap,
        );
        let m = random_modification(&mut rng, &inst.config, &base.odometer.burned);
        let report = verify_monotone(&inst.config, inst.params, &m, policy, &inst.ball, spec.step_cap)?;
        Ok(record(i, &inst, base.odometer.total_burned(), report))
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> CampaignSpec {
        CampaignSpec {
            instances: 30,
            max_radius: 5,
            max_particles: 12,
            lambdas: vec![0.5, 1.0, 2.0],
            seed: 17,
            step_cap: crate::gr::DEFAULT_STEP_CAP,
        }
    }

    #[test]
    fn campaigns_pass_and_are_reproducible() {
        let a = abelian_campaign(&spec()).unwrap();
        assert!(a.iter().all(|r| r.report.passed()));
        assert_eq!(a, abelian_campaign(&spec()).unwrap());
        let m = monotone_campaign(&spec()).unwrap();
        assert!(m.iter().all(|r| r.report.passed()));
        assert_eq!(m, monotone_campaign(&spec()).unwrap());
    }
}
