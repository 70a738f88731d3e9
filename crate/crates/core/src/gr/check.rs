//! Executable checks of the abelian and monotonicity properties.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stabilize::{stabilize, OrderPolicy, StabilizeOutcome};
use super::state::Configuration;
use super::tape::{SleepInsertions, TapeParams, TapeSet};
use crate::error::Result;
use crate::lattice::{Ball, Norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A run hit the step cap, so nothing can be concluded.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    pub site: usize,
    pub quantity: String,
    pub left: u64,
    pub right: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub divergence: Option<Divergence>,
}

impl CheckReport {
    fn pass() -> Self {
        CheckReport { status: CheckStatus::Pass, divergence: None }
    }

    fn inconclusive() -> Self {
        CheckReport { status: CheckStatus::Inconclusive, divergence: None }
    }

    fn fail(site: usize, quantity: &str, left: u64, right: u64) -> Self {
        CheckReport {
            status: CheckStatus::Fail,
            divergence: Some(Divergence { site, quantity: quantity.to_string(), left, right }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Compares two stabilizations of the same instance: burned counts, final
/// placement (active and sleeping per site) and origin visits.
pub fn compare_outcomes(a: &StabilizeOutcome, b: &StabilizeOutcome) -> CheckReport {
    if !a.fixated || !b.fixated {
        return CheckReport::inconclusive();
    }
    let fields: [(&str, Vec<u64>, Vec<u64>); 3] = [
        ("burned", a.odometer.burned.clone(), b.odometer.burned.clone()),
        (
            "active",
            a.config.active().iter().map(|&x| x as u64).collect(),
            b.config.active().iter().map(|&x| x as u64).collect(),
        ),
        (
            "sleeping",
            a.config.sleeping().iter().map(|&x| x as u64).collect(),
            b.config.sleeping().iter().map(|&x| x as u64).collect(),
        ),
    ];
    for (name, l, r) in &fields {
        if let Some(site) = (0..l.len()).find(|&x| l[x] != r[x]) {
            return CheckReport::fail(site, name, l[site], r[site]);
        }
    }
    if a.odometer.origin_visits != b.odometer.origin_visits {
        return CheckReport::fail(
            usize::MAX,
            "origin_visits",
            a.odometer.origin_visits,
            b.odometer.origin_visits,
        );
    }
    CheckReport::pass()
}

/// Stabilizes `config` under two activation orders with identical tapes and
/// compares the results.
pub fn verify_abelian(
    config: &Configuration,
    params: TapeParams,
    policy_a: OrderPolicy,
    policy_b: OrderPolicy,
    ball: &Ball,
    step_cap: u64,
) -> CheckReport {
    let a = stabilize(config, &mut TapeSet::new(params, ball.len()), policy_a, ball, step_cap);
    let b = stabilize(config, &mut TapeSet::new(params, ball.len()), policy_b, ball, step_cap);
    compare_outcomes(&a, &b)
}

/// Deleting particles, putting lone active particles to sleep, and splicing
/// sleep envelopes into the tapes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modification {
    /// One particle removed per entry (active first).
    pub delete: Vec<usize>,
    /// Sites whose single active particle is turned into a sleeping one.
    pub sleep: Vec<usize>,
    pub insert: SleepInsertions,
}

impl Modification {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The modified initial configuration. Deletions are applied before sleeps.
    pub fn apply(&self, config: &Configuration) -> Result<Configuration> {
        let mut c = config.clone();
        for &s in &self.delete {
            c.remove_one(s)?;
        }
        for &s in &self.sleep {
            c.put_to_sleep(s)?;
        }
        Ok(c)
    }
}

/// Checks that the modified system burns, site by site, no more original
/// envelopes than the unmodified one.
pub fn verify_monotone(
    config: &Configuration,
    params: TapeParams,
    modification: &Modification,
    policy: OrderPolicy,
    ball: &Ball,
    step_cap: u64,
) -> Result<CheckReport> {
    let modified = modification.apply(config)?;
    let orig = stabilize(config, &mut TapeSet::new(params, ball.len()), policy, ball, step_cap);
    let mut tapes = TapeSet::new(params, ball.len()).with_insertions(modification.insert.clone());
    let modi = stabilize(&modified, &mut tapes, policy, ball, step_cap);
    if !orig.fixated || !modi.fixated {
        return Ok(CheckReport::inconclusive());
    }
    let violation = (0..ball.len()).find(|&x| modi.odometer.burned[x] > orig.odometer.burned[x]);
    Ok(match violation {
        Some(x) => CheckReport::fail(x, "burned", orig.odometer.burned[x], modi.odometer.burned[x]),
        None => CheckReport::pass(),
    })
}

/// A small random test instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ball: Ball,
    pub config: Configuration,
    pub params: TapeParams,
}

/// Draws `d ∈ {1,2}`, `M ≤ max_radius`, up to `max_particles` active
/// particles placed uniformly and `λ` from `lambdas`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_radius: u32,
    max_particles: u32,
    lambdas: &[f64],
) -> Result<Instance> {
    let dim = rng.random_range(1..=2);
    let radius = rng.random_range(1..=max_radius);
    let norm = if rng.random::<bool>() { Norm::Euclidean } else { Norm::Sup };
    let ball = Ball::new(dim, radius, norm)?;
    let lambda = *lambdas.choose(rng).expect("non-empty rate list");
    let params = TapeParams::new(rng.random(), lambda, dim)?;
    let mut config = Configuration::empty(ball.len());
    for _ in 0..rng.random_range(0..=max_particles) {
        config.add_active(rng.random_range(0..ball.len()), 1);
    }
    Ok(Instance { ball, config, params })
}

/// A random modification of `config`. Insertion positions range up to
/// `horizon` so that some of them are actually reached.
pub fn random_modification<R: Rng>(
    rng: &mut R,
    config: &Configuration,
    horizon: &[u64],
) -> Modification {
    let mut working = config.clone();
    let mut m = Modification::identity();
    let occupied: Vec<usize> = (0..working.sites()).filter(|&x| working.occupancy(x) > 0).collect();
    for &x in &occupied {
        let k = working.occupancy(x);
        let del = if rng.random_bool(0.3) { rng.random_range(0..=k) } else { 0 };
        for _ in 0..del {
            working.remove_one(x).expect("occupied");
            m.delete.push(x);
        }
    }
    for x in 0..working.sites() {
        if working.active()[x] == 1 && working.sleeping()[x] == 0 && rng.random_bool(0.3) {
            working.put_to_sleep(x).expect("lone active particle");
            m.sleep.push(x);
        }
    }
    for (x, &h) in horizon.iter().enumerate() {
        if rng.random_bool(0.3) {
            let pos = rng.random_range(0..=h);
            m.insert.insert(x, pos, rng.random_range(1..=3));
        }
    }
    m
}
