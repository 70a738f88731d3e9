use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::{apply_instruction, Configuration, Event, Odometer};
use super::tape::TapeSet;
use crate::lattice::Ball;
use crate::seed;

pub const DEFAULT_STEP_CAP: u64 = 1_000_000_000;

/// Rule choosing which active particle acts next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// A uniformly random active particle, from a stream keyed by the seed.
    Random(u64),
    /// Active particles queue up; the one that acted rejoins at the back.
    Fifo,
    /// The most recently activated particle acts first.
    Lifo,
    /// Cyclic sweep over site ids, one action per visited active site.
    SiteSweep,
}

enum Scheduler {
    Fifo(VecDeque<u32>),
    Lifo(Vec<u32>),
    Random { rng: ChaCha8Rng, items: Vec<u32> },
    Sweep { counts: BTreeMap<u32, u32>, cursor: u32 },
}

impl Scheduler {
    fn new(policy: OrderPolicy) -> Self {
        match policy {
            OrderPolicy::Fifo => Scheduler::Fifo(VecDeque::new()),
            OrderPolicy::Lifo => Scheduler::Lifo(Vec::new()),
            OrderPolicy::Random(s) => Scheduler::Random {
                rng: seed::stream_rng(seed::derive(s, seed::DOMAIN_POLICY, 0), 0),
                items: Vec::new(),
            },
            OrderPolicy::SiteSweep => Scheduler::Sweep { counts: BTreeMap::new(), cursor: 0 },
        }
    }

    fn push(&mut self, site: usize) {
        let site = site as u32;
        match self {
            Scheduler::Fifo(q) => q.push_back(site),
            Scheduler::Lifo(s) => s.push(site),
            Scheduler::Random { items, .. } => items.push(site),
            Scheduler::Sweep { counts, .. } => *counts.entry(site).or_insert(0) += 1,
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let site = match self {
            Scheduler::Fifo(q) => q.pop_front(),
            Scheduler::Lifo(s) => s.pop(),
            Scheduler::Random { rng, items } => {
                if items.is_empty() {
                    None
                } else {
                    let i = rng.random_range(0..items.len());
                    Some(items.swap_remove(i))
                }
            }
            Scheduler::Sweep { counts, cursor } => {
                let next = counts
                    .range(*cursor..)
                    .next()
                    .or_else(|| counts.iter().next())
                    .map(|(&s, _)| s);
                if let Some(s) = next {
                    let c = counts.get_mut(&s).expect("present");
                    *c -= 1;
                    if *c == 0 {
                        counts.remove(&s);
                    }
                    *cursor = s + 1;
                }
                next
            }
        };
        site.map(|s| s as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizeOutcome {
    pub config: Configuration,
    pub odometer: Odometer,
    /// False when the step cap ran out with particles still active.
    pub fixated: bool,
    pub steps: u64,
    pub absorbed: u64,
}

/// Runs the envelope dynamics until no particle is active or `step_cap`
/// envelopes have been burned.
pub fn stabilize(
    config: &Configuration,
    tapes: &mut TapeSet,
    policy: OrderPolicy,
    ball: &Ball,
    step_cap: u64,
) -> StabilizeOutcome {
    let mut config = config.clone();
    let origin = ball.origin();
    let mut origin_visits = config.occupancy(origin) as u64;
    let mut sched = Scheduler::new(policy);
    for (site, &n) in config.active().iter().enumerate() {
        for _ in 0..n {
            sched.push(site);
        }
    }

    let mut steps = 0u64;
    let mut absorbed = 0u64;
    let mut fixated = true;
    while let Some(site) = sched.pop() {
        if steps >= step_cap {
            fixated = false;
            break;
        }
        let env = tapes.next(site);
        steps += 1;
        let event = apply_instruction(&mut config, site, env.instruction, ball)
            .expect("scheduler holds one entry per active particle");
        match event {
            Event::Slept => {}
            Event::SleepIgnored => sched.push(site),
            Event::Moved { to, woke, at_origin } => {
                if woke {
                    sched.push(to);
                }
                sched.push(to);
                if at_origin {
                    origin_visits += 1;
                }
            }
            Event::Absorbed => absorbed += 1,
        }
    }

    StabilizeOutcome {
        odometer: Odometer {
            burned: tapes.burned(),
            inserted_burned: tapes.inserted_burned(),
            origin_visits,
        },
        config,
        fixated,
        steps,
        absorbed,
    }
}
