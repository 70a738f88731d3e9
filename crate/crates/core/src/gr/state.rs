use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::tape::Instruction;
use crate::error::{Error, Result};
use crate::lattice::Ball;

/// Particle counts per site, split into active and sleeping.
///
/// A sleeping particle is always alone on its site: anything arriving wakes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    active: Vec<u32>,
    sleeping: Vec<u32>,
}

impl Configuration {
    pub fn empty(sites: usize) -> Self {
        Configuration { active: vec![0; sites], sleeping: vec![0; sites] }
    }

    pub fn from_active(active: Vec<u32>) -> Self {
        let sleeping = vec![0; active.len()];
        Configuration { active, sleeping }
    }

    pub fn from_parts(active: Vec<u32>, sleeping: Vec<u32>) -> Result<Self> {
        if active.len() != sleeping.len() {
            return Err(Error::InvalidParameter("active/sleeping length mismatch".into()));
        }
        let c = Configuration { active, sleeping };
        if let Some(site) = c.invariant_violation() {
            return Err(Error::InvalidParameter(format!(
                "site {site}: a sleeping particle must be alone"
            )));
        }
        Ok(c)
    }

    pub fn sites(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self) -> &[u32] {
        &self.active
    }

    pub fn sleeping(&self) -> &[u32] {
        &self.sleeping
    }

    pub fn occupancy(&self, site: usize) -> u32 {
        self.active[site] + self.sleeping[site]
    }

    pub fn total(&self) -> u64 {
        self.active.iter().chain(&self.sleeping).map(|&c| c as u64).sum()
    }

    pub fn total_active(&self) -> u64 {
        self.active.iter().map(|&c| c as u64).sum()
    }

    pub fn is_stable(&self) -> bool {
        self.active.iter().all(|&c| c == 0)
    }

    pub fn add_active(&mut self, site: usize, count: u32) {
        if count == 0 {
            return;
        }
        self.active[site] += count + self.sleeping[site];
        self.sleeping[site] = 0;
    }

    /// Puts a sleeping particle on an empty site.
    pub fn add_sleeping(&mut self, site: usize) -> Result<()> {
        if self.occupancy(site) != 0 {
            return Err(Error::InvalidParameter(format!("site {site} is occupied")));
        }
        self.sleeping[site] = 1;
        Ok(())
    }

    /// Removes one particle from `site`, active ones first.
    pub fn remove_one(&mut self, site: usize) -> Result<()> {
        if self.active[site] > 0 {
            self.active[site] -= 1;
        } else if self.sleeping[site] > 0 {
            self.sleeping[site] -= 1;
        } else {
            return Err(Error::InvalidModification(format!("site {site} is empty")));
        }
        Ok(())
    }

    /// Turns the lone active particle at `site` into a sleeping one.
    pub fn put_to_sleep(&mut self, site: usize) -> Result<()> {
        if self.active[site] != 1 || self.sleeping[site] != 0 {
            return Err(Error::InvalidModification(format!(
                "site {site} does not hold exactly one active particle"
            )));
        }
        self.active[site] = 0;
        self.sleeping[site] = 1;
        Ok(())
    }

    /// First site breaking "sleeping implies alone", if any.
    pub fn invariant_violation(&self) -> Option<usize> {
        (0..self.sites()).find(|&x| {
            self.sleeping[x] > 1 || (self.sleeping[x] == 1 && self.active[x] > 0)
        })
    }
}

/// What an executed instruction did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Slept,
    /// Sleep attempted on a shared site; the envelope is burned regardless.
    SleepIgnored,
    Moved { to: usize, woke: bool, at_origin: bool },
    Absorbed,
}

/// Executes `instr` for one active particle at `site`.
pub fn apply_instruction(
    config: &mut Configuration,
    site: usize,
    instr: Instruction,
    ball: &Ball,
) -> Result<Event> {
    if config.active[site] == 0 {
        return Err(Error::InvalidParameter(format!("no active particle at site {site}")));
    }
    Ok(match instr {
        Instruction::Sleep => {
            if config.active[site] == 1 {
                config.active[site] = 0;
                config.sleeping[site] = 1;
                Event::Slept
            } else {
                Event::SleepIgnored
            }
        }
        Instruction::Jump(dir) => {
            config.active[site] -= 1;
            match ball.neighbor(site, dir as usize) {
                None => Event::Absorbed,
                Some(to) => {
                    let woke = config.sleeping[to] == 1;
                    config.active[to] += 1 + config.sleeping[to];
                    config.sleeping[to] = 0;
                    Event::Moved { to, woke, at_origin: to == ball.origin() }
                }
            }
        }
    })
}

/// Per-site envelope consumption and visit count of a stabilization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Odometer {
    /// Original-tape envelopes burned per site.
    pub burned: Vec<u64>,
    /// Inserted sleep envelopes burned per site.
    pub inserted_burned: Vec<u64>,
    /// Particles initially at the origin plus jump arrivals there.
    pub origin_visits: u64,
}

impl Odometer {
    pub fn zero(sites: usize) -> Self {
        Odometer { burned: vec![0; sites], inserted_burned: vec![0; sites], origin_visits: 0 }
    }

    pub fn total_burned(&self) -> u64 {
        self.burned.iter().sum()
    }
}

/// JSON snapshot of a configuration and odometer, one entry per site keyed
/// by its comma separated coordinates.
pub fn snapshot(ball: &Ball, config: &Configuration, odometer: &Odometer, fixated: bool) -> Value {
    let mut sites = Map::new();
    for (id, p) in ball.sites().iter().enumerate() {
        sites.insert(
            p.key(),
            json!({
                "active": config.active[id],
                "sleeping": config.sleeping[id],
                "burned": odometer.burned[id],
                "inserted_burned": odometer.inserted_burned[id],
            }),
        );
    }
    json!({
        "dim": ball.dim(),
        "radius": ball.radius(),
        "fixated": fixated,
        "origin_visits": odometer.origin_visits,
        "sites": sites,
    })
}
