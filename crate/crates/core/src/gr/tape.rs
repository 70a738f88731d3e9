//! Per-site envelope tapes.
//!
//! The tape of site `x` is the sequence of instructions produced by the
//! ChaCha8 stream `(tape seed, x)`. Instruction `k` is therefore a pure
//! function of `(seed, site, k)` no matter in which order sites are read,
//! which is what lets two stabilizations under different activation orders
//! consume the same envelopes.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    Sleep,
    /// Jump along a direction of [`crate::Point::neighbors`] order.
    Jump(u8),
}

/// Everything that determines the tapes: seed, sleep rate and dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapeParams {
    seed: u64,
    lambda: f64,
    dim: usize,
}

impl TapeParams {
    pub fn new(seed: u64, lambda: f64, dim: usize) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sleep rate must be finite and non-negative, got {lambda}"
            )));
        }
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(TapeParams { seed, lambda, dim })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `λ / (1 + λ)`: a particle jumps at rate 1 and sleeps at rate λ.
    pub fn sleep_probability(&self) -> f64 {
        self.lambda / (1.0 + self.lambda)
    }
}

#[derive(Debug, Clone)]
pub struct EnvelopeTape {
    site: usize,
    rng: ChaCha8Rng,
    p_sleep: f64,
    degree: u8,
    drawn: Vec<Instruction>,
}

impl EnvelopeTape {
    pub fn new(params: &TapeParams, site: usize) -> Self {
        let rng = seed::stream_rng(
            seed::derive(params.seed, seed::DOMAIN_TAPE, 0),
            site as u64,
        );
        EnvelopeTape {
            site,
            rng,
            p_sleep: params.sleep_probability(),
            degree: (2 * params.dim) as u8,
            drawn: Vec::new(),
        }
    }

    pub fn site(&self) -> usize {
        self.site
    }

    /// Instruction at `position`, drawing (and memoizing) the tape up to it.
    pub fn get(&mut self, position: u64) -> Instruction {
        let pos = position as usize;
        while self.drawn.len() <= pos {
            let u: f64 = self.rng.random();
            let instr = if u < self.p_sleep {
                Instruction::Sleep
            } else {
                Instruction::Jump(self.rng.random_range(0..self.degree))
            };
            self.drawn.push(instr);
        }
        self.drawn[pos]
    }

    pub fn drawn(&self) -> &[Instruction] {
        &self.drawn
    }
}

/// Instruction `position` of the tape at `site`.
pub fn draw_instruction(params: &TapeParams, site: usize, position: u64) -> Instruction {
    EnvelopeTape::new(params, site).get(position)
}

/// Extra sleep envelopes spliced into the tapes: `count` of them are read at
/// `site` just before original envelope `position`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SleepInsertions {
    at: BTreeMap<(usize, u64), u32>,
}

impl SleepInsertions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, site: usize, position: u64, count: u32) {
        if count > 0 {
            *self.at.entry((site, position)).or_insert(0) += count;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.at.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64, u32)> + '_ {
        self.at.iter().map(|(&(s, p), &c)| (s, p, c))
    }

    fn get(&self, site: usize, position: u64) -> u32 {
        self.at.get(&(site, position)).copied().unwrap_or(0)
    }
}

/// One envelope taken off a tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Envelope {
    pub instruction: Instruction,
    pub inserted: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct Cursor {
    position: u64,
    inserted_here: u32,
    burned: u64,
    inserted_burned: u64,
}

/// The tapes of every site of a ball together with their read cursors.
#[derive(Debug, Clone)]
pub struct TapeSet {
    params: TapeParams,
    tapes: Vec<Option<EnvelopeTape>>,
    cursors: Vec<Cursor>,
    insertions: SleepInsertions,
    skip: Option<(usize, u64)>,
}

impl TapeSet {
    pub fn new(params: TapeParams, sites: usize) -> Self {
        TapeSet {
            params,
            tapes: vec![None; sites],
            cursors: vec![Cursor::default(); sites],
            insertions: SleepInsertions::new(),
            skip: None,
        }
    }

    pub fn with_insertions(mut self, insertions: SleepInsertions) -> Self {
        self.insertions = insertions;
        self
    }

    /// Fault injection: original envelope `position` at `site` is jumped over
    /// without being executed or counted.
    pub fn with_skip(mut self, site: usize, position: u64) -> Self {
        self.skip = Some((site, position));
        self
    }

    pub fn params(&self) -> &TapeParams {
        &self.params
    }

    /// Takes the next envelope at `site` and burns it.
    pub fn next(&mut self, site: usize) -> Envelope {
        let cur = &mut self.cursors[site];
        if cur.inserted_here < self.insertions.get(site, cur.position) {
            cur.inserted_here += 1;
            cur.inserted_burned += 1;
            return Envelope { instruction: Instruction::Sleep, inserted: true };
        }
        if self.skip == Some((site, cur.position)) {
            cur.position += 1;
            cur.inserted_here = 0;
        }
        let params = &self.params;
        let tape = self.tapes[site].get_or_insert_with(|| EnvelopeTape::new(params, site));
        let instruction = tape.get(cur.position);
        cur.position += 1;
        cur.inserted_here = 0;
        cur.burned += 1;
        Envelope { instruction, inserted: false }
    }

    pub fn burned(&self) -> Vec<u64> {
        self.cursors.iter().map(|c| c.burned).collect()
    }

    pub fn inserted_burned(&self) -> Vec<u64> {
        self.cursors.iter().map(|c| c.inserted_burned).collect()
    }
}
