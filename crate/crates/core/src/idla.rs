//! The embedded IDLA process and its coupled marking construction.
//!
//! Particles are released one at a time. In the embedded process a particle
//! walks until it stands on a site not taken by an earlier particle and
//! settles there. In the coupled construction the same walk keeps going
//! until it leaves the ball, and the site where it would have settled is
//! merely marked. Walk `i` reads its steps from the stream `(walk seed, i)`
//! in both constructions, so the two see identical paths up to settling.
//!
//! Counters:
//! - `V`: particles whose path up to settling touches the origin;
//! - `W`: walks that hit the origin before leaving the ball;
//! - `L`: walks that hit the origin before leaving, strictly after marking;
//! - `L̂`: one independent walk from every site, counting those that hit the
//!   origin before leaving.
//!
//! A walk that leaves the ball before finding a free site settles nowhere.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Ball, Point};
use crate::seed;

/// One-sided 99% standard normal quantile.
const Z_99: f64 = 2.326_347_874_040_840_8;

fn walk_rng(seed: u64, walk: usize) -> ChaCha8Rng {
    seed::stream_rng(seed::derive(seed, seed::DOMAIN_WALK, 0), walk as u64)
}

#[inline]
fn step<R: Rng>(ball: &Ball, rng: &mut R, at: usize) -> Option<usize> {
    let dir = rng.random_range(0..ball.degree() as u32) as usize;
    ball.neighbor(at, dir)
}

/// Resolves points to site ids, rejecting anything outside the ball.
pub fn site_ids(ball: &Ball, starts: &[Point]) -> Result<Vec<usize>> {
    starts
        .iter()
        .map(|p| {
            if !ball.contains(p)? {
                return Err(Error::OutsideBall(p.to_string()));
            }
            Ok(ball.id(p).expect("contained"))
        })
        .collect()
}

/// `n` independent uniform starting sites.
pub fn uniform_starts(ball: &Ball, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed::stream_rng(seed::derive(seed, seed::DOMAIN_SELECT, 1), 0);
    (0..n).map(|_| rng.random_range(0..ball.len())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedOutcome {
    pub v: u64,
    /// Settled sites in settling order.
    pub settled: Vec<usize>,
    /// Walks that left the ball before finding a free site.
    pub absorbed: u64,
}

pub fn run_embedded(starts: &[Point], ball: &Ball, seed: u64) -> Result<EmbeddedOutcome> {
    Ok(run_embedded_ids(&site_ids(ball, starts)?, ball, seed))
}

pub fn run_embedded_ids(starts: &[usize], ball: &Ball, seed: u64) -> EmbeddedOutcome {
    let origin = ball.origin();
    let mut occupied = vec![false; ball.len()];
    let mut settled = Vec::with_capacity(starts.len());
    let mut v = 0;
    let mut absorbed = 0;
    for (i, &start) in starts.iter().enumerate() {
        let mut rng = walk_rng(seed, i);
        let mut at = start;
        let mut touched = at == origin;
        loop {
            if !occupied[at] {
                occupied[at] = true;
                settled.push(at);
                break;
            }
            match step(ball, &mut rng, at) {
                Some(next) => {
                    at = next;
                    touched |= at == origin;
                }
                None => {
                    absorbed += 1;
                    break;
                }
            }
        }
        v += touched as u64;
    }
    EmbeddedOutcome { v, settled, absorbed }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub hit_before_exit: bool,
    pub hit_after_marking: bool,
    /// `None` when the walk left the ball without finding an unmarked site.
    pub marked_site: Option<usize>,
    /// Touched the origin up to and including its marking time (or, if it
    /// never marks, before leaving). This is the walk's contribution to `V`.
    pub hit_until_marking: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdlaTrace {
    pub n: usize,
    pub starts: Vec<usize>,
    /// Marked sites in marking order; the cluster.
    pub settled: Vec<usize>,
    pub v: u64,
    pub w: u64,
    pub l: u64,
    pub walks: Vec<WalkRecord>,
}

pub fn run_coupled(starts: &[Point], ball: &Ball, seed: u64) -> Result<IdlaTrace> {
    Ok(run_coupled_ids(&site_ids(ball, starts)?, ball, seed))
}

pub fn run_coupled_ids(starts: &[usize], ball: &Ball, seed: u64) -> IdlaTrace {
    let origin = ball.origin();
    let mut marked = vec![false; ball.len()];
    let mut settled = Vec::with_capacity(starts.len());
    let mut walks = Vec::with_capacity(starts.len());
    for (i, &start) in starts.iter().enumerate() {
        let mut rng = walk_rng(seed, i);
        let mut rec = WalkRecord {
            hit_before_exit: false,
            hit_after_marking: false,
            marked_site: None,
            hit_until_marking: false,
        };
        let mut at = start;
        loop {
            if at == origin {
                rec.hit_before_exit = true;
                if rec.marked_site.is_some() {
                    rec.hit_after_marking = true;
                } else {
                    rec.hit_until_marking = true;
                }
            }
            if rec.marked_site.is_none() && !marked[at] {
                marked[at] = true;
                settled.push(at);
                rec.marked_site = Some(at);
            }
            // once both flags are decided the rest of the path is irrelevant
            if rec.hit_after_marking {
                break;
            }
            match step(ball, &mut rng, at) {
                Some(next) => at = next,
                None => break,
            }
        }
        walks.push(rec);
    }
    let count = |f: fn(&WalkRecord) -> bool| walks.iter().filter(|w| f(w)).count() as u64;
    IdlaTrace {
        n: starts.len(),
        starts: starts.to_vec(),
        settled,
        v: count(|w| w.hit_until_marking),
        w: count(|w| w.hit_before_exit),
        l: count(|w| w.hit_after_marking),
        walks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LHatSample {
    /// Per-site indicator: the walk started there hit the origin first.
    pub hits: Vec<bool>,
    pub total: u64,
}

pub fn sample_lhat(ball: &Ball, seed: u64) -> LHatSample {
    let origin = ball.origin();
    let base = seed::derive(seed, seed::DOMAIN_LHAT, 0);
    let hits: Vec<bool> = (0..ball.len())
        .map(|x| {
            let mut rng = seed::stream_rng(base, x as u64);
            let mut at = x;
            loop {
                if at == origin {
                    return true;
                }
                match step(ball, &mut rng, at) {
                    Some(next) => at = next,
                    None => return false,
                }
            }
        })
        .collect();
    let total = hits.iter().filter(|&&h| h).count() as u64;
    LHatSample { hits, total }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub threshold: f64,
    pub trials: usize,
    /// Empirical `P[L ≥ a]`.
    pub freq_l: f64,
    /// Empirical `P[L̂ ≥ a]`.
    pub freq_lhat: f64,
    /// One-sided 99% allowance for the difference of the two frequencies.
    pub slack: f64,
    pub consistent: bool,
}

/// Empirical check of `P[L ≥ a] ≤ P[L̂ ≥ a]`.
pub fn dominance_check(traces: &[IdlaTrace], lhats: &[LHatSample], a: f64) -> Result<DominanceReport> {
    if traces.len() != lhats.len() || traces.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "need matched non-empty samples, got {} traces and {} L-hat samples",
            traces.len(),
            lhats.len()
        )));
    }
    let n = traces.len() as f64;
    let freq_l = traces.iter().filter(|t| t.l as f64 >= a).count() as f64 / n;
    let freq_lhat = lhats.iter().filter(|s| s.total as f64 >= a).count() as f64 / n;
    let var = (freq_l * (1.0 - freq_l) + freq_lhat * (1.0 - freq_lhat)) / n;
    let slack = Z_99 * var.sqrt();
    Ok(DominanceReport {
        threshold: a,
        trials: traces.len(),
        freq_l,
        freq_lhat,
        slack,
        consistent: freq_l <= freq_lhat + slack,
    })
}
