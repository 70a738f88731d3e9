use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gr::Configuration;
use crate::lattice::Ball;
use crate::seed;

/// Means up to this value are sampled by inversion; larger ones by the
/// rejection sampler of `rand_distr`.
pub const INVERSION_LIMIT: f64 = 30.0;

fn poisson_inversion<R: Rng>(rng: &mut R, mu: f64) -> u32 {
    let u: f64 = rng.random();
    let mut k = 0u32;
    let mut pmf = (-mu).exp();
    let mut cdf = pmf;
    while u > cdf && pmf > 0.0 {
        k += 1;
        pmf *= mu / k as f64;
        cdf += pmf;
    }
    k
}

/// Independent `Poisson(μ)` active particles on every site.
pub fn init_poisson(ball: &Ball, mu: f64, seed: u64) -> Result<Configuration> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("density must be positive, got {mu}")));
    }
    let mut rng = seed::stream_rng(seed::derive(seed, seed::DOMAIN_INIT, 0), 0);
    let active = if mu <= INVERSION_LIMIT {
        (0..ball.len()).map(|_| poisson_inversion(&mut rng, mu)).collect()
    } else {
        let dist = Poisson::new(mu).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        (0..ball.len()).map(|_| dist.sample(&mut rng) as u32).collect()
    };
    Ok(Configuration::from_active(active))
}

/// The "many particles" event: `n > (1+ε)|B|`, with `ε = (μ−1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManyParticles {
    pub holds: bool,
    pub n: u64,
    pub epsilon: f64,
    /// `N = ⌈(1+ε)|B|⌉`, the number of particles released in the embedded process.
    pub big_n: u64,
}

pub fn epsilon_for(mu: f64) -> Result<f64> {
    if !(mu > 1.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("need density above one, got {mu}")));
    }
    Ok((mu - 1.0) / 2.0)
}

pub fn released_count(ball: &Ball, epsilon: f64) -> u64 {
    ((1.0 + epsilon) * ball.len() as f64).ceil() as u64
}

pub fn event_f(config: &Configuration, ball: &Ball, mu: f64) -> Result<ManyParticles> {
    let epsilon = epsilon_for(mu)?;
    let n = config.total();
    Ok(ManyParticles {
        holds: n as f64 > (1.0 + epsilon) * ball.len() as f64,
        n,
        epsilon,
        big_n: released_count(ball, epsilon),
    })
}

/// Picks `count` particles uniformly without replacement and returns their
/// sites in the (random) order they were picked.
pub fn select_particles(config: &Configuration, count: usize, seed: u64) -> Result<Vec<usize>> {
    let mut pool: Vec<usize> = (0..config.sites())
        .flat_map(|s| std::iter::repeat_n(s, config.occupancy(s) as usize))
        .collect();
    if count > pool.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot pick {count} of {} particles",
            pool.len()
        )));
    }
    let mut rng = seed::stream_rng(seed::derive(seed, seed::DOMAIN_SELECT, 0), 0);
    for i in 0..count {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(count);
    Ok(pool)
}
