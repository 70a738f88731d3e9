//! Tail of L-hat as a sum of independent indicators, against simulation.

use arw::harness::{binomial_tail, poisson_binomial_tail, Side};
use arw::idla::sample_lhat;
use arw::potential::GreenTable;
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    let ball = Ball::new(1, 6, Norm::Euclidean)?;
    let table = GreenTable::compute(&ball)?;
    let samples = 100_000u64;
    let draws: Vec<u64> = (0..samples).map(|s| sample_lhat(&ball, s).total).collect();
    println!(" k  exact P[L>=k]  simulated");
    for k in 0..=ball.len() as i64 {
        let hits = draws.iter().filter(|&&t| t as i64 >= k).count();
        println!("{k:>2}  {:.6}       {:.6}", poisson_binomial_tail(&table.h, k)?, hits as f64 / samples as f64);
    }

    let t = binomial_tail(10, 0.5, 4, Side::Lower)?;
    println!("P[Bin(10, 1/2) <= 4] = {} (exact: {})", t.value, t.exact);
    let t = binomial_tail(10_000_000, 0.3, 2_900_000, Side::Lower)?;
    println!("P[Bin(1e7, 0.3) <= 2.9e6] <= {:.3e} (exact: {})", t.value, t.exact);
    Ok(())
}
