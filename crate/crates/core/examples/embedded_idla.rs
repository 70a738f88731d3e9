//! The embedded IDLA process and its coupling with L-hat.

use arw::harness::{estimate_v, ExperimentSpec, Mode};
use arw::idla::{run_coupled_ids, sample_lhat, uniform_starts};
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    let ball = Ball::new(1, 20, Norm::Euclidean)?;
    let n = 49;
    let trace = run_coupled_ids(&uniform_starts(&ball, n, 1), &ball, 1);
    println!(
        "{n} walks on {} sites: cluster {} sites, V={} W={} L={}",
        ball.len(),
        trace.settled.len(),
        trace.v,
        trace.w,
        trace.l
    );
    println!("one L-hat draw: {}", sample_lhat(&ball, 1).total);

    let spec = ExperimentSpec { dim: 1, radii: vec![20, 40, 80], mu: 1.5, trials: 500, seed: 3, mode: Mode::Idla, ..Default::default() };
    for s in estimate_v(&spec)? {
        println!(
            "M={:>3}  P[V > {:.1} | F] = {:.3}  E[V]={:.2}  E[W]={:.2}  E[L]={:.2}",
            s.radius,
            s.threshold,
            s.p_exceeds.unwrap_or(f64::NAN),
            s.mean_v,
            s.mean_w,
            s.mean_l
        );
    }
    Ok(())
}
