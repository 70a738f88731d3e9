//! Stabilize one Poisson configuration and estimate P(A_r) across radii.

use arw::gr::DEFAULT_STEP_CAP;
use arw::harness::{estimate_ar, stabilize_run, ExperimentSpec, Mode};
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    let spec = ExperimentSpec {
        dim: 1,
        radii: vec![10, 20, 40],
        norm: Norm::Euclidean,
        mu: 1.5,
        lambda: 1.0,
        r: 10,
        trials: 100,
        seed: 1,
        step_cap: DEFAULT_STEP_CAP,
        mode: Mode::Stabilize,
    };

    let ball = Ball::new(1, 20, Norm::Euclidean)?;
    let (initial, out) = stabilize_run(&ball, &spec, 42)?;
    println!(
        "M=20: {} particles, {} steps, {} absorbed, {} left asleep, origin visited {} times",
        initial.total(),
        out.steps,
        out.absorbed,
        out.config.total(),
        out.odometer.origin_visits
    );

    for row in estimate_ar(&spec)? {
        println!(
            "M={:>3}  P(A_{}) = {:.3}  [{:.3}, {:.3}]  mean visits {:.1}",
            row.radius, spec.r, row.p, row.ci_lo, row.ci_hi, row.mean_visits
        );
    }
    Ok(())
}
