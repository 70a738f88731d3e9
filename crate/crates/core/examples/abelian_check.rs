//! Order independence of stabilization, plus a deliberately broken run.

use arw::gr::{
    compare_outcomes, stabilize, verify_abelian, Configuration, OrderPolicy, TapeParams, TapeSet, DEFAULT_STEP_CAP,
};
use arw::harness::{abelian_campaign, CampaignSpec};
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    let ball = Ball::new(2, 5, Norm::Euclidean)?;
    let mut config = Configuration::empty(ball.len());
    config.add_active(ball.origin(), 12);
    let params = TapeParams::new(3, 0.5, 2)?;

    let report = verify_abelian(&config, params, OrderPolicy::Lifo, OrderPolicy::Random(9), &ball, DEFAULT_STEP_CAP);
    println!("LIFO vs random: {:?}", report.status);

    let honest = stabilize(&config, &mut TapeSet::new(params, ball.len()), OrderPolicy::Fifo, &ball, DEFAULT_STEP_CAP);
    let mut skipping = TapeSet::new(params, ball.len()).with_skip(ball.origin(), 3);
    let broken = stabilize(&config, &mut skipping, OrderPolicy::Fifo, &ball, DEFAULT_STEP_CAP);
    let report = compare_outcomes(&honest, &broken);
    println!("with a skipped instruction: {:?} {:?}", report.status, report.divergence);

    let spec = CampaignSpec {
        instances: 100,
        max_radius: 6,
        max_particles: 20,
        lambdas: vec![0.5, 1.0, 2.0],
        seed: 1,
        step_cap: DEFAULT_STEP_CAP,
    };
    let records = abelian_campaign(&spec)?;
    let passed = records.iter().filter(|r| r.report.passed()).count();
    println!("campaign: {passed}/{} instances agree under all policies", records.len());
    Ok(())
}
