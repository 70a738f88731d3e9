//! Removing particles or inserting sleeps never increases the odometer.

use arw::gr::{verify_monotone, Configuration, Modification, OrderPolicy, SleepInsertions, TapeParams, DEFAULT_STEP_CAP};
use arw::harness::{monotone_campaign, CampaignSpec};
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    let ball = Ball::new(1, 8, Norm::Euclidean)?;
    let mut config = Configuration::empty(ball.len());
    for s in [3, 6, 8, 8, 10, 12] {
        config.add_active(s, 1);
    }
    let params = TapeParams::new(5, 1.0, 1)?;

    let mut insert = SleepInsertions::new();
    insert.insert(ball.origin(), 0, 2);
    let modification = Modification { delete: vec![3], sleep: vec![10], insert };
    let report = verify_monotone(&config, params, &modification, OrderPolicy::Fifo, &ball, DEFAULT_STEP_CAP)?;
    println!("delete + sleep + insert: {:?}", report.status);

    let spec = CampaignSpec {
        instances: 100,
        max_radius: 6,
        max_particles: 20,
        lambdas: vec![0.5, 1.0, 2.0],
        seed: 2,
        step_cap: DEFAULT_STEP_CAP,
    };
    let records = monotone_campaign(&spec)?;
    let passed = records.iter().filter(|r| r.report.passed()).count();
    println!("campaign: {passed}/{} modifications monotone", records.len());
    Ok(())
}
