//! Monte Carlo checks of the sampling layer against exact values.

use arw::harness::{
    epsilon_for, estimate_ar, event_f, idla_trial, init_poisson, poisson_binomial_tail, released_count, scan,
    trial_seed, ExperimentSpec, Mode,
};
use arw::idla::{dominance_check, run_coupled_ids, run_embedded_ids, sample_lhat, uniform_starts};
use arw::potential::GreenTable;
use arw::{Ball, Norm};

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[test]
fn lhat_mean_on_a_line_is_the_radius() {
    let ball = Ball::new(1, 10, Norm::Euclidean).unwrap();
    let xs: Vec<f64> = (0..10_000).map(|s| sample_lhat(&ball, s).total as f64).collect();
    let (m, sd) = mean_sd(&xs);
    assert!((m - 10.0).abs() <= 3.0 * sd / 100.0, "mean {m}, sd {sd}");
}

#[test]
fn lhat_law_matches_poisson_binomial() {
    let ball = Ball::new(1, 6, Norm::Euclidean).unwrap();
    let table = GreenTable::compute(&ball).unwrap();
    let samples = 1_000_000u64;
    let mut counts = vec![0u64; ball.len() + 2];
    for s in 0..samples {
        counts[sample_lhat(&ball, s).total as usize] += 1;
    }
    for k in 1..=ball.len() as i64 {
        let exact = poisson_binomial_tail(&table.h, k).unwrap();
        let empirical = counts[k as usize..].iter().sum::<u64>() as f64 / samples as f64;
        let se = (exact * (1.0 - exact) / samples as f64).sqrt().max(1e-6);
        assert!((empirical - exact).abs() <= 4.0 * se, "k={k}: {empirical} vs {exact}");
    }
}

#[test]
fn w_is_binomial() {
    // independent uniform starts make W ~ Bin(N, Σh/|B|)
    let ball = Ball::new(2, 6, Norm::Euclidean).unwrap();
    let table = GreenTable::compute(&ball).unwrap();
    let n = (1.25 * ball.len() as f64).ceil() as usize;
    let q = table.sum_h() / ball.len() as f64;
    let ws: Vec<f64> = (0..10_000u64)
        .map(|s| run_coupled_ids(&uniform_starts(&ball, n, s), &ball, s).w as f64)
        .collect();
    let (m, sd) = mean_sd(&ws);
    let var = n as f64 * q * (1.0 - q);
    assert!((m - n as f64 * q).abs() <= 3.0 * var.sqrt() / 100.0, "mean {m}");
    assert!((sd * sd / var - 1.0).abs() < 0.05, "variance {} vs {var}", sd * sd);
}

#[test]
fn embedded_v_dominates_coupled_difference_in_the_plane() {
    let ball = Ball::new(2, 5, Norm::Euclidean).unwrap();
    let n = released_count(&ball, 0.25) as usize;
    for s in 0..2_000u64 {
        let starts = uniform_starts(&ball, n, s);
        let v = run_embedded_ids(&starts, &ball, s).v;
        let t = run_coupled_ids(&starts, &ball, s);
        assert_eq!(v, t.v, "seed {s}");
        assert!(v + t.l >= t.w, "seed {s}: V={v} W={} L={}", t.w, t.l);
    }
}

#[test]
fn v_counts_every_particle_starting_at_the_origin() {
    let ball = Ball::new(1, 20, Norm::Euclidean).unwrap();
    for i in 0..500 {
        let rec = idla_trial(&ball, 1.5, i, trial_seed(1, 0, i)).unwrap();
        if let Some(v) = rec.v {
            assert!(v >= rec.origin_starts);
        }
    }
}

#[test]
fn l_is_dominated_by_lhat_at_the_certificate_threshold() {
    let ball = Ball::new(1, 20, Norm::Euclidean).unwrap();
    let eps = epsilon_for(1.5).unwrap();
    let n = released_count(&ball, eps) as usize;
    let table = GreenTable::compute(&ball).unwrap();
    let e_w = n as f64 / ball.len() as f64 * table.sum_h();
    let traces: Vec<_> = (0..5_000u64).map(|s| run_coupled_ids(&uniform_starts(&ball, n, s), &ball, s)).collect();
    let lhats: Vec<_> = (0..5_000u64).map(|s| sample_lhat(&ball, s)).collect();
    let report = dominance_check(&traces, &lhats, (1.0 - eps / 2.0) * e_w).unwrap();
    assert!(report.consistent, "{report:?}");
}

#[test]
fn many_particles_event_becomes_typical() {
    let mut last = 0.0;
    for m in [10u32, 50, 200] {
        let ball = Ball::new(1, m, Norm::Euclidean).unwrap();
        let hits = (0..2_000u64)
            .filter(|&s| event_f(&init_poisson(&ball, 1.5, s).unwrap(), &ball, 1.5).unwrap().holds)
            .count();
        let p = hits as f64 / 2_000.0;
        assert!(p > last, "M={m}: {p} after {last}");
        last = p;
    }
    assert!(last > 0.99);
}

#[test]
fn one_visit_is_at_least_as_likely_as_an_occupied_origin() {
    let spec = ExperimentSpec {
        dim: 1,
        radii: vec![10],
        mu: 0.5,
        lambda: 1.0,
        r: 1,
        trials: 2_000,
        seed: 3,
        mode: Mode::Stabilize,
        ..Default::default()
    };
    let row = &estimate_ar(&spec).unwrap()[0];
    let floor = 1.0 - (-0.5f64).exp();
    let se = (floor * (1.0 - floor) / 2_000.0).sqrt();
    assert!(row.p >= floor - 3.0 * se, "{} < {floor}", row.p);
}

#[test]
fn single_cell_scan_equals_estimate() {
    let spec = ExperimentSpec {
        dim: 1,
        radii: vec![8, 16],
        mu: 1.2,
        lambda: 0.7,
        r: 4,
        trials: 100,
        seed: 11,
        mode: Mode::Scan,
        ..Default::default()
    };
    let direct = estimate_ar(&spec).unwrap();
    let cells = scan(&spec, &[(1.2, 0.7)]).unwrap();
    assert_eq!(cells.len(), direct.len());
    for (c, d) in cells.iter().zip(&direct) {
        assert_eq!(&c.row, d);
    }
}
