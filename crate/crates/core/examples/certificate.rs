//! Exact tail bound on P[V <= eM/4 | F], next to its simulated counterpart.

use arw::harness::{certificate, estimate_v, ExperimentSpec, Mode};
use arw::Norm;

fn main() -> arw::Result<()> {
    let radii = vec![20, 40, 80];
    let spec = ExperimentSpec { dim: 1, radii: radii.clone(), mu: 1.5, trials: 500, seed: 4, mode: Mode::Certificate, ..Default::default() };
    let sims = estimate_v(&spec)?;
    for (m, sim) in radii.into_iter().zip(&sims) {
        let mut report = certificate(1, m, 1.5, Norm::Euclidean)?;
        report.attach(sim);
        println!(
            "M={m:>3}  N={:>3}  E[W]={:.2}  E[L-hat]={:.2}  bound {:.4} (W {:.4} + L {:.4})  simulated {:.3}",
            report.big_n,
            report.e_w,
            report.e_lhat,
            report.total_bound,
            report.bound_w,
            report.bound_l,
            report.empirical.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
