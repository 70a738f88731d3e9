//! P(A_r) over a small (density, sleep rate) grid.

use arw::harness::{scan, ExperimentSpec, Mode};

fn main() -> arw::Result<()> {
    let spec = ExperimentSpec { dim: 1, radii: vec![20], r: 5, trials: 100, seed: 5, mode: Mode::Scan, ..Default::default() };
    let mut grid = Vec::new();
    for mu in [0.3, 0.6, 0.9, 1.2, 1.5] {
        for lambda in [0.2, 1.0, 5.0] {
            grid.push((mu, lambda));
        }
    }
    println!("   mu  lambda  P(A_5)");
    for cell in scan(&spec, &grid)? {
        println!("{:>5.1} {:>7.1}  {:.3}", cell.mu, cell.lambda, cell.row.p);
    }
    Ok(())
}
