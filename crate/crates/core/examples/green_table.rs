//! Hitting probabilities, Green's function and exit times on a ball.

use arw::potential::{elhat_exact, GreenTable};
use arw::{Ball, Norm};

fn main() -> arw::Result<()> {
    for (dim, radius) in [(1, 10), (2, 10), (3, 10)] {
        let ball = Ball::new(dim, radius, Norm::Euclidean)?;
        let table = GreenTable::compute(&ball)?;
        table.check_identities()?;
        println!(
            "d={dim} M={radius}: |B|={:>5}  G(0,0)={:.4}  E0[tau]={:.2}  E[L-hat]={:.3}",
            ball.len(),
            table.g00,
            table.exit_time_origin(),
            elhat_exact(&table)?
        );
    }

    let ball = Ball::new(1, 4, Norm::Euclidean)?;
    GreenTable::compute(&ball)?.write_csv(std::io::stdout().lock())?;
    Ok(())
}
