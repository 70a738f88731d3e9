//! Site counts of lattice balls under both norms.

use arw::{Ball, Norm, Point};

fn main() -> arw::Result<()> {
    for dim in 1..=3 {
        for radius in [2u32, 5, 10] {
            let l2 = Ball::new(dim, radius, Norm::Euclidean)?;
            let linf = Ball::new(dim, radius, Norm::Sup)?;
            println!("d={dim} M={radius:>2}  |B_l2|={:>5}  |B_linf|={:>5}", l2.len(), linf.len());
        }
    }

    let ball = Ball::new(2, 3, Norm::Euclidean)?;
    let corner = Point::new(vec![2, 2]);
    println!("{corner} in B(3)? {}", ball.contains(&corner)?);
    let id = ball.id(&Point::new(vec![2, 0])).expect("inside");
    let exits = (0..ball.degree()).filter(|&k| ball.neighbor(id, k).is_none()).count();
    println!("(2,0) has {exits} neighbor(s) outside the ball");
    Ok(())
}
