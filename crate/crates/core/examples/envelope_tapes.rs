//! Instruction frequencies on a per-site tape.

use arw::gr::{EnvelopeTape, Instruction, TapeParams};

fn main() -> arw::Result<()> {
    let params = TapeParams::new(7, 1.0, 2)?;
    let mut tape = EnvelopeTape::new(&params, 0);
    let draws = 200_000;
    let mut sleeps = 0;
    let mut jumps = [0u32; 4];
    for pos in 0..draws {
        match tape.get(pos) {
            Instruction::Sleep => sleeps += 1,
            Instruction::Jump(k) => jumps[k as usize] += 1,
        }
    }
    println!("sleep fraction {:.4} (expected {:.4})", sleeps as f64 / draws as f64, params.sleep_probability());
    for (k, c) in jumps.iter().enumerate() {
        println!("direction {k}: {:.4}", *c as f64 / draws as f64);
    }
    println!("first ten: {:?}", (0..10).map(|p| tape.get(p)).collect::<Vec<_>>());
    Ok(())
}
