//! Potential theory of simple random walk killed on leaving a ball.
//!
//! Three independent linear solves:
//! - `h(x) = P_x[τ_0 < τ_M]`: harmonic off the origin, `h(0) = 1`, zero outside;
//! - `E_x[τ_M]`: `u = 1 + mean of neighbors`, zero outside;
//! - `G_M(0, ·)`: expected visits to each site before exit, from the origin,
//!   counting time zero.
//!
//! The identities `h = G_M(0, ·) / G_M(0, 0)` and `Σ_x G_M(0, x) = E_0[τ_M]`
//! are checked across these solves rather than used to derive one from another.

mod solver;

use std::io::Write;

pub use solver::{Method, CG_TOLERANCE};
use solver::Operator;

use crate::error::{Error, Result};
use crate::io::float17;
use crate::lattice::Ball;

/// Absolute tolerance on probabilities.
pub const PROB_TOL: f64 = 1e-8;
/// Relative tolerance on expected times and visit counts.
pub const TIME_REL_TOL: f64 = 1e-8;

pub fn solve_hitting(ball: &Ball) -> Result<Vec<f64>> {
    solve_hitting_with(ball, Method::Auto)
}

pub fn solve_hitting_with(ball: &Ball, method: Method) -> Result<Vec<f64>> {
    let origin = ball.origin();
    let mut keep = vec![true; ball.len()];
    keep[origin] = false;
    let op = Operator::new(ball, &keep);
    // each unknown adjacent to the origin picks up the boundary value 1
    let rhs: Vec<f64> = (0..ball.len())
        .filter(|&s| s != origin)
        .map(|s| ball.neighbor_row(s).iter().filter(|&&n| n as usize == origin).count() as f64)
        .collect();
    let sol = if op.is_empty() { Vec::new() } else { op.prepare(method)?.solve(&rhs)? };
    let mut h = Vec::with_capacity(ball.len());
    let mut it = sol.into_iter();
    for s in 0..ball.len() {
        h.push(if s == origin { 1.0 } else { it.next().expect("one value per unknown") });
    }
    Ok(h)
}

pub fn solve_exit_time(ball: &Ball) -> Result<Vec<f64>> {
    let op = Operator::new(ball, &vec![true; ball.len()]);
    let rhs = vec![ball.degree() as f64; ball.len()];
    op.prepare(Method::Auto)?.solve(&rhs)
}

/// `(G_M(0, ·), G_M(0, 0))`.
pub fn green_row(ball: &Ball) -> Result<(Vec<f64>, f64)> {
    let op = Operator::new(ball, &vec![true; ball.len()]);
    let mut rhs = vec![0.0; ball.len()];
    rhs[ball.origin()] = ball.degree() as f64;
    let g = op.prepare(Method::Auto)?.solve(&rhs)?;
    let g00 = g[ball.origin()];
    Ok((g, g00))
}

/// Exact killed-walk quantities on one ball.
#[derive(Debug, Clone)]
pub struct GreenTable<'a> {
    pub ball: &'a Ball,
    pub h: Vec<f64>,
    pub g_row0: Vec<f64>,
    pub exit_time: Vec<f64>,
    pub g00: f64,
    pub method: Method,
}

impl<'a> GreenTable<'a> {
    pub fn compute(ball: &'a Ball) -> Result<Self> {
        Self::compute_with(ball, Method::Auto)
    }

    pub fn compute_with(ball: &'a Ball, method: Method) -> Result<Self> {
        let full = Operator::new(ball, &vec![true; ball.len()]);
        let prepared = full.prepare(method)?;
        let deg = ball.degree() as f64;
        let exit_time = prepared.solve(&vec![deg; ball.len()])?;
        let mut e0 = vec![0.0; ball.len()];
        e0[ball.origin()] = deg;
        let g_row0 = prepared.solve(&e0)?;
        let g00 = g_row0[ball.origin()];
        let h = solve_hitting_with(ball, method)?;
        Ok(GreenTable { ball, h, g_row0, exit_time, g00, method: prepared.method() })
    }

    pub fn exit_time_origin(&self) -> f64 {
        self.exit_time[self.ball.origin()]
    }

    pub fn sum_h(&self) -> f64 {
        self.h.iter().sum()
    }

    pub fn sum_g(&self) -> f64 {
        self.g_row0.iter().sum()
    }

    /// Largest `|h(x)·G(0,0) − G(0,x)|` relative to `G(0,0)`, i.e. the
    /// pointwise discrepancy in the hitting-probability scale.
    pub fn green_identity_error(&self) -> f64 {
        self.h
            .iter()
            .zip(&self.g_row0)
            .map(|(h, g)| (h - g / self.g00).abs())
            .fold(0.0, f64::max)
    }

    /// `|Σ_x G(0,x) − E_0[τ_M]| / E_0[τ_M]`.
    pub fn occupation_identity_error(&self) -> f64 {
        let t = self.exit_time_origin();
        (self.sum_g() - t).abs() / t
    }

    pub fn check_identities(&self) -> Result<()> {
        let e = self.green_identity_error();
        if e > PROB_TOL {
            return Err(Error::Inconsistent(format!("h != G(0,x)/G(0,0): error {e:e}")));
        }
        let e = self.occupation_identity_error();
        if e > TIME_REL_TOL {
            return Err(Error::Inconsistent(format!("sum G(0,x) != E_0[tau]: relative error {e:e}")));
        }
        Ok(())
    }

    /// Writes one row per site: coordinates, `h`, `G(0,x)`, `E_x[τ_M]`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (0..self.ball.dim()).map(|i| format!("x{i}")).collect();
        header.extend(["h", "g_row0", "exit_time"].map(String::from));
        out.write_record(&header)?;
        for (id, p) in self.ball.sites().iter().enumerate() {
            let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            row.push(float17(self.h[id]));
            row.push(float17(self.g_row0[id]));
            row.push(float17(self.exit_time[id]));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `E[L̂] = Σ_x h(x)`, cross-checked against `E_0[τ_M] / G_M(0,0)`.
pub fn elhat_exact(table: &GreenTable<'_>) -> Result<f64> {
    let sum = table.sum_h();
    let other = table.exit_time_origin() / table.g00;
    let rel = (sum - other).abs() / other;
    if rel > TIME_REL_TOL {
        return Err(Error::Inconsistent(format!(
            "sum h = {sum} but E_0[tau]/G(0,0) = {other} (relative error {rel:e})"
        )));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Norm;
    use crate::seed;
    use rand::Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn line_hitting_is_gamblers_ruin() {
        let b = Ball::new(1, 5, Norm::Sup).unwrap();
        let h = solve_hitting(&b).unwrap();
        for (id, p) in b.sites().iter().enumerate() {
            let x = p.coords()[0].abs() as f64;
            assert!((h[id] - (5.0 - x) / 5.0).abs() < 1e-12);
        }
        assert_eq!(h[b.origin()], 1.0);
    }

    #[test]
    fn line_exit_times() {
        let b = Ball::new(1, 3, Norm::Sup).unwrap();
        let t = solve_exit_time(&b).unwrap();
        for (got, want) in t.iter().zip([5.0, 8.0, 9.0, 8.0, 5.0]) {
            assert!(rel(*got, want) < 1e-12);
        }
        for m in [1u32, 2, 7, 30] {
            let b = Ball::new(1, m, Norm::Euclidean).unwrap();
            let t = solve_exit_time(&b).unwrap();
            assert!(rel(t[b.origin()], (m * m) as f64) < 1e-8);
        }
    }

    #[test]
    fn line_green_diagonal_is_radius() {
        for m in [1u32, 3, 10, 40] {
            let (_, g00) = green_row(&Ball::new(1, m, Norm::Sup).unwrap()).unwrap();
            assert!(rel(g00, m as f64) < 1e-8);
        }
    }

    #[test]
    fn green_diagonal_smaller_in_higher_dimensions() {
        for d in [2, 3] {
            for m in [2u32, 4, 7] {
                let (_, g00) = green_row(&Ball::new(d, m, Norm::Euclidean).unwrap()).unwrap();
                assert!(g00 < m as f64, "d={d} M={m} g00={g00}");
            }
        }
    }

    #[test]
    fn identities_hold_across_solvers() {
        for (d, m) in [(1, 12), (2, 9), (3, 4)] {
            let b = Ball::new(d, m, Norm::Euclidean).unwrap();
            for method in [Method::Direct, Method::Iterative] {
                let t = GreenTable::compute_with(&b, method).unwrap();
                t.check_identities().unwrap();
                let e = elhat_exact(&t).unwrap();
                assert!(e >= m as f64 - 1e-9);
                assert!(t.h.iter().all(|&h| (-PROB_TOL..=1.0 + PROB_TOL).contains(&h)));
            }
        }
    }

    #[test]
    fn elhat_closed_forms() {
        let b = Ball::new(1, 10, Norm::Sup).unwrap();
        let t = GreenTable::compute(&b).unwrap();
        // Σ_{|x|<10} (10 − |x|)/10 = 10
        let oracle: f64 = (-9i32..=9).map(|x| (10 - x.abs()) as f64 / 10.0).sum();
        assert!(rel(elhat_exact(&t).unwrap(), oracle) < 1e-12);
        assert!(rel(oracle, 10.0) < 1e-12);
        let one = Ball::new(1, 1, Norm::Sup).unwrap();
        assert_eq!(elhat_exact(&GreenTable::compute(&one).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn elhat_rejects_inconsistent_table() {
        let b = Ball::new(2, 4, Norm::Euclidean).unwrap();
        let mut t = GreenTable::compute(&b).unwrap();
        t.h[0] += 1e-3;
        assert!(matches!(elhat_exact(&t), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn hitting_matches_monte_carlo_in_plane() {
        let b = Ball::new(2, 6, Norm::Euclidean).unwrap();
        let h = solve_hitting(&b).unwrap();
        let mut rng = seed::stream_rng(31, 0);
        let spots = [[1, 0], [2, 1], [0, -3], [3, 3], [-4, 2]];
        let walks = 100_000;
        for s in spots {
            let id = b.id(&crate::Point::new(s.to_vec())).unwrap();
            let mut hits = 0u32;
            for _ in 0..walks {
                let mut at = id;
                loop {
                    if at == b.origin() {
                        hits += 1;
                        break;
                    }
                    match b.neighbor(at, rng.random_range(0..4)) {
                        Some(n) => at = n,
                        None => break,
                    }
                }
            }
            let p = hits as f64 / walks as f64;
            let se = (h[id] * (1.0 - h[id]) / walks as f64).sqrt();
            assert!((p - h[id]).abs() < 3.0 * se, "site {s:?}: mc {p} exact {}", h[id]);
        }
    }

    #[test]
    fn hitting_decreases_along_axes() {
        for d in [1usize, 2] {
            let b = Ball::new(d, 8, Norm::Euclidean).unwrap();
            let h = solve_hitting(&b).unwrap();
            let mut prev = 1.0;
            for k in 1..8 {
                let mut c = vec![0; d];
                c[0] = k;
                let v = h[b.id(&crate::Point::new(c)).unwrap()];
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn csv_has_one_row_per_site() {
        let b = Ball::new(2, 3, Norm::Euclidean).unwrap();
        let t = GreenTable::compute(&b).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x0,x1,h,g_row0,exit_time");
        assert_eq!(lines.count(), b.len());
    }
}
