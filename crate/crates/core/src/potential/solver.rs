//! Linear solves with the killed-walk operator `K = 2d·I − A` restricted to a
//! subset of ball sites, `A` being the adjacency matrix. `K` is symmetric
//! positive definite, so a banded Cholesky factorization is exact at desk
//! scale and conjugate gradients take over on large balls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Ball, OUTSIDE};

/// Above this many flops (`n·b²`) the direct factorization is skipped.
const DIRECT_FLOP_LIMIT: f64 = 4.0e8;
/// Relative residual at which conjugate gradients stop.
pub const CG_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Iterative,
}

/// `K` on a subset of sites, in ball (lexicographic) order.
pub struct Operator {
    degree: usize,
    // neighbor table in unknown indices, OUTSIDE for eliminated neighbors
    nbr: Vec<u32>,
    bandwidth: usize,
}

impl Operator {
    /// `keep[site]` selects the unknowns; the others act as zero boundary.
    pub fn new(ball: &Ball, keep: &[bool]) -> Self {
        let mut unknown = vec![OUTSIDE; ball.len()];
        let mut count = 0u32;
        for (site, &k) in keep.iter().enumerate() {
            if k {
                unknown[site] = count;
                count += 1;
            }
        }
        let degree = ball.degree();
        let mut nbr = Vec::with_capacity(count as usize * degree);
        let mut bandwidth = 0;
        for site in (0..ball.len()).filter(|&s| keep[s]) {
            let i = unknown[site] as usize;
            for &n in ball.neighbor_row(site) {
                let j = if n == OUTSIDE { OUTSIDE } else { unknown[n as usize] };
                if j != OUTSIDE {
                    bandwidth = bandwidth.max(i.abs_diff(j as usize));
                }
                nbr.push(j);
            }
        }
        Operator { degree, nbr, bandwidth }
    }

    pub fn len(&self) -> usize {
        self.nbr.len() / self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.nbr.is_empty()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let diag = self.degree as f64;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = diag * x[i];
            for &j in &self.nbr[i * self.degree..(i + 1) * self.degree] {
                if j != OUTSIDE {
                    s -= x[j as usize];
                }
            }
            *yi = s;
        }
    }

    fn direct_is_cheap(&self) -> bool {
        let b = self.bandwidth as f64;
        self.len() as f64 * b * b <= DIRECT_FLOP_LIMIT
    }

    pub fn prepare(&self, method: Method) -> Result<Prepared<'_>> {
        let direct = match method {
            Method::Direct => true,
            Method::Iterative => false,
            Method::Auto => self.direct_is_cheap(),
        };
        if direct {
            Ok(Prepared::Direct(BandCholesky::factor(self)?))
        } else {
            Ok(Prepared::Iterative(self))
        }
    }
}

pub enum Prepared<'a> {
    Direct(BandCholesky),
    Iterative(&'a Operator),
}

impl Prepared<'_> {
    pub fn method(&self) -> Method {
        match self {
            Prepared::Direct(_) => Method::Direct,
            Prepared::Iterative(_) => Method::Iterative,
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Prepared::Direct(f) => Ok(f.solve(rhs)),
            Prepared::Iterative(op) => conjugate_gradient(op, rhs),
        }
    }
}

/// Lower-triangular band factor, row `i` holding `L[i][i-b..=i]`.
pub struct BandCholesky {
    n: usize,
    b: usize,
    band: Vec<f64>,
}

impl BandCholesky {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.band[i * (self.b + 1) + (self.b + j - i)]
    }

    fn factor(op: &Operator) -> Result<Self> {
        let n = op.len();
        let b = op.bandwidth;
        let w = b + 1;
        // row i, column j stored at i*w + (b + j - i) so rows read left to right
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            band[i * w + b] = op.degree as f64;
            for &j in &op.nbr[i * op.degree..(i + 1) * op.degree] {
                if j != OUTSIDE && (j as usize) < i {
                    band[i * w + b + j as usize - i] = -1.0;
                }
            }
        }
        for j in 0..n {
            let lo_j = j.saturating_sub(b);
            let row_j = j * w + b - j;
            let mut d = band[row_j + j];
            for k in lo_j..j {
                d -= band[row_j + k] * band[row_j + k];
            }
            if d <= 0.0 {
                return Err(Error::Inconsistent(format!("operator not positive definite at row {j}")));
            }
            let d = d.sqrt();
            band[row_j + j] = d;
            for i in j + 1..(j + w).min(n) {
                let lo = i.saturating_sub(b);
                let row_i = i * w + b - i;
                let mut s = band[row_i + j];
                for k in lo..j {
                    s -= band[row_i + k] * band[row_j + k];
                }
                band[row_i + j] = s / d;
            }
        }
        Ok(BandCholesky { n, b, band })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(self.b)..i {
                s -= self.at(i, k) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.b + 1).min(n) {
                s -= self.at(k, i) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        y
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn conjugate_gradient(op: &Operator, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = op.len();
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut q = vec![0.0; n];
    let target = CG_TOLERANCE * dot(rhs, rhs).sqrt();
    let mut rr = dot(&r, &r);
    let max_iter = 20 * n + 100;
    for _ in 0..max_iter {
        if rr.sqrt() <= target {
            return Ok(x);
        }
        op.apply(&p, &mut q);
        let alpha = rr / dot(&p, &q);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: rr.sqrt() / target * CG_TOLERANCE })
}

/// Residual `||K x − rhs||∞`.
#[cfg(test)]
fn residual(op: &Operator, x: &[f64], rhs: &[f64]) -> f64 {
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    y.iter().zip(rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Norm;

    #[test]
    fn direct_and_iterative_agree() {
        for (d, m) in [(1, 9), (2, 7), (3, 4)] {
            let ball = Ball::new(d, m, Norm::Euclidean).unwrap();
            let mut keep = vec![true; ball.len()];
            keep[ball.origin()] = false;
            let op = Operator::new(&ball, &keep);
            let rhs: Vec<f64> = (0..op.len()).map(|i| 1.0 + (i % 5) as f64).collect();
            let a = op.prepare(Method::Direct).unwrap().solve(&rhs).unwrap();
            let b = op.prepare(Method::Iterative).unwrap().solve(&rhs).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
            }
            assert!(residual(&op, &a, &rhs) < 1e-9);
        }
    }

    #[test]
    fn line_bandwidth_is_one() {
        let ball = Ball::new(1, 20, Norm::Sup).unwrap();
        let op = Operator::new(&ball, &vec![true; ball.len()]);
        assert_eq!(op.bandwidth, 1);
        assert_eq!(op.prepare(Method::Auto).unwrap().method(), Method::Direct);
    }
}
