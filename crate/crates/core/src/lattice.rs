//! Balls of `Z^d` with dense site indexing.
//!
//! A [`Ball`] is the strict interior `{x : ||x|| < M}`. Its sites are kept in
//! lexicographic order and every other module addresses them by their dense
//! id, so per-site state lives in flat vectors. The exit time `τ_M` used by
//! the walks is the first time a walk leaves this set.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Marker in the neighbor table for a neighbor outside the ball.
pub const OUTSIDE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(Vec<i32>);

impl Point {
    pub fn new(coords: Vec<i32>) -> Self {
        Point(coords)
    }

    pub fn origin(d: usize) -> Self {
        Point(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn negated(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|&c| (c as i64).abs()).max().unwrap_or(0)
    }

    /// The neighbor in direction `dir`: coordinate `dir / 2`, minus when `dir`
    /// is even and plus when odd.
    pub fn step(&self, dir: usize) -> Point {
        let mut c = self.0.clone();
        c[dir / 2] += if dir.is_multiple_of(2) { -1 } else { 1 };
        Point(c)
    }

    /// All `2d` nearest neighbors, coordinate index ascending, minus before plus.
    pub fn neighbors(&self) -> Vec<Point> {
        (0..2 * self.dim()).map(|dir| self.step(dir)).collect()
    }

    /// Comma separated coordinates, used as a key in exported files.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl From<Vec<i32>> for Point {
    fn from(v: Vec<i32>) -> Self {
        Point(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Euclidean,
    Sup,
}

impl Norm {
    fn inside(self, p: &Point, radius: u32) -> bool {
        let m = radius as i64;
        match self {
            Norm::Euclidean => p.norm_sq() < m * m,
            Norm::Sup => p.sup_norm() < m,
        }
    }
}

fn advance(cur: &mut [i32], r: i32) -> bool {
    for c in cur.iter_mut().rev() {
        if *c < r {
            *c += 1;
            return true;
        }
        *c = -r;
    }
    false
}

#[derive(Debug, Clone)]
pub struct Ball {
    dim: usize,
    radius: u32,
    norm: Norm,
    sites: Vec<Point>,
    index: HashMap<Point, usize>,
    // neighbors[site * 2d + dir], OUTSIDE when the neighbor is not a site
    neighbors: Vec<u32>,
    origin: usize,
}

impl Ball {
    /// Builds `{x ∈ Z^d : ||x|| < radius}`.
    pub fn new(dim: usize, radius: u32, norm: Norm) -> Result<Ball> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        if radius < 1 {
            return Err(Error::InvalidRadius(radius as i64));
        }
        let r = radius as i32 - 1;
        let mut sites = Vec::new();
        let mut cur = vec![-r; dim];
        // lexicographic sweep of the bounding box [-r, r]^d
        loop {
            let p = Point(cur.clone());
            if norm.inside(&p, radius) {
                sites.push(p);
            }
            if !advance(&mut cur, r) {
                break;
            }
        }

        let index: HashMap<Point, usize> =
            sites.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let degree = 2 * dim;
        let mut neighbors = Vec::with_capacity(sites.len() * degree);
        for p in &sites {
            for dir in 0..degree {
                let q = p.step(dir);
                neighbors.push(index.get(&q).map_or(OUTSIDE, |&i| i as u32));
            }
        }
        let origin = index[&Point::origin(dim)];
        Ok(Ball { dim, radius, norm, sites, index, neighbors, origin })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn degree(&self) -> usize {
        2 * self.dim
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn site(&self, id: usize) -> &Point {
        &self.sites[id]
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Dense id of `p`, or `None` when `p` is outside (or of another dimension).
    pub fn id(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok(self.index.contains_key(p))
    }

    /// Neighbor of `site` in direction `dir`, `None` when it lies outside.
    #[inline]
    pub fn neighbor(&self, site: usize, dir: usize) -> Option<usize> {
        let n = self.neighbors[site * 2 * self.dim + dir];
        (n != OUTSIDE).then_some(n as usize)
    }

    /// Raw neighbor row of `site`; entries equal to [`OUTSIDE`] leave the ball.
    #[inline]
    pub fn neighbor_row(&self, site: usize) -> &[u32] {
        let deg = 2 * self.dim;
        &self.neighbors[site * deg..(site + 1) * deg]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i32]]) -> Vec<Point> {
        v.iter().map(|c| Point::new(c.to_vec())).collect()
    }

    #[test]
    fn interval_interior() {
        let b = Ball::new(1, 3, Norm::Sup).unwrap();
        assert_eq!(b.sites(), pts(&[&[-2], &[-1], &[0], &[1], &[2]]).as_slice());
        assert_eq!(b.origin(), 2);
    }

    #[test]
    fn unit_euclidean_ball_is_origin() {
        let b = Ball::new(2, 1, Norm::Euclidean).unwrap();
        assert_eq!(b.sites(), pts(&[&[0, 0]]).as_slice());
    }

    #[test]
    fn disc_matches_enumeration() {
        let mut expected = 0;
        for x in -3i32..=3 {
            for y in -3i32..=3 {
                if x * x + y * y < 9 {
                    expected += 1;
                }
            }
        }
        let b = Ball::new(2, 3, Norm::Euclidean).unwrap();
        assert_eq!(b.len(), expected);
        assert_eq!(expected, 25);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(Ball::new(0, 3, Norm::Sup), Err(Error::InvalidDimension(0))));
        assert!(matches!(Ball::new(2, 0, Norm::Sup), Err(Error::InvalidRadius(0))));
    }

    #[test]
    fn neighbor_order() {
        assert_eq!(Point::new(vec![0]).neighbors(), pts(&[&[-1], &[1]]));
        assert_eq!(
            Point::new(vec![0, 0]).neighbors(),
            pts(&[&[-1, 0], &[1, 0], &[0, -1], &[0, 1]])
        );
        let p = Point::new(vec![1, 1, 1]);
        let ns = p.neighbors();
        assert_eq!(ns.len(), 6);
        for q in ns {
            let l1: i32 = q.coords().iter().zip(p.coords()).map(|(a, b)| (a - b).abs()).sum();
            assert_eq!(l1, 1);
        }
    }

    #[test]
    fn membership() {
        let b = Ball::new(1, 3, Norm::Sup).unwrap();
        assert!(b.contains(&Point::new(vec![2])).unwrap());
        assert!(!b.contains(&Point::new(vec![3])).unwrap());
        let disc = Ball::new(2, 3, Norm::Euclidean).unwrap();
        assert!(disc.contains(&Point::new(vec![2, 2])).unwrap());
        assert!(matches!(
            disc.contains(&Point::new(vec![0])),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn neighbor_table_agrees_with_points() {
        let b = Ball::new(2, 4, Norm::Euclidean).unwrap();
        for id in 0..b.len() {
            for dir in 0..4 {
                let q = b.site(id).step(dir);
                assert_eq!(b.neighbor(id, dir), b.id(&q));
            }
        }
    }

    #[test]
    fn lines_have_2m_minus_1_sites() {
        for m in 1..30 {
            for norm in [Norm::Sup, Norm::Euclidean] {
                assert_eq!(Ball::new(1, m, norm).unwrap().len(), 2 * m as usize - 1);
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symmetric_sorted_and_indexed(d in 1usize..4, m in 1u32..7, sup in any::<bool>()) {
                let norm = if sup { Norm::Sup } else { Norm::Euclidean };
                let b = Ball::new(d, m, norm).unwrap();
                prop_assert!(b.contains(&Point::origin(d)).unwrap());
                for (i, p) in b.sites().iter().enumerate() {
                    prop_assert_eq!(b.id(p), Some(i));
                    prop_assert!(b.contains(&p.negated()).unwrap());
                }
                prop_assert!(b.sites().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
