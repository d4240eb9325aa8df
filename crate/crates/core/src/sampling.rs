//! Deterministic rational sample points in a coordinate box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rational;
use crate::error::{Error, Result};

pub type Point = Vec<Rational>;

/// Fraction of sample points that must be usable.
pub const MIN_USABLE_FRACTION: f64 = 0.8;

/// Grid resolution of sampled coordinates.
const GRID: i64 = 1000;

/// Closed axis-aligned box `[lo_k, hi_k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBox {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl SampleBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension("box bounds have different lengths".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Dimension("box lower bound exceeds upper bound".into()));
        }
        Ok(SampleBox { lo, hi })
    }

    /// `[−r, r]^n`.
    pub fn cube(n: usize, r: Rational) -> Self {
        SampleBox { lo: vec![-r.clone(); n], hi: vec![r; n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn contains_f64(&self, p: &[f64]) -> bool {
        use crate::algebra::poly::rational_to_f64;
        p.iter().enumerate().all(|(k, &v)| v >= rational_to_f64(&self.lo[k]) && v <= rational_to_f64(&self.hi[k]))
    }

    /// `count` points with coordinates `lo + (hi − lo)·k/1000`, `k` drawn from a seeded ChaCha stream.
    pub fn points(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                (0..self.dim())
                    .map(|c| {
                        let k: i64 = rng.gen_range(0..=GRID);
                        &self.lo[c] + (&self.hi[c] - &self.lo[c]) * Rational::new(k.into(), GRID.into())
                    })
                    .collect()
            })
            .collect()
    }
}

/// Keeps the points accepted by `usable`, failing when fewer than 80% survive.
pub fn filter_usable<F: Fn(&Point) -> bool>(points: &[Point], usable: F) -> Result<Vec<Point>> {
    let kept: Vec<Point> = points.iter().filter(|p| usable(p)).cloned().collect();
    let skipped = points.len() - kept.len();
    if skipped > 0 {
        log::info!("skipped {skipped} of {} degenerate sample points", points.len());
    }
    if (kept.len() as f64) < MIN_USABLE_FRACTION * points.len() as f64 || kept.is_empty() {
        return Err(Error::TooFewPoints { usable: kept.len(), total: points.len() });
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn points_are_reproducible_and_inside() {
        let b = SampleBox::cube(3, rat(1, 2));
        let p = b.points(20, 7);
        assert_eq!(p, b.points(20, 7));
        assert_ne!(p, b.points(20, 8));
        for q in &p {
            assert!(q.iter().all(|c| c >= &rat(-1, 2) && c <= &rat(1, 2)));
        }
    }

    #[test]
    fn too_many_degenerate_points_fail() {
        let b = SampleBox::cube(1, rat(1, 1));
        let p = b.points(10, 1);
        assert!(filter_usable(&p, |_| true).is_ok());
        assert!(matches!(filter_usable(&p, |_| false), Err(Error::TooFewPoints { usable: 0, total: 10 })));
    }
}
