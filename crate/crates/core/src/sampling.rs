//! Portable seeded sampling.
//!
//! The generator is the 64-bit linear congruential generator
//! `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
//! A uniform double in `[0, 1)` is the top 53 bits of the *updated* state
//! divided by 2^53. The state is initialised to the seed itself. Any
//! implementation following these three rules draws identical samples.

use std::f64::consts::PI;

use crate::geometry::{AngleTriple, ExteriorTriple, InteriorTriple};

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point of the open simplex `{x + y + z = 1, x, y, z > margin}`,
    /// by folding the unit square onto the lower triangle and rejecting
    /// points inside the margin.
    pub fn simplex_point(&mut self, margin: f64) -> [f64; 3] {
        loop {
            let (mut u, mut v) = (self.next_f64(), self.next_f64());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            let w = 1.0 - u - v;
            if u > margin && v > margin && w > margin {
                return [u, v, w];
            }
        }
    }

    /// Uniformly distributed interior triple; every angle exceeds `margin`.
    pub fn interior_triple(&mut self, margin: f64) -> InteriorTriple {
        loop {
            let p = self.simplex_point(margin / PI).map(|x| x * PI);
            if let Ok(t) = InteriorTriple::new(p) {
                return t;
            }
        }
    }

    /// Exterior triple uniform on the medial triangle, at least
    /// `min_distance` (Euclidean) from the symmetric point, with every
    /// interior complement above `margin`.
    pub fn exterior_triple(&mut self, margin: f64, min_distance: f64) -> ExteriorTriple {
        loop {
            let e = self.interior_triple(margin).to_exterior();
            let d: f64 = e
                .angles()
                .iter()
                .map(|a| (a - 2.0 * PI / 3.0).powi(2))
                .sum::<f64>()
                .sqrt();
            if d >= min_distance {
                return e;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_outputs_are_pinned() {
        let mut g = Lcg64::new(0);
        assert_eq!(g.next_u64(), LCG_INCREMENT);
        assert_eq!(
            g.next_u64(),
            LCG_INCREMENT
                .wrapping_mul(LCG_MULTIPLIER)
                .wrapping_add(LCG_INCREMENT)
        );
        let mut h = Lcg64::new(42);
        let x = h.next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = Lcg64::new(7);
        let mut b = Lcg64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_f64().to_bits(), b.next_f64().to_bits());
        }
    }

    #[test]
    fn samples_respect_constraints() {
        let mut g = Lcg64::new(1);
        for _ in 0..500 {
            let t = g.interior_triple(1e-6);
            assert!(t.min_angle() > 1e-6);
            let e = g.exterior_triple(1e-6, 0.05);
            let d: f64 = e
                .angles()
                .iter()
                .map(|a| (a - 2.0 * PI / 3.0).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(d >= 0.05);
        }
    }
}
