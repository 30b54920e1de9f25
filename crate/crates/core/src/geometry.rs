//! Points of the triangle space: angle triples, cyclic identification and
//! the distance used for convergence tests.
//!
//! A triangle up to similarity is a triple of positive angles summing to
//! π. Rotating the triple describes the same triangle; reflecting it does
//! not, so mirror images stay distinct.
//!
//! [`ExteriorTriple`] keeps the *interior* complements of its exterior
//! angles. Orbits of the exterior map run into the corner where two
//! exterior angles approach π, and a double near π cannot resolve the
//! small remainder `π - a` once it falls below ~1e-12. Storing the
//! complements keeps those small quantities at full relative precision.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sums within this distance of their target are accepted unchanged.
pub const SUM_TOLERANCE: f64 = 1e-12;
/// Sums within this distance are rescaled onto the target; beyond it the
/// input is rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleKind {
    Interior,
    Exterior,
}

impl TripleKind {
    pub fn angle_sum(self) -> f64 {
        match self {
            TripleKind::Interior => PI,
            TripleKind::Exterior => 2.0 * PI,
        }
    }
}

/// Behaviour shared by interior and exterior triples.
pub trait AngleTriple {
    fn kind(&self) -> TripleKind;
    /// The three angles in their stored cyclic order.
    fn angles(&self) -> [f64; 3];
}

fn check_sum(angles: &mut [f64; 3], target: f64, what: &str) -> Result<()> {
    let sum: f64 = angles.iter().sum();
    let gap = (sum - target).abs();
    if gap > RENORMALIZE_TOLERANCE {
        return Err(Error::InvalidTriple(format!(
            "{what} angles sum to {sum}, expected {target}"
        )));
    }
    if gap > SUM_TOLERANCE {
        let scale = target / sum;
        for a in angles.iter_mut() {
            *a *= scale;
        }
    }
    Ok(())
}

fn argmax(v: &[f64; 3]) -> usize {
    let mut m = 0;
    for i in 1..3 {
        if v[i] > v[m] {
            m = i;
        }
    }
    m
}

/// Sines of interior angles. The largest angle may sit next to π, where
/// `sin` of the stored double is inaccurate, so its sine is taken from the
/// sum of the other two.
pub(crate) fn interior_sines(interior: &[f64; 3]) -> [f64; 3] {
    let m = argmax(interior);
    let mut s = [0.0; 3];
    for i in 0..3 {
        s[i] = if i == m {
            (interior[(i + 1) % 3] + interior[(i + 2) % 3]).sin()
        } else {
            interior[i].sin()
        };
    }
    s
}

/// Interior angles `(α, β, γ)` of a triangle, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorTriple {
    angles: [f64; 3],
}

impl InteriorTriple {
    pub fn new(angles: [f64; 3]) -> Result<Self> {
        let mut angles = angles;
        for &a in &angles {
            if !a.is_finite() || a <= 0.0 || a >= PI {
                return Err(Error::InvalidTriple(format!(
                    "interior angle {a} outside (0, π)"
                )));
            }
        }
        check_sum(&mut angles, PI, "interior")?;
        Ok(Self { angles })
    }

    /// Builds a triple from values already known to satisfy the invariants
    /// up to rounding (outputs of the maps).
    pub(crate) fn from_raw(angles: [f64; 3]) -> Self {
        Self { angles }
    }

    pub fn equilateral() -> Self {
        Self {
            angles: [PI / 3.0; 3],
        }
    }

    pub fn rotated(&self, k: usize) -> Self {
        let a = self.angles;
        Self {
            angles: [a[k % 3], a[(k + 1) % 3], a[(k + 2) % 3]],
        }
    }

    pub fn sines(&self) -> [f64; 3] {
        interior_sines(&self.angles)
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_angle(&self) -> f64 {
        self.angles
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Opposite exterior angles `π - α` etc. The conversion is lossless.
    pub fn to_exterior(&self) -> ExteriorTriple {
        ExteriorTriple {
            interior: self.angles,
        }
    }
}

impl AngleTriple for InteriorTriple {
    fn kind(&self) -> TripleKind {
        TripleKind::Interior
    }

    fn angles(&self) -> [f64; 3] {
        self.angles
    }
}

/// Exterior angles `(a, b, c)` of a triangle: each in (0, π), summing to 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExteriorTriple {
    interior: [f64; 3],
}

impl ExteriorTriple {
    pub fn new(angles: [f64; 3]) -> Result<Self> {
        for &a in &angles {
            if !a.is_finite() || a <= 0.0 || a >= PI {
                return Err(Error::InvalidTriple(format!(
                    "exterior angle {a} outside (0, π)"
                )));
            }
        }
        let sum: f64 = angles.iter().sum();
        if (sum - 2.0 * PI).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::InvalidTriple(format!(
                "exterior angles sum to {sum}, expected 2π"
            )));
        }
        let mut interior = [PI - angles[0], PI - angles[1], PI - angles[2]];
        check_sum(&mut interior, PI, "exterior")?;
        if interior.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidTriple(
                "exterior angle rounds to π".to_string(),
            ));
        }
        Ok(Self { interior })
    }

    pub fn equilateral() -> Self {
        InteriorTriple::equilateral().to_exterior()
    }

    pub(crate) fn from_interior_raw(interior: [f64; 3]) -> Self {
        Self { interior }
    }

    pub fn rotated(&self, k: usize) -> Self {
        let a = self.interior;
        Self {
            interior: [a[k % 3], a[(k + 1) % 3], a[(k + 2) % 3]],
        }
    }

    /// Interior angles opposite each exterior angle.
    pub fn interior_angles(&self) -> [f64; 3] {
        self.interior
    }

    pub fn to_interior(&self) -> InteriorTriple {
        InteriorTriple::from_raw(self.interior)
    }

    pub fn sines(&self) -> [f64; 3] {
        interior_sines(&self.interior)
    }

    /// Smallest exterior angle, computed as the sum of the two smaller
    /// interior angles so it stays accurate as it tends to zero.
    pub fn least_angle(&self) -> f64 {
        let m = argmax(&self.interior);
        self.interior[(m + 1) % 3] + self.interior[(m + 2) % 3]
    }
}

impl AngleTriple for ExteriorTriple {
    fn kind(&self) -> TripleKind {
        TripleKind::Exterior
    }

    fn angles(&self) -> [f64; 3] {
        let m = argmax(&self.interior);
        let out: [f64; 3] = std::array::from_fn(|i| {
            if i == m {
                self.interior[(i + 1) % 3] + self.interior[(i + 2) % 3]
            } else {
                PI - self.interior[i]
            }
        });
        out
    }
}

/// A point of the quotient space: the lexicographically smallest cyclic
/// rotation of a valid triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTriple {
    representative: [f64; 3],
    kind: TripleKind,
}

impl CanonicalTriple {
    /// Validates `angles` as a triple of the given kind and canonicalizes it.
    pub fn new(angles: [f64; 3], kind: TripleKind) -> Result<Self> {
        Ok(match kind {
            TripleKind::Interior => normalize_cyclic(&InteriorTriple::new(angles)?),
            TripleKind::Exterior => normalize_cyclic(&ExteriorTriple::new(angles)?),
        })
    }

    pub fn representative(&self) -> [f64; 3] {
        self.representative
    }

    pub fn kind(&self) -> TripleKind {
        self.kind
    }
}

fn rotate(a: [f64; 3], k: usize) -> [f64; 3] {
    [a[k % 3], a[(k + 1) % 3], a[(k + 2) % 3]]
}

fn lex_less(x: &[f64; 3], y: &[f64; 3]) -> bool {
    for i in 0..3 {
        if x[i] < y[i] {
            return true;
        }
        if x[i] > y[i] {
            return false;
        }
    }
    false
}

pub fn normalize_cyclic<T: AngleTriple>(t: &T) -> CanonicalTriple {
    let a = t.angles();
    let mut best = a;
    for k in 1..3 {
        let r = rotate(a, k);
        if lex_less(&r, &best) {
            best = r;
        }
    }
    CanonicalTriple {
        representative: best,
        kind: t.kind(),
    }
}

pub fn interior_to_exterior(t: &InteriorTriple) -> ExteriorTriple {
    t.to_exterior()
}

pub fn exterior_to_interior(t: &ExteriorTriple) -> InteriorTriple {
    t.to_interior()
}

fn euclid(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance between aligned components.
pub fn aligned_distance(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    euclid(x, y)
}

/// Distance on the quotient space: the minimum over the cyclic rotations of
/// `t2` of the Euclidean distance to `t1`.
pub fn quotient_distance(t1: &CanonicalTriple, t2: &CanonicalTriple) -> Result<f64> {
    if t1.kind != t2.kind {
        return Err(Error::KindMismatch);
    }
    let d = (0..3)
        .map(|k| euclid(&t1.representative, &rotate(t2.representative, k)))
        .fold(f64::INFINITY, f64::min);
    Ok(d)
}

/// Edge lengths opposite each angle, measured on an explicit construction.
///
/// The vertices are placed on the unit circle so that the arc cut off by
/// each edge has central angle twice the opposite inscribed angle; the
/// chords are measured and rescaled to the requested perimeter.
pub fn edges_by_construction(t: &InteriorTriple, perimeter: f64) -> Result<[f64; 3]> {
    if !(perimeter > 0.0) || !perimeter.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "perimeter must be positive, got {perimeter}"
        )));
    }
    let [alpha, _, gamma] = t.angles();
    if t.sines().iter().any(|&s| s < 1e-12) {
        return Err(Error::DegenerateInput(
            "angle too close to 0 or π for a chord construction".to_string(),
        ));
    }
    // A at arc position 0; the arc AB (opposite C) spans 2γ, BC spans 2α.
    let theta = [0.0, 2.0 * gamma, 2.0 * gamma + 2.0 * alpha];
    let vertex = |th: f64| (th.cos(), th.sin());
    let (a, b, c) = (vertex(theta[0]), vertex(theta[1]), vertex(theta[2]));
    let chord = |p: (f64, f64), q: (f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
    let edges = [chord(b, c), chord(c, a), chord(a, b)];
    let total: f64 = edges.iter().sum();
    Ok(edges.map(|e| e * perimeter / total))
}
