//! Barycentric picture of the exterior map.
//!
//! Exterior triples `(a, b, c)` with `a + b + c = 2π` are barycentric
//! coordinates on an equilateral triangle; the constraint `a, b, c < π`
//! cuts out its medial triangle `A₁B₁C₁`. The exterior map permutes the six
//! sub-triangles around the centre `O` by reversing coordinate order.
//!
//! On the level segments `{a = t}` the midpoint `(t, π - t/2, π - t/2)` is
//! carried by two steps of the map to a point whose first coordinate is
//! `GG(t)`. `GG(t) < t` is what drives every orbit to the boundary.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AngleTriple, ExteriorTriple, RENORMALIZE_TOLERANCE, SUM_TOLERANCE};
use crate::maps::map_g;

pub const TWO_PI_3: f64 = 2.0 * PI / 3.0;
/// Requested curve endpoints this close outside a closed domain bound are
/// moved onto the bound.
pub const ENDPOINT_SNAP: f64 = 1e-4;
/// Offsets towards the segment end used to extrapolate the arc endpoint.
pub const EXTRAPOLATION_OFFSETS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaryPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BaryPoint {
    /// A point of the closed medial triangle.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let coords = [a, b, c];
        if coords
            .iter()
            .any(|&x| !(-SUM_TOLERANCE..=PI + SUM_TOLERANCE).contains(&x))
        {
            return Err(Error::OutOfRange(format!(
                "({a}, {b}, {c}) outside the medial triangle"
            )));
        }
        let sum = a + b + c;
        let gap = (sum - 2.0 * PI).abs();
        if gap > RENORMALIZE_TOLERANCE {
            return Err(Error::OutOfRange(format!(
                "coordinates sum to {sum}, not 2π"
            )));
        }
        let k = if gap > SUM_TOLERANCE {
            2.0 * PI / sum
        } else {
            1.0
        };
        Ok(Self {
            a: a * k,
            b: b * k,
            c: c * k,
        })
    }

    const fn raw(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn to_exterior(&self) -> Result<ExteriorTriple> {
        ExteriorTriple::new(self.coords())
    }

    pub fn from_exterior(t: &ExteriorTriple) -> Self {
        let [a, b, c] = t.angles();
        Self::raw(a, b, c)
    }
}

pub mod vertices {
    use super::*;

    pub const A1: BaryPoint = BaryPoint::raw(0.0, PI, PI);
    pub const B1: BaryPoint = BaryPoint::raw(PI, 0.0, PI);
    pub const C1: BaryPoint = BaryPoint::raw(PI, PI, 0.0);
    pub const A2: BaryPoint = BaryPoint::raw(PI, FRAC_PI_2, FRAC_PI_2);
    pub const B2: BaryPoint = BaryPoint::raw(FRAC_PI_2, PI, FRAC_PI_2);
    pub const C2: BaryPoint = BaryPoint::raw(FRAC_PI_2, FRAC_PI_2, PI);
    pub const O: BaryPoint = BaryPoint::raw(TWO_PI_3, TWO_PI_3, TWO_PI_3);
}

/// One of the six sub-triangles around `O`, identified by the order of the
/// coordinates inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    /// Coordinate indices from smallest to largest.
    ascending: [usize; 3],
}

impl Region {
    pub fn all() -> [Region; 6] {
        [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .map(|ascending| Region { ascending })
    }

    pub fn ascending(&self) -> [usize; 3] {
        self.ascending
    }

    /// Name of the sub-triangle, e.g. `A1OC2` for `a < b < c`.
    ///
    /// The vertex with index 1 belongs to the smallest coordinate (it is
    /// where that coordinate vanishes) and the one with index 2 to the
    /// largest.
    pub fn triangle_name(&self) -> String {
        const LETTERS: [char; 3] = ['A', 'B', 'C'];
        let low = (LETTERS[self.ascending[0]], '1');
        let high = (LETTERS[self.ascending[2]], '2');
        let (first, second) = if low.0 < high.0 {
            (low, high)
        } else {
            (high, low)
        };
        format!("{}{}O{}{}", first.0, first.1, second.0, second.1)
    }
}

pub fn region_of(p: &BaryPoint) -> Result<Region> {
    let c = p.coords();
    if c.iter().any(|&x| !(x > 0.0 && x < PI)) {
        return Err(Error::OutOfRange(format!("{c:?} not strictly inside")));
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if (c[i] - c[j]).abs() < 1e-12 {
            return Err(Error::OnBoundary(format!("{c:?}")));
        }
    }
    let mut ascending = [0, 1, 2];
    ascending.sort_by(|&i, &j| c[i].total_cmp(&c[j]));
    Ok(Region { ascending })
}

/// Region that the exterior map sends `r` onto: the reversed order.
pub fn region_image(r: Region) -> Region {
    let [x, y, z] = r.ascending;
    Region {
        ascending: [z, y, x],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentPoints {
    /// Level segment `I_t`, `0 < t ≤ π/2`: ends `D`, `E`, midpoint `F`.
    I {
        d: BaryPoint,
        e: BaryPoint,
        f: BaryPoint,
    },
    /// Level segment `J_t`, `π/2 < t < 2π/3`: ends `K`, `L`, midpoint `M`.
    J {
        k: BaryPoint,
        l: BaryPoint,
        m: BaryPoint,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImagePoints {
    /// `G = g(F)`.
    I { g: BaryPoint },
    /// `P = g(K)`, `Q = g(L)`, `N = g(M)`.
    J {
        p: BaryPoint,
        q: BaryPoint,
        n: BaryPoint,
    },
}

fn segment_branch_check(t: f64) -> Result<bool> {
    if t > 0.0 && t <= FRAC_PI_2 {
        Ok(true)
    } else if t > FRAC_PI_2 && t < TWO_PI_3 {
        Ok(false)
    } else {
        Err(Error::OutOfRange(format!("t = {t} outside (0, 2π/3)")))
    }
}

pub fn segment_points(t: f64) -> Result<SegmentPoints> {
    let mid = BaryPoint::raw(t, PI - 0.5 * t, PI - 0.5 * t);
    Ok(if segment_branch_check(t)? {
        SegmentPoints::I {
            d: BaryPoint::raw(t, PI - t, PI),
            e: BaryPoint::raw(t, PI, PI - t),
            f: mid,
        }
    } else {
        SegmentPoints::J {
            k: BaryPoint::raw(t, t, 2.0 * PI - 2.0 * t),
            l: BaryPoint::raw(t, 2.0 * PI - 2.0 * t, t),
            m: mid,
        }
    })
}

/// `s = π·cos(t/2) / (cos(t/2) + 1)`, half the first coordinate of `g(F)`.
fn half_image(t: f64) -> f64 {
    let c = (0.5 * t).cos();
    PI * c / (c + 1.0)
}

/// `cos(s)` written as `sin(π/2 - s)` with `π/2 - s = π·sin²(t/4) / (1 + cos(t/2))`,
/// which stays accurate (and exactly zero at `t = 0`) where `s` is near π/2.
fn cos_half_image(t: f64) -> f64 {
    let q = (0.25 * t).sin();
    (PI * q * q / (1.0 + (0.5 * t).cos())).sin()
}

pub fn image_points(t: f64) -> Result<ImagePoints> {
    let s = half_image(t);
    let mid = BaryPoint::raw(2.0 * s, PI - s, PI - s);
    Ok(if segment_branch_check(t)? {
        ImagePoints::I { g: mid }
    } else {
        let denom = 1.0 - t.cos();
        let big = PI / denom;
        let small = -2.0 * PI * t.cos() / denom;
        ImagePoints::J {
            p: BaryPoint::raw(big, big, small),
            q: BaryPoint::raw(big, small, big),
            n: mid,
        }
    })
}

fn check_gg_domain(t: f64) -> Result<()> {
    if (0.0..=TWO_PI_3).contains(&t) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("t = {t} outside [0, 2π/3]")))
    }
}

/// First coordinate of the double image of the segment midpoint:
/// `GG(t) = 2π·cos(s) / (cos(s) + 1)`.
pub fn gg(t: f64) -> Result<f64> {
    check_gg_domain(t)?;
    let cs = cos_half_image(t);
    Ok(2.0 * PI * cs / (cs + 1.0))
}

pub fn gg_derivative(t: f64) -> Result<f64> {
    check_gg_domain(t)?;
    let s = half_image(t);
    let c = (0.5 * t).cos();
    let ds = -FRAC_PI_2 * (0.5 * t).sin() / ((c + 1.0) * (c + 1.0));
    let cs = cos_half_image(t);
    Ok(-2.0 * PI * s.sin() * ds / ((cs + 1.0) * (cs + 1.0)))
}

/// `-π·(2 - cos s)·(1 - cos(t/2)) + sin(s)·(2 - cos(t/2))·(1 + cos(t/2))`,
/// the factor that fixes the sign of `GG''`.
pub fn convexity_bracket(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < TWO_PI_3) {
        return Err(Error::OutOfRange(format!("t = {t} outside (0, 2π/3)")));
    }
    let s = half_image(t);
    let c = (0.5 * t).cos();
    Ok(-PI * (2.0 - cos_half_image(t)) * (1.0 - c) + s.sin() * (2.0 - c) * (1.0 + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCurve {
    /// Image under `g∘g` of the end `D` of `I_t`.
    U,
    /// Image under `g∘g` of the end `K` of `J_t`.
    X,
}

pub fn boundary_first_coordinate(curve: BoundaryCurve, t: f64) -> Result<f64> {
    match curve {
        BoundaryCurve::U => {
            if !(t > 0.0 && t <= FRAC_PI_2) {
                return Err(Error::OutOfRange(format!("U needs 0 < t ≤ π/2, got {t}")));
            }
            Ok(FRAC_PI_2 * (1.0 - t.cos()))
        }
        BoundaryCurve::X => {
            if !(t > FRAC_PI_2 && t <= TWO_PI_3) {
                return Err(Error::OutOfRange(format!(
                    "X needs π/2 < t ≤ 2π/3, got {t}"
                )));
            }
            Ok(PI / (1.0 - (PI / (1.0 - t.cos())).cos()))
        }
    }
}

/// First coordinate of `U` recovered numerically: `g∘g` is evaluated at
/// points of `I_t` approaching `D` and the values are Richardson-
/// extrapolated to the limit. `g(D)` itself is a boundary point where the
/// map is undefined.
pub fn u_first_by_extrapolation(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= FRAC_PI_2) {
        return Err(Error::OutOfRange(format!("U needs 0 < t ≤ π/2, got {t}")));
    }
    let along = |eps: f64| -> Result<f64> {
        let q = ExteriorTriple::new([t, PI - t + eps, PI - eps])?;
        Ok(map_g(&map_g(&q)?)?.angles()[0])
    };
    let [e0, e1, e2] = EXTRAPOLATION_OFFSETS;
    let (f0, f1, f2) = (along(e0)?, along(e1)?, along(e2)?);
    // Offsets halve each time: eliminate the O(ε) then the O(ε²) term.
    let r0 = 2.0 * f1 - f0;
    let r1 = 2.0 * f2 - f1;
    Ok((4.0 * r1 - r0) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveName {
    #[serde(rename = "GG")]
    Gg,
    #[serde(rename = "U_first")]
    UFirst,
    #[serde(rename = "W_first")]
    WFirst,
    #[serde(rename = "X_first")]
    XFirst,
    #[serde(rename = "Z_first")]
    ZFirst,
}

impl CurveName {
    pub fn label(&self) -> &'static str {
        match self {
            CurveName::Gg => "GG",
            CurveName::UFirst => "U_first",
            CurveName::WFirst => "W_first",
            CurveName::XFirst => "X_first",
            CurveName::ZFirst => "Z_first",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [
            CurveName::Gg,
            CurveName::UFirst,
            CurveName::WFirst,
            CurveName::XFirst,
            CurveName::ZFirst,
        ]
        .into_iter()
        .find(|c| c.label() == s)
    }

    /// `(lo, hi, lo_closed, hi_closed)`.
    pub fn domain(&self) -> (f64, f64, bool, bool) {
        match self {
            CurveName::Gg => (0.0, TWO_PI_3, true, true),
            CurveName::UFirst => (0.0, FRAC_PI_2, false, true),
            CurveName::WFirst => (0.0, FRAC_PI_2, true, true),
            CurveName::XFirst => (FRAC_PI_2, TWO_PI_3, false, true),
            CurveName::ZFirst => (FRAC_PI_2, TWO_PI_3, true, true),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi, lo_closed, hi_closed) = self.domain();
        let inside = (t > lo || (lo_closed && t == lo)) && (t < hi || (hi_closed && t == hi));
        if !inside {
            return Err(Error::OutOfRange(format!(
                "{} undefined at t = {t}",
                self.label()
            )));
        }
        match self {
            CurveName::Gg | CurveName::WFirst | CurveName::ZFirst => gg(t),
            CurveName::UFirst => boundary_first_coordinate(BoundaryCurve::U, t),
            CurveName::XFirst => boundary_first_coordinate(BoundaryCurve::X, t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    pub name: CurveName,
    pub samples: Vec<(f64, f64)>,
}

fn snap(t: f64, bound: f64, closed: bool) -> f64 {
    if closed && (t - bound).abs() <= ENDPOINT_SNAP {
        bound
    } else {
        t
    }
}

/// `n` evenly spaced samples of a named curve over `[t0, t1]`.
pub fn sample_curve(name: CurveName, t0: f64, t1: f64, n: usize) -> Result<CurveSeries> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if !(t0 < t1) {
        return Err(Error::OutOfRange(format!("empty range [{t0}, {t1}]")));
    }
    let (lo, hi, lo_closed, hi_closed) = name.domain();
    let t0 = snap(snap(t0, lo, lo_closed), hi, hi_closed);
    let t1 = snap(snap(t1, hi, hi_closed), lo, lo_closed);
    let samples = (0..n)
        .map(|i| {
            let t = if i == n - 1 {
                t1
            } else {
                t0 + (t1 - t0) * i as f64 / (n - 1) as f64
            };
            name.eval(t).map(|v| (t, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSeries { name, samples })
}
