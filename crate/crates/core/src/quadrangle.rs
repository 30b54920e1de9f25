//! Inscribed-circumscribed (bicentric) quadrangles and the map that reads
//! their edge lengths as the angles of the next quadrangle.
//!
//! A quadrangle `ABCD` is fixed up to similarity by its two obtuse angles
//! `α = ∠A ≥ β = ∠B`; then `∠C = π - α` and `∠D = π - β`. The acute pair is
//! what gets stored, because orbits drive the obtuse angles towards π.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORDER_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ICQuadrangle {
    /// `π - α` (angle C) and `π - β` (angle D), with `acute[0] ≤ acute[1]`.
    acute: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    /// Inscribed circle of radius one.
    UnitInradius,
    /// Perimeter scaled to 2π.
    Perimeter2Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadEdges {
    pub cd: f64,
    pub bc: f64,
    pub ab: f64,
    pub da: f64,
    pub mode: EdgeMode,
}

impl QuadEdges {
    pub fn perimeter(&self) -> f64 {
        self.cd + self.bc + self.ab + self.da
    }
}

impl ICQuadrangle {
    /// `alpha` in (π/2, π), `beta` in [π/2, alpha].
    ///
    /// A right angle for `beta` is accepted: the map sends every pair with
    /// `α = β` to one whose second angle is exactly π/2.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidQuadrangle("non-finite angle".into()));
        }
        if !(alpha > FRAC_PI_2 && alpha < PI) {
            return Err(Error::InvalidQuadrangle(format!(
                "alpha = {alpha} is not obtuse"
            )));
        }
        if beta < FRAC_PI_2 - ORDER_SLACK || beta > alpha + ORDER_SLACK {
            return Err(Error::InvalidQuadrangle(format!(
                "beta = {beta} outside [π/2, alpha]"
            )));
        }
        Ok(Self::from_acute(PI - alpha, PI - beta))
    }

    /// The square, the one admitted pair with both angles right.
    pub fn square() -> Self {
        Self {
            acute: [FRAC_PI_2, FRAC_PI_2],
        }
    }

    fn from_acute(u: f64, v: f64) -> Self {
        let v = v.min(FRAC_PI_2);
        let u = u.min(v);
        Self { acute: [u, v] }
    }

    pub fn alpha(&self) -> f64 {
        PI - self.acute[0]
    }

    pub fn beta(&self) -> f64 {
        PI - self.acute[1]
    }

    /// `(π - α, π - β)`.
    pub fn acute_angles(&self) -> [f64; 2] {
        self.acute
    }

    /// Largest deviation of the obtuse pair from `(π, π)`.
    pub fn distance_to_degenerate(&self) -> f64 {
        self.acute[1].max(self.acute[0])
    }
}

/// Perimeter-2π edges from the acute pair `(u, v) = (π - α, π - β)`.
fn perimeter_edges(u: f64, v: f64) -> [f64; 4] {
    let (hu, hv) = (0.5 * u, 0.5 * v);
    let (su, cu, sv, cv) = (hu.sin(), hu.cos(), hv.sin(), hv.cos());
    let diff = (hu - hv).cos();
    let total = (hu + hv).sin();
    [
        PI * cu * cv / diff,
        PI * cu * sv / total,
        PI * su * cv / total,
        PI * su * sv / diff,
    ]
}

pub fn quad_edges(q: &ICQuadrangle, mode: EdgeMode) -> QuadEdges {
    let [u, v] = q.acute;
    let [cd, bc, ab, da] = match mode {
        EdgeMode::UnitInradius => {
            // tan(α/2) = cot(u/2) and likewise for β.
            let (ta, tb) = (1.0 / (0.5 * u).tan(), 1.0 / (0.5 * v).tan());
            [ta + tb, ta + 1.0 / tb, 1.0 / ta + tb, 1.0 / ta + 1.0 / tb]
        }
        EdgeMode::Perimeter2Pi => perimeter_edges(u, v),
    };
    QuadEdges {
        cd,
        bc,
        ab,
        da,
        mode,
    }
}

/// Next quadrangle: obtuse pair `(|CD|, |BC|)` of the perimeter-2π scaling.
/// Since `|CD| + |DA| = |BC| + |AB| = π`, the new acute pair is `(|DA|, |AB|)`.
pub fn map_h(q: &ICQuadrangle) -> Result<ICQuadrangle> {
    let [_, _, ab, da] = perimeter_edges(q.acute[0], q.acute[1]);
    if !(da >= f64::MIN_POSITIVE) {
        return Err(Error::DegenerateOutput(format!(
            "acute angle {da:e} underflows"
        )));
    }
    Ok(ICQuadrangle::from_acute(da, ab))
}

/// The map in obtuse-angle coordinates for arbitrary real input, with no
/// validity checks; used for differentiating at the square.
pub fn map_h_unchecked(alpha: f64, beta: f64) -> [f64; 2] {
    let [cd, bc, _, _] = perimeter_edges(PI - alpha, PI - beta);
    [cd, bc]
}

pub fn obtuse_sum(q: &ICQuadrangle) -> f64 {
    q.alpha() + q.beta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_inradius_edges() {
        let q = ICQuadrangle::new(1.85, 1.75).unwrap();
        let e = quad_edges(&q, EdgeMode::UnitInradius);
        let (ta, tb) = ((1.85f64 / 2.0).tan(), (1.75f64 / 2.0).tan());
        assert_abs_diff_eq!(e.cd, ta + tb, epsilon = 1e-12);
        assert_abs_diff_eq!(e.bc, ta + 1.0 / tb, epsilon = 1e-12);
        assert_abs_diff_eq!(e.ab, 1.0 / ta + tb, epsilon = 1e-12);
        assert_abs_diff_eq!(e.da, 1.0 / ta + 1.0 / tb, epsilon = 1e-12);
        assert_abs_diff_eq!(e.cd, 2.52440, epsilon = 1e-5);
        assert_abs_diff_eq!(e.bc, 2.16210, epsilon = 1e-5);
        assert_abs_diff_eq!(e.ab, 1.95101, epsilon = 1e-5);
        assert_abs_diff_eq!(e.da, 1.58872, epsilon = 1e-5);
    }

    #[test]
    fn perimeter_mode_matches_rescaled_unit_mode() {
        for &(a, b) in &[(1.85, 1.75), (2.9, 1.6), (3.1, 3.05), (1.6, 1.6)] {
            let q = ICQuadrangle::new(a, b).unwrap();
            let unit = quad_edges(&q, EdgeMode::UnitInradius);
            let p = quad_edges(&q, EdgeMode::Perimeter2Pi);
            let k = 2.0 * PI / unit.perimeter();
            assert_abs_diff_eq!(p.cd, unit.cd * k, epsilon = 1e-12);
            assert_abs_diff_eq!(p.bc, unit.bc * k, epsilon = 1e-12);
            assert_abs_diff_eq!(p.ab, unit.ab * k, epsilon = 1e-12);
            assert_abs_diff_eq!(p.da, unit.da * k, epsilon = 1e-12);
            // Printed form of |CD| in terms of the obtuse angles.
            let cd = PI * (a / 2.0).sin() * (b / 2.0).sin() / (a / 2.0 - b / 2.0).cos();
            let bc = PI * (a / 2.0).sin() * (b / 2.0).cos() / (a / 2.0 + b / 2.0).sin();
            assert_abs_diff_eq!(p.cd, cd, epsilon = 1e-12);
            assert_abs_diff_eq!(p.bc, bc, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_is_fixed() {
        let e = quad_edges(&ICQuadrangle::square(), EdgeMode::Perimeter2Pi);
        for x in [e.cd, e.bc, e.ab, e.da] {
            assert_abs_diff_eq!(x, FRAC_PI_2, epsilon = 1e-15);
        }
        let h = map_h(&ICQuadrangle::square()).unwrap();
        assert_abs_diff_eq!(h.alpha(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(h.beta(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(obtuse_sum(&ICQuadrangle::square()), PI, epsilon = 1e-15);
    }

    #[test]
    fn single_step_can_lose_obtuse_sum() {
        let q = ICQuadrangle::new(1.85, 1.75).unwrap();
        assert_abs_diff_eq!(obtuse_sum(&q), 3.6, epsilon = 1e-15);
        let e = quad_edges(&q, EdgeMode::Perimeter2Pi);
        assert_abs_diff_eq!(e.cd + e.bc, 3.58, epsilon = 5e-3);
        let h = map_h(&q).unwrap();
        assert_abs_diff_eq!(h.alpha(), 1.9281, epsilon = 2e-4);
        assert_abs_diff_eq!(h.beta(), 1.6514, epsilon = 2e-4);
        assert!(obtuse_sum(&h) < obtuse_sum(&q));
        assert_abs_diff_eq!(obtuse_sum(&h), 3.58, epsilon = 5e-3);
        assert!(obtuse_sum(&map_h(&h).unwrap()) > obtuse_sum(&q));
    }

    #[test]
    fn equal_obtuse_angles_map_to_a_right_angle() {
        let q = ICQuadrangle::new(2.2, 2.2).unwrap();
        let h = map_h(&q).unwrap();
        assert_abs_diff_eq!(h.beta(), FRAC_PI_2, epsilon = 1e-15);
        assert!(map_h(&h).is_ok());
    }

    #[test]
    fn rejects_invalid_pairs() {
        assert!(ICQuadrangle::new(1.5, 1.4).is_err());
        assert!(ICQuadrangle::new(PI, 2.0).is_err());
        assert!(ICQuadrangle::new(2.0, 2.5).is_err());
        assert!(ICQuadrangle::new(f64::NAN, 2.0).is_err());
        assert!(ICQuadrangle::new(FRAC_PI_2, FRAC_PI_2).is_err());
    }

    #[test]
    fn edge_chain_and_half_perimeter_on_grid() {
        let n = 60;
        let m = 1e-3;
        for i in 0..n {
            for j in 0..=i {
                let a = FRAC_PI_2 + m + (FRAC_PI_2 - 2.0 * m) * i as f64 / (n - 1) as f64;
                let b = FRAC_PI_2 + m + (FRAC_PI_2 - 2.0 * m) * j as f64 / (n - 1) as f64;
                let q = ICQuadrangle::new(a, b).unwrap();
                for mode in [EdgeMode::UnitInradius, EdgeMode::Perimeter2Pi] {
                    let e = quad_edges(&q, mode);
                    let s = 1e-12;
                    assert!(
                        e.cd + s >= e.bc && e.bc + s >= e.ab && e.ab + s >= e.da && e.da > 0.0,
                        "({a}, {b}) {mode:?}: {e:?}"
                    );
                }
                let e = quad_edges(&q, EdgeMode::Perimeter2Pi);
                assert_abs_diff_eq!(e.cd + e.da, PI, epsilon = 1e-12);
                assert_abs_diff_eq!(e.bc + e.ab, PI, epsilon = 1e-12);
                assert_abs_diff_eq!(e.perimeter(), 2.0 * PI, epsilon = 1e-12);
            }
        }
    }
}
