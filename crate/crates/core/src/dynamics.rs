//! Orbits of the three maps and linear stability of their fixed points.

use std::f64::consts::PI;
use std::fmt::Debug;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    normalize_cyclic, quotient_distance, AngleTriple, ExteriorTriple, InteriorTriple,
};
use crate::maps::{map_f, map_g};
use crate::quadrangle::{map_h, map_h_unchecked, ICQuadrangle};

pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_TOL_F: f64 = 1e-9;
pub const DEFAULT_TOL_G: f64 = 1e-6;
pub const DEFAULT_TOL_H: f64 = 1e-6;
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Spectral radii within this band of 1 are reported as neutral.
pub const NEUTRAL_BAND: f64 = 1e-6;
pub const FIXED_POINT_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapId {
    F,
    G,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitId {
    Equilateral,
    DegenerateTriangle,
    DegenerateQuadrangle,
    None,
}

/// A self-map of a two-dimensional state space with a distinguished limit.
pub trait SystemMap {
    type State: Copy + PartialEq + Debug;

    fn id(&self) -> MapId;
    fn apply(&self, s: &Self::State) -> Result<Self::State>;
    /// The attractor orbits are expected to approach.
    fn limit(&self) -> LimitId;
    /// Distance from the limit in the metric the stopping rule uses.
    fn limit_distance(&self, s: &Self::State) -> f64;
    fn default_tol(&self) -> f64;
    /// Two free coordinates of a state; the third angle, if any, follows
    /// from the sum constraint.
    fn chart(&self, s: &Self::State) -> [f64; 2];
    fn apply_in_chart(&self, x: [f64; 2]) -> Result<[f64; 2]>;
    /// The symmetric fixed point.
    fn fixed_point(&self) -> Self::State;
    /// All coordinates of a state, for reporting.
    fn coordinates(&self, s: &Self::State) -> Vec<f64>;
}

/// `f`: interior angles become the edges of the perimeter-π triangle.
#[derive(Debug, Clone, Copy, Default)]
pub struct AngleMap;

/// `g`: exterior angles become the edges of the perimeter-2π triangle.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExteriorAngleMap;

/// `h`: quadrangle angles become the edges at perimeter 2π.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadrangleMap;

/// A map applied twice in a row.
#[derive(Debug, Clone, Copy)]
pub struct Twice<M>(pub M);

impl SystemMap for AngleMap {
    type State = InteriorTriple;

    fn id(&self) -> MapId {
        MapId::F
    }
    fn apply(&self, s: &InteriorTriple) -> Result<InteriorTriple> {
        map_f(s)
    }
    fn limit(&self) -> LimitId {
        LimitId::Equilateral
    }
    fn limit_distance(&self, s: &InteriorTriple) -> f64 {
        let eq = normalize_cyclic(&InteriorTriple::equilateral());
        quotient_distance(&normalize_cyclic(s), &eq).unwrap_or(f64::INFINITY)
    }
    fn default_tol(&self) -> f64 {
        DEFAULT_TOL_F
    }
    fn chart(&self, s: &InteriorTriple) -> [f64; 2] {
        let a = s.angles();
        [a[0], a[1]]
    }
    fn apply_in_chart(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let angles = [x[0], x[1], PI - x[0] - x[1]];
        if angles.iter().any(|&a| !(a > 0.0 && a < PI)) {
            return Err(Error::DegenerateInput(format!(
                "chart point {x:?} outside M"
            )));
        }
        let out = map_f(&InteriorTriple::from_raw(angles))?.angles();
        Ok([out[0], out[1]])
    }
    fn fixed_point(&self) -> InteriorTriple {
        InteriorTriple::equilateral()
    }
    fn coordinates(&self, s: &InteriorTriple) -> Vec<f64> {
        s.angles().to_vec()
    }
}

impl SystemMap for ExteriorAngleMap {
    type State = ExteriorTriple;

    fn id(&self) -> MapId {
        MapId::G
    }
    fn apply(&self, s: &ExteriorTriple) -> Result<ExteriorTriple> {
        map_g(s)
    }
    fn limit(&self) -> LimitId {
        LimitId::DegenerateTriangle
    }
    /// Componentwise distance of the sorted interior triple from `(0, 0, π)`,
    /// which equals the least exterior angle.
    fn limit_distance(&self, s: &ExteriorTriple) -> f64 {
        s.least_angle()
    }
    fn default_tol(&self) -> f64 {
        DEFAULT_TOL_G
    }
    fn chart(&self, s: &ExteriorTriple) -> [f64; 2] {
        let a = s.angles();
        [a[0], a[1]]
    }
    fn apply_in_chart(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let interior = [PI - x[0], PI - x[1], x[0] + x[1] - PI];
        if interior.iter().any(|&a| !(a > 0.0 && a < PI)) {
            return Err(Error::DegenerateInput(format!(
                "chart point {x:?} outside the medial triangle"
            )));
        }
        let out = map_g(&ExteriorTriple::from_interior_raw(interior))?.angles();
        Ok([out[0], out[1]])
    }
    fn fixed_point(&self) -> ExteriorTriple {
        ExteriorTriple::equilateral()
    }
    fn coordinates(&self, s: &ExteriorTriple) -> Vec<f64> {
        s.angles().to_vec()
    }
}

impl SystemMap for QuadrangleMap {
    type State = ICQuadrangle;

    fn id(&self) -> MapId {
        MapId::H
    }
    fn apply(&self, s: &ICQuadrangle) -> Result<ICQuadrangle> {
        map_h(s)
    }
    fn limit(&self) -> LimitId {
        LimitId::DegenerateQuadrangle
    }
    fn limit_distance(&self, s: &ICQuadrangle) -> f64 {
        s.distance_to_degenerate()
    }
    fn default_tol(&self) -> f64 {
        DEFAULT_TOL_H
    }
    fn chart(&self, s: &ICQuadrangle) -> [f64; 2] {
        [s.alpha(), s.beta()]
    }
    fn apply_in_chart(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let out = map_h_unchecked(x[0], x[1]);
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::DegenerateInput(format!("chart point {x:?}")))
        }
    }
    fn fixed_point(&self) -> ICQuadrangle {
        ICQuadrangle::square()
    }
    fn coordinates(&self, s: &ICQuadrangle) -> Vec<f64> {
        vec![s.alpha(), s.beta()]
    }
}

impl<M: SystemMap> SystemMap for Twice<M> {
    type State = M::State;

    fn id(&self) -> MapId {
        self.0.id()
    }
    fn apply(&self, s: &M::State) -> Result<M::State> {
        self.0.apply(&self.0.apply(s)?)
    }
    fn limit(&self) -> LimitId {
        self.0.limit()
    }
    fn limit_distance(&self, s: &M::State) -> f64 {
        self.0.limit_distance(s)
    }
    fn default_tol(&self) -> f64 {
        self.0.default_tol()
    }
    fn chart(&self, s: &M::State) -> [f64; 2] {
        self.0.chart(s)
    }
    fn apply_in_chart(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        self.0.apply_in_chart(self.0.apply_in_chart(x)?)
    }
    fn fixed_point(&self) -> M::State {
        self.0.fixed_point()
    }
    fn coordinates(&self, s: &M::State) -> Vec<f64> {
        self.0.coordinates(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<S> {
    pub map_id: MapId,
    /// `states[0]` is the start; `states[k + 1]` is the image of `states[k]`.
    pub states: Vec<S>,
    pub converged: bool,
    pub limit: LimitId,
    /// Number of map applications performed.
    pub iterations_used: usize,
    /// Set when the map refused to step further.
    pub halted: Option<Error>,
}

impl<S> Orbit<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("orbit holds at least its start")
    }
}

/// Applies `map` until the state is within `tol` of the map's limit or
/// `max_iters` steps have been taken.
pub fn iterate<M: SystemMap>(
    map: &M,
    start: M::State,
    max_iters: usize,
    tol: f64,
) -> Result<Orbit<M::State>> {
    if max_iters == 0 {
        return Err(Error::InvalidParameter(
            "max_iters must be at least 1".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let mut states = vec![start];
    let mut current = start;
    let mut halted = None;
    let mut converged = map.limit_distance(&current) < tol;
    while !converged && states.len() <= max_iters {
        match map.apply(&current) {
            Ok(next) => {
                current = next;
                states.push(next);
                converged = map.limit_distance(&current) < tol;
            }
            Err(e) => {
                halted = Some(e);
                break;
            }
        }
    }
    Ok(Orbit {
        map_id: map.id(),
        iterations_used: states.len() - 1,
        states,
        converged,
        limit: if converged {
            map.limit()
        } else {
            LimitId::None
        },
        halted,
    })
}

pub type Matrix2 = [[f64; 2]; 2];

/// Central finite-difference Jacobian of the chart map at `point`.
pub fn jacobian_at<M: SystemMap>(map: &M, point: &M::State, step: f64) -> Result<Matrix2> {
    if !(1e-8..=1e-3).contains(&step) {
        return Err(Error::OutOfRange(format!(
            "step {step} outside [1e-8, 1e-3]"
        )));
    }
    let x = map.chart(point);
    let mut jac = [[0.0; 2]; 2];
    for col in 0..2 {
        let mut plus = x;
        let mut minus = x;
        plus[col] += step;
        minus[col] -= step;
        let fp = map.apply_in_chart(plus)?;
        let fm = map.apply_in_chart(minus)?;
        for row in 0..2 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    Ok(jac)
}

pub fn eigenvalues(m: &Matrix2) -> [Complex64; 2] {
    let half_trace = 0.5 * (m[0][0] + m[1][1]);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = half_trace * half_trace - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [
            Complex64::new(half_trace + r, 0.0),
            Complex64::new(half_trace - r, 0.0),
        ]
    } else {
        let r = (-disc).sqrt();
        [
            Complex64::new(half_trace, r),
            Complex64::new(half_trace, -r),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Attracting,
    Repelling,
    Neutral,
}

impl Classification {
    pub fn from_spectral_radius(rho: f64) -> Self {
        if rho < 1.0 - NEUTRAL_BAND {
            Classification::Attracting
        } else if rho > 1.0 + NEUTRAL_BAND {
            Classification::Repelling
        } else {
            Classification::Neutral
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub map: MapId,
    pub fixed_point: Vec<f64>,
    pub jacobian: Matrix2,
    pub eigenvalues: [Complex64; 2],
    pub spectral_radius: f64,
    pub classification: Classification,
}

pub fn classify_fixed_point<M: SystemMap>(map: &M, point: &M::State) -> Result<StabilityReport> {
    let image = map.apply(point)?;
    let (a, b) = (map.chart(point), map.chart(&image));
    let residual = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
    if !(residual <= FIXED_POINT_RESIDUAL) {
        return Err(Error::NotAFixedPoint(residual));
    }
    let jacobian = jacobian_at(map, point, DEFAULT_FD_STEP)?;
    let eigenvalues = eigenvalues(&jacobian);
    let spectral_radius = eigenvalues[0].norm().max(eigenvalues[1].norm());
    Ok(StabilityReport {
        map: map.id(),
        fixed_point: map.coordinates(point),
        jacobian,
        eigenvalues,
        spectral_radius,
        classification: Classification::from_spectral_radius(spectral_radius),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Lcg64;
    use approx::assert_abs_diff_eq;

    fn sqrt3() -> f64 {
        3f64.sqrt()
    }

    #[test]
    fn equilateral_start_converges_immediately() {
        let o = iterate(&AngleMap, InteriorTriple::equilateral(), 10, 1e-9).unwrap();
        assert!(o.converged);
        assert_eq!(o.iterations_used, 0);
        assert_eq!(o.limit, LimitId::Equilateral);
    }

    #[test]
    fn orbit_records_every_state() {
        let start = InteriorTriple::new([0.2, 0.9, PI - 1.1]).unwrap();
        let o = iterate(&AngleMap, start, 5, 1e-300).unwrap();
        assert_eq!(o.states.len(), 6);
        assert!(!o.converged);
        assert_eq!(o.limit, LimitId::None);
        for w in o.states.windows(2) {
            assert_eq!(map_f(&w[0]).unwrap(), w[1]);
        }
    }

    #[test]
    fn bad_parameters() {
        let s = InteriorTriple::equilateral();
        assert!(iterate(&AngleMap, s, 0, 1e-9).is_err());
        assert!(iterate(&AngleMap, s, 10, 0.0).is_err());
        assert!(matches!(
            jacobian_at(&AngleMap, &s, 1e-2),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn degenerate_step_halts_orbit() {
        let thin = InteriorTriple::new([1e-13, 2e-13, PI - 3e-13]).unwrap();
        let o = iterate(&AngleMap, thin, 10, 1e-9).unwrap();
        assert!(matches!(o.halted, Some(Error::DegenerateInput(_))));
        assert_eq!(o.states.len(), 1);
        assert!(!o.converged);
    }

    #[test]
    fn jacobians_at_symmetric_points() {
        let jf = jacobian_at(&AngleMap, &InteriorTriple::equilateral(), 1e-6).unwrap();
        let kf = PI / (3.0 * sqrt3());
        assert_abs_diff_eq!(jf[0][0], kf, epsilon = 1e-5);
        assert_abs_diff_eq!(jf[1][1], kf, epsilon = 1e-5);
        assert_abs_diff_eq!(jf[0][1], 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(jf[1][0], 0.0, epsilon = 1e-5);

        let jg = jacobian_at(&ExteriorAngleMap, &ExteriorTriple::equilateral(), 1e-6).unwrap();
        let kg = -2.0 * PI / (3.0 * sqrt3());
        assert_abs_diff_eq!(jg[0][0], kg, epsilon = 1e-5);
        assert_abs_diff_eq!(jg[1][1], kg, epsilon = 1e-5);
        assert_abs_diff_eq!(jg[0][1], 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(jg[1][0], 0.0, epsilon = 1e-5);
    }

    #[test]
    fn double_step_multiplier_is_squared() {
        let r =
            classify_fixed_point(&Twice(ExteriorAngleMap), &ExteriorTriple::equilateral()).unwrap();
        let k = 2.0 * PI / (3.0 * sqrt3());
        assert_abs_diff_eq!(r.spectral_radius, k * k, epsilon = 1e-5);
        assert_abs_diff_eq!(k * k, 1.46217, epsilon = 1e-5);
    }

    #[test]
    fn classification_of_fixed_points() {
        let f = classify_fixed_point(&AngleMap, &InteriorTriple::equilateral()).unwrap();
        assert_eq!(f.classification, Classification::Attracting);
        assert_abs_diff_eq!(f.spectral_radius, 0.604600, epsilon = 1e-5);

        let g = classify_fixed_point(&ExteriorAngleMap, &ExteriorTriple::equilateral()).unwrap();
        assert_eq!(g.classification, Classification::Repelling);
        assert_abs_diff_eq!(g.spectral_radius, 1.209200, epsilon = 1e-5);

        let h = classify_fixed_point(&QuadrangleMap, &ICQuadrangle::square()).unwrap();
        assert_eq!(h.fixed_point, vec![PI / 2.0, PI / 2.0]);
        assert!(h.spectral_radius.is_finite());

        let not_fixed = InteriorTriple::new([0.5, 1.0, PI - 1.5]).unwrap();
        assert!(matches!(
            classify_fixed_point(&AngleMap, &not_fixed),
            Err(Error::NotAFixedPoint(_))
        ));
    }

    #[test]
    fn square_jacobian_matches_hand_derivatives() {
        // At α = β = π/2: ∂|CD|/∂α = ∂|CD|/∂β = π/4, ∂|BC|/∂α = π/4, ∂|BC|/∂β = -π/4.
        let h = classify_fixed_point(&QuadrangleMap, &ICQuadrangle::square()).unwrap();
        let q = PI / 4.0;
        let expect = [[q, q], [q, -q]];
        for (row, want) in h.jacobian.iter().zip(expect) {
            for (x, y) in row.iter().zip(want) {
                assert_abs_diff_eq!(*x, y, epsilon = 1e-8);
            }
        }
        // Eigenvalues ±π√2/4.
        assert_abs_diff_eq!(h.spectral_radius, PI * 2f64.sqrt() / 4.0, epsilon = 1e-8);
        assert_eq!(h.classification, Classification::Repelling);
    }

    #[test]
    fn orbits_are_deterministic() {
        let mut rng = Lcg64::new(5);
        let start = rng.exterior_triple(1e-6, 0.05);
        let a = iterate(&ExteriorAngleMap, start, 100, 1e-6).unwrap();
        let b = iterate(&ExteriorAngleMap, start, 100, 1e-6).unwrap();
        assert_eq!(a.states.len(), b.states.len());
        for (x, y) in a.states.iter().zip(&b.states) {
            for (p, q) in x.angles().iter().zip(y.angles().iter()) {
                assert_eq!(p.to_bits(), q.to_bits());
            }
        }
    }

    #[test]
    fn quadrangle_orbit_reaches_degenerate_limit() {
        let q = ICQuadrangle::new(1.85, 1.75).unwrap();
        let o = iterate(&QuadrangleMap, q, DEFAULT_MAX_ITERS, DEFAULT_TOL_H).unwrap();
        assert!(o.converged);
        assert_eq!(o.limit, LimitId::DegenerateQuadrangle);
        let last = o.last();
        assert!(PI - last.alpha() < 1e-6 && PI - last.beta() < 1e-6);
    }
}
