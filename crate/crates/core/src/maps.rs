//! The two edge/angle swap maps on triangles.
//!
//! `map_f` rescales a triangle to perimeter π and reads its edge lengths as
//! the interior angles of the next triangle. `map_g` rescales to perimeter
//! 2π and reads the edges as *exterior* angles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{aligned_distance, AngleTriple, ExteriorTriple, InteriorTriple};

/// Below this sum of sines the maps refuse to divide.
pub const MIN_SINE_SUM: f64 = 1e-12;

fn sine_sum_checked(s: &[f64; 3]) -> Result<f64> {
    let sum = s[0] + s[1] + s[2];
    if !(sum >= MIN_SINE_SUM) {
        return Err(Error::DegenerateInput(format!(
            "sum of sines {sum:e} below {MIN_SINE_SUM:e}"
        )));
    }
    Ok(sum)
}

/// `α' = π·sin α / (sin α + sin β + sin γ)` and likewise for β', γ'.
pub fn map_f(t: &InteriorTriple) -> Result<InteriorTriple> {
    let s = t.sines();
    let sum = sine_sum_checked(&s)?;
    Ok(InteriorTriple::from_raw(s.map(|x| PI * x / sum)))
}

/// `a' = 2π·sin a / (sin a + sin b + sin c)` and likewise for b', c'.
///
/// Evaluated through the equivalent half-angle form: if `α, β, γ` are the
/// interior angles, the new interior angle in the first position is
/// `π·tan(β/2)·tan(γ/2)`. Near the degenerate corner every small output
/// angle is then a product of accurately known factors, whereas
/// `π - a'` from the sine ratio would cancel catastrophically.
pub fn map_g(t: &ExteriorTriple) -> Result<ExteriorTriple> {
    sine_sum_checked(&t.sines())?;
    let interior = t.interior_angles();
    let mut m = 0;
    for i in 1..3 {
        if interior[i] > interior[m] {
            m = i;
        }
    }
    let mut half_tan = interior.map(|x| (0.5 * x).tan());
    let (j, k) = ((m + 1) % 3, (m + 2) % 3);
    // The largest half-angle is complementary to the other two combined.
    half_tan[m] = (1.0 - half_tan[j] * half_tan[k]) / (half_tan[j] + half_tan[k]);
    let next = [
        PI * half_tan[1] * half_tan[2],
        PI * half_tan[0] * half_tan[2],
        PI * half_tan[0] * half_tan[1],
    ];
    Ok(ExteriorTriple::from_interior_raw(next))
}

/// The exterior map written directly as the sine ratio on exterior angles.
/// Returns raw angles; used as an independent route to check [`map_g`].
pub fn map_g_by_sines(t: &ExteriorTriple) -> Result<[f64; 3]> {
    let a = t.angles();
    let s = a.map(f64::sin);
    let sum = s[0] + s[1] + s[2];
    if !(sum >= MIN_SINE_SUM) {
        return Err(Error::DegenerateInput(format!("sum of sines {sum:e}")));
    }
    Ok(s.map(|x| 2.0 * PI * x / sum))
}

/// Whether the triple, read as edge lengths, satisfies the strict triangle
/// inequality. These are exactly the triples that `map_f` can produce.
pub fn is_in_f_image(t: &InteriorTriple) -> bool {
    let a = t.angles();
    let max = t.max_angle();
    let sum: f64 = a.iter().sum();
    max < sum - max
}

fn chart_point(x: f64, y: f64) -> Option<ExteriorTriple> {
    let interior = [PI - x, PI - y, x + y - PI];
    if interior.iter().all(|&v| v > 0.0 && v < PI) {
        Some(ExteriorTriple::from_interior_raw(interior))
    } else {
        None
    }
}

/// Jacobian of the chart map `(a, b) ↦ (a', b')`, with `c = 2π - a - b`.
fn chart_jacobian(p: &ExteriorTriple) -> [[f64; 2]; 2] {
    let s = p.sines();
    let c = p.interior_angles().map(|x| -x.cos());
    let sum = s[0] + s[1] + s[2];
    let d = |i: usize, j: usize| {
        let delta = if i == j { 1.0 } else { 0.0 };
        2.0 * PI * (delta * c[j] * sum - s[i] * c[j]) / (sum * sum)
    };
    [
        [d(0, 0) - d(0, 2), d(0, 1) - d(0, 2)],
        [d(1, 0) - d(1, 2), d(1, 1) - d(1, 2)],
    ]
}

/// Preimage of `target` under `map_g`, by damped Newton iteration on the
/// chart of the first two exterior angles, started at the target itself.
pub fn invert_g(target: &ExteriorTriple, tol: f64, max_steps: usize) -> Result<ExteriorTriple> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let goal = target.angles();
    let near_edge = goal
        .iter()
        .zip(target.interior_angles().iter())
        .any(|(&a, &complement)| a <= tol || complement <= tol);
    if near_edge {
        return Err(Error::DegenerateInput(
            "target within tolerance of the boundary".to_string(),
        ));
    }

    let residual = |p: &ExteriorTriple| -> Result<([f64; 2], f64)> {
        let img = map_g(p)?.angles();
        Ok((
            [img[0] - goal[0], img[1] - goal[1]],
            aligned_distance(&img, &goal),
        ))
    };

    let mut point = *target;
    let (mut r, mut norm) = residual(&point)?;
    for _ in 0..max_steps {
        if norm < tol {
            return Ok(point);
        }
        let j = chart_jacobian(&point);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence {
                steps: max_steps,
                residual: norm,
            });
        }
        let dx = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dy = (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let [x, y, _] = point.angles();

        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=20 {
            if let Some(candidate) = chart_point(x - lambda * dx, y - lambda * dy) {
                if let Ok((cr, cn)) = residual(&candidate) {
                    if cn < norm {
                        accepted = Some((candidate, cr, cn));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((p, cr, cn)) => {
                point = p;
                r = cr;
                norm = cn;
            }
            None => break,
        }
    }
    if norm < tol {
        Ok(point)
    } else {
        Err(Error::NoConvergence {
            steps: max_steps,
            residual: norm,
        })
    }
}
