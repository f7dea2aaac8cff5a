use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::actions1d::torus::TorusRotation;
use crate::averages::observable::Observable;
use crate::averages::quadrature::{Estimate, GaussLegendre};
use crate::error::{Error, Result};
use crate::tolerances::QUAD_REL_TOL;

/// Average of `e^{i t·ξ}` over the unit-radius-scaled Euclidean ball in `R^l`,
/// as a function of `z = |ξ| r`.
pub fn ball_kernel(l: usize, z: f64) -> Result<f64> {
    let z = z.abs();
    match l {
        1 => Ok(if z < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z }),
        2 => Ok(if z < 1e-6 { 1.0 - z * z / 8.0 } else { 2.0 * bessel_j1(z) / z }),
        3 => Ok(if z < 1e-3 {
            1.0 - z * z / 10.0
        } else {
            3.0 * (z.sin() - z * z.cos()) / (z * z * z)
        }),
        _ => Err(Error::Invalid(format!("closed form only for l in 1..=3, got {l}"))),
    }
}

/// `J_1` from its integral representation; the periodic trapezoid rule
/// converges geometrically once the node count exceeds `z`.
pub fn bessel_j1(z: f64) -> f64 {
    let n = 2 * z.abs().ceil() as usize + 64;
    let h = TAU / n as f64;
    (0..n)
        .map(|j| {
            let t = j as f64 * h;
            (t - z * t.sin()).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// Closed-form and quadrature values of the continuous ball average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationAverage {
    pub closed_form: Option<f64>,
    pub quadrature: Estimate,
}

/// Closed form for trigonometric observables.
pub fn rotation_closed_form(
    rot: &TorusRotation,
    phi: &Observable,
    x: &[f64],
    r: f64,
) -> Result<Option<f64>> {
    let l = rot.l();
    match phi {
        Observable::Constant { value } => Ok(Some(*value)),
        Observable::Trig { constant, terms } => {
            let mut v = *constant;
            for t in terms {
                // ξ_j = 2π m·α^{(j)}
                let xi: f64 = (0..l)
                    .map(|j| {
                        let w: f64 = t.freq.iter().zip(rot.alpha(j)).map(|(&m, a)| m as f64 * a).sum();
                        (TAU * w).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                let th = t.phase(x);
                v += (t.cos * th.cos() + t.sin * th.sin()) * ball_kernel(l, xi * r)?;
            }
            Ok(Some(v))
        }
        _ => Ok(None),
    }
}

const ORDER: usize = 8;

fn max_frequency(rot: &TorusRotation, phi: &Observable) -> f64 {
    match phi {
        Observable::Trig { terms, .. } => terms
            .iter()
            .map(|t| {
                (0..rot.l())
                    .map(|j| {
                        t.freq
                            .iter()
                            .zip(rot.alpha(j))
                            .map(|(&m, a)| m as f64 * a)
                            .sum::<f64>()
                            .powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max),
        Observable::Bump { width, .. } => {
            let a = (0..rot.l())
                .map(|j| rot.alpha(j).iter().map(|v| v * v).sum::<f64>())
                .sum::<f64>()
                .sqrt();
            a / width
        }
        _ => 1.0,
    }
}

fn ball_quadrature(rot: &TorusRotation, phi: &Observable, x: &[f64], r: f64, panels: usize) -> f64 {
    let gl = GaussLegendre::new(ORDER);
    let l = rot.l();
    let eval = |t: &[f64]| phi.eval(&rot.apply_unchecked(t, x));
    match l {
        1 => gl.integrate(-r, r, panels, |t| eval(&[t])) / (2.0 * r),
        2 => {
            let s = gl.integrate(0.0, r, panels, |rho| {
                rho * gl.integrate(0.0, TAU, 2 * panels, |th| eval(&[rho * th.cos(), rho * th.sin()]))
            });
            s / (PI * r * r)
        }
        _ => {
            let s = gl.integrate(0.0, r, panels, |rho| {
                rho * rho
                    * gl.integrate(0.0, PI, panels, |th| {
                        th.sin()
                            * gl.integrate(0.0, TAU, 2 * panels, |ph| {
                                eval(&[
                                    rho * th.sin() * ph.cos(),
                                    rho * th.sin() * ph.sin(),
                                    rho * th.cos(),
                                ])
                            })
                    })
            });
            s / (4.0 / 3.0 * PI * r * r * r)
        }
    }
}

/// `β_r φ(x) = |B_r|^{-1} ∫_{B_r} φ(f(t)x) dt` over the Euclidean ball in
/// `R^l`, `l <= 3`.
pub fn rotation_ball_average(
    rot: &TorusRotation,
    phi: &Observable,
    x: &[f64],
    r: f64,
) -> Result<RotationAverage> {
    if !(r > 0.0) {
        return Err(Error::Invalid(format!("radius must be positive, got {r}")));
    }
    if x.len() != rot.d() {
        return Err(Error::Dimension {
            expected: rot.d(),
            got: x.len(),
        });
    }
    phi.check_dim(rot.d())?;
    if !(1..=3).contains(&rot.l()) {
        return Err(Error::Invalid(format!("ball quadrature supports l in 1..=3, got {}", rot.l())));
    }
    let closed_form = rotation_closed_form(rot, phi, x, r)?;
    // about one panel per half oscillation along the longest direction
    let z = max_frequency(rot, phi) * r;
    let mut panels = (2.0 * z).ceil() as usize + 4;
    let max_panels = if rot.l() == 1 { 1 << 22 } else { 1 << 9 };
    let scale = phi.sup_norm().max(1.0);
    let mut prev = ball_quadrature(rot, phi, x, r, panels);
    let mut err = f64::INFINITY;
    while panels * 2 <= max_panels {
        panels *= 2;
        let cur = ball_quadrature(rot, phi, x, r, panels);
        err = (cur - prev).abs();
        prev = cur;
        if err <= QUAD_REL_TOL * 1e-3 * scale {
            break;
        }
    }
    Ok(RotationAverage {
        closed_form,
        quadrature: Estimate {
            value: prev,
            error: err,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1_reference_values() {
        // J_1(1), J_1(10) from standard tables
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j1(10.0) - 0.043_472_746_168_861_44).abs() < 1e-14);
    }

    #[test]
    fn kernels_continuous_at_zero() {
        for l in 1..=3 {
            let a = ball_kernel(l, 1e-3 * 0.999).unwrap();
            let b = ball_kernel(l, 1e-3 * 1.001).unwrap();
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn two_and_three_dim_quadrature_matches() {
        for l in [2usize, 3] {
            let alpha: Vec<Vec<f64>> = (0..l).map(|j| vec![0.3 + 0.1 * j as f64, 0.7]).collect();
            let rot = TorusRotation::new(alpha).unwrap();
            let r = if l == 2 { 3.0 } else { 1.0 };
            let phi = Observable::cosine(2, 0, 1.0);
            let avg = rotation_ball_average(&rot, &phi, &[0.1, 0.2], r).unwrap();
            let cf = avg.closed_form.unwrap();
            assert!((avg.quadrature.value - cf).abs() < 1e-6, "l={l}: {avg:?}");
        }
    }
}
