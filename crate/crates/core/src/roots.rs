//! Durand–Kerner (Weierstrass) simultaneous root iteration.
//!
//! Used as the complex-arithmetic oracle against the real Schur solver:
//! roots of the characteristic polynomial must match the eigenvalues.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;
/// Residual `|p(z)|` accepted as converged, in units of the rounding bound
/// of Horner evaluation at `z`.
const RESIDUAL_ULPS: f64 = 64.0;
const REFINE_SWEEPS: usize = 3;

/// Roots of the monic polynomial with descending coefficients
/// `[1, c₁, …, c_N]`.
pub fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidArgument("polynomial needs at least a leading coefficient".into()))?;
    if coeffs[0] != Complex64::new(1.0, 0.0) {
        return Err(Error::InvalidArgument("polynomial must be monic".into()));
    }
    if degree == 0 {
        return Ok(Vec::new());
    }

    // Cauchy bound on root magnitudes.
    let radius = 1.0 + coeffs[1..].iter().fold(0.0f64, |m, c| m.max(c.norm()));
    // Start on a circle, rotated off the real axis so conjugate-symmetric
    // polynomials do not keep the iterates symmetric.
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();

    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let mut refine = None;
    for _ in 0..MAX_SWEEPS {
        let mut converged = true;
        for i in 0..degree {
            let zi = roots[i];
            let num = horner(coeffs, zi);
            let den = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, zj)| acc * (zi - zj));
            let bound = abs_coeffs.iter().fold(0.0, |acc, &c| acc * zi.norm() + c);
            if num.norm() > RESIDUAL_ULPS * f64::EPSILON * degree as f64 * bound {
                converged = false;
            }
            if den.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                converged = false;
                continue;
            }
            roots[i] = zi - num / den;
        }
        match refine {
            Some(0) => return Ok(polish(coeffs, roots)),
            Some(k) => refine = Some(k - 1),
            None if converged => refine = Some(REFINE_SWEEPS),
            None => {}
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_SWEEPS,
        block: degree,
    })
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

// A few Newton steps per root, kept only when the residual drops.
fn polish(coeffs: &[Complex64], mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let deriv: Vec<Complex64> = coeffs[..degree]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (degree - i) as f64)
        .collect();
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = horner(coeffs, *r);
            let df = horner(&deriv, *r);
            if df.norm() == 0.0 {
                break;
            }
            let candidate = *r - f / df;
            if horner(coeffs, candidate).norm() < f.norm() {
                *r = candidate;
            } else {
                break;
            }
        }
    }
    roots
}
