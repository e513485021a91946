//! Principal-value integrals of periodic integrands with a single
//! (possible) singularity on the circle.

use crate::error::{Error, Result};
use crate::numerics::adapt::adaptive_1d;
use crate::numerics::Tolerance;

use std::f64::consts::PI;

/// Symmetric-limit principal value of a 2π-periodic integrand `g` whose only
/// singularity sits on the orbit `{x + 2πn}`.
///
/// The excision `|y − x| ≥ ε` is shrunk geometrically (ratio ½) until two
/// successive values differ by less than the tolerance. Integrands that are
/// actually regular at `x` converge after the first few shrinks and the
/// ordinary integral is returned.
///
/// Integrating over `[x + ε, x + 2π − ε]` covers one full period while
/// excising a symmetric neighbourhood of the singularity.
pub fn pv_circle_integral(
    g: &mut impl FnMut(f64) -> f64,
    x: f64,
    tol: &Tolerance,
) -> Result<f64> {
    // A singularity anywhere other than the excised orbit makes the adaptive
    // tail integrals blow up; probe a grid away from x first.
    for k in 1..1024 {
        let y = x + 2.0 * PI * k as f64 / 1024.0;
        let v = g(y);
        if !v.is_finite() {
            return Err(Error::domain(format!(
                "integrand is not finite at y = {y:.6}, away from the declared singularity x = {x:.6}"
            )));
        }
    }

    let mut eps = 0.5 * PI;
    let mut prev = integral_excised(g, x, eps, tol)?;
    for _ in 0..tol.max_depth.max(8) {
        eps *= 0.5;
        let cur = integral_excised(g, x, eps, tol)?;
        if (cur - prev).abs() <= tol.abs_tol.max(tol.rel_tol * cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numerics(format!(
        "principal value at x = {x:.6} did not settle within {} excision levels",
        tol.max_depth.max(8)
    )))
}

fn integral_excised(
    g: &mut impl FnMut(f64) -> f64,
    x: f64,
    eps: f64,
    tol: &Tolerance,
) -> Result<f64> {
    // Split at the antipode so each panel is singularity-free inside.
    let a = x + eps;
    let b = x + 2.0 * PI - eps;
    let mid = x + PI;
    let left = adaptive_1d(g, a, mid, 0.25 * tol.abs_tol, 0.0, 32);
    let right = adaptive_1d(g, mid, b, 0.25 * tol.abs_tol, 0.0, 32);
    let out = left.merge(right);
    if !out.value.is_finite() {
        return Err(Error::numerics(
            "excised principal-value integral is not finite".to_string(),
        ));
    }
    Ok(out.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::new(1e-10, 1e-12, 40).unwrap()
    }

    #[test]
    fn regular_integrand_reduces_to_ordinary_integral() {
        let mut g = |y: f64| y.cos() + 2.0;
        let v = pv_circle_integral(&mut g, 0.3, &tol()).unwrap();
        assert_abs_diff_eq!(v, 4.0 * PI, epsilon = 1e-8);
    }

    #[test]
    fn odd_kernel_has_zero_principal_value() {
        let x = 0.7;
        let mut g = |y: f64| ((y - x) / 2.0).tan().recip();
        let v = pv_circle_integral(&mut g, x, &tol()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-8);
    }

    /// The conjugate-function kernel against sin: with the transform
    /// normalisation 1/(2π) this is the value cos(0) = 1. The integrand
    /// `sin(y)cot(y/2)` equals `1 + cos y`, so the bare principal value over
    /// a period is 2π.
    #[test]
    fn sine_against_cotangent_kernel() {
        let x = 0.0;
        let mut g = |y: f64| y.sin() * ((y - x) / 2.0).tan().recip();
        let v = pv_circle_integral(&mut g, x, &tol()).unwrap();
        assert_abs_diff_eq!(v, 2.0 * PI, epsilon = 1e-8);
        let hilbert_value = v / (2.0 * PI);
        assert_abs_diff_eq!(hilbert_value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rejects_misplaced_singularity() {
        // Pole on the orbit of y = π while the declared singularity is x = 0.
        let mut g = |y: f64| 1.0 / ((y - PI) / 2.0).sin();
        let r = pv_circle_integral(&mut g, 0.0, &tol());
        assert!(matches!(r, Err(Error::Domain(_))), "got {r:?}");
    }
}
