//! Explicit half-plane quadrature grids and the generic truncated-domain
//! double integral driver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::adapt::QuadOut;
use crate::numerics::gauss;

/// Convergence budget for iterative numerical procedures.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Tolerance> {
        if !(abs_tol > 0.0) || !(rel_tol >= 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if max_depth < 1 {
            return Err(Error::domain("max refinement depth must be at least 1"));
        }
        Ok(Tolerance {
            abs_tol,
            rel_tol,
            max_depth,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_depth: 24,
        }
    }
}

/// Product quadrature grid on the truncated upper half-plane
/// `[-x_extent, x_extent] × [y_min, y_max]`: uniform panels in x, geometric
/// panels in y, a fixed Gauss rule per panel. All nodes lie strictly inside
/// the open half-plane and every weight is positive.
#[derive(Debug, Clone)]
pub struct HalfPlaneGrid {
    pub x_extent: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl HalfPlaneGrid {
    pub fn new(x_extent: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(y_min > 0.0 && y_max > y_min) {
            return Err(Error::domain(
                "half-plane grid requires 0 < y_min < y_max",
            ));
        }
        if !(x_extent > 0.0) || nx == 0 || ny == 0 {
            return Err(Error::domain(
                "half-plane grid requires positive extent and panel counts",
            ));
        }
        Ok(HalfPlaneGrid {
            x_extent,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// Spec defaults: inner cutoff 1e-4, outer truncation 1e3.
    pub fn standard() -> Self {
        HalfPlaneGrid {
            x_extent: 1e3,
            y_min: 1e-4,
            y_max: 1e3,
            nx: 48,
            ny: 32,
        }
    }

    /// Panel boundaries at refinement `level` (each level doubles both counts).
    fn panels(&self, level: u32) -> (Vec<f64>, Vec<f64>) {
        let nx = self.nx << level;
        let ny = self.ny << level;
        let xs: Vec<f64> = (0..=nx)
            .map(|i| -self.x_extent + 2.0 * self.x_extent * i as f64 / nx as f64)
            .collect();
        let ratio = (self.y_max / self.y_min).powf(1.0 / ny as f64);
        let ys: Vec<f64> = (0..=ny).map(|j| self.y_min * ratio.powi(j as i32)).collect();
        (xs, ys)
    }

    /// Visit every node/weight pair of the level-`level` rule in a fixed
    /// deterministic order.
    pub fn for_each_node(
        &self,
        level: u32,
        mut visit: impl FnMut(f64, f64, f64) -> Result<()>,
    ) -> Result<()> {
        let rule = gauss::gl6();
        let (xs, ys) = self.panels(level);
        for ix in 0..xs.len() - 1 {
            let (xa, xb) = (xs[ix], xs[ix + 1]);
            let cx = 0.5 * (xa + xb);
            let hx = 0.5 * (xb - xa);
            for iy in 0..ys.len() - 1 {
                let (ya, yb) = (ys[iy], ys[iy + 1]);
                let cy = 0.5 * (ya + yb);
                let hy = 0.5 * (yb - ya);
                for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
                    for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
                        visit(cx + hx * u, cy + hy * v, wu * wv * hx * hy)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn level_sum(
        &self,
        f: &mut impl FnMut(Complex64) -> Complex64,
        level: u32,
    ) -> Result<(Complex64, usize)> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut evals = 0usize;
        self.for_each_node(level, |x, y, w| {
            let v = f(Complex64::new(x, y));
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::domain(format!(
                    "integrand not finite at node z = {x:.6} + {y:.6}i"
                )));
            }
            acc += v * w;
            evals += 1;
            Ok(())
        })?;
        Ok((acc, evals))
    }
}

/// Double integral of `f` over the truncated half-plane described by `grid`,
/// refined (panel doubling) until two successive levels agree within `tol`.
///
/// Non-convergence within the depth budget is flagged on the result rather
/// than silently returned.
pub fn integrate_halfplane(
    f: &mut impl FnMut(Complex64) -> Complex64,
    grid: &HalfPlaneGrid,
    tol: &Tolerance,
) -> Result<QuadOut<Complex64>> {
    let (mut prev, mut evals) = grid.level_sum(f, 0)?;
    let mut last_err = f64::INFINITY;
    for level in 1..=tol.max_depth.min(6) {
        let (cur, n) = grid.level_sum(f, level)?;
        evals += n;
        last_err = (cur - prev).norm();
        if last_err <= tol.abs_tol.max(tol.rel_tol * cur.norm()) {
            return Ok(QuadOut {
                value: cur,
                err: last_err,
                evals,
                converged: true,
            });
        }
        prev = cur;
    }
    Ok(QuadOut {
        value: prev,
        err: last_err,
        evals,
        converged: false,
    })
}

/// Second symmetric difference `V(x+t) − 2V(x) + V(x−t)`.
pub fn second_difference(v: &mut impl FnMut(f64) -> f64, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "second difference needs t > 0, got t = {t}"
        )));
    }
    Ok(v(x + t) - 2.0 * v(x) + v(x - t))
}
