//! The Hilbert transform `J` on circle vector fields, computed three
//! independent ways:
//!
//! 1. **Principal value** (`hilbert_pv`): the conjugate-function integral
//!    `J V(x) = (1/2π) pv ∫ V(y) cot((y−x)/2) dy`, folded into the regular
//!    form `(1/2π) ∫_0^π [V(x+s) − V(x−s)] cot(s/2) ds` and evaluated on
//!    dyadically graded Gauss panels. The 1/(2π) normalization is the one
//!    that realises `J(sin kx) = cos kx`, `J(cos kx) = −sin kx`.
//! 2. **Fourier multipliers** (`hilbert_fourier`): the exact coefficient map
//!    `(a_k, b_k) ↦ (b_k, −a_k)`, constants to zero.
//! 3. **Coefficient realisation** (`hilbert_via_beltrami`): represent `V` as
//!    the boundary field of a symmetric coefficient `μ = ∂̄Ṽ`; the rotated
//!    coefficient `ν = −iμ` on H (+iμ below) has boundary field `J V` modulo
//!    quadratic polynomials. The sign follows from holomorphy: a function
//!    holomorphic in H has `Im = −J(Re)` on the axis, so the `+iμ` rotation
//!    represents `−J`.
//!
//! Transform outputs are normalized to zero mean in the angle chart (the
//! transform is defined modulo the trivial fields; constants are the part a
//! sampled representative can fix cheaply).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extension::FieldExtension;
use crate::numerics::gauss::gl32;
use crate::quaddiff::{integrate_poles, PoleQuadConfig, TwoSidedBeltrami};
use crate::vectorfield::{project_trivial_angle, Chart, SampledAngle, TrigPoly, VectorField};

/// Exact coefficient route: `(a_k, b_k) ↦ (b_k, −a_k)`, `a_0 ↦ 0`.
pub fn hilbert_fourier(p: &TrigPoly) -> TrigPoly {
    p.hilbert()
}

/// Principal-value route, sampled on `x_grid`; `pv_nodes` budgets the
/// quadrature nodes per sample (dyadic panels toward the singularity, up to
/// that many Gauss nodes). Output is mean-normalized over the grid.
pub fn hilbert_pv(v: &VectorField, x_grid: &[f64], pv_nodes: usize) -> Result<Vec<f64>> {
    if v.chart() != Chart::Angle {
        return Err(Error::domain(
            "the principal-value transform takes angle-chart fields",
        ));
    }
    if x_grid.is_empty() {
        return Err(Error::domain("empty sample grid"));
    }
    // dyadic panels [π 2^{-j-1}, π 2^{-j}]: the folded integrand
    // (V(x+s) − V(x−s)) cot(s/2) is smooth on each, and the geometric
    // grading resolves the kernel down to s ≈ π 2^{-J}; the remainder is
    // O(‖V'‖ 2^{-J}).
    let levels = 44usize;
    let rule = gl32();
    let splits = (pv_nodes / (levels * rule.nodes.len())).max(1);
    let mut out = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let mut acc = 0.0;
        let mut integrand = |s: f64| {
            let d = v.eval(x + s) - v.eval(x - s);
            if !d.is_finite() {
                return f64::NAN;
            }
            d / (0.5 * s).tan()
        };
        for j in 0..levels {
            let hi = PI * 0.5f64.powi(j as i32);
            let lo = 0.5 * hi;
            for k in 0..splits {
                let a = lo + (hi - lo) * k as f64 / splits as f64;
                let b = lo + (hi - lo) * (k + 1) as f64 / splits as f64;
                acc += rule.integrate(&mut integrand, a, b);
            }
        }
        if !acc.is_finite() {
            return Err(Error::Numerics(format!(
                "principal-value transform not finite at x = {x:.6}"
            )));
        }
        out.push(acc / (2.0 * PI));
    }
    let mean = out.iter().sum::<f64>() / out.len() as f64;
    for w in &mut out {
        *w -= mean;
    }
    Ok(out)
}

/// Principal-value route on a uniform grid, packaged as a sampled field
/// (handy for iterating the transform).
pub fn hilbert_pv_field(v: &VectorField, samples: usize, pv_nodes: usize) -> Result<VectorField> {
    let grid: Vec<f64> = (0..samples.max(8))
        .map(|j| 2.0 * PI * j as f64 / samples.max(8) as f64)
        .collect();
    let values = hilbert_pv(v, &grid, pv_nodes)?;
    Ok(VectorField::SampledAngle(SampledAngle::new(values)?))
}

/// A boundary field realised through a symmetric Beltrami coefficient.
pub struct RealizedField {
    /// μ = ∂̄Ṽ of the Beurling–Ahlfors extension of the normalized
    /// line-chart representative, reflected symmetrically.
    pub mu: TwoSidedBeltrami,
    /// The normalized line-chart representative itself (vanishes at 0 and 1,
    /// no quadratic growth).
    pub line_rep: VectorField,
}

/// Realise an angle-chart field through a symmetric coefficient: project out
/// the trivial part, transport to the line chart, extend, differentiate.
pub fn realize_coefficient(v: &VectorField) -> Result<RealizedField> {
    let projected = project_trivial_angle(v)?;
    let line = projected.to_line()?;
    let ext = Arc::new(FieldExtension::new(&line)?);
    // sampled essential-sup estimate for the declared bound
    let mut sup = 0.0f64;
    for i in 0..16 {
        for j in 1..=8 {
            let z = Complex64::new(-4.0 + 0.5 * i as f64, 0.4 * j as f64);
            sup = sup.max(ext.dbar(z)?.norm());
        }
    }
    let mu = TwoSidedBeltrami::symmetric_from_upper(ext.dbar_fn(), sup * 1.05);
    Ok(RealizedField { mu, line_rep: line })
}

/// Coefficient route: boundary field of the rotated coefficient
/// `ν = −iμ` on H, evaluated at line-chart points; equals `J V` modulo
/// quadratic polynomials, already normalized (vanishes at 0 and 1 with
/// sub-quadratic growth). The sup norm `‖ν‖∞ = ‖μ‖∞` is preserved exactly.
pub fn hilbert_via_beltrami(
    mu: &TwoSidedBeltrami,
    x_grid: &[f64],
    cfg: &PoleQuadConfig,
) -> Result<Vec<f64>> {
    if mu.symmetry != crate::quaddiff::BeltramiSymmetry::Symmetric {
        return Err(Error::domain(
            "the coefficient route needs a symmetric coefficient",
        ));
    }
    let upper = mu.upper_fn();
    let mut out = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if x == 0.0 || x == 1.0 {
            out.push(0.0);
            continue;
        }
        let zx = Complex64::new(x, 0.0);
        let up = upper.clone();
        let mut f = move |zeta: Complex64| {
            up(zeta) * zx * (zx - 1.0) / (zeta * (zeta - 1.0) * (zeta - zx))
        };
        let i_h = integrate_poles(&mut f, &[0.0, 1.0, x], &[], cfg)?;
        out.push(-2.0 / PI * i_h.value.im);
    }
    Ok(out)
}
