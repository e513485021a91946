//! Beurling–Ahlfors quasiconformal extension of line/circle homeomorphisms,
//! Beltrami coefficients and dilatation fields.
//!
//! For a boundary map `h` the extension is `H(x+iy) = F + iG` with
//!
//! ```text
//! F(x+iy) = (1/2y) ∫_{x−y}^{x+y} h(t) dt
//! G(x+iy) = (1/y) ( ∫_x^{x+y} h − ∫_{x−y}^x h )
//! ```
//!
//! (the doubled imaginary part, which extends the identity by the identity);
//! the un-doubled variant `G₁ = G/2` is retained behind a flag for the
//! `x + iy/2` regression. Everything reduces to the antiderivative
//! `P(x) = ∫_0^x h`, which is tabulated once per map, so a single extension
//! evaluation costs a few table lookups. The extension reflects across the
//! real axis by `H(z̄) = conj H(z)`, exactly.

use std::sync::Arc;

use num_complex::Complex64;

use crate::circlemap::{LineMap, MapKind};
use crate::error::{Error, Result};
use crate::numerics::adapt::adaptive_1d;
use crate::numerics::gauss::gl21;
use crate::numerics::spline::CumInt;
use crate::numerics::HalfPlaneGrid;

/// Boundary data prepared for fast extension evaluation.
///
/// The map is split as `h(t) = a + b t + r(t)` with an affine part handled
/// in closed form and a remainder whose antiderivative `R(x) = ∫_0^x r` is
/// tabulated. Working with the remainder keeps every Beurling–Ahlfors
/// combination a difference of *small* quantities, which preserves relative
/// precision down to very small heights.
#[derive(Clone)]
pub(crate) struct BaCore {
    h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    a: f64,
    b: f64,
    window: f64,
    /// Fixed-panel Gauss side integrals: slightly less adaptive near
    /// boundary-map kinks but smooth as a function of the evaluation point,
    /// which keeps outer adaptive quadratures from chasing branch noise.
    fixed_sides: bool,
    /// height below which table differences lose relative precision to the
    /// stored baseline; such evaluations integrate locally instead
    y_cut: f64,
    repr: AntiRepr,
}

#[derive(Clone)]
enum AntiRepr {
    /// Line maps: remainder table on a window, adaptive quadrature beyond.
    Window { table: CumInt },
    /// Periodic lifts h(t) = t + g(t): R(x) = m ⌊x⌋ + Q(frac x).
    Periodic { mean: f64, q: CumInt },
}

impl BaCore {
    pub(crate) fn build(map: &LineMap, window: f64, knots: usize) -> Result<BaCore> {
        let m = map.clone();
        let h: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |x| m.eval(x));
        BaCore::from_fn(h, map.kind(), window, knots)
    }

    pub(crate) fn from_fn(
        h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        kind: MapKind,
        window: f64,
        knots: usize,
    ) -> Result<BaCore> {
        match kind {
            MapKind::CircleLift => {
                let hh = h.clone();
                let mut g = move |t: f64| hh(t) - t;
                let q = CumInt::build(&mut g, 0.0, 1.0, knots.max(256))?;
                let mean = q.eval(1.0);
                Ok(BaCore {
                    h,
                    a: 0.0,
                    b: 1.0,
                    window: f64::INFINITY,
                    fixed_sides: false,
                    y_cut: 0.0,
                    repr: AntiRepr::Periodic { mean, q },
                })
            }
            MapKind::Line => {
                let a = h(0.0);
                let b = (h(window) - h(-window)) / (2.0 * window);
                let b = if b.is_finite() && b > 0.0 { b } else { 1.0 };
                let hh = h.clone();
                let mut rem = move |t: f64| hh(t) - a - b * t;
                let table = CumInt::build(&mut rem, -window, window, knots.max(256))?;
                // table lookups carry interpolation error O(knot⁴) plus a
                // baseline rounding ~ |R|_max · eps, and the Δ-combination
                // divides by y²; below y ≈ 2 local panels win
                let mut r_mag = 0.0f64;
                for k in 0..=16 {
                    let x = -window + 2.0 * window * k as f64 / 16.0;
                    r_mag = r_mag.max((table.eval(x) - table.eval(0.0)).abs());
                }
                let y_cut = (r_mag * f64::EPSILON / 1e-12).clamp(2.0, 4.0);
                Ok(BaCore {
                    h,
                    a,
                    b,
                    window,
                    fixed_sides: false,
                    y_cut,
                    repr: AntiRepr::Window { table },
                })
            }
        }
    }

    pub(crate) fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    /// R(x) = ∫_0^x r.
    fn big_r(&self, x: f64) -> f64 {
        match &self.repr {
            AntiRepr::Periodic { mean, q } => {
                let n = x.floor();
                q.eval(x - n) + mean * n
            }
            AntiRepr::Window { table } => {
                let (lo, hi) = table.domain();
                let base = table.eval(0.0);
                if x >= lo && x <= hi {
                    return table.eval(x) - base;
                }
                // slow path beyond the tabulated window
                let (edge, redge) = if x < lo {
                    (lo, table.eval(lo) - base)
                } else {
                    (hi, table.eval(hi) - base)
                };
                let (a, b) = (self.a, self.b);
                let h = &self.h;
                let mut f = move |t: f64| h(t) - a - b * t;
                redge + adaptive_1d(&mut f, edge, x, 1e-12, 1e-13, 44).value
            }
        }
    }

    /// Side integrals (∫_{x−y}^{x} h, ∫_x^{x+y} h) by local Gauss panels.
    /// Everything the extension needs is a combination of these, and local
    /// evaluation keeps full relative precision at small heights where
    /// antiderivative tables lose it to their global baseline.
    fn side_integrals(&self, x: f64, y: f64) -> (f64, f64) {
        if self.fixed_sides {
            let rule = gl21();
            let panels = ((y / 0.5).ceil() as usize).clamp(1, 8);
            let side = |a: f64, b: f64| {
                let mut acc = 0.0;
                for k in 0..panels {
                    let pa = a + (b - a) * k as f64 / panels as f64;
                    let pb = a + (b - a) * (k + 1) as f64 / panels as f64;
                    let mut f = |t: f64| (self.h)(t);
                    acc += rule.integrate(&mut f, pa, pb);
                }
                acc
            };
            (side(x - y, x), side(x, x + y))
        } else {
            let mut f = |t: f64| (self.h)(t);
            let lo = adaptive_1d(&mut f, x - y, x, 1e-15, 2e-13, 40).value;
            let hi = adaptive_1d(&mut f, x, x + y, 1e-15, 2e-13, 40).value;
            (lo, hi)
        }
    }

    /// Clone configured for quadrature duty (fixed-panel side integrals).
    pub(crate) fn with_fixed_sides(&self) -> BaCore {
        let mut c = self.clone();
        c.fixed_sides = true;
        c
    }

    fn use_local(&self, x: f64, y: f64) -> bool {
        match &self.repr {
            AntiRepr::Periodic { .. } => false,
            // small heights for precision, and anything whose stencil leaves
            // the tabulated window (the slow path beyond it loses the
            // remainder's relative accuracy on long intervals)
            AntiRepr::Window { .. } => y <= self.y_cut || x.abs() + y > self.window - 1.0,
        }
    }

    /// (F, Δ) with F = (P(x+y) − P(x−y))/(2y) and Δ = P(x+y) − 2P(x) + P(x−y).
    fn f_delta(&self, x: f64, y: f64) -> (f64, f64) {
        if self.use_local(x, y) {
            let (im, ip) = self.side_integrals(x, y);
            ((ip + im) / (2.0 * y), ip - im)
        } else {
            let (rp, rm, r0) = (self.big_r(x + y), self.big_r(x - y), self.big_r(x));
            let f = self.a + self.b * x + (rp - rm) / (2.0 * y);
            let delta = self.b * y * y + (rp - 2.0 * r0 + rm);
            (f, delta)
        }
    }

    /// H(x + iy) = F + iG for y > 0.
    pub(crate) fn eval(&self, x: f64, y: f64, doubled: bool) -> Complex64 {
        let (f, delta) = self.f_delta(x, y);
        let g = if doubled { delta / y } else { delta / (2.0 * y) };
        Complex64::new(f, g)
    }

    /// (H_z, H_z̄) for y > 0 from the closed-form derivatives of the
    /// defining integrals.
    pub(crate) fn partials(&self, x: f64, y: f64, doubled: bool) -> (Complex64, Complex64) {
        let (hp, hm, h0) = (self.h(x + y), self.h(x - y), self.h(x));
        let (f, delta) = self.f_delta(x, y);
        let f_x = (hp - hm) / (2.0 * y);
        let f_y = (hp + hm) / (2.0 * y) - f / y;
        let (g_x, g_y);
        if doubled {
            let g = delta / y;
            g_x = (hp - 2.0 * h0 + hm) / y;
            g_y = (hp - hm) / y - g / y;
        } else {
            let g1 = delta / (2.0 * y);
            g_x = (hp - 2.0 * h0 + hm) / (2.0 * y);
            g_y = (hp - hm) / (2.0 * y) - g1 / y;
        }
        let h_x = Complex64::new(f_x, g_x);
        let h_y = Complex64::new(f_y, g_y);
        let hz = 0.5 * (h_x - Complex64::i() * h_y);
        let hzb = 0.5 * (h_x + Complex64::i() * h_y);
        (hz, hzb)
    }
}

/// Evaluation backend of a plane extension.
enum ExtRepr {
    Ba(BaCore),
    Closed(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

/// Self-map of the upper half-plane extending a boundary homeomorphism,
/// reflected to the lower half-plane by `H(z̄) = conj H(z)`.
pub struct PlaneExtension {
    boundary: LineMap,
    repr: ExtRepr,
    doubled: bool,
}

/// Tabulation defaults: window half-width and knot count for line maps.
/// The window comfortably covers the far-field quadrature nodes of the
/// pairing integrals (tail cut 10³).
const BA_WINDOW: f64 = 2100.0;
const BA_KNOTS: usize = 1 << 18;

/// Beurling–Ahlfors extension with the doubled imaginary part (extends the
/// identity by the identity).
pub fn ba_extend(h: &LineMap) -> Result<PlaneExtension> {
    PlaneExtension::build(h, true)
}

/// The un-doubled variant `H₁ = F + iG₁`; extends the identity by
/// `x + iy/2`.
pub fn ba_extend_undoubled(h: &LineMap) -> Result<PlaneExtension> {
    PlaneExtension::build(h, false)
}

impl PlaneExtension {
    fn build(h: &LineMap, doubled: bool) -> Result<PlaneExtension> {
        let core = BaCore::build(h, BA_WINDOW, BA_KNOTS)?;
        Ok(PlaneExtension {
            boundary: h.clone(),
            repr: ExtRepr::Ba(core),
            doubled,
        })
    }

    /// Wrap an explicit self-map of the upper half-plane (test fixtures,
    /// closed-form extensions). The boundary map is evaluated as the y→0
    /// limit of the closure.
    pub fn from_closed(
        boundary: LineMap,
        f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    ) -> PlaneExtension {
        PlaneExtension {
            boundary,
            repr: ExtRepr::Closed(f),
            doubled: true,
        }
    }

    pub fn boundary(&self) -> &LineMap {
        &self.boundary
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled
    }

    /// Evaluate the extension anywhere in the plane. Points on the real
    /// axis take boundary values; the lower half-plane is the exact
    /// conjugate reflection.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.im > 0.0 {
            self.eval_upper(z)
        } else if z.im == 0.0 {
            Complex64::new(self.boundary.eval(z.re), 0.0)
        } else {
            self.eval_upper(z.conj()).conj()
        }
    }

    fn eval_upper(&self, z: Complex64) -> Complex64 {
        match &self.repr {
            ExtRepr::Closed(f) => f(z),
            ExtRepr::Ba(core) => core.eval(z.re, z.im, self.doubled),
        }
    }

    /// Complex partials (H_z, H_z̄) from the closed-form derivatives of the
    /// defining integrals (used by the quadrature-heavy callers; the
    /// published dilatation operations below use difference quotients and
    /// are cross-validated against this).
    pub(crate) fn partials_analytic(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let ExtRepr::Ba(core) = &self.repr else {
            return None;
        };
        if !(z.im > 0.0) {
            return None;
        }
        Some(core.partials(z.re, z.im, self.doubled))
    }

    /// Beltrami coefficient `μ = H_z̄ / H_z` by the fastest available route
    /// (analytic partials for Beurling–Ahlfors extensions, difference
    /// quotients otherwise).
    pub fn beltrami_at(&self, z: Complex64) -> Result<Complex64> {
        if let Some((hz, hzb)) = self.partials_analytic(z) {
            if hz.norm() <= hzb.norm() {
                return Err(Error::Invariant(format!(
                    "orientation failure at z = {z}: |H_z| <= |H_z̄|"
                )));
            }
            return Ok(hzb / hz);
        }
        let (hz, hzb) = self.partials_fd(z, None)?;
        if hz.norm() <= hzb.norm() {
            return Err(Error::Invariant(format!(
                "orientation failure at z = {z}: |H_z| <= |H_z̄|"
            )));
        }
        Ok(hzb / hz)
    }

    /// Beltrami coefficient `μ = H_z̄/H_z` as a quadrature-grade closure:
    /// smooth in the evaluation point (fixed-panel side integrals for the
    /// integral backend, difference quotients for closed-form backends) and
    /// zero off the open upper half-plane.
    pub fn quadrature_beltrami(&self) -> Box<dyn Fn(Complex64) -> Complex64 + Send + Sync> {
        match &self.repr {
            ExtRepr::Ba(core) => {
                let fast = core.with_fixed_sides();
                let doubled = self.doubled;
                Box::new(move |z: Complex64| {
                    if z.im <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let (hz, hzb) = fast.partials(z.re, z.im, doubled);
                    hzb / hz
                })
            }
            ExtRepr::Closed(f) => {
                let f = f.clone();
                Box::new(move |z: Complex64| {
                    if z.im <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let d = z.im / 100.0;
                    let hx = (f(z + d) - f(z - d)) / (2.0 * d);
                    let hy = (f(z + Complex64::new(0.0, d)) - f(z - Complex64::new(0.0, d)))
                        / (2.0 * d);
                    let hz = 0.5 * (hx - Complex64::i() * hy);
                    let hzb = 0.5 * (hx + Complex64::i() * hy);
                    hzb / hz
                })
            }
        }
    }

    /// Central difference quotients with Richardson extrapolation over two
    /// step sizes. Step defaults to Im(z)/100, tied to the node height so
    /// the stencil never crosses the real axis.
    pub fn partials_fd(
        &self,
        z: Complex64,
        step: Option<f64>,
    ) -> Result<(Complex64, Complex64)> {
        if !(z.im > 0.0) {
            return Err(Error::domain("dilatation stencil needs Im z > 0"));
        }
        let d = step.unwrap_or(z.im / 100.0);
        if !(d > 0.0 && d < z.im) {
            return Err(Error::domain("step must satisfy 0 < step ≪ Im z"));
        }
        let stencil = |delta: f64| {
            let hx = (self.eval(z + delta) - self.eval(z - delta)) / (2.0 * delta);
            let hy = (self.eval(z + Complex64::new(0.0, delta))
                - self.eval(z - Complex64::new(0.0, delta)))
                / (2.0 * delta);
            let hz = 0.5 * (hx - Complex64::i() * hy);
            let hzb = 0.5 * (hx + Complex64::i() * hy);
            (hz, hzb)
        };
        let (c1, c1b) = stencil(d);
        let (c2, c2b) = stencil(0.5 * d);
        // Richardson for O(d²) central differences
        let hz = (4.0 * c2 - c1) / 3.0;
        let hzb = (4.0 * c2b - c1b) / 3.0;
        Ok((hz, hzb))
    }

    /// Local dilatation `K_z = (|H_z| + |H_z̄|)/(|H_z| − |H_z̄|)`.
    pub fn local_dilatation(&self, z: Complex64, step: Option<f64>) -> Result<f64> {
        let (hz, hzb) = self.partials_fd(z, step)?;
        let (a, b) = (hz.norm(), hzb.norm());
        if a <= b {
            return Err(Error::Invariant(format!(
                "orientation failure at z = {z}: |H_z| = {a:.3e} <= |H_z̄| = {b:.3e}"
            )));
        }
        Ok((a + b) / (a - b))
    }

    /// Extension of the underlying circle map to the punctured unit disc via
    /// the universal cover `z ↦ e^{2πiz}`, normalized to preserve 0.
    pub fn disc_map(&self, w: Complex64) -> Result<Complex64> {
        if !self.boundary.is_circle() {
            return Err(Error::domain("disc extension needs a circle-type map"));
        }
        let r = w.norm();
        if r >= 1.0 {
            return Err(Error::domain("disc extension is defined for |w| < 1"));
        }
        if r == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let z = Complex64::new(w.im.atan2(w.re) / (2.0 * std::f64::consts::PI), {
            -r.ln() / (2.0 * std::f64::consts::PI)
        });
        let hz = self.eval(z);
        Ok((Complex64::new(0.0, 2.0 * std::f64::consts::PI) * hz).exp())
    }
}

/// Beurling–Ahlfors extension of a line-chart scalar field `V̂`, exposing
/// the complex extension `Ṽ = W₁ + iW₂` and its `∂̄` coefficient — the
/// tangent-level analogue of a map extension, used by the pairing and the
/// coefficient realisation of the Hilbert transform.
pub struct FieldExtension {
    core: BaCore,
    doubled: bool,
}

impl FieldExtension {
    /// Doubled-imaginary-part extension of a line-chart field.
    pub fn new(v: &crate::vectorfield::VectorField) -> Result<FieldExtension> {
        FieldExtension::with_variant(v, true)
    }

    /// The un-doubled variant (a second admissible extension of the same
    /// boundary data; used for extension-independence checks).
    pub fn undoubled(v: &crate::vectorfield::VectorField) -> Result<FieldExtension> {
        FieldExtension::with_variant(v, false)
    }

    fn with_variant(v: &crate::vectorfield::VectorField, doubled: bool) -> Result<FieldExtension> {
        if v.chart() != crate::vectorfield::Chart::Line {
            return Err(Error::domain(
                "field extensions take line-chart boundary data",
            ));
        }
        let vv = v.clone();
        let f: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |x| vv.eval(x));
        let core = BaCore::from_fn(f, MapKind::Line, BA_WINDOW, BA_KNOTS)?.with_fixed_sides();
        Ok(FieldExtension { core, doubled })
    }

    /// Ṽ(z) for Im z > 0.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::domain("field extension lives on Im z > 0"));
        }
        Ok(self.core.eval(z.re, z.im, self.doubled))
    }

    /// `∂̄Ṽ(z)` from the closed-form derivatives of the defining integrals.
    pub fn dbar(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::domain("field extension lives on Im z > 0"));
        }
        Ok(self.core.partials(z.re, z.im, self.doubled).1)
    }

    /// The `∂̄` coefficient as a shareable closure on H.
    pub fn dbar_fn(self: Arc<Self>) -> Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> {
        Arc::new(move |z: Complex64| {
            if z.im > 0.0 {
                self.core.partials(z.re, z.im, self.doubled).1
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// Per-node Beltrami/dilatation data over an explicit half-plane grid.
#[derive(Debug, Clone)]
pub struct DilatationField {
    /// Rows (x, y, μ, K_z) in grid iteration order.
    pub nodes: Vec<(f64, f64, Complex64, f64)>,
    /// Max of K_z over the grid — a lower bound for ess sup K.
    pub k_max: f64,
}

impl DilatationField {
    /// CSV rows `x,y,re_mu,im_mu,k` for plotting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,re_mu,im_mu,k\n");
        for (x, y, mu, k) in &self.nodes {
            s.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                x, y, mu.re, mu.im, k
            ));
        }
        s
    }
}

/// Sample `μ = H_z̄/H_z` (difference quotients, Richardson extrapolated) at
/// every node of the grid. Errors identify the first node where `|μ| ≥ 1`.
pub fn beltrami_of(ext: &PlaneExtension, grid: &HalfPlaneGrid) -> Result<DilatationField> {
    let mut nodes = Vec::new();
    let mut k_max = 1.0f64;
    grid.for_each_node(0, |x, y, _w| {
        let z = Complex64::new(x, y);
        let (hz, hzb) = ext.partials_fd(z, None)?;
        let mu = hzb / hz;
        if !(mu.norm() < 1.0) {
            return Err(Error::Invariant(format!(
                "|mu| = {} >= 1 at node z = {x} + {y}i",
                mu.norm()
            )));
        }
        let k = (1.0 + mu.norm()) / (1.0 - mu.norm());
        k_max = k_max.max(k);
        nodes.push((x, y, mu, k));
        Ok(())
    })?;
    Ok(DilatationField { nodes, k_max })
}

/// Grid maximum of the local dilatation with a refinement estimate.
#[derive(Debug, Clone, Copy)]
pub struct MaxDilatation {
    /// Largest K_z seen (coarse and refined nodes pooled); a lower bound
    /// for the essential supremum.
    pub value: f64,
    /// |max(refined) − max(coarse)| — stabilisation indicator.
    pub refinement_gap: f64,
}

pub fn max_dilatation(ext: &PlaneExtension, grid: &HalfPlaneGrid) -> Result<MaxDilatation> {
    let mut level_max = [1.0f64, 1.0f64];
    for (slot, level) in [(0usize, 0u32), (1usize, 1u32)] {
        let mut m = 1.0f64;
        grid.for_each_node(level, |x, y, _w| {
            let k = ext.local_dilatation(Complex64::new(x, y), None)?;
            m = m.max(k);
            Ok(())
        })?;
        level_max[slot] = m;
    }
    Ok(MaxDilatation {
        value: level_max[0].max(level_max[1]),
        refinement_gap: (level_max[1] - level_max[0]).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circlemap::{qs_constant, LineMap};
    use approx::assert_abs_diff_eq;

    fn small_grid() -> HalfPlaneGrid {
        HalfPlaneGrid::new(2.0, 5e-3, 2.0, 6, 5).unwrap()
    }

    #[test]
    fn identity_extends_to_identity() {
        let ext = ba_extend(&LineMap::identity()).unwrap();
        for i in 1..=10 {
            for j in 1..=10 {
                let z = Complex64::new(-1.0 + 0.2 * i as f64, 0.02 + 0.2 * j as f64);
                assert!((ext.eval(z) - z).norm() < 1e-12, "H({z}) = {}", ext.eval(z));
            }
        }
    }

    #[test]
    fn undoubled_identity_is_half_height() {
        let ext = ba_extend_undoubled(&LineMap::identity()).unwrap();
        for (x, y) in [(0.0, 1.0), (-2.3, 0.4), (5.0, 2.0)] {
            let h = ext.eval(Complex64::new(x, y));
            assert_abs_diff_eq!(h.re, x, epsilon = 1e-13);
            assert_abs_diff_eq!(h.im, y / 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn dilation_extends_linearly() {
        let h = LineMap::affine(2.0, 0.0).unwrap();
        let ext = ba_extend(&h).unwrap();
        for (x, y) in [(0.3, 0.7), (-1.0, 0.05), (2.0, 1.5)] {
            let z = Complex64::new(x, y);
            assert!((ext.eval(z) - 2.0 * z).norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_rule_is_exact() {
        let h = LineMap::sine_lift(0.4).unwrap();
        let ext = ba_extend(&h).unwrap();
        for (x, y) in [(0.2, 0.3), (-1.4, 1.1)] {
            let z = Complex64::new(x, y);
            assert_eq!(ext.eval(z.conj()), ext.eval(z).conj());
        }
    }

    #[test]
    fn boundary_values_match_the_map() {
        let h = LineMap::sine_lift(0.35).unwrap();
        let ext = ba_extend(&h).unwrap();
        for i in 0..12 {
            let x = i as f64 / 12.0;
            let near = ext.eval(Complex64::new(x, 1e-6));
            assert_abs_diff_eq!(near.re, h.eval(x), epsilon = 1e-4);
            assert!(near.im.abs() < 1e-4);
            assert_eq!(ext.eval(Complex64::new(x, 0.0)).re, h.eval(x));
        }
    }

    #[test]
    fn local_dilatation_of_identity_is_one() {
        let ext = ba_extend(&LineMap::identity()).unwrap();
        let k = ext.local_dilatation(Complex64::new(0.4, 0.8), None).unwrap();
        assert_abs_diff_eq!(k, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn affine_stretch_recovers_k() {
        // H(x+iy) = x + iKy has H_z = (1+K)/2, H_z̄ = (1−K)/2, K_z = K.
        let k0 = 3.5;
        let f = Arc::new(move |z: Complex64| Complex64::new(z.re, k0 * z.im));
        let ext = PlaneExtension::from_closed(LineMap::identity(), f);
        let z = Complex64::new(0.3, 0.9);
        assert_abs_diff_eq!(ext.local_dilatation(z, None).unwrap(), k0, epsilon = 1e-9);
        let (hz, hzb) = ext.partials_fd(z, None).unwrap();
        let mu = hzb / hz;
        assert_abs_diff_eq!(mu.re, (1.0 - k0) / (1.0 + k0), epsilon = 1e-9);
        assert_abs_diff_eq!(mu.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn analytic_and_fd_partials_agree() {
        let h = LineMap::sine_lift(0.45).unwrap();
        let ext = ba_extend(&h).unwrap();
        for (x, y) in [(0.1, 0.4), (0.7, 0.05), (0.33, 1.3)] {
            let z = Complex64::new(x, y);
            let (az, azb) = ext.partials_analytic(z).unwrap();
            let (fz, fzb) = ext.partials_fd(z, None).unwrap();
            assert!((az - fz).norm() < 1e-7, "H_z mismatch at {z}");
            assert!((azb - fzb).norm() < 1e-7, "H_z̄ mismatch at {z}");
        }
    }

    #[test]
    fn beltrami_field_of_identity_vanishes() {
        // μ ≡ 0 up to difference-quotient noise (step = y/100 amplifies
        // rounding of H by ~1/step).
        let ext = ba_extend(&LineMap::identity()).unwrap();
        let field = beltrami_of(&ext, &small_grid()).unwrap();
        for (_, _, mu, k) in &field.nodes {
            assert!(mu.norm() < 1e-7, "mu = {mu}");
            assert!((k - 1.0).abs() < 1e-6);
        }
        assert_abs_diff_eq!(field.k_max, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn beltrami_field_of_sqrt_map_stays_inside_disc() {
        let h = LineMap::power(0.5).unwrap();
        let ext = ba_extend(&h).unwrap();
        let field = beltrami_of(&ext, &small_grid()).unwrap();
        let sup = field
            .nodes
            .iter()
            .map(|(_, _, mu, _)| mu.norm())
            .fold(0.0f64, f64::max);
        assert!(sup < 1.0, "sup |mu| = {sup}");
        assert!(sup > 0.1, "sqrt map is genuinely non-conformal, sup = {sup}");
        // k-consistency is structural: K = (1+|mu|)/(1-|mu|) per node
        for (_, _, mu, k) in &field.nodes {
            assert_abs_diff_eq!(*k, (1.0 + mu.norm()) / (1.0 - mu.norm()), epsilon = 1e-12);
        }
    }

    #[test]
    fn max_dilatation_fixtures() {
        let ext = ba_extend(&LineMap::identity()).unwrap();
        let m = max_dilatation(&ext, &small_grid()).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);

        let k0 = 2.25;
        let f = Arc::new(move |z: Complex64| Complex64::new(z.re, k0 * z.im));
        let stretch = PlaneExtension::from_closed(LineMap::identity(), f);
        let m = max_dilatation(&stretch, &small_grid()).unwrap();
        assert_abs_diff_eq!(m.value, k0, epsilon = 1e-8);

        let corpus = [
            LineMap::sine_lift(0.3).unwrap(),
            LineMap::power(0.5).unwrap(),
            LineMap::power(3.0).unwrap(),
        ];
        for h in &corpus {
            let ext = ba_extend(h).unwrap();
            let m = max_dilatation(&ext, &small_grid()).unwrap();
            assert!(m.value.is_finite() && m.value >= 1.0);
        }
    }

    #[test]
    fn periodic_lift_extension_is_periodic() {
        let h = LineMap::sine_lift(0.5).unwrap();
        let ext = ba_extend(&h).unwrap();
        for (x, y) in [(0.0, 0.2), (0.37, 0.9), (0.8, 2.0)] {
            let z = Complex64::new(x, y);
            let d = ext.eval(z + 1.0) - ext.eval(z) - Complex64::new(1.0, 0.0);
            assert!(d.norm() <= 1e-9, "periodicity defect {} at {z}", d.norm());
        }
    }

    #[test]
    fn affine_naturality() {
        // ex(A ∘ h ∘ B) = A ∘ ex(h) ∘ B for real affine A, B.
        let h = LineMap::power(0.5).unwrap();
        let a = LineMap::affine(1.7, -0.4).unwrap();
        let b = LineMap::affine(0.6, 0.9).unwrap();
        let lhs = ba_extend(&a.compose(&h.compose(&b).unwrap()).unwrap()).unwrap();
        let rhs = ba_extend(&h).unwrap();
        for (x, y) in [(0.1, 0.3), (-0.8, 1.0), (1.4, 0.07)] {
            let z = Complex64::new(x, y);
            let bz = Complex64::new(0.6 * z.re + 0.9, 0.6 * z.im);
            let want = 1.7 * rhs.eval(bz) - 0.4;
            let got = lhs.eval(z);
            assert!(
                (got - want).norm() <= 1e-9,
                "naturality defect {} at {z}",
                (got - want).norm()
            );
        }
    }

    #[test]
    fn asymptotic_property_near_the_axis() {
        // Smaller ratio distortion forces dilatation closer to 1 on a thin strip.
        let mut last_excess = f64::INFINITY;
        for c in [0.3, 0.1, 0.03] {
            let h = LineMap::sine_lift(c).unwrap();
            let ext = ba_extend(&h).unwrap();
            let mut worst: f64 = 1.0;
            for i in 0..12 {
                let x = i as f64 / 12.0;
                for y in [0.01, 0.02, 0.04] {
                    worst = worst.max(ext.local_dilatation(Complex64::new(x, y), None).unwrap());
                }
            }
            let excess = worst - 1.0;
            assert!(
                excess < last_excess,
                "K excess should shrink with the distortion: {excess} vs {last_excess}"
            );
            last_excess = excess;
        }
        assert!(last_excess < 0.05);
    }

    #[test]
    fn disc_wrapper_fixes_zero_and_circle() {
        let h = LineMap::sine_lift(0.3).unwrap();
        let ext = ba_extend(&h).unwrap();
        assert_eq!(
            ext.disc_map(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // interior goes to interior
        let w = Complex64::new(0.3, 0.4);
        let img = ext.disc_map(w).unwrap();
        assert!(img.norm() < 1.0);
        assert!(ext.disc_map(Complex64::new(1.0, 0.0)).is_err());
        // line-type maps are rejected
        let line = ba_extend(&LineMap::power(2.0).unwrap()).unwrap();
        assert!(line.disc_map(w).is_err());
    }

    #[test]
    fn extension_of_qs_map_has_bounded_mu_near_axis() {
        let h = LineMap::power(0.5).unwrap();
        let (xs, ts): (Vec<f64>, Vec<f64>) = (
            (-12..=12).map(|i| i as f64 * 0.25).collect(),
            (1..=8).map(|k| 0.5f64.powi(k)).collect(),
        );
        assert!(qs_constant(&h, &xs, &ts).unwrap().is_finite());
        let ext = ba_extend(&h).unwrap();
        for y in [1e-3, 1e-2, 0.1] {
            let mu = ext.beltrami_at(Complex64::new(0.01, y)).unwrap();
            assert!(mu.norm() < 1.0);
        }
    }
}
