//! Integrable holomorphic quadratic differentials with simple real poles,
//! the boundary pairing with vector fields, the residue identity, and the
//! coefficient representation maps.
//!
//! Differentials are rational, `φ(z) = p(z) / ∏ (z − x_j)` with real
//! coefficients and `deg p ≤ n − 3`, so `φ` is real on the axis, integrable
//! across the simple poles, and `O(|z|^{-3})` at infinity. Two constructions
//! are provided: the basis combinations `Σ λ_j φ_{x_j}` with
//! `φ_x(z) = x(x−1)/(z(z−1)(z−x))`, and general numerator/pole data
//! (which covers the degenerating family `2t/((z−x+t)(z−x)(z−x−t))`).
//!
//! The pairing of a boundary field `V` with `φ` goes through any extension
//! `Ṽ` with bounded `∂̄Ṽ = μ` and is normalized so that Green's formula
//! reads `(V, φ) = (π/2) Σ_p Res_p(φ) V(p)`; with the standard counter-
//! clockwise orientation of ∂H this makes `(V, φ) = −Re ∬_H μ φ`.

mod polequad;

pub use polequad::{integrate_poles, PoleQuadConfig};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::adapt::QuadOut;
use crate::vectorfield::{Chart, VectorField};

/// Sign convention of the quadrature route relative to `Re ∬_H μφ`; pinned
/// by the residue identity (see the module docs).
pub(crate) const PAIRING_SIGN: f64 = -1.0;

// ---------------------------------------------------------------------------
// Dense real polynomials (small degrees only)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// coefficients, low order first; empty = zero polynomial
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Poly {
        Poly::new(vec![c])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add_scaled(&self, other: &Poly, s: f64) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeffs.get(i).copied().unwrap_or(0.0)
                + s * other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Poly::new(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::new(vec![]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// ∏ (z − r) over the given roots.
    pub fn from_roots(roots: &[f64]) -> Poly {
        let mut p = Poly::constant(1.0);
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, 1.0]));
        }
        p
    }
}

// ---------------------------------------------------------------------------
// Rational quadratic differentials
// ---------------------------------------------------------------------------

/// Integrable holomorphic quadratic differential `p(z)/∏(z − x_j) · dz²`
/// with simple real poles, real on the real axis.
#[derive(Debug, Clone)]
pub struct RationalQD {
    poles: Vec<f64>,
    numer: Poly,
    /// present when built as a basis combination Σ λ_j φ_{x_j}
    basis: Option<Vec<(f64, f64)>>,
}

impl RationalQD {
    /// General form from distinct real poles and a real numerator with
    /// `deg p ≤ n − 3` (the integrability/decay constraint).
    pub fn general(poles: Vec<f64>, numer: Poly) -> Result<RationalQD> {
        let mut ps = poles;
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in ps.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::domain("poles must be distinct"));
            }
        }
        if ps.len() < 3 {
            return Err(Error::domain(
                "integrability needs at least three simple poles",
            ));
        }
        if let Some(d) = numer.degree() {
            if d + 3 > ps.len() {
                return Err(Error::domain(format!(
                    "numerator degree {d} too large for {} poles (needs deg ≤ n − 3)",
                    ps.len()
                )));
            }
        }
        Ok(RationalQD {
            poles: ps,
            numer,
            basis: None,
        })
    }

    /// The basis differential `φ_x(z) = x(x−1)/(z(z−1)(z−x))`, `x ∉ {0, 1}`.
    pub fn basis(x: f64) -> Result<RationalQD> {
        RationalQD::basis_combination(&[(x, 1.0)])
    }

    /// A finite combination `Σ λ_j φ_{x_j}` with distinct `x_j ∉ {0, 1}`.
    pub fn basis_combination(terms: &[(f64, f64)]) -> Result<RationalQD> {
        if terms.is_empty() {
            return Err(Error::domain("empty basis combination"));
        }
        let mut xs: Vec<f64> = terms.iter().map(|t| t.0).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::domain("basis abscissae must be distinct"));
            }
        }
        if xs.iter().any(|&x| x == 0.0 || x == 1.0) {
            return Err(Error::domain("basis abscissae must avoid 0 and 1"));
        }
        let mut poles = xs.clone();
        poles.push(0.0);
        poles.push(1.0);
        poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // numerator: Σ λ_j x_j(x_j−1) ∏_{p ≠ 0,1,x_j}(z − p)
        let mut numer = Poly::new(vec![]);
        for &(x, lambda) in terms {
            let others: Vec<f64> = poles
                .iter()
                .copied()
                .filter(|&p| p != 0.0 && p != 1.0 && p != x)
                .collect();
            let term = Poly::from_roots(&others);
            numer = numer.add_scaled(&term, lambda * x * (x - 1.0));
        }
        let mut sorted_terms: Vec<(f64, f64)> = terms.to_vec();
        sorted_terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(RationalQD {
            poles,
            numer,
            basis: Some(sorted_terms),
        })
    }

    /// The degenerating family member
    /// `φ = 2t / ((z − (x−t))(z − x)(z − (x+t)))`, `t > 0`.
    pub fn degenerating(x: f64, t: f64) -> Result<RationalQD> {
        if !(t > 0.0) {
            return Err(Error::domain("degenerating member needs t > 0"));
        }
        RationalQD::general(vec![x - t, x, x + t], Poly::constant(2.0 * t))
    }

    /// Simple-fraction data `Σ m_j/(z − p_j)`; integrability forces the
    /// moment conditions `Σ m = Σ m p = 0` (cubic decay). The third moment
    /// `Σ m p²` is free — it is twice the cubic decay amplitude.
    pub fn from_simple_fractions(terms: &[(f64, f64)]) -> Result<RationalQD> {
        let scale: f64 = terms.iter().map(|t| t.1.abs()).sum::<f64>().max(1e-300);
        let m0: f64 = terms.iter().map(|t| t.1).sum();
        let m1: f64 = terms.iter().map(|t| t.1 * t.0).sum();
        let spread = terms
            .iter()
            .map(|t| t.0.abs().max(1.0))
            .fold(1.0f64, f64::max);
        if m0.abs() > 1e-9 * scale || m1.abs() > 1e-9 * scale * spread {
            return Err(Error::domain(
                "simple-fraction form violates the decay moment conditions Σm = Σmp = 0",
            ));
        }
        let poles: Vec<f64> = terms.iter().map(|t| t.0).collect();
        let mut numer = Poly::new(vec![]);
        for &(p, m) in terms {
            let others: Vec<f64> = poles.iter().copied().filter(|&q| q != p).collect();
            numer = numer.add_scaled(&Poly::from_roots(&others), m);
        }
        // the two moment conditions kill the top two coefficients exactly;
        // clear the rounding residue so the degree check passes
        let n = poles.len();
        let mut coeffs = numer.coeffs.clone();
        coeffs.resize(n, 0.0);
        coeffs[n - 1] = 0.0;
        if n >= 2 {
            coeffs[n - 2] = 0.0;
        }
        RationalQD::general(poles, Poly::new(coeffs))
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn basis_terms(&self) -> Option<&[(f64, f64)]> {
        self.basis.as_deref()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut den = Complex64::new(1.0, 0.0);
        for &p in &self.poles {
            den *= z - p;
        }
        self.numer.eval(z) / den
    }

    /// Residue at the k-th pole.
    pub fn residue(&self, k: usize) -> f64 {
        let p = self.poles[k];
        let mut den = 1.0;
        for (i, &q) in self.poles.iter().enumerate() {
            if i != k {
                den *= p - q;
            }
        }
        self.numer.eval_real(p) / den
    }

    /// Coefficient of `z^{-3}` at infinity (the decay amplitude).
    pub fn cubic_decay_coeff(&self) -> f64 {
        let n = self.poles.len();
        if self.numer.degree() == Some(n - 3) {
            self.numer.coeffs[n - 3]
        } else {
            0.0
        }
    }

    pub fn scale(&self, s: f64) -> RationalQD {
        RationalQD {
            poles: self.poles.clone(),
            numer: Poly::new(self.numer.coeffs.iter().map(|c| c * s).collect()),
            basis: self
                .basis
                .as_ref()
                .map(|b| b.iter().map(|&(x, l)| (x, l * s)).collect()),
        }
    }

    /// Serialize as `poles; weights-or-numerator` lists.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.basis {
            Some(terms) => {
                s.push_str("# form=basis\n");
                for (x, l) in terms {
                    s.push_str(&format!("{:.17e} {:.17e}\n", x, l));
                }
            }
            None => {
                s.push_str("# form=general\n");
                s.push_str("poles");
                for p in &self.poles {
                    s.push_str(&format!(" {:.17e}", p));
                }
                s.push('\n');
                s.push_str("numer");
                for c in &self.numer.coeffs {
                    s.push_str(&format!(" {:.17e}", c));
                }
                s.push('\n');
            }
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Two-sided Beltrami coefficients
// ---------------------------------------------------------------------------

/// Declared structure of a two-sided coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeltramiSymmetry {
    /// μ(z̄) = conj μ(z)
    Symmetric,
    /// vanishes on the lower half-plane
    ZeroBelow,
    AdHoc,
}

pub type CoeffFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Essentially bounded coefficient field on both half-planes.
#[derive(Clone)]
pub struct TwoSidedBeltrami {
    upper: CoeffFn,
    lower: CoeffFn,
    pub sup_bound: f64,
    pub symmetry: BeltramiSymmetry,
}

impl TwoSidedBeltrami {
    /// Extend an upper-half-plane coefficient by the symmetric reflection
    /// `μ(z̄) = conj μ(z)`.
    pub fn symmetric_from_upper(upper: CoeffFn, sup_bound: f64) -> TwoSidedBeltrami {
        let up = upper.clone();
        let lower: CoeffFn = Arc::new(move |z: Complex64| up(z.conj()).conj());
        TwoSidedBeltrami {
            upper,
            lower,
            sup_bound,
            symmetry: BeltramiSymmetry::Symmetric,
        }
    }

    /// Coefficient supported on the upper half-plane only.
    pub fn zero_below(upper: CoeffFn, sup_bound: f64) -> TwoSidedBeltrami {
        TwoSidedBeltrami {
            upper,
            lower: Arc::new(|_| Complex64::new(0.0, 0.0)),
            sup_bound,
            symmetry: BeltramiSymmetry::ZeroBelow,
        }
    }

    pub fn ad_hoc(upper: CoeffFn, lower: CoeffFn, sup_bound: f64) -> TwoSidedBeltrami {
        TwoSidedBeltrami {
            upper,
            lower,
            sup_bound,
            symmetry: BeltramiSymmetry::AdHoc,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.im > 0.0 {
            (self.upper)(z)
        } else if z.im < 0.0 {
            (self.lower)(z)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn upper_fn(&self) -> CoeffFn {
        self.upper.clone()
    }

    pub fn lower_fn(&self) -> CoeffFn {
        self.lower.clone()
    }

    /// Worst defect of the declared symmetry over a reflection grid, plus
    /// the worst excess over the declared sup bound.
    pub fn validate(&self, samples: usize) -> (f64, f64) {
        let mut sym_defect = 0.0f64;
        let mut bound_excess = 0.0f64;
        let n = samples.max(8);
        for i in 0..n {
            for j in 1..=n {
                let z = Complex64::new(
                    -4.0 + 8.0 * i as f64 / n as f64,
                    4.0 * j as f64 / n as f64,
                );
                let up = self.eval(z);
                let dn = self.eval(z.conj());
                match self.symmetry {
                    BeltramiSymmetry::Symmetric => {
                        sym_defect = sym_defect.max((dn - up.conj()).norm());
                    }
                    BeltramiSymmetry::ZeroBelow => {
                        sym_defect = sym_defect.max(dn.norm());
                    }
                    BeltramiSymmetry::AdHoc => {}
                }
                bound_excess = bound_excess
                    .max(up.norm() - self.sup_bound)
                    .max(dn.norm() - self.sup_bound);
            }
        }
        (sym_defect, bound_excess.max(0.0))
    }
}

// ---------------------------------------------------------------------------
// Norms and pairings
// ---------------------------------------------------------------------------

/// `‖φ‖ = ∬_H |φ| dx dy` by pole-adapted quadrature.
pub fn qd_norm(phi: &RationalQD, cfg: &PoleQuadConfig) -> Result<QuadOut<f64>> {
    let mut f = |z: Complex64| phi.eval(z).norm();
    integrate_poles(&mut f, &phi.poles, &[], cfg)
}

/// Raw quadrature value `∬_H μφ` (complex).
pub fn mu_phi_integral(
    mu: &mut impl FnMut(Complex64) -> Complex64,
    phi: &RationalQD,
    cfg: &PoleQuadConfig,
) -> Result<QuadOut<Complex64>> {
    let mut f = |z: Complex64| mu(z) * phi.eval(z);
    integrate_poles(&mut f, &phi.poles, &[], cfg)
}

/// The pairing `(V, φ)` evaluated through an extension coefficient
/// `μ = ∂̄Ṽ`: normalized so that Green's formula gives
/// `(V,φ) = (π/2) Σ Res_p(φ) V(p)`.
pub fn pairing_integral(
    mu: &mut impl FnMut(Complex64) -> Complex64,
    phi: &RationalQD,
    cfg: &PoleQuadConfig,
) -> Result<QuadOut<f64>> {
    let out = mu_phi_integral(mu, phi, cfg)?;
    Ok(QuadOut {
        value: PAIRING_SIGN * out.value.re,
        err: out.err,
        evals: out.evals,
        converged: out.converged,
    })
}

/// Green's-formula route: `(V, φ) = (π/2) Σ_p Res_p(φ) V(p)` for a
/// line-chart field vanishing at 0 and 1 with `o(u²)` growth.
pub fn pairing_residue(v: &VectorField, phi: &RationalQD) -> Result<f64> {
    if v.chart() != Chart::Line {
        return Err(Error::domain(
            "the residue pairing takes a line-chart field",
        ));
    }
    let (v0, v1) = (v.eval(0.0), v.eval(1.0));
    if v0.abs() > 1e-8 || v1.abs() > 1e-8 {
        return Err(Error::domain(format!(
            "field must vanish at 0 and 1 (got V(0) = {v0:.3e}, V(1) = {v1:.3e}); apply the quadratic-polynomial projection first"
        )));
    }
    let mut acc = 0.0;
    for k in 0..phi.poles.len() {
        acc += phi.residue(k) * v.eval(phi.poles[k]);
    }
    Ok(std::f64::consts::FRAC_PI_2 * acc)
}

// ---------------------------------------------------------------------------
// Representation maps
// ---------------------------------------------------------------------------

/// Normalized Cauchy kernel `z(z−1) / (ζ(ζ−1)(ζ−z))`, the kernel of the
/// coefficient-to-field map (vanishes at z ∈ {0, 1}, O(|ζ|^{-3}) tails).
fn normalized_kernel(zeta: Complex64, z: Complex64) -> Complex64 {
    z * (z - 1.0) / (zeta * (zeta - 1.0) * (zeta - z))
}

/// Boundary value `V_μ(x)` of the coefficient field
/// `V_μ(z) = −(1/π) ∬_ℂ μ̂(ζ) z(z−1)/(ζ(ζ−1)(ζ−z)) dξ dη`
/// for a symmetric coefficient; for real `x` the two half-plane
/// contributions fold into `−(2/π) Re ∬_H`.
pub fn v_mu_boundary(
    mu: &TwoSidedBeltrami,
    x: f64,
    cfg: &PoleQuadConfig,
) -> Result<QuadOut<f64>> {
    if mu.symmetry != BeltramiSymmetry::Symmetric {
        return Err(Error::domain("the boundary field needs a symmetric coefficient"));
    }
    if x == 0.0 || x == 1.0 {
        return Err(Error::domain("V_μ is normalized to vanish at 0 and 1"));
    }
    let zx = Complex64::new(x, 0.0);
    let upper = mu.upper_fn();
    let mut f = move |zeta: Complex64| upper(zeta) * normalized_kernel(zeta, zx);
    let out = integrate_poles(&mut f, &[0.0, 1.0, x], &[], cfg)?;
    Ok(QuadOut {
        value: -2.0 / std::f64::consts::PI * out.value.re,
        err: 2.0 / std::f64::consts::PI * out.err,
        evals: out.evals,
        converged: out.converged,
    })
}

/// Interior value `V_μ(z)`; needs an interior-pole box when `z ∈ H`.
pub fn v_mu(mu: &TwoSidedBeltrami, z: Complex64, cfg: &PoleQuadConfig) -> Result<QuadOut<Complex64>> {
    if mu.symmetry != BeltramiSymmetry::Symmetric {
        return Err(Error::domain("the coefficient field needs a symmetric coefficient"));
    }
    if z.im == 0.0 {
        let b = v_mu_boundary(mu, z.re, cfg)?;
        return Ok(QuadOut {
            value: Complex64::new(b.value, 0.0),
            err: b.err,
            evals: b.evals,
            converged: b.converged,
        });
    }
    let (z_up, conj_out) = if z.im > 0.0 { (z, false) } else { (z.conj(), true) };
    // I_H(w) = ∬_H μ k(·, w); V(z) = −(1/π)(I_H(z) + conj(I_H(z̄)))
    let upper = mu.upper_fn();
    let mut f1 = {
        let upper = upper.clone();
        move |zeta: Complex64| upper(zeta) * normalized_kernel(zeta, z_up)
    };
    let i1 = integrate_poles(&mut f1, &[0.0, 1.0], &[z_up], cfg)?;
    let mut f2 = move |zeta: Complex64| upper(zeta) * normalized_kernel(zeta, z_up.conj());
    let i2 = integrate_poles(&mut f2, &[0.0, 1.0], &[], cfg)?;
    let mut val = -(i1.value + i2.value.conj()) / std::f64::consts::PI;
    if conj_out {
        val = val.conj();
    }
    Ok(QuadOut {
        value: val,
        err: (i1.err + i2.err) / std::f64::consts::PI,
        evals: i1.evals + i2.evals,
        converged: i1.converged && i2.converged,
    })
}

/// The coefficient-to-Schwarzian-data map evaluated pointwise:
/// `β(μ)(z) = −(6/π) ∬_H μ(ζ) (ζ − z)^{-4} dξ dη` for `z` in the lower
/// half-plane (μ taken as zero below the axis).
pub fn bers_map(
    mu: &TwoSidedBeltrami,
    z: Complex64,
    cfg: &PoleQuadConfig,
) -> Result<QuadOut<Complex64>> {
    if !(z.im < 0.0) {
        return Err(Error::domain("the third-derivative kernel needs Im z < 0"));
    }
    let upper = mu.upper_fn();
    let mut f = move |zeta: Complex64| {
        let d = zeta - z;
        let d2 = d * d;
        upper(zeta) / (d2 * d2)
    };
    let out = integrate_poles(&mut f, &[], &[], cfg)?;
    Ok(QuadOut {
        value: -6.0 / std::f64::consts::PI * out.value,
        err: 6.0 / std::f64::consts::PI * out.err,
        evals: out.evals,
        converged: out.converged,
    })
}

/// `sup |β(μ)(z) · (Im z)²|` over a grid in the lower half-plane.
pub fn bers_norm_on_grid(
    mu: &TwoSidedBeltrami,
    xs: &[f64],
    ys: &[f64],
    cfg: &PoleQuadConfig,
) -> Result<f64> {
    let mut sup = 0.0f64;
    for &x in xs {
        for &y in ys {
            if !(y > 0.0) {
                return Err(Error::domain("grid heights must be positive"));
            }
            let z = Complex64::new(x, -y);
            let b = bers_map(mu, z, cfg)?;
            sup = sup.max(b.value.norm() * y * y);
        }
    }
    Ok(sup)
}
