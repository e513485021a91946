//! Adaptive quadrature on intervals and axis-aligned rectangles.
//!
//! Error estimates come from comparing a low- and a high-order
//! Gauss-Legendre rule on each panel; panels whose estimate exceeds the
//! local budget are bisected (1D) or quartered (2D). Recursion order is
//! fixed, so results are bit-for-bit reproducible for identical inputs.

use num_complex::Complex64;

use super::gauss;

/// Scalar types the quadrature engines can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Quadrature outcome with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadOut<T> {
    pub value: T,
    pub err: f64,
    pub evals: usize,
    /// False when some panel hit the depth cap before meeting its budget.
    pub converged: bool,
}

impl<T: QuadValue> QuadOut<T> {
    pub fn zero() -> Self {
        QuadOut {
            value: T::zero(),
            err: 0.0,
            evals: 0,
            converged: true,
        }
    }

    pub fn merge(self, other: QuadOut<T>) -> Self {
        QuadOut {
            value: self.value.add(other.value),
            err: self.err + other.err,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }
}

/// Adaptive Gauss quadrature of `f` over `[a, b]` to absolute budget
/// `abs_tol` (plus a relative floor), with at most `max_depth` bisections.
pub fn adaptive_1d<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> QuadOut<T> {
    if a == b {
        return QuadOut::zero();
    }
    rec_1d(f, a, b, abs_tol, rel_tol, max_depth)
}

fn rec_1d<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> QuadOut<T> {
    let low = gauss::gl7().integrate(f, a, b);
    let high = gauss::gl15().integrate(f, a, b);
    let err = high.sub(low).norm();
    let budget = abs_tol.max(rel_tol * high.norm());
    if err <= budget || depth == 0 {
        return QuadOut {
            value: high,
            err,
            evals: 22,
            converged: err <= budget,
        };
    }
    let mid = 0.5 * (a + b);
    let left = rec_1d(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1);
    let right = rec_1d(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1);
    let mut out = left.merge(right);
    out.evals += 22;
    out
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Rect {
        Rect { x0, x1, y0, y1 }
    }
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

fn tensor_rule<T: QuadValue>(
    f: &mut impl FnMut(f64, f64) -> T,
    r: &Rect,
    rule: &gauss::GaussRule,
) -> T {
    let cx = 0.5 * (r.x0 + r.x1);
    let hx = 0.5 * (r.x1 - r.x0);
    let cy = 0.5 * (r.y0 + r.y1);
    let hy = 0.5 * (r.y1 - r.y0);
    let mut acc = T::zero();
    for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
        let x = cx + hx * u;
        let mut row = T::zero();
        for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
            row = row.add(f(x, cy + hy * v).scale(wv));
        }
        acc = acc.add(row.scale(wu));
    }
    acc.scale(hx * hy)
}

/// Adaptive tensor-Gauss quadrature over a rectangle; children split the
/// absolute budget evenly (factor 1/4 per level), which keeps the summed
/// estimate below `abs_tol` on convergence.
pub fn adaptive_rect<T: QuadValue>(
    f: &mut impl FnMut(f64, f64) -> T,
    rect: Rect,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> QuadOut<T> {
    if rect.area() == 0.0 {
        return QuadOut::zero();
    }
    let mut spent = 0usize;
    rec_rect(f, rect, abs_tol, rel_tol, max_depth, &mut spent)
}

/// Hard cap on integrand evaluations per adaptive_rect call; a deterministic
/// backstop against noise-chasing on discontinuity lines.
const RECT_EVAL_CAP: usize = 1 << 21;

fn rec_rect<T: QuadValue>(
    f: &mut impl FnMut(f64, f64) -> T,
    r: Rect,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
    spent: &mut usize,
) -> QuadOut<T> {
    let low = tensor_rule(f, &r, gauss::gl4());
    let high = tensor_rule(f, &r, gauss::gl8());
    *spent += 80;
    let err = high.sub(low).norm();
    // the relative floor stops refinement once the requested budget is below
    // attainable floating precision for values of this size
    let budget = abs_tol.max(rel_tol * high.norm()).max(3e-15 * high.norm());
    if err <= budget || depth == 0 || *spent > RECT_EVAL_CAP {
        return QuadOut {
            value: high,
            err,
            evals: 16 + 64,
            converged: err <= budget,
        };
    }
    let mx = 0.5 * (r.x0 + r.x1);
    let my = 0.5 * (r.y0 + r.y1);
    let quads = [
        Rect::new(r.x0, mx, r.y0, my),
        Rect::new(mx, r.x1, r.y0, my),
        Rect::new(r.x0, mx, my, r.y1),
        Rect::new(mx, r.x1, my, r.y1),
    ];
    let mut out = QuadOut::zero();
    for q in quads {
        out = out.merge(rec_rect(f, q, 0.25 * abs_tol, rel_tol, depth - 1, spent));
    }
    out.evals += 80;
    out
}
