//! Trigonometric approximation: Fejér and Jackson-type kernels, convolution
//! approximants, the Bernstein inequality, approximation-rate profiles and
//! scale magnification.
//!
//! The Fejér kernel is `σ_n(t) = (1/2πn) (sin(nt/2)/sin(t/2))²`, a
//! nonnegative trigonometric polynomial of degree n−1 with unit mass whose
//! convolution multiplier is `(1 − k/n)₊`. Two delayed-mean combinations are
//! provided:
//!
//! - `JacksonPaper`: `σ_{2n−1} − 2σ_n` (mass −1; kept for reference — it is
//!   not an approximate identity),
//! - `JacksonVdp` (default): `2σ_{2n} − σ_n`, the de-la-Vallée-Poussin-style
//!   delayed mean with unit mass, degree 2n−1, and multiplier exactly 1 for
//!   `k ≤ n` — so it reproduces low degrees and achieves the O(1/n) rate on
//!   Zygmund-class fields.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vectorfield::{TrigPoly, VectorField};

/// Kernel family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Fejer,
    /// σ_{2n−1} − 2 σ_n, verbatim reference combination (mass −1).
    JacksonPaper,
    /// 2 σ_{2n} − σ_n, the delayed mean used for actual approximation.
    JacksonVdp,
}

/// Fejér kernel value `σ_n(t)`; the removable singularity at t ≡ 0 (mod 2π)
/// is handled by the series limit.
pub fn fejer_kernel(n: usize, t: f64) -> f64 {
    assert!(n >= 1, "fejer kernel needs n >= 1");
    let s = (0.5 * t).sin();
    if s.abs() < 1e-7 {
        // (sin(nu)/sin u)² ≈ n² (1 − (n²−1) u²/3) near u = 0
        let u = 0.5 * t;
        let n2 = (n * n) as f64;
        return n as f64 / (2.0 * PI) * (1.0 - (n2 - 1.0) * u * u / 3.0);
    }
    let r = (0.5 * n as f64 * t).sin() / s;
    r * r / (2.0 * PI * n as f64)
}

/// Jackson-type kernel value.
pub fn jackson_kernel(n: usize, t: f64, kind: KernelKind) -> f64 {
    assert!(n >= 1, "jackson kernel needs n >= 1");
    match kind {
        KernelKind::Fejer => fejer_kernel(n, t),
        KernelKind::JacksonPaper => fejer_kernel(2 * n - 1, t) - 2.0 * fejer_kernel(n, t),
        KernelKind::JacksonVdp => 2.0 * fejer_kernel(2 * n, t) - fejer_kernel(n, t),
    }
}

/// Kernel with its degree and evaluator.
#[derive(Clone)]
pub struct TrigKernel {
    pub n: usize,
    pub kind: KernelKind,
}

impl TrigKernel {
    pub fn new(n: usize, kind: KernelKind) -> Result<TrigKernel> {
        if n == 0 {
            return Err(Error::domain("kernel order must be at least 1"));
        }
        Ok(TrigKernel { n, kind })
    }

    pub fn eval(&self, t: f64) -> f64 {
        jackson_kernel(self.n, t, self.kind)
    }

    /// Degree as a trigonometric polynomial.
    pub fn degree(&self) -> usize {
        match self.kind {
            KernelKind::Fejer => self.n - 1,
            KernelKind::JacksonPaper => 2 * self.n - 2,
            KernelKind::JacksonVdp => 2 * self.n - 1,
        }
    }

    /// Convolution multiplier applied to the k-th Fourier mode.
    pub fn multiplier(&self, k: usize) -> f64 {
        let fejer = |m: usize, k: usize| -> f64 {
            if k >= m {
                0.0
            } else {
                1.0 - k as f64 / m as f64
            }
        };
        match self.kind {
            KernelKind::Fejer => fejer(self.n, k),
            KernelKind::JacksonPaper => fejer(2 * self.n - 1, k) - 2.0 * fejer(self.n, k),
            KernelKind::JacksonVdp => 2.0 * fejer(2 * self.n, k) - fejer(self.n, k),
        }
    }

    /// The kernel as an explicit cosine polynomial (σ_n has coefficients
    /// (1/π)(1 − k/n) over cos kt plus the constant 1/2π).
    pub fn to_trig(&self) -> TrigPoly {
        let deg = self.degree();
        let mut a = vec![0.0; deg.max(1)];
        for (k, slot) in a.iter_mut().enumerate() {
            *slot = self.multiplier(k + 1) / PI;
        }
        TrigPoly {
            a0: self.multiplier(0) * 2.0 / (2.0 * PI),
            a,
            b: vec![0.0; deg.max(1)],
        }
    }
}

/// Best-available trigonometric approximant of degree ≤ 2n−1 by periodic
/// convolution with the chosen kernel: exact coefficient multipliers for
/// trigonometric inputs, dense-grid Fourier analysis otherwise.
pub fn approximate(v: &VectorField, n: usize, kind: KernelKind) -> Result<TrigPoly> {
    if n == 0 {
        return Err(Error::domain("approximation order must be at least 1"));
    }
    let kernel = TrigKernel::new(n, kind)?;
    let coeffs = match v {
        VectorField::Trig(p) => p.clone(),
        VectorField::SampledAngle(s) => s.interpolant().clone(),
        VectorField::AngleClosed(_) => fourier_analyze(v, kernel.degree())?,
        VectorField::LineClosed { .. } => {
            return Err(Error::domain(
                "convolution approximants act on angle-chart fields",
            ))
        }
    };
    let deg = kernel.degree().min(coeffs.a.len().max(1));
    let mut a = vec![0.0; deg];
    let mut b = vec![0.0; deg];
    for k in 1..=deg {
        let m = kernel.multiplier(k);
        a[k - 1] = m * coeffs.a.get(k - 1).copied().unwrap_or(0.0);
        b[k - 1] = m * coeffs.b.get(k - 1).copied().unwrap_or(0.0);
    }
    Ok(TrigPoly {
        a0: kernel.multiplier(0) * coeffs.a0,
        a,
        b,
    })
}

/// Fourier coefficients a_k, b_k (k ≤ deg) of a continuous periodic field by
/// composite trapezoid sums on a dense uniform grid (spectrally accurate for
/// smooth fields, O(N⁻²) per coefficient at kinks).
fn fourier_analyze(v: &VectorField, deg: usize) -> Result<TrigPoly> {
    let n_grid = (16 * (deg + 1)).max(4096);
    let mut samples = Vec::with_capacity(n_grid);
    for j in 0..n_grid {
        let x = 2.0 * PI * j as f64 / n_grid as f64;
        let val = v.eval(x);
        if !val.is_finite() {
            return Err(Error::Numerics(format!(
                "field value not finite at x = {x:.6}"
            )));
        }
        samples.push(val);
    }
    let mut a = vec![0.0; deg];
    let mut b = vec![0.0; deg];
    let mut a0 = 0.0;
    for &s in &samples {
        a0 += s;
    }
    a0 *= 2.0 / n_grid as f64;
    for k in 1..=deg {
        let (mut ca, mut cb) = (0.0, 0.0);
        for (j, &s) in samples.iter().enumerate() {
            let ang = 2.0 * PI * ((k * j) % n_grid) as f64 / n_grid as f64;
            ca += s * ang.cos();
            cb += s * ang.sin();
        }
        a[k - 1] = 2.0 * ca / n_grid as f64;
        b[k - 1] = 2.0 * cb / n_grid as f64;
    }
    Ok(TrigPoly { a0, a, b })
}

/// `‖V_n'‖∞ / (n ‖V_n‖∞)` with `n` the exact coefficient degree — at most 1
/// up to grid slack, with equality for `sin(nx)`.
pub fn bernstein_ratio(p: &TrigPoly) -> Result<f64> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::domain(
            "bernstein ratio needs a nonconstant polynomial",
        ));
    }
    let sup = p.sup_norm();
    if sup == 0.0 {
        return Err(Error::domain("bernstein ratio of the zero polynomial"));
    }
    Ok(p.derivative().sup_norm() / (n as f64 * sup))
}

/// Entry of an approximation-rate profile.
#[derive(Debug, Clone, Copy)]
pub struct RateEntry {
    pub n: usize,
    pub error: f64,
    pub n_error: f64,
}

/// `n ↦ n · ‖V − approximate(V, n)‖∞` over an increasing list of orders;
/// a bounded profile certifies Zygmund-class membership numerically.
pub fn rate_profile(v: &VectorField, n_list: &[usize]) -> Result<Vec<RateEntry>> {
    for w in n_list.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::domain("orders must be strictly increasing"));
        }
    }
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let approx = approximate(v, n, KernelKind::JacksonVdp)?;
        let err = match v {
            VectorField::Trig(p) => {
                // exact polynomial difference, polished sup norm
                p.add(&approx.scale(-1.0)).sup_norm()
            }
            _ => sup_diff_on_grid(v, &approx, (16 * (2 * n)).max(4096)),
        };
        out.push(RateEntry {
            n,
            error: err,
            n_error: n as f64 * err,
        });
    }
    Ok(out)
}

fn sup_diff_on_grid(v: &VectorField, p: &TrigPoly, grid: usize) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..grid {
        let x = 2.0 * PI * j as f64 / grid as f64;
        worst = worst.max((v.eval(x) - p.eval(x)).abs());
    }
    worst
}

/// CSV rows `n,error,n_error` of a rate profile.
pub fn rate_profile_csv(profile: &[RateEntry]) -> String {
    let mut s = String::from("n,error,n_error\n");
    for e in profile {
        s.push_str(&format!("{},{:.17e},{:.17e}\n", e.n, e.error, e.n_error));
    }
    s
}

/// The magnification `M_{k,I} V(x) = 2^{-k} V(2^k x)` restricted to an
/// interval of length 2π/2^k — equal scale in domain and range.
pub struct MagnifiedField {
    pub k: u32,
    pub interval: (f64, f64),
    base: Arc<VectorField>,
}

pub fn magnify(v: &VectorField, k: u32, interval: (f64, f64)) -> Result<MagnifiedField> {
    let want = 2.0 * PI / (1u64 << k) as f64;
    let len = interval.1 - interval.0;
    if (len - want).abs() > 1e-12 * want.max(1.0) {
        return Err(Error::domain(format!(
            "interval length {len:.6e} does not match 2π/2^{k}"
        )));
    }
    Ok(MagnifiedField {
        k,
        interval,
        base: Arc::new(v.clone()),
    })
}

impl MagnifiedField {
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < self.interval.0 || x > self.interval.1 {
            return Err(Error::domain(format!(
                "x = {x:.6} outside the magnification window"
            )));
        }
        let scale = (1u64 << self.k) as f64;
        Ok(self.base.eval(scale * x) / scale)
    }

    /// sup − inf over the window, sampled densely.
    pub fn oscillation(&self, samples: usize) -> Result<f64> {
        let n = samples.max(16);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = self.interval.0 + (self.interval.1 - self.interval.0) * i as f64 / n as f64;
            let v = self.eval(x)?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok(hi - lo)
    }
}
