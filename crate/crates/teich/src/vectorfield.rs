//! Tangent vector fields on the circle and the line.
//!
//! A field lives in one of two charts:
//!
//! - the **angle chart**: a real periodic function `V(x)` (the field is
//!   `Ṽ(e^{ix}) ∂/∂z` with `Ṽ(e^{ix}) = i e^{ix} V(x)`),
//! - the **line chart**: a real function `V̂(u)` on ℝ obtained through the
//!   boundary stereographic map `u = U(z) = (z+i)/(iz+1)` with the cocycle
//!   `Ṽ(z) = V̂(u) · (−2/(u+i)²)`.
//!
//! `U` sends the four points 1, i, −1, −i to 1, ∞, −1, 0; the point `z = i`
//! (angle π/2) is the excluded point of the line chart. Degree-one
//! trigonometric fields in the angle chart correspond exactly to quadratic
//! polynomials `a + bu + cu²` in the line chart — the trivial fields — and
//! the quotient by them is realised by normalized representatives vanishing
//! at 0 and 1 with `o(u²)` decay.
//!
//! Trigonometric fields use real coefficients `a_0/2 + Σ (a_k cos kx +
//! b_k sin kx)`; in terms of the complex coefficients of `Ṽ(z) = Σ c_k z^k`
//! these are `a_k = 2 Im c_{k+1}`, `b_k = 2 Re c_{k+1}`, with the reality
//! relation `c_{2−k} = −conj(c_k)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::second_difference;

pub type FieldFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Chart a field is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Real periodic `V(x)`, x an angle in radians.
    Angle,
    /// Real `V̂(u)` on the boundary line, `u = U(z)`.
    Line,
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials
// ---------------------------------------------------------------------------

/// Real trigonometric polynomial `a0/2 + Σ_{k=1}^n (a_k cos kx + b_k sin kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigPoly {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<TrigPoly> {
        if a.len() != b.len() {
            return Err(Error::format(
                "cosine/sine coefficient lists differ in length",
            ));
        }
        Ok(TrigPoly { a0, a, b })
    }

    pub fn zero() -> TrigPoly {
        TrigPoly {
            a0: 0.0,
            a: vec![],
            b: vec![],
        }
    }

    pub fn constant(c: f64) -> TrigPoly {
        TrigPoly {
            a0: 2.0 * c,
            a: vec![],
            b: vec![],
        }
    }

    /// cos(kx) (k ≥ 1).
    pub fn cos(k: usize) -> TrigPoly {
        let mut a = vec![0.0; k];
        a[k - 1] = 1.0;
        TrigPoly {
            a0: 0.0,
            b: vec![0.0; k],
            a,
        }
    }

    /// sin(kx) (k ≥ 1).
    pub fn sin(k: usize) -> TrigPoly {
        let mut b = vec![0.0; k];
        b[k - 1] = 1.0;
        TrigPoly {
            a0: 0.0,
            a: vec![0.0; k],
            b,
        }
    }

    /// Highest index with a nonzero coefficient (0 for constants).
    pub fn degree(&self) -> usize {
        for k in (1..=self.a.len()).rev() {
            if self.a[k - 1] != 0.0 || self.b[k - 1] != 0.0 {
                return k;
            }
        }
        0
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (s1, c1) = x.sin_cos();
        let mut ck = c1;
        let mut sk = s1;
        let mut acc = 0.5 * self.a0;
        for k in 0..self.a.len() {
            acc += self.a[k] * ck + self.b[k] * sk;
            let cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
        acc
    }

    pub fn derivative(&self) -> TrigPoly {
        let n = self.a.len();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for k in 1..=n {
            a[k - 1] = k as f64 * self.b[k - 1];
            b[k - 1] = -(k as f64) * self.a[k - 1];
        }
        TrigPoly { a0: 0.0, a, b }
    }

    /// Conjugate-function coefficient map `(a_k, b_k) ↦ (b_k, −a_k)`,
    /// constants to zero; exact arithmetic on coefficients.
    pub fn hilbert(&self) -> TrigPoly {
        let n = self.a.len();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for k in 0..n {
            a[k] = self.b[k];
            b[k] = -self.a[k];
        }
        TrigPoly { a0: 0.0, a, b }
    }

    /// Complex coefficient `c_m` of `Ṽ(z) = Σ c_m z^m` (m may be negative).
    pub fn complex_coeff(&self, m: i64) -> Complex64 {
        // c_{k+1} = (b_k + i a_k)/2 for k ≥ 1, c_1 = i a0/2, c_{2−k} = −conj c_k
        if m >= 2 {
            let k = (m - 1) as usize;
            if k <= self.a.len() && k >= 1 {
                return Complex64::new(self.b[k - 1] / 2.0, self.a[k - 1] / 2.0);
            }
            return Complex64::new(0.0, 0.0);
        }
        if m == 1 {
            return Complex64::new(0.0, self.a0 / 2.0);
        }
        // reality relation
        let refl = self.complex_coeff(2 - m);
        -refl.conj()
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        TrigPoly {
            a0: s * self.a0,
            a: self.a.iter().map(|v| s * v).collect(),
            b: self.b.iter().map(|v| s * v).collect(),
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.a.len().max(other.a.len());
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for k in 0..n {
            a[k] = self.a.get(k).copied().unwrap_or(0.0) + other.a.get(k).copied().unwrap_or(0.0);
            b[k] = self.b.get(k).copied().unwrap_or(0.0) + other.b.get(k).copied().unwrap_or(0.0);
        }
        TrigPoly {
            a0: self.a0 + other.a0,
            a,
            b,
        }
    }

    /// Zero out the trivial part (modes 0 and 1) — the angle-chart face of
    /// the quadratic-polynomial quotient.
    pub fn zero_low_modes(&self) -> TrigPoly {
        let mut out = self.clone();
        out.a0 = 0.0;
        if !out.a.is_empty() {
            out.a[0] = 0.0;
            out.b[0] = 0.0;
        }
        out
    }

    /// Sup norm over a period: dense sampling plus ternary refinement of
    /// each local maximum of |V|. Evaluation goes through the nonzero-mode
    /// list, so sparse high-degree polynomials stay cheap.
    pub fn sup_norm(&self) -> f64 {
        let modes: Vec<(f64, f64, f64)> = (1..=self.a.len())
            .filter(|&k| self.a[k - 1] != 0.0 || self.b[k - 1] != 0.0)
            .map(|k| (k as f64, self.a[k - 1], self.b[k - 1]))
            .collect();
        let half_a0 = 0.5 * self.a0;
        let eval = move |x: f64| {
            let mut acc = half_a0;
            for &(k, a, b) in &modes {
                let (s, c) = (k * x).sin_cos();
                acc += a * c + b * s;
            }
            acc
        };
        let n = self.degree().max(1);
        let grid = 16 * (n + 1);
        let mut best = 0.0f64;
        let mut vals = Vec::with_capacity(grid);
        for i in 0..grid {
            vals.push(eval(2.0 * PI * i as f64 / grid as f64).abs());
        }
        for i in 0..grid {
            let prev = vals[(i + grid - 1) % grid];
            let next = vals[(i + 1) % grid];
            if vals[i] >= prev && vals[i] >= next {
                let x0 = 2.0 * PI * (i as f64 - 1.0) / grid as f64;
                let x1 = 2.0 * PI * (i as f64 + 1.0) / grid as f64;
                best = best.max(refine_abs_max(&eval, x0, x1));
            }
        }
        best
    }

    /// Serialize as a coefficient list: `a0` then one `k a_k b_k` row per mode.
    pub fn to_coeff_text(&self) -> String {
        let mut s = format!("a0 {:.17e}\n", self.a0);
        for k in 1..=self.a.len() {
            s.push_str(&format!(
                "{} {:.17e} {:.17e}\n",
                k,
                self.a[k - 1],
                self.b[k - 1]
            ));
        }
        s
    }

    pub fn from_coeff_text(text: &str) -> Result<TrigPoly> {
        let mut a0 = None;
        let mut rows: Vec<(usize, f64, f64)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let head = it.next().ok_or_else(|| Error::format("empty row"))?;
            if head == "a0" {
                a0 = Some(
                    it.next()
                        .ok_or_else(|| Error::format("missing a0 value"))?
                        .parse::<f64>()
                        .map_err(|e| Error::format(format!("bad a0: {e}")))?,
                );
                continue;
            }
            let k: usize = head
                .parse()
                .map_err(|e| Error::format(format!("bad mode index: {e}")))?;
            let ak: f64 = it
                .next()
                .ok_or_else(|| Error::format("missing a_k"))?
                .parse()
                .map_err(|e| Error::format(format!("bad a_k: {e}")))?;
            let bk: f64 = it
                .next()
                .ok_or_else(|| Error::format("missing b_k"))?
                .parse()
                .map_err(|e| Error::format(format!("bad b_k: {e}")))?;
            if k == 0 {
                return Err(Error::format("mode index 0 is spelled a0"));
            }
            rows.push((k, ak, bk));
        }
        let n = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for (k, ak, bk) in rows {
            a[k - 1] = ak;
            b[k - 1] = bk;
        }
        Ok(TrigPoly {
            a0: a0.unwrap_or(0.0),
            a,
            b,
        })
    }
}

fn refine_abs_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..70 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1).abs() < f(m2).abs() {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    f(0.5 * (lo + hi)).abs()
}

// ---------------------------------------------------------------------------
// Vector fields in their charts
// ---------------------------------------------------------------------------

/// A tangent vector field in one of the two boundary charts.
#[derive(Clone)]
pub enum VectorField {
    /// Finite trigonometric form, angle chart.
    Trig(TrigPoly),
    /// Uniform samples `V(2πj/N)`, angle chart, evaluated by the
    /// trigonometric interpolant.
    SampledAngle(SampledAngle),
    /// Closed form in the angle chart.
    AngleClosed(FieldFn),
    /// Closed form in the line chart, with an optional exact quadratic
    /// growth coefficient (known for transported fields).
    LineClosed { f: FieldFn, quad_coeff: Option<f64> },
}

#[derive(Clone)]
pub struct SampledAngle {
    values: Arc<Vec<f64>>,
    interp: Arc<TrigPoly>,
}

impl SampledAngle {
    pub fn new(values: Vec<f64>) -> Result<SampledAngle> {
        if values.len() < 4 {
            return Err(Error::domain("sampled field needs at least 4 samples"));
        }
        let interp = Arc::new(dft_interpolant(&values));
        Ok(SampledAngle {
            values: Arc::new(values),
            interp,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolant(&self) -> &TrigPoly {
        &self.interp
    }
}

/// Real DFT of uniform samples into the trigonometric interpolant.
fn dft_interpolant(values: &[f64]) -> TrigPoly {
    let n = values.len();
    let half = n / 2;
    let mut a = vec![0.0; half];
    let mut b = vec![0.0; half];
    let mut a0 = 0.0;
    for &v in values {
        a0 += v;
    }
    a0 *= 2.0 / n as f64;
    for k in 1..=half {
        let mut ca = 0.0;
        let mut cb = 0.0;
        for (j, &v) in values.iter().enumerate() {
            let ang = 2.0 * PI * ((k * j) % n) as f64 / n as f64;
            ca += v * ang.cos();
            cb += v * ang.sin();
        }
        let scale = if 2 * k == n { 1.0 } else { 2.0 };
        a[k - 1] = scale * ca / n as f64;
        b[k - 1] = scale * cb / n as f64;
    }
    if n % 2 == 0 && half >= 1 {
        // Nyquist sine mode is unresolvable on an even grid
        b[half - 1] = 0.0;
    }
    TrigPoly { a0, a, b }
}

impl VectorField {
    pub fn trig(p: TrigPoly) -> VectorField {
        VectorField::Trig(p)
    }

    pub fn angle_closed(f: FieldFn) -> VectorField {
        VectorField::AngleClosed(f)
    }

    pub fn line_closed(f: FieldFn) -> VectorField {
        VectorField::LineClosed {
            f,
            quad_coeff: None,
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            VectorField::LineClosed { .. } => Chart::Line,
            _ => Chart::Angle,
        }
    }

    /// Evaluate in the field's own chart.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            VectorField::Trig(p) => p.eval(x),
            VectorField::SampledAngle(s) => s.interp.eval(x),
            VectorField::AngleClosed(f) => f(x),
            VectorField::LineClosed { f, .. } => f(x),
        }
    }

    /// The circle-complex value `Ṽ(e^{ix}) = i e^{ix} V(x)` (angle charts).
    pub fn circle_complex(&self, x: f64) -> Result<Complex64> {
        if self.chart() != Chart::Angle {
            return Err(Error::domain(
                "circle-complex values come from angle-chart fields",
            ));
        }
        let v = self.eval(x);
        Ok(Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, x) * v)
    }

    /// Transport into the line chart.
    pub fn to_line(&self) -> Result<VectorField> {
        match self.chart() {
            Chart::Line => Ok(self.clone()),
            Chart::Angle => {
                let this = self.clone();
                let quad_coeff = Some(self.eval(PI / 2.0) / 2.0);
                let f: FieldFn = Arc::new(move |u: f64| {
                    // z(u) = (u − i)/(1 − iu), V̂(u) = Ṽ(z) (u+i)²/(−2)
                    let u_c = Complex64::new(u, 0.0);
                    let z =
                        (u_c - Complex64::i()) / (Complex64::new(1.0, 0.0) - Complex64::i() * u_c);
                    let x = z.im.atan2(z.re);
                    let v = this.eval(x);
                    let vt = Complex64::i() * z * v;
                    let w = vt * (u_c + Complex64::i()) * (u_c + Complex64::i()) / -2.0;
                    w.re
                });
                Ok(VectorField::LineClosed { f, quad_coeff })
            }
        }
    }

    /// Transport into the angle chart. Evaluation at the excluded point
    /// `x = π/2` (u = ∞) falls back to the stored growth coefficient when
    /// one is known and is non-finite otherwise; grid-level consumers
    /// reject non-finite values.
    pub fn to_angle(&self) -> Result<VectorField> {
        match self.chart() {
            Chart::Angle => Ok(self.clone()),
            Chart::Line => {
                let (f, quad) = match self {
                    VectorField::LineClosed { f, quad_coeff } => (f.clone(), *quad_coeff),
                    _ => unreachable!(),
                };
                let g: FieldFn = Arc::new(move |x: f64| {
                    let z = Complex64::from_polar(1.0, x);
                    let den = Complex64::i() * z + 1.0;
                    if den.norm() < 1e-14 {
                        return match quad {
                            Some(c) => 2.0 * c,
                            None => f64::NAN,
                        };
                    }
                    let u = (z + Complex64::i()) / den;
                    let vhat = f(u.re);
                    let vt = vhat * (-2.0) / ((u + Complex64::i()) * (u + Complex64::i()));
                    // V(x) = Ṽ(z)/(i z)
                    (vt / (Complex64::i() * z)).re
                });
                Ok(VectorField::AngleClosed(g))
            }
        }
    }

    /// Second symmetric difference in the field's own chart.
    pub fn second_difference(&self, x: f64, t: f64) -> Result<f64> {
        let mut f = |s: f64| self.eval(s);
        second_difference(&mut f, x, t)
    }
}

/// Free-function form of chart transport.
pub fn transport(v: &VectorField, to: Chart) -> Result<VectorField> {
    match to {
        Chart::Angle => v.to_angle(),
        Chart::Line => v.to_line(),
    }
}

// ---------------------------------------------------------------------------
// Quadruples, cross ratios, alternating sums
// ---------------------------------------------------------------------------

/// Four boundary points in increasing line order; the first may be −∞.
#[derive(Debug, Clone, Copy)]
pub struct Quadruple {
    /// None encodes a = −∞.
    pub a: Option<f64>,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quadruple {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Quadruple> {
        if !(a < b && b < c && c < d) {
            return Err(Error::domain(
                "quadruple points must be distinct and increasing",
            ));
        }
        Ok(Quadruple {
            a: Some(a),
            b,
            c,
            d,
        })
    }

    /// The normalized family (−∞, x−t, x, x+t).
    pub fn normalized(x: f64, t: f64) -> Result<Quadruple> {
        if !(t > 0.0) {
            return Err(Error::domain("normalized quadruple needs t > 0"));
        }
        Ok(Quadruple {
            a: None,
            b: x - t,
            c: x,
            d: x + t,
        })
    }
}

/// Cross ratio `(d−c)(b−a) / ((c−b)(a−d))`; `a = −∞` is taken as the limit,
/// giving `−(d−c)/(c−b)`.
pub fn cross_ratio(q: &Quadruple) -> Result<f64> {
    match q.a {
        Some(a) => {
            let num = (q.d - q.c) * (q.b - a);
            let den = (q.c - q.b) * (a - q.d);
            if den == 0.0 {
                return Err(Error::domain("coincident points in cross ratio"));
            }
            Ok(num / den)
        }
        None => Ok(-(q.d - q.c) / (q.c - q.b)),
    }
}

/// Complex cross ratio of four distinct points (used for Möbius-invariance
/// checks on transformed quadruples).
pub fn cross_ratio_complex(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Result<Complex64> {
    let den = (c - b) * (a - d);
    if den.norm() == 0.0 {
        return Err(Error::domain("coincident points in cross ratio"));
    }
    Ok((d - c) * (b - a) / den)
}

/// Alternating difference-quotient sum
/// `(W(d)−W(c))/(d−c) − (W(c)−W(b))/(c−b) + (W(b)−W(a))/(b−a) − (W(a)−W(d))/(a−d)`.
///
/// With `a = −∞` the two terms involving `a` are taken in the limit: they
/// vanish for fields with `o(u)` decay and contribute exactly `c (b − d)`
/// for a quadratic-growth coefficient `c`, so quadratic polynomials are
/// annihilated on the limit family as well. For `o(u²)`-decaying fields the
/// normalized family (−∞, x−t, x, x+t) reduces to the second-difference
/// quotient `(W(x+t) − 2W(x) + W(x−t))/t`.
pub fn alternating_sum(w: &VectorField, q: &Quadruple) -> Result<f64> {
    if w.chart() != Chart::Line {
        return Err(Error::domain("alternating sums act on line-chart fields"));
    }
    match q.a {
        Some(a) => {
            let (wa, wb, wc, wd) = (w.eval(a), w.eval(q.b), w.eval(q.c), w.eval(q.d));
            Ok((wd - wc) / (q.d - q.c) - (wc - wb) / (q.c - q.b) + (wb - wa) / (q.b - a)
                - (wa - wd) / (a - q.d))
        }
        None => {
            let c_w = match w {
                VectorField::LineClosed {
                    quad_coeff: Some(c),
                    ..
                } => *c,
                _ => estimate_quad_coeff(w),
            };
            let (wb, wc, wd) = (w.eval(q.b), w.eval(q.c), w.eval(q.d));
            Ok((wd - wc) / (q.d - q.c) - (wc - wb) / (q.c - q.b) + c_w * (q.b - q.d))
        }
    }
}

// ---------------------------------------------------------------------------
// Zygmund seminorms
// ---------------------------------------------------------------------------

/// Grid maximum of `|V(x+t) − 2V(x) + V(x−t)| / t` — a refinement-converging
/// lower bound of the Zygmund seminorm.
pub fn zygmund_seminorm(v: &VectorField, x_grid: &[f64], t_grid: &[f64]) -> Result<f64> {
    if x_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::domain("seminorm needs nonempty grids"));
    }
    let mut best = 0.0f64;
    for &x in x_grid {
        for &t in t_grid {
            let d = v.second_difference(x, t)?;
            if !d.is_finite() {
                return Err(Error::Numerics(format!(
                    "field not finite near x = {x}, t = {t}"
                )));
            }
            best = best.max(d.abs() / t);
        }
    }
    Ok(best)
}

/// Per-scale profile `t ↦ sup_x |Δ²V| / t`; fields of little-Zygmund type
/// have profiles that tend to zero.
pub fn little_zygmund_profile(
    v: &VectorField,
    scales: &[f64],
    x_grid: &[f64],
) -> Result<Vec<f64>> {
    for w in scales.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::domain("scales must be strictly decreasing"));
        }
    }
    scales
        .iter()
        .map(|&t| zygmund_seminorm(v, x_grid, &[t]))
        .collect()
}

/// Cross-ratio seminorm restricted to the normalized quadruple family
/// (−∞, x−t, x, x+t), where the cross ratio is identically −1 and the
/// hyperbolic density contributes the single constant κ = ρ(−1):
/// `κ · max |W[Q]|` over the grids. Requires a line-chart field with
/// `o(u²)` growth.
pub fn crossratio_seminorm(
    v: &VectorField,
    x_grid: &[f64],
    t_grid: &[f64],
    kappa: f64,
) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::domain("kappa must be positive"));
    }
    if v.chart() != Chart::Line {
        return Err(Error::domain(
            "cross-ratio seminorm needs a line-chart field",
        ));
    }
    let mut best = 0.0f64;
    for &x in x_grid {
        for &t in t_grid {
            let q = Quadruple::normalized(x, t)?;
            best = best.max(alternating_sum(v, &q)?.abs());
        }
    }
    Ok(kappa * best)
}

// ---------------------------------------------------------------------------
// Quotient by quadratic polynomials
// ---------------------------------------------------------------------------

/// Representative of `V`'s class modulo quadratic polynomials, normalized to
/// vanish at 0 and 1 with the quadratic growth removed (`o(u²)` at ∞).
/// Idempotent. Line-chart fields only; transported fields carry the exact
/// growth coefficient, otherwise it is extracted by Richardson extrapolation
/// of second differences at large radius.
pub fn project_out_quadratics(v: &VectorField) -> Result<VectorField> {
    if v.chart() != Chart::Line {
        return Err(Error::domain(
            "the quadratic-polynomial quotient is taken in the line chart",
        ));
    }
    let c = match v {
        VectorField::LineClosed {
            quad_coeff: Some(c),
            ..
        } => *c,
        _ => estimate_quad_coeff(v),
    };
    let v0 = v.eval(0.0);
    let v1 = v.eval(1.0) - c;
    let a = v0;
    let b = v1 - v0;
    let inner = v.clone();
    let f: FieldFn = Arc::new(move |u: f64| inner.eval(u) - (c * u * u + b * u + a));
    Ok(VectorField::LineClosed {
        f,
        quad_coeff: Some(0.0),
    })
}

/// Subtract the trivial (degree-one trigonometric) part of an angle-chart
/// field so that it vanishes at 0 and ±π/2 — the angle-chart face of the
/// normalization "vanish at 0 and 1 with no quadratic growth" (the three
/// points are the preimages of u = 1, ∞, 0 under the stereographic chart).
/// Transporting the result to the line chart gives an `o(u²)` representative
/// ready for the residue pairing. Trigonometric inputs stay trigonometric.
pub fn project_trivial_angle(v: &VectorField) -> Result<VectorField> {
    if v.chart() != Chart::Angle {
        return Err(Error::domain(
            "the trivial-part projection acts on angle-chart fields",
        ));
    }
    let vp = v.eval(PI / 2.0);
    let vm = v.eval(-PI / 2.0);
    let a = 0.5 * (vp + vm);
    let c = 0.5 * (vp - vm);
    let b = v.eval(0.0) - a;
    match v {
        VectorField::Trig(p) => {
            let mut q = p.clone();
            q.a0 -= 2.0 * a;
            if q.a.is_empty() {
                q.a.push(0.0);
                q.b.push(0.0);
            }
            q.a[0] -= b;
            q.b[0] -= c;
            Ok(VectorField::Trig(q))
        }
        _ => {
            let inner = v.clone();
            Ok(VectorField::AngleClosed(Arc::new(move |x: f64| {
                inner.eval(x) - a - b * x.cos() - c * x.sin()
            })))
        }
    }
}

fn estimate_quad_coeff(v: &VectorField) -> f64 {
    let e = |r: f64| (v.eval(r) - 2.0 * v.eval(0.0) + v.eval(-r)) / (2.0 * r * r);
    let r = 1e6;
    // Richardson over (r, 2r) removes the O(1/r) contamination of
    // at-most-linear remainders.
    2.0 * e(2.0 * r) - e(r)
}

// ---------------------------------------------------------------------------
// Trivial (Möbius) fields
// ---------------------------------------------------------------------------

/// Circle-complex quadratic field `W(z) = c0 + c1 z + c2 z²` with the
/// reality constraints `c1` purely imaginary and `c2 = −conj(c0)`; in the
/// angle chart these are exactly the degree-one trigonometric fields.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPolyField {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl QuadraticPolyField {
    /// Build from the angle-chart coefficients `a0/2 + a1 cos x + b1 sin x`.
    pub fn from_angle_coeffs(a0: f64, a1: f64, b1: f64) -> QuadraticPolyField {
        // a0 = 2 Im c1, a1 = 2 Im c2, b1 = 2 Re c2, c0 = −conj(c2)
        let c1 = Complex64::new(0.0, a0 / 2.0);
        let c2 = Complex64::new(b1 / 2.0, a1 / 2.0);
        QuadraticPolyField {
            c0: -c2.conj(),
            c1,
            c2,
        }
    }

    pub fn eval_circle(&self, z: Complex64) -> Complex64 {
        self.c0 + self.c1 * z + self.c2 * z * z
    }

    /// Angle-chart values `W(e^{ix}) / (i e^{ix})`; real by the coefficient
    /// constraints.
    pub fn to_angle_field(&self) -> VectorField {
        let q = *self;
        VectorField::AngleClosed(Arc::new(move |x: f64| {
            let z = Complex64::from_polar(1.0, x);
            (q.eval_circle(z) / (Complex64::i() * z)).re
        }))
    }

    /// Largest imaginary contamination of `W(z)/(iz)` over a circle grid —
    /// zero (to rounding) when the reality constraints hold.
    pub fn reality_defect(&self, samples: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..samples.max(8) {
            let x = 2.0 * PI * i as f64 / samples.max(8) as f64;
            let z = Complex64::from_polar(1.0, x);
            worst = worst.max((self.eval_circle(z) / (Complex64::i() * z)).im.abs());
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Serialization of sampled fields
// ---------------------------------------------------------------------------

/// CSV rows `x,V(x)` of an angle-chart field on a uniform grid.
pub fn field_to_csv(v: &VectorField, samples: usize) -> String {
    let mut s = String::from("x,v\n");
    for i in 0..samples.max(2) {
        let x = 2.0 * PI * i as f64 / samples.max(2) as f64;
        s.push_str(&format!("{:.17e},{:.17e}\n", x, v.eval(x)));
    }
    s
}

/// Classical Zygmund-class test field Σ 2^{-k} cos(2^k x) (depth terms).
pub fn weierstrass_field(depth: u32) -> TrigPoly {
    let n = 1usize << depth;
    let mut a = vec![0.0; n];
    let b = vec![0.0; n];
    for k in 1..=depth {
        a[(1usize << k) - 1] = 0.5f64.powi(k as i32);
    }
    TrigPoly { a0: 0.0, a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trig_eval_and_derivative() {
        let p = TrigPoly::new(1.0, vec![0.5, 0.0, -2.0], vec![0.0, 1.0, 0.0]).unwrap();
        for x in [0.0f64, 0.3, 2.5, -1.0] {
            let want = 0.5 + 0.5 * x.cos() + (2.0 * x).sin() - 2.0 * (3.0 * x).cos();
            assert_abs_diff_eq!(p.eval(x), want, epsilon = 1e-13);
            let dwant = -0.5 * x.sin() + 2.0 * (2.0 * x).cos() + 6.0 * (3.0 * x).sin();
            assert_abs_diff_eq!(p.derivative().eval(x), dwant, epsilon = 1e-12);
        }
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn complex_coefficient_relations() {
        let p = TrigPoly::new(0.8, vec![0.3, -1.1], vec![0.7, 0.2]).unwrap();
        // a_k = 2 Im c_{k+1}, b_k = 2 Re c_{k+1}
        for k in 1..=2usize {
            let c = p.complex_coeff(k as i64 + 1);
            assert_abs_diff_eq!(2.0 * c.im, p.a[k - 1], epsilon = 1e-15);
            assert_abs_diff_eq!(2.0 * c.re, p.b[k - 1], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(2.0 * p.complex_coeff(1).im, p.a0, epsilon = 1e-15);
        // reality: c_{2−k} = −conj(c_k)
        for m in -3i64..=3 {
            let lhs = p.complex_coeff(2 - m);
            let rhs = -p.complex_coeff(m).conj();
            assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-15);
            assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn sup_norm_of_known_fields() {
        assert_abs_diff_eq!(TrigPoly::sin(5).sup_norm(), 1.0, epsilon = 1e-12);
        let p = TrigPoly::new(0.0, vec![3.0], vec![4.0]).unwrap();
        assert_abs_diff_eq!(p.sup_norm(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn sampled_interpolant_reproduces_trig_fields() {
        let p = TrigPoly::new(0.4, vec![1.0, 0.0, 0.2], vec![0.5, -0.3, 0.0]).unwrap();
        let n = 32;
        let values: Vec<f64> = (0..n)
            .map(|j| p.eval(2.0 * PI * j as f64 / n as f64))
            .collect();
        let s = SampledAngle::new(values).unwrap();
        for i in 0..100 {
            let x = 0.063 * i as f64;
            assert_abs_diff_eq!(s.interpolant().eval(x), p.eval(x), epsilon = 1e-11);
        }
    }

    #[test]
    fn stereographic_corner_points() {
        // U sends 1, i, −1, −i to 1, ∞, −1, 0
        let u = |z: Complex64| (z + Complex64::i()) / (Complex64::i() * z + 1.0);
        assert!((u(Complex64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((u(Complex64::new(-1.0, 0.0)) + 1.0).norm() < 1e-15);
        assert!(u(Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let at_excluded = u(Complex64::new(0.0, 1.0)).norm();
        assert!(!at_excluded.is_finite() || at_excluded > 1e14);
    }

    #[test]
    fn transport_roundtrip_is_identity() {
        let v = VectorField::trig(TrigPoly::sin(3));
        let line = v.to_line().unwrap();
        let back = line.to_angle().unwrap();
        for i in 0..48 {
            let x = -3.0 + 6.5 * i as f64 / 48.0;
            assert_abs_diff_eq!(back.eval(x), v.eval(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn transported_field_is_real_with_quadratic_growth() {
        let v = VectorField::trig(TrigPoly::new(0.0, vec![0.0, 1.0], vec![0.3, 0.0]).unwrap());
        let line = v.to_line().unwrap();
        if let VectorField::LineClosed { quad_coeff, .. } = &line {
            assert_abs_diff_eq!(quad_coeff.unwrap(), v.eval(PI / 2.0) / 2.0, epsilon = 1e-15);
        } else {
            panic!("expected line-chart field");
        }
        let c = v.eval(PI / 2.0) / 2.0;
        for r in [1e3, 1e5] {
            assert_abs_diff_eq!(line.eval(r) / (r * r), c, epsilon = 1e-1 / r.sqrt());
        }
    }

    #[test]
    fn mobius_field_transports_to_quadratic_polynomial() {
        let q = QuadraticPolyField::from_angle_coeffs(0.6, -0.4, 1.1);
        assert!(q.reality_defect(64) < 1e-14);
        let line = q.to_angle_field().to_line().unwrap();
        // fit a quadratic through three points and compare elsewhere
        let (u0, u1, u2) = (-2.0, 0.5, 3.0);
        let (w0, w1, w2) = (line.eval(u0), line.eval(u1), line.eval(u2));
        let quad = |u: f64| {
            w0 * (u - u1) * (u - u2) / ((u0 - u1) * (u0 - u2))
                + w1 * (u - u0) * (u - u2) / ((u1 - u0) * (u1 - u2))
                + w2 * (u - u0) * (u - u1) / ((u2 - u0) * (u2 - u1))
        };
        for &u in &[-5.0, -1.0, 0.0, 1.7, 4.2, 10.0] {
            assert_abs_diff_eq!(line.eval(u), quad(u), epsilon = 1e-9 * (1.0 + u * u));
        }
    }

    #[test]
    fn cross_ratio_values() {
        let q = Quadruple::new(0.0, 1.0, 2.0, 3.0).unwrap();
        assert_abs_diff_eq!(cross_ratio(&q).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        let qn = Quadruple::normalized(0.7, 0.2).unwrap();
        assert_abs_diff_eq!(cross_ratio(&qn).unwrap(), -1.0, epsilon = 1e-15);
        assert!(Quadruple::new(0.0, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn cross_ratio_mobius_invariance() {
        // a deterministic family of Möbius maps (a b; c d), det > 0
        let mats = [
            [1.0, 2.0, 0.0, 1.0],
            [2.0, -1.0, 1.0, 3.0],
            [0.3, 0.0, -0.2, 4.0],
            [1.0, 0.0, 1.0, 1.0],
        ];
        let pts = [(0.0, 1.0, 2.0, 3.0), (-2.0, -0.5, 0.1, 7.0)];
        for m in mats {
            let f = |x: f64| Complex64::new((m[0] * x + m[1]) / (m[2] * x + m[3]), 0.0);
            for (a, b, c, d) in pts {
                let base = cross_ratio(&Quadruple::new(a, b, c, d).unwrap()).unwrap();
                let moved = cross_ratio_complex(f(a), f(b), f(c), f(d)).unwrap();
                assert_abs_diff_eq!(moved.re, base, epsilon = 1e-12);
                assert_abs_diff_eq!(moved.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn alternating_sum_kills_quadratics() {
        let w = VectorField::line_closed(Arc::new(|u: f64| 2.0 - 0.7 * u + 0.3 * u * u));
        let quads = [
            Quadruple::new(0.0, 1.0, 2.0, 3.0).unwrap(),
            Quadruple::new(-4.0, -1.0, 0.5, 2.0).unwrap(),
            Quadruple::new(-0.1, 0.0, 0.1, 0.2).unwrap(),
        ];
        for q in quads {
            assert_abs_diff_eq!(alternating_sum(&w, &q).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn alternating_sum_cube_frozen_value() {
        // arithmetic oracle: W = u³ on (0,1,2,3) gives 19 − 7 + 1 − 9 = 4
        let w = VectorField::line_closed(Arc::new(|u: f64| u * u * u));
        let q = Quadruple::new(0.0, 1.0, 2.0, 3.0).unwrap();
        assert_abs_diff_eq!(alternating_sum(&w, &q).unwrap(), 4.0, epsilon = 1e-13);
    }

    #[test]
    fn alternating_sum_normalized_family_matches_second_difference() {
        // decaying field: the limit form equals +Δ²W/t, and finite-a
        // quadruples converge to it as a → −∞
        let w = VectorField::line_closed(Arc::new(|u: f64| (-u * u).exp()));
        for (x, t) in [(0.0, 1.0), (0.4, 0.3), (-1.0, 0.05)] {
            let q = Quadruple::normalized(x, t).unwrap();
            let sum = alternating_sum(&w, &q).unwrap();
            let dd = w.second_difference(x, t).unwrap() / t;
            assert_abs_diff_eq!(sum, dd, epsilon = 1e-9);
            let qa = Quadruple::new(-1e8, x - t, x, x + t).unwrap();
            assert_abs_diff_eq!(alternating_sum(&w, &qa).unwrap(), dd, epsilon = 1e-6);
        }
    }

    #[test]
    fn zygmund_seminorm_of_quadratic_polynomial_vanishes_with_scale() {
        // second differences kill the affine part exactly and leave 2|c|t²
        // from the quadratic term, so the grid value is 2|c|·max(t) and
        // tends to zero with the scale grid (the quotient-seminorm limit);
        // exact annihilation of quadratics is the alternating sum's job.
        let v = VectorField::line_closed(Arc::new(|u: f64| 1.0 + u - 0.5 * u * u));
        let xs: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.3).collect();
        for t_max in [1.0, 0.1, 0.001] {
            let ts = vec![t_max, t_max / 2.0];
            let z = zygmund_seminorm(&v, &xs, &ts).unwrap();
            assert_abs_diff_eq!(z, 2.0 * 0.5 * t_max, epsilon = 1e-9);
        }
        let affine = VectorField::line_closed(Arc::new(|u: f64| 3.0 - 2.0 * u));
        let ts = vec![1.0, 0.3, 0.1];
        assert_abs_diff_eq!(
            zygmund_seminorm(&affine, &xs, &ts).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    /// 1D maximization oracle for sup_u 2(1 − cos u)/u.
    fn cos_seminorm_constant() -> (f64, f64) {
        let g = |u: f64| 2.0 * (1.0 - u.cos()) / u;
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if g(m1) < g(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let u = 0.5 * (lo + hi);
        (u, g(u))
    }

    #[test]
    fn zygmund_seminorm_of_cosine_matches_oracle() {
        let (u_star, g_star) = cos_seminorm_constant();
        // oracle constant: (1 − cos u*)/u* ≈ 0.72461 at u* ≈ 2.33112
        assert_abs_diff_eq!(g_star / 2.0, 0.72461, epsilon = 1e-4);
        assert_abs_diff_eq!(u_star, 2.33112, epsilon = 1e-4);
        for k in [1usize, 3] {
            let v = VectorField::trig(TrigPoly::cos(k));
            let xs: Vec<f64> = (0..32).map(|i| 2.0 * PI * i as f64 / 32.0).collect();
            let mut ts: Vec<f64> = (0..8).map(|j| 0.4 * 0.7f64.powi(j)).collect();
            ts.push(u_star / k as f64); // include the maximizer
            let got = zygmund_seminorm(&v, &xs, &ts).unwrap();
            assert_abs_diff_eq!(got, k as f64 * g_star, epsilon = 1e-9);
        }
    }

    #[test]
    fn weierstrass_seminorm_plateaus_under_refinement() {
        let v = VectorField::trig(weierstrass_field(12));
        let mut last = 0.0;
        let mut norms = Vec::new();
        for (nx, nt) in [(32, 8), (64, 12), (128, 16)] {
            let xs: Vec<f64> = (0..nx).map(|i| 2.0 * PI * i as f64 / nx as f64).collect();
            let ts: Vec<f64> = (1..=nt).map(|j| 1.2 * 0.5f64.powi(j)).collect();
            let z = zygmund_seminorm(&v, &xs, &ts).unwrap();
            assert!(z >= last - 1e-12);
            last = z;
            norms.push(z);
        }
        assert!(last.is_finite() && last > 0.5 && last < 10.0, "z = {last}");
        // plateau: refinement changes the value by < 35%
        assert!(norms[2] <= norms[0] * 1.35);
    }

    #[test]
    fn zygmund_seminorm_is_a_seminorm() {
        // exact absolute homogeneity, triangle inequality within tolerance
        let xs: Vec<f64> = (0..24).map(|i| 2.0 * PI * i as f64 / 24.0).collect();
        let ts: Vec<f64> = (1..=8).map(|j| 0.8 * 0.5f64.powi(j)).collect();
        let p = TrigPoly::new(0.0, vec![0.4, -1.0], vec![0.2, 0.7]).unwrap();
        let q = TrigPoly::new(0.1, vec![-0.3, 0.0, 0.9], vec![1.0, 0.0, -0.2]).unwrap();
        let zp = zygmund_seminorm(&VectorField::trig(p.clone()), &xs, &ts).unwrap();
        let zq = zygmund_seminorm(&VectorField::trig(q.clone()), &xs, &ts).unwrap();
        let zscaled =
            zygmund_seminorm(&VectorField::trig(p.scale(-2.5)), &xs, &ts).unwrap();
        assert_abs_diff_eq!(zscaled, 2.5 * zp, epsilon = 1e-12);
        let zsum = zygmund_seminorm(&VectorField::trig(p.add(&q)), &xs, &ts).unwrap();
        assert!(zsum <= zp + zq + 1e-12);
    }

    #[test]
    fn little_zygmund_profiles() {
        let xs: Vec<f64> = (0..64).map(|i| 2.0 * PI * i as f64 / 64.0).collect();
        let scales: Vec<f64> = (1..=10).map(|k| 0.5f64.powi(k)).collect();
        // C² field: profile O(t) → 0
        let smooth = VectorField::trig(TrigPoly::sin(2));
        let p = little_zygmund_profile(&smooth, &scales, &xs).unwrap();
        for (t, val) in scales.iter().zip(&p) {
            assert!(*val <= 4.5 * t, "profile {val} not O(t) at t = {t}");
        }
        assert!(p.last().unwrap() < &0.01);
        // quadratic field in the line chart: the profile is exactly 2t → 0
        let quad = VectorField::line_closed(Arc::new(|u: f64| u * u));
        let line_xs: Vec<f64> = (-6..=6).map(|i| i as f64 * 0.5).collect();
        let pq = little_zygmund_profile(&quad, &scales, &line_xs).unwrap();
        for (t, val) in scales.iter().zip(&pq) {
            assert_abs_diff_eq!(*val, 2.0 * t, epsilon = 1e-10);
        }
        // Weierstrass-type field: bounded away from zero at dyadic scales
        let rough = VectorField::trig(weierstrass_field(12));
        let pr = little_zygmund_profile(&rough, &scales, &xs).unwrap();
        assert!(pr.iter().all(|v| *v > 0.4), "profile {pr:?}");
    }

    #[test]
    fn crossratio_seminorm_properties() {
        let xs: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.37).collect();
        let ts: Vec<f64> = (0..10).map(|j| 1.5 * 0.6f64.powi(j)).collect();
        // quadratic polynomials are annihilated
        let quad = VectorField::line_closed(Arc::new(|u: f64| 3.0 * u * u - u + 2.0));
        assert_abs_diff_eq!(
            crossratio_seminorm(&quad, &xs, &ts, 1.0).unwrap(),
            0.0,
            epsilon = 1e-10
        );
        // κ = 1 on the restricted family reproduces the Zygmund value
        let decay = VectorField::line_closed(Arc::new(|u: f64| 1.0 / (1.0 + u * u)));
        let zy = zygmund_seminorm(&decay, &xs, &ts).unwrap();
        let cr = crossratio_seminorm(&decay, &xs, &ts, 1.0).unwrap();
        assert_abs_diff_eq!(cr, zy, epsilon = 1e-9);
        // exact homogeneity
        let twice = VectorField::line_closed(Arc::new(|u: f64| 2.0 / (1.0 + u * u)));
        assert_abs_diff_eq!(
            crossratio_seminorm(&twice, &xs, &ts, 1.0).unwrap(),
            2.0 * cr,
            epsilon = 1e-12
        );
    }

    #[test]
    fn projection_normalizes_and_is_idempotent() {
        // V = u² + sin u projects to sin u − u sin 1
        let v = VectorField::line_closed(Arc::new(|u: f64| u * u + u.sin()));
        let p = project_out_quadratics(&v).unwrap();
        for &u in &[-3.0, 0.0, 0.5, 1.0, 2.0, 10.0] {
            assert_abs_diff_eq!(p.eval(u), u.sin() - u * 1.0f64.sin(), epsilon = 1e-9);
        }
        assert!(p.eval(0.0).abs() < 1e-12 && p.eval(1.0).abs() < 1e-12);
        // idempotent
        let pp = project_out_quadratics(&p).unwrap();
        for &u in &[-5.0, 0.3, 1.0, 4.0] {
            assert_abs_diff_eq!(pp.eval(u), p.eval(u), epsilon = 1e-12);
        }
        // quadratic polynomials go to zero
        let q = VectorField::line_closed(Arc::new(|u: f64| 1.0 - 2.0 * u + 0.25 * u * u));
        let pq = project_out_quadratics(&q).unwrap();
        for &u in &[-2.0, 0.0, 0.7, 3.0] {
            assert_abs_diff_eq!(pq.eval(u), 0.0, epsilon = 1e-9);
        }
        // angle-chart input is rejected
        assert!(project_out_quadratics(&VectorField::trig(TrigPoly::sin(1))).is_err());
    }

    #[test]
    fn projection_idempotent_on_random_mixtures() {
        // deterministic pseudo-random coefficient mixtures
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..10 {
            let (a, b, c) = (4.0 * next(), 4.0 * next(), 4.0 * next());
            let (p1, p2) = (2.0 * next(), 2.0 * next());
            let f: FieldFn = Arc::new(move |u: f64| {
                a + b * u + c * u * u + p1 * (u.sin()) / (1.0 + u * u) + p2 / (1.0 + u.abs())
            });
            let v = VectorField::line_closed(f);
            let proj = project_out_quadratics(&v).unwrap();
            let proj2 = project_out_quadratics(&proj).unwrap();
            for &u in &[-7.0, -1.0, 0.0, 0.5, 1.0, 3.0, 20.0] {
                assert_abs_diff_eq!(proj2.eval(u), proj.eval(u), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn coefficient_serialization_roundtrip() {
        let p = TrigPoly::new(0.25, vec![1.0, 0.0, -0.5], vec![0.0, 2.0, 0.125]).unwrap();
        let text = p.to_coeff_text();
        let back = TrigPoly::from_coeff_text(&text).unwrap();
        assert_eq!(p, back);
        assert!(TrigPoly::from_coeff_text("0 1.0 2.0\n").is_err());
    }
}
