//! The three almost-complex operators I, J, K on two-sided Beltrami
//! coefficients `μ = (μ₁ on H, μ₂ on H*)`:
//!
//! ```text
//! I: μ ↦ i μ                              (both half-planes)
//! J: μ ↦ ( conj μ₂(z̄) on H , −conj μ₁(z̄) on H* )
//! K = I ∘ J
//! ```
//!
//! These satisfy the quaternion table `I² = J² = K² = −Id`, `IJ = K`,
//! `JK = I`, `KI = J`, `IJ = −JI`, pointwise and exactly; all three preserve
//! `|μ(z)|` pointwise, hence the essential sup. On symmetric coefficients
//! (`μ₂(z) = conj μ₁(z̄)`) the composition K acts as `(iμ₁ on H, −iμ₂ on
//! H*)` — the coefficient form of the conjugate-function structure, up to
//! the sign convention pinned in the hilbert module (K realises −J there).

use num_complex::Complex64;

use crate::quaddiff::{BeltramiSymmetry, TwoSidedBeltrami};

/// `I: μ ↦ iμ` on both half-planes; preserves `|μ|` pointwise.
pub fn op_i(mu: &TwoSidedBeltrami) -> TwoSidedBeltrami {
    let up = mu.upper_fn();
    let lo = mu.lower_fn();
    TwoSidedBeltrami::ad_hoc(
        std::sync::Arc::new(move |z: Complex64| Complex64::i() * up(z)),
        std::sync::Arc::new(move |z: Complex64| Complex64::i() * lo(z)),
        mu.sup_bound,
    )
}

/// `J`: half-plane swap with conjugate reflection and a sign on the lower
/// component.
pub fn op_j(mu: &TwoSidedBeltrami) -> TwoSidedBeltrami {
    let up = mu.upper_fn();
    let lo = mu.lower_fn();
    TwoSidedBeltrami::ad_hoc(
        std::sync::Arc::new(move |z: Complex64| lo(z.conj()).conj()),
        std::sync::Arc::new(move |z: Complex64| -(up(z.conj()).conj())),
        mu.sup_bound,
    )
}

/// `K = I ∘ J`.
pub fn op_k(mu: &TwoSidedBeltrami) -> TwoSidedBeltrami {
    op_i(&op_j(mu))
}

/// Worst pointwise defect of the full quaternion table over a sample set:
/// `I²+1, J²+1, K²+1, IJ−K, JK−I, KI−J, IJ+JI` applied to `μ` and compared
/// at every sample point. Exact arithmetic means the result is rounding-level.
pub fn quaternion_table_defect(mu: &TwoSidedBeltrami, samples: &[Complex64]) -> f64 {
    let neg = |m: &TwoSidedBeltrami| {
        let up = m.upper_fn();
        let lo = m.lower_fn();
        TwoSidedBeltrami::ad_hoc(
            std::sync::Arc::new(move |z: Complex64| -up(z)),
            std::sync::Arc::new(move |z: Complex64| -lo(z)),
            m.sup_bound,
        )
    };
    let pairs: Vec<(TwoSidedBeltrami, TwoSidedBeltrami)> = vec![
        (op_i(&op_i(mu)), neg(mu)),
        (op_j(&op_j(mu)), neg(mu)),
        (op_k(&op_k(mu)), neg(mu)),
        (op_i(&op_j(mu)), op_k(mu)),
        (op_j(&op_k(mu)), op_i(mu)),
        (op_k(&op_i(mu)), op_j(mu)),
        (op_i(&op_j(mu)), neg(&op_j(&op_i(mu)))),
    ];
    let mut worst = 0.0f64;
    for (lhs, rhs) in &pairs {
        for &z in samples {
            worst = worst.max((lhs.eval(z) - rhs.eval(z)).norm());
        }
    }
    worst
}

/// Worst pointwise isometry defect over the samples: `|I μ(z)| = |μ(z)|`
/// at the same point, while J and K carry the modulus across the
/// reflection, `|J μ(z)| = |K μ(z)| = |μ(z̄)|`. Either way the essential
/// sup is preserved exactly.
pub fn isometry_defect(mu: &TwoSidedBeltrami, samples: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    let (j, k) = (op_j(mu), op_k(mu));
    for &z in samples {
        worst = worst.max((op_i(mu).eval(z).norm() - mu.eval(z).norm()).abs());
        worst = worst.max((j.eval(z).norm() - mu.eval(z.conj()).norm()).abs());
        worst = worst.max((k.eval(z).norm() - mu.eval(z.conj()).norm()).abs());
    }
    worst
}

/// K sends symmetric coefficients to symmetric coefficients (J instead
/// flips the reflection sign: J μ has lower part −conj(upper(z̄))). Returns
/// the worst K-symmetry defect and the worst J-antisymmetry defect over a
/// grid.
pub fn symmetry_preservation_defect(mu: &TwoSidedBeltrami, samples: usize) -> (f64, f64) {
    let n = samples.max(8);
    let kmu = op_k(mu);
    let jmu = op_j(mu);
    let mut k_defect = 0.0f64;
    let mut j_defect = 0.0f64;
    for i in 0..n {
        for j in 1..=n {
            let z = Complex64::new(-3.0 + 6.0 * i as f64 / n as f64, 3.0 * j as f64 / n as f64);
            k_defect = k_defect.max((kmu.eval(z.conj()) - kmu.eval(z).conj()).norm());
            j_defect = j_defect.max((jmu.eval(z.conj()) + jmu.eval(z).conj()).norm());
        }
    }
    (k_defect, j_defect)
}
