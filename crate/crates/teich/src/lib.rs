//! Constructive machinery for the analysis of quasisymmetric circle
//! homeomorphisms and their quasiconformal extensions.
//!
//! The crate is organised around the objects themselves:
//!
//! - [`circlemap`] — quasisymmetric homeomorphisms of the line/circle:
//!   ratio measurements, Hölder exponents, dynamical conjugacies,
//!   composition and inversion.
//! - [`extension`] — Beurling–Ahlfors extensions to the upper half-plane,
//!   Beltrami coefficients and dilatation fields.
//! - [`vectorfield`] — Zygmund-class tangent vector fields on the circle:
//!   seminorms, cross-ratio functionals, chart transport, the quotient by
//!   quadratic polynomials.
//! - [`hilbert`] — the Hilbert transform computed three independent ways.
//! - [`trigapprox`] — Fejér/Jackson kernels, convolution approximation,
//!   the Bernstein inequality and approximation-rate profiles.
//! - [`quaddiff`] — integrable holomorphic quadratic differentials with
//!   simple real poles, the boundary pairing and the residue formula.
//! - [`teichmetric`] — dilatation-based distance bounds: extension upper
//!   bounds and Reich–Strebel lower bounds, plus the infinitesimal norm.
//! - [`quasifuchsian`] — the I/J/K operator algebra on two-sided Beltrami
//!   coefficients.
//! - [`numerics`] — the shared quadrature engines underneath all of it.
//!
//! All computations are pure functions of explicit inputs with fixed
//! summation orders; byte-identical inputs give byte-identical outputs.

pub mod circlemap;
pub mod error;
pub mod extension;
pub mod hilbert;
pub mod numerics;
pub mod quaddiff;
pub mod quasifuchsian;
pub mod teichmetric;
pub mod trigapprox;
pub mod vectorfield;

pub use error::{Error, Result};
