//! Shared quadrature and grid infrastructure: adaptive Gauss rules on
//! intervals and rectangles, truncated half-plane double integrals,
//! principal values on the circle, symmetric differences and antiderivative
//! tables.
//!
//! Everything here is a pure function of explicit inputs — no global state —
//! and recursion/summation orders are fixed, so identical inputs reproduce
//! identical bits.

pub mod adapt;
pub mod gauss;
mod grid;
mod pv;
pub mod spline;

pub use adapt::{adaptive_1d, adaptive_rect, QuadOut, Rect};
pub use grid::{integrate_halfplane, second_difference, HalfPlaneGrid, Tolerance};
pub use pv::pv_circle_integral;
