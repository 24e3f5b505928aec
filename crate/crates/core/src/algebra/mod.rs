//! Exact rational algebra: scalars, polynomials, root isolation and norms.

pub mod intpoly;
pub mod norms;
pub mod piecewise;
pub mod poly;
pub mod rat;
pub mod real;
pub mod roots;
pub mod scaled;

pub use norms::{integral, integral_abs, poly_variation, poly_variation_on, sup_abs_bound};
pub use piecewise::{pw_integral_abs, pw_sup_bound, PiecewisePoly};
pub use poly::Poly;
pub use rat::{ceil_log2, ceil_log2_nonneg, int, parse_rat, pow2, rat, Rat};
pub use real::Real;
pub use roots::{isolate_roots, AlgRoot, RootBoxes, RootLoc};
pub use scaled::ScaledPoly;

/// `p(x)`, exact.
pub fn poly_eval(p: &Poly, x: &Rat) -> Rat {
    p.eval(x)
}

pub fn poly_derivative(p: &Poly) -> Poly {
    p.derivative()
}

pub fn poly_antiderivative(p: &Poly) -> Poly {
    p.antiderivative()
}
