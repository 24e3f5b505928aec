//! Functions of bounded variation as exact rational-polynomial Cauchy codes.
//!
//! A code is a finite prefix `(p_0, …, p_K)` of polynomials on `[0, 1]` with
//! `‖p_k − p_{k+1}‖₁ ≤ 2^-k`, together with a rational `v` bounding every
//! `∫|p_k'|`. Everything here is exact: norms are computed symbolically over
//! isolated polynomial roots and every certificate can be re-checked.

#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod code;
pub mod dual;
pub mod error;
pub mod json;
pub mod mollify;
pub mod projection;
pub mod selection;

pub use error::{Error, Hypothesis, Result};
