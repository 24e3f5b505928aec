use thiserror::Error;

use crate::algebra::{Rat, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `‖f_n‖₁ ≤ u`
    NormBound,
    /// `v_n ≤ v`
    VariationBound,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("empty prefix")]
    EmptyPrefix,
    #[error("rate violation at level {level}: ||p_{level} - p_{next}||_1 = {norm} > {bound}", next = level + 1)]
    RateViolation { level: usize, norm: Real, bound: Rat },
    #[error("variation violation at level {level}: int |p_{level}'| = {variation} > {bound}")]
    VariationViolation { level: usize, variation: Real, bound: Rat },
    #[error("depth exhausted: need depth {needed}, have {available}")]
    DepthExhausted { needed: usize, available: usize },
    #[error("gap too small: eps = {eps} must be below {limit}")]
    GapTooSmall { eps: Rat, limit: Rat },
    #[error("no polynomial of degree <= {max_degree} meets the target {target} (best certified error {best})")]
    ProjectionBudgetExceeded { max_degree: usize, target: Rat, best: String },
    #[error("dimension {dim} too small for depth {depth}: need at least {}", depth + 1)]
    DimensionTooSmall { dim: usize, depth: usize },
    #[error("points have different dimensions ({0} and {1})")]
    DimensionMismatch(usize, usize),
    #[error("grid of family {family} too coarse for level {level}")]
    GridTooCoarse { family: usize, level: usize },
    #[error("family {family}, member {member}: sample {value} exceeds bound {bound}")]
    BoundViolation { family: usize, member: usize, value: Rat, bound: Rat },
    #[error("hypothesis {which:?} violated by f_{index}: {witness}")]
    HypothesisViolation { which: Hypothesis, index: usize, witness: String },
    #[error("test function is not zero at {at}: value {value}")]
    BoundaryViolation { at: Rat, value: Rat },
    #[error("not a gadget code: {0}")]
    NotAGadgetCode(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
