//! Selection engines: Bolzano-Weierstraß on `[0, 1]` and `[0, 1]^D`, the
//! diagonal Arzelà-Ascoli selector, Helly selection for BV codes, and the
//! instance transformations between Helly and Bolzano-Weierstraß.

pub mod aa;
pub mod bw;
pub mod helly;
pub mod reduce;

use num_traits::Signed;

use crate::algebra::{pow2, Rat};

pub use aa::{aa_diagonal_select, aa_thin, AaSelection, EquiFamily};
pub use bw::{bw_product_select, bw_select, product_distance};
pub use helly::{helly_finish, helly_select, verify_helly, HellyCertificate, HellyResult, PairAssertion};
pub use reduce::{bw_to_hst_instance, hst_to_bw_instance, HellyInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    Point(Rat),
    Product(Vec<Rat>),
}

/// `value ≤ bound` for the term `x_{index}` chosen at level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAssertion {
    pub n: usize,
    pub index: usize,
    pub value: Rat,
    pub bound: Rat,
}

/// Finite witness of a convergent subsequence: `g` strictly increasing with
/// `d(x_{g(n)}, candidate) ≤ 2^-n` for each recorded level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionCertificate {
    pub g: Vec<usize>,
    pub candidate: Candidate,
    pub levels: Vec<LevelAssertion>,
    /// First level at which no later index was close enough.
    pub exhausted_at: Option<usize>,
    /// Truncation term included in every product-metric value.
    pub slack: Rat,
    /// Indices inside the final bisection box.
    pub survivors: Vec<usize>,
}

impl SelectionCertificate {
    fn structure_ok(&self) -> bool {
        self.g.windows(2).all(|w| w[0] < w[1])
            && self.levels.len() == self.g.len()
            && self
                .levels
                .iter()
                .enumerate()
                .all(|(n, a)| a.n == n && a.index == self.g[n] && a.bound == pow2(-(n as i64)) && a.value <= a.bound)
    }

    /// Recompute every assertion for a sequence in `[0, 1]`.
    pub fn verify_point(&self, xs: &[Rat]) -> bool {
        let Candidate::Point(c) = &self.candidate else { return false };
        self.structure_ok()
            && self.levels.iter().all(|a| xs.get(a.index).is_some_and(|x| (x - c).abs() == a.value))
    }

    /// Recompute every assertion for points of `[0, 1]^D`.
    pub fn verify_product(&self, ps: &[Vec<Rat>]) -> bool {
        let Candidate::Product(c) = &self.candidate else { return false };
        let slack = pow2(-(c.len() as i64));
        self.slack == slack
            && self.structure_ok()
            && self.levels.iter().all(|a| {
                ps.get(a.index)
                    .is_some_and(|p| p.len() == c.len() && product_distance(p, c) + &slack == a.value)
            })
    }
}
