//! Instance transformations between Helly selection and Bolzano-Weierstraß.

use num_traits::{Signed, Zero};

use crate::algebra::{ceil_log2_nonneg, int, pow2, sup_abs_bound, PiecewisePoly, Poly, Rat, ScaledPoly};
use crate::code::{bound_tol, bvcode_from_poly_depth, bvcode_norm_l1, BVCode, ModulusFn, DEFAULT_DEPTH};
use crate::error::{Error, Hypothesis, Result};
use crate::mollify::{mollify_poly, Bump};

use super::aa::EquiFamily;

/// Smoothness of the kernel used by the Helly pipeline.
pub const HELLY_BUMP: u32 = 2;

/// Constant codes `f_n = x_n` with `v = 0`.
pub fn bw_to_hst_instance(xs: &[Rat]) -> Result<Vec<BVCode>> {
    xs.iter()
        .enumerate()
        .map(|(n, x)| {
            if x.is_negative() || *x > int(1) {
                return Err(Error::InvalidInput(format!("x_{n} = {x} is outside [0, 1]")));
            }
            Ok(bvcode_from_poly_depth(Poly::constant(x.clone()), DEFAULT_DEPTH))
        })
        .collect()
}

/// The point sequence a Helly selection hands to Bolzano-Weierstraß, with
/// the sampled family it was built from.
#[derive(Clone, Debug)]
pub struct HellyInstance {
    /// Levels `k ≤ depth` are certified.
    pub depth: usize,
    pub u: Rat,
    pub v: Rat,
    /// `ε_j = 2^-j`, `j = 0..=I`.
    pub scales: Vec<Rat>,
    /// Mollifications `(p_{n,K_n})^{ε_j}` sampled on a common dyadic grid.
    pub family: EquiFamily,
    pub points: Vec<Vec<Rat>>,
}

/// Exact values of a piecewise polynomial at `i·2^-e`, `i = 0..=2^e`.
fn sample_grid(g: &PiecewisePoly, e: u32) -> Vec<Rat> {
    let forms: Vec<ScaledPoly> = g.pieces().iter().map(ScaledPoly::new).collect();
    let h = pow2(-(e as i64));
    let mut piece = 0;
    (0..=(1u64 << e))
        .map(|i| {
            let x = &h * int(i as i64);
            while piece + 1 < forms.len() && x >= g.breaks()[piece + 1] {
                piece += 1;
            }
            forms[piece].eval(&x)
        })
        .collect()
}

fn check_hypotheses(fs: &[BVCode], u: &Rat, v: &Rat) -> Result<()> {
    for (n, f) in fs.iter().enumerate() {
        if f.v() > v {
            return Err(Error::HypothesisViolation {
                which: Hypothesis::VariationBound,
                index: n,
                witness: format!("v_{n} = {} > v = {v}", f.v()),
            });
        }
        let norm = bvcode_norm_l1(f, f.depth())?;
        if norm.lo > *u {
            return Err(Error::HypothesisViolation {
                which: Hypothesis::NormBound,
                index: n,
                witness: format!("||f_{n}||_1 >= {} > u = {u}", norm.lo),
            });
        }
    }
    Ok(())
}

/// Number of mollification scales beyond `0`: `depth + ⌈log₂(v + 1)⌉ + 2`.
pub fn scale_count(depth: usize, v: &Rat) -> usize {
    depth + ceil_log2_nonneg(&(v + int(1))) + 2
}

/// Mollify the deepest polynomial of every code at `ε = 2^-j`, `j = 0..=I`,
/// and sample on a grid fine enough for the Lipschitz bound `max_n sup|p_n'|`
/// (mollification keeps it), so that grid agreement to `2^{-(k+1)}` gives sup
/// agreement to `2^-k` for all `k ≤ depth`.
pub fn hst_to_bw_instance(fs: &[BVCode], u: &Rat, v: &Rat, depth: usize) -> Result<HellyInstance> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("empty sequence of codes".into()));
    }
    check_hypotheses(fs, u, v)?;
    let top = scale_count(depth, v);
    let scales: Vec<Rat> = (0..=top).map(|j| pow2(-(j as i64))).collect();
    let mut distinct: Vec<&Poly> = Vec::new();
    let slot: Vec<usize> = fs
        .iter()
        .map(|f| match distinct.iter().position(|p| *p == f.last()) {
            Some(i) => i,
            None => {
                distinct.push(f.last());
                distinct.len() - 1
            }
        })
        .collect();
    let (zero, one) = (Rat::zero(), int(1));
    let lip = distinct
        .iter()
        .map(|p| sup_abs_bound(&p.derivative(), &zero, &one, &bound_tol()))
        .max()
        .unwrap();
    let sup = distinct.iter().map(|p| sup_abs_bound(p, &zero, &one, &bound_tol())).max().unwrap();
    let offset = ceil_log2_nonneg(&lip.clone().max(int(1))) as u32;
    let modulus = ModulusFn::Affine { slope: 1, offset };
    let bits = depth as u32 + 1 + offset;
    let bump = Bump::new(HELLY_BUMP)?;
    let mut sampled: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(distinct.len());
    for p in &distinct {
        let mut per = Vec::with_capacity(scales.len());
        for eps in &scales {
            per.push(sample_grid(&mollify_poly(p, eps, &bump)?, bits));
        }
        sampled.push(per);
    }
    let samples = slot.iter().map(|&s| sampled[s].clone()).collect();
    let fams = scales.len();
    let family = EquiFamily::new(samples, vec![bits; fams], vec![sup; fams], vec![modulus; fams])?;
    let points = family.product_points(depth);
    Ok(HellyInstance { depth, u: u.clone(), v: v.clone(), scales, family, points })
}
