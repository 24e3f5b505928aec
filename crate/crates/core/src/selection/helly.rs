//! Helly selection: an L1-convergent subsequence with rate and a BV limit code.

use crate::algebra::{ceil_log2_nonneg, int, pow2, Rat, Real};
use crate::code::{bvcode_reindex, BVCode};
use crate::error::{Error, Result};
use crate::mollify::l1_distance;

use super::aa::{aa_thin, AaSelection};
use super::bw::bw_product_select;
use super::reduce::{hst_to_bw_instance, HellyInstance};
use super::SelectionCertificate;

/// `‖p_{g(n),K} − p_{g(m),K}‖₁ = value ≤ bound` at level `k = min(n, depth)`.
#[derive(Clone, Debug)]
pub struct PairAssertion {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub value: Real,
    pub bound: Rat,
}

/// Rate certificate `‖f_{g(n)} − f_{g(n')}‖₁ ≤ 2^-k + 2^{-k+2}v + 2^{-K+1}`
/// for `n, n' ≥ k`, checked on the deepest stored polynomials.
#[derive(Clone, Debug)]
pub struct HellyCertificate {
    pub g: Vec<usize>,
    pub depth: usize,
    pub v: Rat,
    /// `2^{-K+1}`, `K` the smallest input depth.
    pub slack: Rat,
    pub pairs: Vec<PairAssertion>,
    pub exhausted_at: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct HellyResult {
    pub certificate: HellyCertificate,
    pub limit: BVCode,
    /// Index shift `s` with `2^s ≥ 1 + 4v`: limit level `n` is `f_{g(n+s)}`.
    pub shift: usize,
    pub selection: AaSelection,
}

pub fn pair_bound(k: usize, v: &Rat, slack: &Rat) -> Rat {
    let t = pow2(-(k as i64));
    &t + &t * int(4) * v + slack
}

fn pairs_for(fs: &[BVCode], g: &[usize], depth: usize, v: &Rat, slack: &Rat) -> Vec<PairAssertion> {
    let mut out = Vec::new();
    for n in 0..g.len() {
        for m in n + 1..g.len() {
            let k = n.min(depth);
            let value = l1_distance(fs[g[n]].last(), fs[g[m]].last());
            out.push(PairAssertion { n, m, k, value, bound: pair_bound(k, v, slack) });
        }
    }
    out
}

/// Post-processing of a product selection on `inst.points`: thinning, the
/// rate certificate and the limit code.
pub fn helly_finish(fs: &[BVCode], inst: &HellyInstance, bw: &SelectionCertificate) -> Result<HellyResult> {
    let depth = inst.depth;
    let v = &inst.v;
    let sel = aa_thin(&inst.family, bw, depth);
    let g = sel.g.clone();
    let kmin = fs.iter().map(|f| f.depth()).min().unwrap();
    let slack = pow2(-(kmin as i64) + 1);
    let pairs = pairs_for(fs, &g, depth, v, &slack);
    if let Some(p) = pairs.iter().find(|p| !p.value.le_rat(&p.bound)) {
        return Err(Error::RateViolation { level: p.k, norm: p.value.clone(), bound: p.bound.clone() });
    }
    let shift = ceil_log2_nonneg(&(int(1) + int(4) * v));
    if depth < shift {
        return Err(Error::DepthExhausted { needed: shift, available: depth });
    }
    let out = depth - shift;
    let family: Vec<BVCode> = (0..=out + 1)
        .map(|n| {
            let f = &fs[g[(n + shift).min(g.len() - 1)]];
            BVCode::trusted(vec![f.last().clone(); out + 2], f.v().clone())
        })
        .collect();
    let limit = bvcode_reindex(&family, v)?;
    let certificate = HellyCertificate {
        g,
        depth,
        v: v.clone(),
        slack,
        pairs,
        exhausted_at: sel.exhausted_at,
    };
    Ok(HellyResult { certificate, limit, shift, selection: sel })
}

/// Helly selection for codes with `‖f_n‖₁ ≤ u` and `v_n ≤ v`, certified for
/// levels `k ≤ depth`; the limit code has depth `depth − ⌈log₂(1 + 4v)⌉`.
pub fn helly_select(fs: &[BVCode], u: &Rat, v: &Rat, depth: usize) -> Result<HellyResult> {
    let inst = hst_to_bw_instance(fs, u, v, depth)?;
    let bw = bw_product_select(&inst.points, depth)?;
    helly_finish(fs, &inst, &bw)
}

/// Independent re-check of every pair assertion and of the pair list itself.
pub fn verify_helly(fs: &[BVCode], cert: &HellyCertificate) -> bool {
    let g = &cert.g;
    if g.windows(2).any(|w| w[0] >= w[1]) || g.iter().any(|&i| i >= fs.len()) {
        return false;
    }
    let kmin = fs.iter().map(|f| f.depth()).min().unwrap_or(0);
    if cert.slack != pow2(-(kmin as i64) + 1) {
        return false;
    }
    let expect = g.len() * g.len().saturating_sub(1) / 2;
    cert.pairs.len() == expect
        && cert.pairs.iter().all(|p| {
            let value = l1_distance(fs[g[p.n]].last(), fs[g[p.m]].last());
            p.n < p.m
                && p.m < g.len()
                && p.k == p.n.min(cert.depth)
                && p.bound == pair_bound(p.k, &cert.v, &cert.slack)
                && value.exactly_equals(&p.value)
                && value.le_rat(&p.bound)
        })
}
