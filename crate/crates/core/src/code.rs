//! L1 and BV codes: validated finite prefixes of rational polynomials.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{ceil_log2_nonneg, integral_abs, poly_variation, pow2, Poly, Rat, Real};
use crate::error::{Error, Result};

pub const DEFAULT_DEPTH: usize = 24;

/// Tolerance used when a rational upper bound of an algebraic norm is needed.
pub(crate) fn bound_tol() -> Rat {
    pow2(-48)
}

/// A validated prefix `(p_0, …, p_K)` with `‖p_k − p_{k+1}‖₁ ≤ 2^-k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Code {
    prefix: Vec<Poly>,
}

/// An L1 code with a rational bound `v ≥ ∫|p_k'|` for every stored `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BVCode {
    code: L1Code,
    v: Rat,
}

/// Outcome of one level of validation.
#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub level: usize,
    /// `‖p_k − p_{k+1}‖₁`, absent at the last level.
    pub rate: Option<Real>,
    pub rate_ok: bool,
    /// `∫|p_k'|`
    pub variation: Option<Real>,
    pub variation_ok: bool,
}

fn rate_at(prefix: &[Poly], k: usize) -> Real {
    let d = &prefix[k] - &prefix[k + 1];
    integral_abs(&d, &Rat::zero(), &Rat::from_integer(1.into()))
}

/// Per-level checks; variation is skipped when `v` is `None`.
pub fn check_levels(prefix: &[Poly], v: Option<&Rat>) -> Vec<LevelCheck> {
    // Runs of equal polynomials share one variation computation.
    let starts: Vec<usize> = (0..prefix.len()).filter(|&k| k == 0 || prefix[k] != prefix[k - 1]).collect();
    let vars: Vec<Option<(Real, bool)>> = starts
        .par_iter()
        .map(|&k| {
            v.map(|v| {
                let var = poly_variation(&prefix[k]);
                let ok = var.le_rat(v);
                (var, ok)
            })
        })
        .collect();
    (0..prefix.len())
        .into_par_iter()
        .map(|k| {
            let rate = (k + 1 < prefix.len()).then(|| {
                if prefix[k] == prefix[k + 1] {
                    Real::zero()
                } else {
                    rate_at(prefix, k)
                }
            });
            let rate_ok = rate.as_ref().is_none_or(|r| r.le_rat(&pow2(-(k as i64))));
            let run = starts.partition_point(|&s| s <= k) - 1;
            let (variation, variation_ok) = match &vars[run] {
                Some((var, ok)) => (Some(var.clone()), *ok),
                None => (None, true),
            };
            LevelCheck { level: k, rate, rate_ok, variation, variation_ok }
        })
        .collect()
}

fn first_violation(checks: Vec<LevelCheck>, v: Option<&Rat>) -> Result<()> {
    for c in checks {
        if !c.rate_ok {
            return Err(Error::RateViolation {
                level: c.level,
                norm: c.rate.unwrap(),
                bound: pow2(-(c.level as i64)),
            });
        }
        if !c.variation_ok {
            return Err(Error::VariationViolation {
                level: c.level,
                variation: c.variation.unwrap(),
                bound: v.unwrap().clone(),
            });
        }
    }
    Ok(())
}

impl L1Code {
    pub fn new(prefix: Vec<Poly>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::EmptyPrefix);
        }
        first_violation(check_levels(&prefix, None), None)?;
        Ok(L1Code { prefix })
    }

    pub fn depth(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn prefix(&self) -> &[Poly] {
        &self.prefix
    }

    pub fn level(&self, k: usize) -> &Poly {
        &self.prefix[k]
    }

    pub fn last(&self) -> &Poly {
        self.prefix.last().unwrap()
    }
}

impl BVCode {
    pub fn new(prefix: Vec<Poly>, v: Rat) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::EmptyPrefix);
        }
        if v.is_negative() {
            return Err(Error::InvalidInput(format!("negative variation bound {v}")));
        }
        first_violation(check_levels(&prefix, Some(&v)), Some(&v))?;
        Ok(BVCode { code: L1Code { prefix }, v })
    }

    /// Internal constructor for prefixes valid by construction; checked in debug builds.
    pub(crate) fn trusted(prefix: Vec<Poly>, v: Rat) -> Self {
        debug_assert!(BVCode::new(prefix.clone(), v.clone()).is_ok());
        BVCode { code: L1Code { prefix }, v }
    }

    pub fn code(&self) -> &L1Code {
        &self.code
    }

    pub fn v(&self) -> &Rat {
        &self.v
    }

    pub fn depth(&self) -> usize {
        self.code.depth()
    }

    pub fn prefix(&self) -> &[Poly] {
        self.code.prefix()
    }

    pub fn level(&self, k: usize) -> &Poly {
        self.code.level(k)
    }

    pub fn last(&self) -> &Poly {
        self.code.last()
    }

    /// Truncate to depth `k`.
    pub fn truncate(&self, k: usize) -> BVCode {
        BVCode {
            code: L1Code { prefix: self.prefix()[..=k.min(self.depth())].to_vec() },
            v: self.v.clone(),
        }
    }
}

pub fn l1code_new(prefix: Vec<Poly>) -> Result<L1Code> {
    L1Code::new(prefix)
}

pub fn bvcode_new(prefix: Vec<Poly>, v: Rat) -> Result<BVCode> {
    BVCode::new(prefix, v)
}

/// Constant sequence `(p, p, …)` of depth `depth`, with `v = V(p)` (rounded up if irrational).
pub fn bvcode_from_poly_depth(p: Poly, depth: usize) -> BVCode {
    let var = poly_variation(&p);
    let v = match var.to_rat() {
        Some(r) => r.clone(),
        None => var.upper_bound(&bound_tol()),
    };
    BVCode::trusted(vec![p; depth + 1], v)
}

pub fn bvcode_from_poly(p: Poly) -> BVCode {
    bvcode_from_poly_depth(p, DEFAULT_DEPTH)
}

/// `a·f + b·g` with the minimal index shift `s`, `2^s ≥ |a| + |b|`.
pub fn bvcode_linear_comb(a: &Rat, f: &BVCode, b: &Rat, g: &BVCode) -> Result<BVCode> {
    let total = a.abs() + b.abs();
    let s = if total.is_zero() { 0 } else { ceil_log2_nonneg(&total) };
    let avail = f.depth().min(g.depth());
    if s > avail {
        return Err(Error::DepthExhausted { needed: s, available: avail });
    }
    let prefix: Vec<Poly> = (0..=avail - s)
        .map(|k| &f.level(k + s).scale(a) + &g.level(k + s).scale(b))
        .collect();
    let v = a.abs() * f.v() + b.abs() * g.v();
    BVCode::new(prefix, v)
}

/// Diagonal `q_k := p_{k+1,k+1}` of a family converging at rate `2^-n`.
pub fn bvcode_reindex(fs: &[BVCode], v: &Rat) -> Result<BVCode> {
    if fs.len() < 2 {
        return Err(Error::DepthExhausted { needed: 2, available: fs.len() });
    }
    for (n, f) in fs.iter().enumerate() {
        if f.v() > v {
            return Err(Error::VariationViolation {
                level: n,
                variation: Real::from_rat(f.v().clone()),
                bound: v.clone(),
            });
        }
    }
    let witness: Vec<Option<(Real, Rat)>> = (0..fs.len() - 1)
        .into_par_iter()
        .map(|n| {
            let (a, b) = (&fs[n], &fs[n + 1]);
            let bound = pow2(-(n as i64))
                + pow2(-(n as i64) - 1)
                + pow2(-(a.depth() as i64) + 1)
                + pow2(-(b.depth() as i64) + 1);
            let d = if a.last() == b.last() {
                Real::zero()
            } else {
                integral_abs(&(a.last() - b.last()), &Rat::zero(), &Rat::from_integer(1.into()))
            };
            (!d.le_rat(&bound)).then_some((d, bound))
        })
        .collect();
    if let Some((n, Some((norm, bound)))) = witness.into_iter().enumerate().find(|(_, w)| w.is_some()) {
        return Err(Error::RateViolation { level: n, norm, bound });
    }
    let mut prefix = Vec::new();
    let mut k = 0;
    while k + 1 < fs.len() && fs[k + 1].depth() > k {
        prefix.push(fs[k + 1].level(k + 1).clone());
        k += 1;
    }
    BVCode::new(prefix, v.clone())
}

/// Exact rational enclosure of `‖f‖₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl NormInterval {
    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// `[‖p_m‖₁ − 2^{-m+1}, ‖p_m‖₁ + 2^{-m+1}]`; an irrational `‖p_m‖₁` is replaced by a tight enclosure.
pub fn bvcode_norm_l1(f: &BVCode, m: usize) -> Result<NormInterval> {
    if m > f.depth() {
        return Err(Error::DepthExhausted { needed: m, available: f.depth() });
    }
    let n = integral_abs(f.level(m), &Rat::zero(), &Rat::from_integer(1.into()));
    let (lo, hi) = n.enclose(&pow2(-(m as i64) - 40));
    let slack = pow2(-(m as i64) + 1);
    Ok(NormInterval { lo: lo - &slack, hi: hi + slack })
}

/// A modulus `n ↦ h(n)`, monotone nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModulusFn {
    Table(Vec<u32>),
    /// `h(n) = slope·n + offset`
    Affine { slope: u32, offset: u32 },
}

impl ModulusFn {
    pub fn table(t: Vec<u32>) -> Result<Self> {
        if t.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("modulus table must be nondecreasing".into()));
        }
        Ok(ModulusFn::Table(t))
    }

    pub fn identity() -> Self {
        ModulusFn::Affine { slope: 1, offset: 0 }
    }

    pub fn at(&self, n: usize) -> Option<u32> {
        match self {
            ModulusFn::Table(t) => t.get(n).copied(),
            ModulusFn::Affine { slope, offset } => Some(slope * n as u32 + offset),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn l1code_examples() {
        let x = Poly::x();
        assert!(l1code_new(vec![x.clone(), x.clone(), x.clone()]).is_ok());
        assert!(l1code_new(vec![Poly::zero(), x.clone()]).is_ok());
        match l1code_new(vec![Poly::zero(), x.scale(&int(3))]) {
            Err(Error::RateViolation { level: 0, norm, .. }) => {
                assert_eq!(norm.to_rat(), Some(&rat(3, 2)))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(l1code_new(vec![]), Err(Error::EmptyPrefix)));
    }

    #[test]
    fn bvcode_examples() {
        let x = Poly::x();
        assert!(bvcode_new(vec![x.clone(), x.clone()], int(1)).is_ok());
        assert!(matches!(
            bvcode_new(vec![x.clone(), x.clone()], rat(1, 2)),
            Err(Error::VariationViolation { level: 0, .. })
        ));
        let q = Poly::from_ints(&[0, 1, -1]);
        assert!(bvcode_new(vec![q.clone(), q], rat(1, 2)).is_ok());
    }

    #[test]
    fn from_poly_examples() {
        assert_eq!(bvcode_from_poly(Poly::x()).v(), &int(1));
        assert_eq!(bvcode_from_poly(Poly::constant(rat(2, 3))).v(), &int(0));
        assert_eq!(bvcode_from_poly(Poly::from_ints(&[0, 1, -1])).v(), &rat(1, 2));
        assert_eq!(bvcode_from_poly(Poly::x()).depth(), DEFAULT_DEPTH);
    }

    #[test]
    fn linear_comb_examples() {
        let f = bvcode_from_poly(Poly::x());
        let g = bvcode_from_poly(Poly::from_ints(&[0, 1, -1]));
        let id = bvcode_linear_comb(&int(1), &f, &int(0), &g).unwrap();
        assert_eq!(id, f);
        let z = bvcode_linear_comb(&int(1), &f, &int(-1), &f).unwrap();
        assert!(z.prefix().iter().all(Poly::is_zero));
        assert_eq!(z.v(), &int(2));
        let two = bvcode_linear_comb(&int(2), &f, &int(0), &g).unwrap();
        assert_eq!(two.v(), &int(2));
        assert_eq!(two.depth(), DEFAULT_DEPTH - 1);
        let shallow = bvcode_from_poly_depth(Poly::x(), 1);
        assert!(matches!(
            bvcode_linear_comb(&int(3), &shallow, &int(3), &shallow),
            Err(Error::DepthExhausted { .. })
        ));
    }

    #[test]
    fn reindex_examples() {
        let f = bvcode_from_poly_depth(Poly::x(), 6);
        let same = bvcode_reindex(&vec![f.clone(); 6], &int(1)).unwrap();
        assert!(same.prefix().iter().all(|p| *p == Poly::x()));
        let fs: Vec<BVCode> = (0..8)
            .map(|n| bvcode_from_poly_depth(Poly::linear(int(1), pow2(-n)), 8))
            .collect();
        let d = bvcode_reindex(&fs, &int(1)).unwrap();
        assert_eq!(d.v(), &int(1));
        assert_eq!(d.depth(), 6);
        assert_eq!(d.level(3), &Poly::linear(int(1), pow2(-4)));
        let bad: Vec<BVCode> = (0..4)
            .map(|n| bvcode_from_poly_depth(Poly::constant(int(3 * (n % 2))), 8))
            .collect();
        assert!(matches!(bvcode_reindex(&bad, &int(0)), Err(Error::RateViolation { level: 0, .. })));
    }

    #[test]
    fn norm_examples() {
        let f = bvcode_from_poly(Poly::x());
        assert!(bvcode_norm_l1(&f, 7).unwrap().contains(&rat(1, 2)));
        let z = bvcode_from_poly(Poly::zero());
        assert!(bvcode_norm_l1(&z, 3).unwrap().contains(&int(0)));
        let h = bvcode_from_poly(Poly::linear(int(1), rat(-1, 2)));
        let n = bvcode_norm_l1(&h, 10).unwrap();
        assert_eq!(n.lo, rat(1, 4) - pow2(-9));
        assert_eq!(n.hi, rat(1, 4) + pow2(-9));
        assert!(matches!(bvcode_norm_l1(&h, 30), Err(Error::DepthExhausted { .. })));
    }

    #[test]
    fn modulus_table() {
        assert!(ModulusFn::table(vec![1, 1, 2]).is_ok());
        assert!(ModulusFn::table(vec![2, 1]).is_err());
        assert_eq!(ModulusFn::identity().at(5), Some(5));
    }
}
