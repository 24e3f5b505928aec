//! The functional `T(h) = −lim ∫ h' p_k` on `C₀` test functions, the Π⁰₁
//! reversal gadget with its Cantor-set decoding, and a Jordan decomposition
//! of a single polynomial.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::algebra::intpoly::IntPoly;
use crate::algebra::{int, isolate_roots, pow2, PiecewisePoly, Poly, Rat, Real, RootLoc};
use crate::code::{bound_tol, BVCode};
use crate::error::{Error, Result};
use crate::mollify::{smooth_heaviside, Bump};
use crate::projection::{project_with, ProjectOptions, Shape};

/// A continuous piecewise polynomial test function on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFn {
    h: PiecewisePoly,
}

impl TestFn {
    /// Requires `h` on `[0, 1]`, continuous, and `h(0) = h(1) = 0`.
    pub fn c0(h: PiecewisePoly) -> Result<Self> {
        if h.start() != &Rat::zero() || h.end() != &int(1) {
            return Err(Error::InvalidInput("test function must live on [0, 1]".into()));
        }
        if !h.is_continuous() {
            return Err(Error::InvalidInput("test function must be continuous".into()));
        }
        for at in [Rat::zero(), int(1)] {
            let value = h.eval(&at);
            if !value.is_zero() {
                return Err(Error::BoundaryViolation { at, value });
            }
        }
        Ok(TestFn { h })
    }

    pub fn from_poly(p: Poly) -> Result<Self> {
        TestFn::c0(PiecewisePoly::unit(p))
    }

    pub fn h(&self) -> &PiecewisePoly {
        &self.h
    }
}

/// `[center − radius, center + radius]` containing `T(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub center: Rat,
    pub radius: Rat,
    pub k: usize,
}

impl DualInterval {
    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn overlaps(&self, o: &DualInterval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }
}

/// Center `−∫ h' p_k`, radius `B·2^{-k+1}` with `B ≥ ‖h'‖∞`.
pub fn dual_eval_c0(f: &BVCode, h: &TestFn, k: usize) -> Result<DualInterval> {
    if k > f.depth() {
        return Err(Error::DepthExhausted { needed: k, available: f.depth() });
    }
    let dh = h.h.derivative();
    let center = -dh.map(|q| q * f.level(k)).integral();
    let b = dh.sup_bound(&bound_tol());
    let radius = b * pow2(-(k as i64) + 1);
    Ok(DualInterval { lo: &center - &radius, hi: &center + &radius, center, radius, k })
}

/// Per instance: next stage to test and the least witness found so far.
type WitnessCache = HashMap<usize, (usize, Option<usize>)>;

/// Decidable `φ(n, i)`: `true` means stage `i` found a counterexample to `∀i φ`
/// for instance `n`. Witness searches are cached.
#[derive(Clone)]
pub struct Pi01Gadget {
    phi: Arc<dyn Fn(usize, usize) -> bool + Send + Sync>,
    cache: Arc<Mutex<WitnessCache>>,
}

impl std::fmt::Debug for Pi01Gadget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pi01Gadget").finish_non_exhaustive()
    }
}

impl Pi01Gadget {
    pub fn new(phi: impl Fn(usize, usize) -> bool + Send + Sync + 'static) -> Self {
        Pi01Gadget { phi: Arc::new(phi), cache: Arc::default() }
    }

    /// `φ(n, i)` holds exactly for `i ≥ table[n]`; missing entries never fire.
    pub fn from_table(table: &[(usize, Option<usize>)]) -> Self {
        let t: HashMap<usize, usize> = table.iter().filter_map(|&(n, w)| w.map(|w| (n, w))).collect();
        Pi01Gadget::new(move |n, i| t.get(&n).is_some_and(|&w| i >= w))
    }

    /// Least `i' ≤ k` with `φ(n, i')`.
    pub fn witness(&self, n: usize, k: usize) -> Option<usize> {
        let mut cache = self.cache.lock().unwrap();
        let entry = cache.entry(n).or_insert((0, None));
        if let Some(w) = entry.1 {
            return (w <= k).then_some(w);
        }
        while entry.0 <= k {
            if (self.phi)(n, entry.0) {
                entry.1 = Some(entry.0);
                return entry.1;
            }
            entry.0 += 1;
        }
        None
    }
}

/// Smoothness of the gadget ramp kernel.
pub const GADGET_BUMP: u32 = 2;

/// `R(x) = 1 − 2∫_0^x η_δ`, `δ = 2^{-i'-1}`: from `1` at `0` down to `0` at `δ`.
pub fn ramp(witness: usize) -> Result<PiecewisePoly> {
    let bump = Bump::new(GADGET_BUMP)?;
    let delta = pow2(-(witness as i64) - 1);
    let h = smooth_heaviside(&Rat::zero(), &delta, &bump);
    Ok(h.map(|p| &Poly::constant(int(2)) - &p.scale(&int(2))).simplify())
}

/// Polynomial within `2^{-i'-2}` of the ramp, with exact endpoint values `1` and `0`.
pub fn ramp_poly(witness: usize) -> Result<Poly> {
    let r = ramp(witness)?;
    let shape = Shape { knots: vec![Rat::zero(), int(1)], signs: vec![-1], values: vec![int(1), Rat::zero()] };
    let opts = ProjectOptions {
        variation_cap: Some(int(GADGET_V)),
        shape: Some(shape),
        keep_endpoints: true,
        ..Default::default()
    };
    Ok(project_with(&r, &pow2(-(witness as i64) - 2), &opts)?.poly)
}

/// Variation bound of every gadget code.
pub const GADGET_V: i64 = 2;

/// Level `k` of `f_n`: the ramp polynomial once a witness `i' ≤ k` exists, else `0`.
pub fn reversal_gadget(g: &Pi01Gadget, n: usize, k: usize) -> Result<Poly> {
    match g.witness(n, k) {
        Some(w) => ramp_poly(w),
        None => Ok(Poly::zero()),
    }
}

/// The code `(f_{n,0}, …, f_{n,K})` with `v = 2`.
pub fn gadget_code(g: &Pi01Gadget, n: usize, depth: usize) -> Result<BVCode> {
    let w = g.witness(n, depth);
    let ramp = w.map(ramp_poly).transpose()?;
    let prefix = (0..=depth)
        .map(|k| match (w, &ramp) {
            (Some(w), Some(r)) if w <= k => r.clone(),
            _ => Poly::zero(),
        })
        .collect();
    BVCode::new(prefix, int(GADGET_V))
}

fn pow3(n: usize) -> Rat {
    (0..n).fold(Rat::one(), |acc, _| acc * int(3))
}

/// Construction recipe carried by a Cantor-sum code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetProvenance {
    /// `witness_at` for `n = 0..terms`, as seen up to `depth`.
    pub witnesses: Vec<Option<usize>>,
    pub terms: usize,
    pub depth: usize,
}

/// A code together with the recipe that built it.
#[derive(Clone, Debug)]
pub struct TaggedCode {
    pub code: BVCode,
    pub provenance: Option<GadgetProvenance>,
    /// `3^{-N}`: sup distance to the untruncated sum.
    pub truncation: Rat,
}

/// `Σ_{n<N} 2 f_n / 3^{n+1}`, level by level; `v = Σ 2·2 / 3^{n+1}`.
pub fn cantor_sum(g: &Pi01Gadget, terms: usize, depth: usize) -> Result<TaggedCode> {
    let codes: Vec<BVCode> = (0..terms).map(|n| gadget_code(g, n, depth)).collect::<Result<_>>()?;
    let weights: Vec<Rat> = (0..terms).map(|n| int(2) / pow3(n + 1)).collect();
    let prefix = (0..=depth)
        .map(|k| {
            codes
                .iter()
                .zip(&weights)
                .fold(Poly::zero(), |acc, (c, w)| &acc + &c.level(k).scale(w))
        })
        .collect();
    let v: Rat = weights.iter().map(|w| w * int(GADGET_V)).sum();
    let code = BVCode::new(prefix, v)?;
    let witnesses = (0..terms).map(|n| g.witness(n, depth)).collect();
    Ok(TaggedCode {
        code,
        provenance: Some(GadgetProvenance { witnesses, terms, depth }),
        truncation: Rat::one() / pow3(terms),
    })
}

/// Rebuild a Cantor-sum code from its recipe.
pub fn replay(p: &GadgetProvenance) -> Result<TaggedCode> {
    if p.witnesses.len() != p.terms {
        return Err(Error::NotAGadgetCode("witness list does not match the number of terms".into()));
    }
    let table: Vec<(usize, Option<usize>)> = p.witnesses.iter().copied().enumerate().collect();
    cantor_sum(&Pi01Gadget::from_table(&table), p.terms, p.depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsSoFar,
    Refuted,
    Unknown,
}

/// Decoded digit with the position `x = p_k(0) − p_k(1)` and the Cantor
/// interval `[lo, hi]` of the digit prefix through `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub verdict: Verdict,
    pub position: Rat,
    pub lo: Rat,
    pub hi: Rat,
}

/// Digit `n` of the Cantor expansion of `p_k(0) − p_k(1)`. Only codes whose
/// provenance replays to the same prefix are accepted.
pub fn decode_pi01(code: &TaggedCode, n: usize, k: usize) -> Result<Decoded> {
    let Some(prov) = &code.provenance else {
        return Err(Error::NotAGadgetCode("no provenance".into()));
    };
    let rebuilt = replay(prov)?;
    if rebuilt.code.prefix() != code.code.prefix() || rebuilt.code.v() != code.code.v() {
        return Err(Error::NotAGadgetCode("provenance does not reproduce the code".into()));
    }
    if k > code.code.depth() {
        return Err(Error::DepthExhausted { needed: k, available: code.code.depth() });
    }
    let p = code.code.level(k);
    let position = p.eval(&Rat::zero()) - p.eval(&int(1));
    let (third, two_thirds) = (Rat::new(1.into(), 3.into()), Rat::new(2.into(), 3.into()));
    let mut y = position.clone();
    let (mut lo, mut width) = (Rat::zero(), Rat::one());
    for i in 0..=n {
        let digit = if y >= Rat::zero() && y <= third {
            0
        } else if y >= two_thirds && y <= int(1) {
            1
        } else {
            return Ok(Decoded { verdict: Verdict::Unknown, position, lo: lo.clone(), hi: &lo + &width });
        };
        width /= int(3);
        if digit == 1 {
            lo += &width * int(2);
        }
        y = &y * int(3) - int(2 * digit);
        if i == n {
            let verdict = if n >= prov.terms {
                Verdict::Unknown
            } else if digit == 1 {
                Verdict::Refuted
            } else {
                Verdict::HoldsSoFar
            };
            return Ok(Decoded { verdict, position, hi: &lo + &width, lo });
        }
    }
    unreachable!()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Nondecreasing; constant pieces are reported as `Up`.
    Up,
    Down,
}

/// `[start, end]` on which `p` is monotone in `direction`.
#[derive(Clone, Debug)]
pub struct JordanPiece {
    pub start: Real,
    pub end: Real,
    pub direction: Direction,
    locs: (Option<RootLoc>, Option<RootLoc>),
}

fn value_at(loc: &Option<RootLoc>, default: &Rat, p: &Poly) -> Real {
    match loc {
        None => Real::from_rat(p.eval(default)),
        Some(RootLoc::Exact(t)) => Real::from_rat(p.eval(t)),
        Some(RootLoc::Isolated(alpha)) => Real::at_root(alpha, p),
    }
}

impl JordanPiece {
    /// `p(end) − p(start)`, exact.
    pub fn rise(&self, p: &Poly) -> Real {
        value_at(&self.locs.1, &int(1), p).sub(&value_at(&self.locs.0, &Rat::zero(), p))
    }
}

/// Split `[0, 1]` at the sign changes of `p'`. The union of the `Up` pieces
/// is a set on which `p` is nondecreasing.
pub fn jordan_poly(p: &Poly) -> Vec<JordanPiece> {
    let d = p.derivative();
    let (zero, one) = (Rat::zero(), int(1));
    if d.is_zero() {
        return vec![JordanPiece {
            start: Real::zero(),
            end: Real::from_rat(one),
            direction: Direction::Up,
            locs: (None, None),
        }];
    }
    let boxes = isolate_roots(&d, &zero, &one).expect("nonzero derivative");
    let inner: Vec<&RootLoc> = boxes
        .roots
        .iter()
        .filter(|r| !matches!(r, RootLoc::Exact(t) if *t == zero || *t == one))
        .collect();
    let int_d = IntPoly::from_poly(&d);
    let flip = if d.lead().is_negative() { -1 } else { 1 };
    let sign_between = |a: &Rat, b: &Rat| flip * int_d.sign_at(&((a + b) / int(2)));
    let at = |r: &RootLoc| match r {
        RootLoc::Exact(t) => Real::from_rat(t.clone()),
        RootLoc::Isolated(alpha) => Real::at_root(alpha, &Poly::x()),
    };
    let mut pieces: Vec<JordanPiece> = Vec::new();
    let mut start = Real::zero();
    let mut start_loc: Option<RootLoc> = None;
    for i in 0..=inner.len() {
        let left = if i == 0 { &zero } else { inner[i - 1].right() };
        let right = if i == inner.len() { &one } else { inner[i].left() };
        let s = if left == right { sign_between(left, left) } else { sign_between(left, right) };
        let dir = if s < 0 { Direction::Down } else { Direction::Up };
        let end = if i == inner.len() { Real::from_rat(one.clone()) } else { at(inner[i]) };
        let end_loc = inner.get(i).map(|r| (*r).clone());
        match pieces.last_mut() {
            Some(last) if last.direction == dir => {
                last.end = end.clone();
                last.locs.1 = end_loc.clone();
            }
            _ => pieces.push(JordanPiece {
                start: start.clone(),
                end: end.clone(),
                direction: dir,
                locs: (start_loc.clone(), end_loc.clone()),
            }),
        }
        start = end;
        start_loc = end_loc;
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{poly_variation, rat};
    use crate::code::{bvcode_from_poly, bvcode_from_poly_depth};

    #[test]
    fn dual_of_identity() {
        let f = bvcode_from_poly(Poly::x());
        let h = TestFn::from_poly(Poly::from_ints(&[0, 1, -1])).unwrap();
        for k in [0, 2, 5, 10] {
            let d = dual_eval_c0(&f, &h, k).unwrap();
            assert_eq!(d.center, rat(1, 6));
            assert_eq!(d.radius, pow2(-(k as i64) + 1));
        }
        let zero = TestFn::from_poly(Poly::zero()).unwrap();
        let d = dual_eval_c0(&f, &zero, 3).unwrap();
        assert_eq!((d.lo, d.hi), (Rat::zero(), Rat::zero()));
        let c = bvcode_from_poly_depth(Poly::constant(rat(2, 5)), 8);
        assert_eq!(dual_eval_c0(&c, &h, 4).unwrap().center, Rat::zero());
        assert!(matches!(TestFn::from_poly(Poly::x()), Err(Error::BoundaryViolation { .. })));
    }

    #[test]
    fn witness_cache() {
        let g = Pi01Gadget::from_table(&[(1, Some(3))]);
        assert_eq!(g.witness(1, 2), None);
        assert_eq!(g.witness(1, 3), Some(3));
        assert_eq!(g.witness(1, 1), None);
        assert_eq!(g.witness(0, 10), None);
    }

    #[test]
    fn ramp_endpoints_and_rate() {
        let q = ramp_poly(2).unwrap();
        assert_eq!(q.eval(&Rat::zero()), int(1));
        assert_eq!(q.eval(&int(1)), Rat::zero());
        let r = ramp(2).unwrap();
        assert!(r.integral_abs().le_rat(&pow2(-3)));
        let g = Pi01Gadget::from_table(&[(0, Some(2))]);
        let c = gadget_code(&g, 0, 4).unwrap();
        assert!(c.level(1).is_zero());
        assert_eq!(c.level(2), &q);
    }

    #[test]
    fn decode_table() {
        for (table, lo, hi) in [
            (vec![(0, None)], rat(0, 1), rat(1, 3)),
            (vec![(0, Some(0))], rat(2, 3), rat(1, 1)),
            (vec![(0, None), (1, Some(3))], rat(2, 9), rat(1, 3)),
        ] {
            let g = Pi01Gadget::from_table(&table);
            let t = cantor_sum(&g, 2, 4).unwrap();
            let d = decode_pi01(&t, 1, 4).unwrap();
            assert!(d.position >= lo && d.position <= hi, "{table:?}: {}", d.position);
        }
        let g = Pi01Gadget::from_table(&[(0, None), (1, Some(3))]);
        let t = cantor_sum(&g, 2, 4).unwrap();
        assert_eq!(decode_pi01(&t, 1, 2).unwrap().verdict, Verdict::HoldsSoFar);
        assert_eq!(decode_pi01(&t, 1, 3).unwrap().verdict, Verdict::Refuted);
        assert_eq!(decode_pi01(&t, 0, 4).unwrap().verdict, Verdict::HoldsSoFar);
        let plain = TaggedCode { code: t.code.clone(), provenance: None, truncation: Rat::zero() };
        assert!(matches!(decode_pi01(&plain, 0, 1), Err(Error::NotAGadgetCode(_))));
    }

    #[test]
    fn jordan_examples() {
        let p = Poly::from_ints(&[0, 1, -1]);
        let js = jordan_poly(&p);
        assert_eq!(js.len(), 2);
        assert_eq!(js[0].direction, Direction::Up);
        assert_eq!(js[0].end.to_rat(), Some(&rat(1, 2)));
        assert_eq!(js[1].direction, Direction::Down);
        assert_eq!(jordan_poly(&Poly::x()).len(), 1);
        let c = jordan_poly(&Poly::constant(int(3)));
        assert_eq!((c.len(), c[0].direction), (1, Direction::Up));
        let q = Poly::from_ints(&[0, -3, 0, 8]);
        let total = jordan_poly(&q).iter().fold(Real::zero(), |acc, piece| {
            let rise = piece.rise(&q);
            acc.add(&if piece.direction == Direction::Up { rise } else { rise.neg() })
        });
        assert!(total.exactly_equals(&poly_variation(&q)));
    }
}
