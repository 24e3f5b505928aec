//! Real root isolation by Descartes' rule of signs with dyadic bisection.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::intpoly::{descartes_unit, scale_half, taylor_shift_1, IntPoly};
use super::poly::Poly;
use super::rat::{simplest_between, Rat};
use crate::error::Error;

/// A square-free defining polynomial, kept in both rational (monic) and
/// primitive integer form.
#[derive(Debug, PartialEq, Eq)]
pub struct DefPoly {
    pub poly: Poly,
    pub int: IntPoly,
}

impl DefPoly {
    pub fn new(square_free: Poly) -> Arc<Self> {
        let int = IntPoly::from_poly(&square_free);
        Arc::new(DefPoly { poly: square_free.monic(), int })
    }
}

/// A simple root of `def` inside the open interval `(lo, hi)`, whose
/// endpoints are not roots; `lo == hi` once the root has been hit exactly.
#[derive(Clone, Debug)]
pub struct AlgRoot {
    def: Arc<DefPoly>,
    lo: Rat,
    hi: Rat,
}

impl AlgRoot {
    pub(crate) fn new(def: Arc<DefPoly>, lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo == hi || def.int.sign_at(&lo) * def.int.sign_at(&hi) < 0);
        AlgRoot { def, lo, hi }
    }

    pub fn def(&self) -> &Arc<DefPoly> {
        &self.def
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn exact(&self) -> Option<&Rat> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Halve the box; returns the root if the midpoint hits it.
    pub fn bisect(&mut self) -> Option<Rat> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        let mid = (&self.lo + &self.hi) / BigInt::from(2);
        self.split_at(mid)
    }

    fn split_at(&mut self, mid: Rat) -> Option<Rat> {
        let sm = self.def.int.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid.clone();
            return Some(mid);
        }
        if sm == self.def.int.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        None
    }

    /// Try the simplest rational in the box; exact hit collapses it.
    fn probe_simplest(&mut self) -> Option<Rat> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        let s = simplest_between(&self.lo, &self.hi);
        self.split_at(s)
    }

    pub fn refine_to(&mut self, width: &Rat) {
        if self.width() <= *width {
            return;
        }
        let s_lo = self.def.int.sign_at(&self.lo);
        let two = BigInt::from(2);
        while self.width() > *width {
            let mid = (&self.lo + &self.hi) / &two;
            let sm = self.def.int.sign_at(&mid);
            if sm == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if sm == s_lo {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    /// Exact test that two isolated roots of the same defining polynomial coincide.
    pub fn same_root(&self, o: &AlgRoot) -> bool {
        if !(Arc::ptr_eq(&self.def, &o.def) || self.def == o.def) {
            return false;
        }
        let lo = if self.lo >= o.lo { &self.lo } else { &o.lo };
        let hi = if self.hi <= o.hi { &self.hi } else { &o.hi };
        if lo > hi {
            return false;
        }
        if lo == hi {
            return self.def.int.sign_at(lo) == 0;
        }
        let a = self.def.int.sign_at(lo);
        let b = self.def.int.sign_at(hi);
        a == 0 || b == 0 || a != b
    }
}

#[derive(Clone, Debug)]
pub enum RootLoc {
    Exact(Rat),
    Isolated(AlgRoot),
}

impl RootLoc {
    pub fn left(&self) -> &Rat {
        match self {
            RootLoc::Exact(r) => r,
            RootLoc::Isolated(a) => a.lo(),
        }
    }

    pub fn right(&self) -> &Rat {
        match self {
            RootLoc::Exact(r) => r,
            RootLoc::Isolated(a) => a.hi(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootBoxes {
    pub roots: Vec<RootLoc>,
    /// Whether the input itself was square-free.
    pub square_free: bool,
    pub def: Arc<DefPoly>,
}

impl RootBoxes {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Shrink every box to at most `width`.
    pub fn refine(&mut self, width: &Rat) {
        for r in &mut self.roots {
            if let RootLoc::Isolated(a) = r {
                a.refine_to(width);
                if let Some(x) = a.exact() {
                    *r = RootLoc::Exact(x.clone());
                }
            }
        }
    }
}

const SIMPLEST_ROUNDS: usize = 3;

/// Every real root of `p` in `[a, b]`, each in its own box or exact.
pub fn isolate_roots(p: &Poly, a: &Rat, b: &Rat) -> Result<RootBoxes, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(a <= b, "isolate_roots on an empty interval");
    let sq = p.square_free_part();
    let square_free = sq.degree() == p.degree();
    let def = DefPoly::new(sq.clone());
    let mut roots = Vec::new();
    if def.int.sign_at(a) == 0 {
        roots.push(RootLoc::Exact(a.clone()));
    }
    if a == b || sq.degree() == Some(0) {
        return Ok(RootBoxes { roots, square_free, def });
    }
    let w = b - a;
    let local = IntPoly::from_poly(&sq.compose_affine(&w, a));
    for (c, k, exact) in vca(local.coeffs()) {
        let den = Rat::from_integer(BigInt::one() << k);
        let lo = a + &w * Rat::from_integer(c.clone()) / &den;
        if exact {
            roots.push(RootLoc::Exact(lo));
            continue;
        }
        let hi = a + &w * Rat::from_integer(c + 1) / &den;
        let mut r = AlgRoot::new(def.clone(), lo, hi);
        let mut hit = None;
        for _ in 0..SIMPLEST_ROUNDS {
            if let Some(x) = r.probe_simplest() {
                hit = Some(x);
                break;
            }
            if let Some(x) = r.bisect() {
                hit = Some(x);
                break;
            }
        }
        roots.push(match hit {
            Some(x) => RootLoc::Exact(x),
            None => RootLoc::Isolated(r),
        });
    }
    if def.int.sign_at(b) == 0 {
        roots.push(RootLoc::Exact(b.clone()));
    }
    roots.sort_by(|x, y| x.left().cmp(y.left()));
    Ok(RootBoxes { roots, square_free, def })
}

/// Roots of a square-free integer polynomial in (0, 1) as dyadic cells
/// `(c, k, exact)`: the point `c/2^k` if exact, else the open cell
/// `(c/2^k, (c+1)/2^k)` with non-root endpoints.
fn vca(poly: &[BigInt]) -> Vec<(BigInt, u32, bool)> {
    let mut out = Vec::new();
    let mut stack = vec![(poly.to_vec(), BigInt::zero(), 0u32)];
    while let Some((q, c, k)) = stack.pop() {
        assert!(k < 1 << 14, "root isolation did not terminate");
        match descartes_unit(&q) {
            0 => continue,
            1 => settle(q, c, k, &mut out),
            _ => {
                let left = scale_half(&q);
                let mut right = left.clone();
                taylor_shift_1(&mut right);
                let c2 = &c << 1;
                if right[0].is_zero() {
                    out.push((&c2 + 1, k + 1, true));
                }
                stack.push((right, &c2 + 1, k + 1));
                stack.push((left, c2, k + 1));
            }
        }
    }
    out
}

// One root in the open cell; shrink until neither endpoint is a root.
fn settle(mut q: Vec<BigInt>, mut c: BigInt, mut k: u32, out: &mut Vec<(BigInt, u32, bool)>) {
    loop {
        let at0 = q[0].is_zero();
        let at1 = q.iter().sum::<BigInt>().is_zero();
        if !at0 && !at1 {
            out.push((c, k, false));
            return;
        }
        let left = scale_half(&q);
        let mut right = left.clone();
        taylor_shift_1(&mut right);
        let c2 = &c << 1;
        k += 1;
        if right[0].is_zero() {
            out.push((c2 + 1, k, true));
            return;
        }
        if descartes_unit(&left) == 1 {
            q = left;
            c = c2;
        } else {
            q = right;
            c = c2 + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};

    fn unit(p: &Poly) -> RootBoxes {
        isolate_roots(p, &int(0), &int(1)).unwrap()
    }

    #[test]
    fn linear_root_is_exact() {
        let b = unit(&Poly::linear(int(1), rat(-1, 2)));
        assert_eq!(b.len(), 1);
        assert!(matches!(&b.roots[0], RootLoc::Exact(r) if *r == rat(1, 2)));
    }

    #[test]
    fn two_dyadic_roots() {
        let p = &Poly::linear(int(1), rat(-1, 4)) * &Poly::linear(int(1), rat(-3, 4));
        let b = unit(&p);
        assert_eq!(b.len(), 2);
        assert!(b.roots[0].right() < b.roots[1].left());
    }

    #[test]
    fn no_real_roots() {
        assert!(unit(&Poly::from_ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn irrational_root_box() {
        let p = Poly::from_coeffs(vec![rat(-1, 2), int(0), int(1)]);
        let mut b = unit(&p);
        assert_eq!(b.len(), 1);
        b.refine(&rat(1, 1 << 20));
        let RootLoc::Isolated(r) = &b.roots[0] else { panic!("expected a box") };
        assert!(r.width() <= rat(1, 1 << 20));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(crate::algebra::rat::to_f64(r.lo()) < s && s < crate::algebra::rat::to_f64(r.hi()));
    }

    #[test]
    fn multiple_and_endpoint_roots() {
        // x^2 (x - 1) (x - 1/3)^3 on [0, 1]
        let x = Poly::x();
        let t = Poly::linear(int(1), rat(-1, 3));
        let p = &(&(&x * &x) * &Poly::linear(int(1), int(-1))) * &t.pow(3);
        let b = unit(&p);
        assert!(!b.square_free);
        let pts: Vec<Rat> = b
            .roots
            .iter()
            .map(|r| match r {
                RootLoc::Exact(r) => r.clone(),
                RootLoc::Isolated(_) => panic!("rational roots should be exact"),
            })
            .collect();
        assert_eq!(pts, vec![int(0), rat(1, 3), int(1)]);
    }

    #[test]
    fn subinterval() {
        let p = Poly::from_coeffs(vec![rat(-1, 2), int(0), int(1)]);
        assert!(isolate_roots(&p, &int(0), &rat(1, 2)).unwrap().is_empty());
        assert_eq!(isolate_roots(&p, &rat(1, 2), &int(1)).unwrap().len(), 1);
        assert_eq!(isolate_roots(&p, &int(-1), &int(1)).unwrap().len(), 2);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            isolate_roots(&Poly::zero(), &int(0), &int(1)),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn same_root_detection() {
        let p = Poly::from_coeffs(vec![rat(-1, 2), int(0), int(1)]);
        let b1 = unit(&p);
        let mut b2 = b1.clone();
        b2.refine(&rat(1, 1000));
        let (RootLoc::Isolated(r1), RootLoc::Isolated(r2)) = (&b1.roots[0], &b2.roots[0]) else {
            panic!()
        };
        assert!(r1.same_root(r2));
        let neg = isolate_roots(&p, &int(-1), &int(0)).unwrap();
        let RootLoc::Isolated(r3) = &neg.roots[0] else { panic!() };
        assert!(!r1.same_root(r3));
    }
}
