//! Exact real numbers of the form `r + Σ R_i(α_i)`: a rational part plus
//! polynomial values at isolated real algebraic roots.
//!
//! Norms of polynomials land here: `∫|p|` telescopes an antiderivative over
//! the roots of `p`, which need not be rational. Equality of two values is
//! structural after normalization; order is decided by refining enclosures
//! and can come back undecided.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::poly::Poly;
use super::rat::{decimal_directed, pow2, to_f64, Rat};
use super::roots::AlgRoot;
use super::scaled::ScaledPoly;

#[derive(Clone, Debug)]
struct Term {
    root: AlgRoot,
    /// Reduced modulo the root's defining polynomial, constant term zero.
    coeff: Poly,
}

#[derive(Clone, Debug)]
pub struct Real {
    rat: Rat,
    terms: Vec<Term>,
}

/// Enclosures tighter than `2^-CAP_BITS` are never attempted.
pub const CAP_BITS: i64 = 400;

impl Real {
    pub fn zero() -> Self {
        Real { rat: Rat::zero(), terms: Vec::new() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Real { rat: r, terms: Vec::new() }
    }

    /// `coeff(α)` for the isolated root `α`.
    pub fn at_root(root: &AlgRoot, coeff: &Poly) -> Self {
        let mut out = Real::zero();
        out.push_term(root.clone(), coeff);
        out
    }

    // No merging: the caller guarantees `root` is new to `self`.
    pub(crate) fn push_term(&mut self, root: AlgRoot, coeff: &Poly) {
        if let Some(x) = root.exact() {
            self.rat += coeff.eval(x);
            return;
        }
        let r = coeff.rem(&root.def().poly);
        self.push_reduced(root, r);
    }

    /// Like `push_term` with `r` already reduced modulo the defining polynomial.
    pub(crate) fn push_reduced(&mut self, root: AlgRoot, r: Poly) {
        if let Some(x) = root.exact() {
            self.rat += r.eval(x);
            return;
        }
        let c0 = r.coeff(0);
        self.rat += &c0;
        let mut cs = r.into_coeffs();
        if cs.is_empty() {
            return;
        }
        cs[0] = Rat::zero();
        let coeff = Poly::from_coeffs(cs);
        if !coeff.is_zero() {
            self.terms.push(Term { root, coeff });
        }
    }

    pub fn to_rat(&self) -> Option<&Rat> {
        self.terms.is_empty().then_some(&self.rat)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rat.is_zero()
    }

    pub fn rational_part(&self) -> &Rat {
        &self.rat
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Real) -> Real {
        let mut out = self.clone();
        out.rat += &o.rat;
        'next: for t in &o.terms {
            for s in &mut out.terms {
                if s.root.same_root(&t.root) {
                    s.coeff = &s.coeff + &t.coeff;
                    continue 'next;
                }
            }
            out.terms.push(t.clone());
        }
        out.terms.retain(|t| !t.coeff.is_zero());
        out
    }

    pub fn neg(&self) -> Real {
        self.scale(&Rat::from_integer((-1).into()))
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.add(&o.neg())
    }

    pub fn add_rat(&self, r: &Rat) -> Real {
        let mut out = self.clone();
        out.rat += r;
        out
    }

    pub fn scale(&self, r: &Rat) -> Real {
        if r.is_zero() {
            return Real::zero();
        }
        Real {
            rat: &self.rat * r,
            terms: self
                .terms
                .iter()
                .map(|t| Term { root: t.root.clone(), coeff: t.coeff.scale(r) })
                .collect(),
        }
    }

    pub fn sum<'a>(xs: impl IntoIterator<Item = &'a Real>) -> Real {
        let mut acc = Real::zero();
        for x in xs {
            acc = acc.add(x);
        }
        acc
    }

    /// Rational `[lo, hi]` containing the value with `hi - lo <= tol`.
    pub fn enclose(&self, tol: &Rat) -> (Rat, Rat) {
        if self.terms.is_empty() {
            return (self.rat.clone(), self.rat.clone());
        }
        Encloser::new(self).enclose(tol)
    }

    pub fn upper_bound(&self, tol: &Rat) -> Rat {
        self.enclose(tol).1
    }

    pub fn lower_bound(&self, tol: &Rat) -> Rat {
        self.enclose(tol).0
    }

    /// Certified sign, or `None` when refinement to `2^-CAP_BITS` cannot separate the value from 0.
    pub fn sign(&self) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(self.rat.cmp(&Rat::zero()));
        }
        let mut enc = Encloser::new(self);
        let mut bits = 16;
        while bits <= CAP_BITS {
            let (lo, hi) = enc.enclose(&pow2(-bits));
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
            bits *= 2;
        }
        None
    }

    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        self.add_rat(&-r).sign()
    }

    pub fn cmp_real(&self, o: &Real) -> Option<Ordering> {
        self.sub(o).sign()
    }

    /// Certified `self <= r`.
    pub fn le_rat(&self, r: &Rat) -> bool {
        matches!(self.cmp_rat(r), Some(Ordering::Less | Ordering::Equal))
    }

    /// Certified `self <= o`.
    pub fn le(&self, o: &Real) -> bool {
        matches!(self.cmp_real(o), Some(Ordering::Less | Ordering::Equal))
    }

    /// Certified `self > r`.
    pub fn gt_rat(&self, r: &Rat) -> bool {
        matches!(self.cmp_rat(r), Some(Ordering::Greater))
    }

    /// Structural equality after normalization, decided exactly.
    pub fn exactly_equals(&self, o: &Real) -> bool {
        self.sub(o).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose(&pow2(-60));
        to_f64(&((lo + hi) / Rat::from_integer(2.into())))
    }
}

/// Refinement state kept across successive enclosures of one value.
///
/// Each term is enclosed in mean-value form around the box midpoint, with
/// the slope bounded by interval evaluation of the derivative.
struct Encloser<'a> {
    real: &'a Real,
    roots: Vec<AlgRoot>,
    forms: Vec<ScaledPoly>,
    derivs: Vec<ScaledPoly>,
}

impl<'a> Encloser<'a> {
    fn new(real: &'a Real) -> Self {
        Encloser {
            real,
            roots: real.terms.iter().map(|t| t.root.clone()).collect(),
            forms: real.terms.iter().map(|t| ScaledPoly::new(&t.coeff)).collect(),
            derivs: real.terms.iter().map(|t| ScaledPoly::new(&t.coeff.derivative())).collect(),
        }
    }

    fn enclose(&mut self, tol: &Rat) -> (Rat, Rat) {
        let n = Rat::from_integer(self.roots.len().into());
        let per = tol / n;
        let two = Rat::from_integer(2.into());
        loop {
            let mut lo = self.real.rat.clone();
            let mut hi = self.real.rat.clone();
            let mut wide = Vec::new();
            for (i, r) in self.roots.iter().enumerate() {
                if let Some(x) = r.exact() {
                    let v = self.forms[i].eval(x);
                    lo += &v;
                    hi += v;
                    continue;
                }
                let mid = (r.lo() + r.hi()) / &two;
                let v = self.forms[i].eval(&mid);
                let (da, db) = self.derivs[i].eval_interval(r.lo(), r.hi());
                let slope = da.abs().max(db.abs());
                let rad = &slope * r.width() / &two;
                let (a, b) = self.forms[i].eval_interval(r.lo(), r.hi());
                let (a, b) = (a.max(&v - &rad), b.min(&v + &rad));
                if &b - &a > per {
                    let w = if slope.is_zero() { r.width() / &two } else { &per / &slope };
                    wide.push((i, w.min(r.width() / &two)));
                }
                lo += a;
                hi += b;
            }
            if &hi - &lo <= *tol || wide.is_empty() {
                return (lo, hi);
            }
            for (i, w) in wide {
                self.roots[i].refine_to(&w);
            }
        }
    }
}

/// Interval Horner evaluation of `p` over `[lo, hi]`.
pub fn eval_interval(p: &Poly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    ScaledPoly::new(p).eval_interval(lo, hi)
}

impl From<Rat> for Real {
    fn from(r: Rat) -> Self {
        Real::from_rat(r)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rat() {
            return write!(f, "{r}");
        }
        let (lo, hi) = self.enclose(&pow2(-56));
        write!(
            f,
            "[{}, {}] (algebraic, decimal enclosure)",
            decimal_directed(&lo, 15, false),
            decimal_directed(&hi, 15, true)
        )
    }
}
