//! Integer-numerator form of a rational polynomial for fast repeated evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;

/// `p(x) = (Σ nums[j] x^j) / den`.
#[derive(Clone, Debug)]
pub struct ScaledPoly {
    nums: Vec<BigInt>,
    den: BigInt,
}

impl ScaledPoly {
    pub fn new(p: &Poly) -> Self {
        let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = p.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
        ScaledPoly { nums, den }
    }

    /// `p(x + b)`, by an integer Taylor shift.
    pub fn shift(&self, b: &Rat) -> Poly {
        let d = self.deg();
        if self.nums.is_empty() {
            return Poly::zero();
        }
        let (bn, bd) = (b.numer(), b.denom());
        let mut pows = vec![BigInt::one()];
        for i in 0..d {
            let next = &pows[i] * bd;
            pows.push(next);
        }
        let mut q: Vec<BigInt> = self.nums.iter().enumerate().map(|(i, a)| a * &pows[d - i]).collect();
        for k in 0..d {
            for j in (k..d).rev() {
                let t = bn * &q[j + 1];
                q[j] += t;
            }
        }
        Poly::from_coeffs(
            q.into_iter()
                .enumerate()
                .map(|(i, r)| Rat::new(r, &self.den * &pows[d - i]))
                .collect(),
        )
    }

    fn deg(&self) -> usize {
        self.nums.len().saturating_sub(1)
    }

    /// Numerator `Σ nums[j] n^j d^{deg-j}` for `x = n/d`.
    fn homogeneous(&self, n: &BigInt, d: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for a in self.nums.iter().rev() {
            acc = acc * n + a * &dpow;
            dpow *= d;
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        if self.nums.is_empty() {
            return Rat::zero();
        }
        let s = self.homogeneous(x.numer(), x.denom());
        Rat::new(s, &self.den * num_traits::pow(x.denom().clone(), self.deg()))
    }

    /// Interval Horner over `[lo, hi]` in integer arithmetic.
    pub fn eval_interval(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        if self.nums.is_empty() {
            return (Rat::zero(), Rat::zero());
        }
        if lo == hi {
            let v = self.eval(lo);
            return (v.clone(), v);
        }
        let d = lo.denom().lcm(hi.denom());
        let a = lo.numer() * (&d / lo.denom());
        let b = hi.numer() * (&d / hi.denom());
        let mut l = BigInt::zero();
        let mut h = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.nums.iter().rev() {
            let cands = [&l * &a, &l * &b, &h * &a, &h * &b];
            let mn = cands.iter().min().unwrap();
            let mx = cands.iter().max().unwrap();
            let t = c * &dpow;
            l = mn + &t;
            h = mx + &t;
            dpow *= &d;
        }
        let den = &self.den * num_traits::pow(d, self.deg());
        (Rat::new(l, den.clone()), Rat::new(h, den))
    }
}
