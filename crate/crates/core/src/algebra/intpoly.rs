//! Integer polynomials: the representation used for Descartes counts and
//! fast exact sign evaluation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

const PRIME: u64 = (1 << 61) - 1;

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    /// Primitive integer multiple of `p` with positive leading coefficient.
    pub fn from_poly(p: &Poly) -> Self {
        let mut l = BigInt::one();
        for a in p.coeffs() {
            l = l.lcm(a.denom());
        }
        let c: Vec<BigInt> = p
            .coeffs()
            .iter()
            .map(|a| a.numer() * (&l / a.denom()))
            .collect();
        IntPoly::new(c).primitive()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }

    pub fn primitive(mut self) -> Self {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
        }
        if g.is_zero() {
            return self;
        }
        if self.c.last().is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            for a in &mut self.c {
                *a = &*a / &g;
            }
        }
        self
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// `d^deg · p(n/d)` for `x = n/d` in lowest terms, an integer whose sign is that of `p(x)`.
    pub fn eval_scaled(&self, x: &Rat) -> BigInt {
        let n = x.numer();
        let d = x.denom();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for a in self.c.iter().rev() {
            acc = acc * n + a * &dpow;
            dpow *= d;
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let deg = self.c.len().saturating_sub(1);
        let den = num_traits::pow(x.denom().clone(), deg);
        Rat::new(self.eval_scaled(x), den)
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        match self.eval_scaled(x).sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// True only if `p` is certainly square-free (modular gcd with `p'` is constant).
    pub fn probably_square_free(&self) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg <= 1 {
            return true;
        }
        let f = reduce_mod(&self.c);
        if f.last().copied().unwrap_or(0) == 0 {
            return false;
        }
        let g = reduce_mod(&self.derivative().c);
        gcd_mod(f, g).len() == 1
    }
}

fn reduce_mod(c: &[BigInt]) -> Vec<u64> {
    let p = BigInt::from(PRIME);
    let mut v: Vec<u64> = c
        .iter()
        .map(|a| a.mod_floor(&p).to_u64().unwrap())
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    while !b.is_empty() {
        let inv = powm(*b.last().unwrap(), PRIME - 2);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let k = mulm(*a.last().unwrap(), inv);
            for (j, &bj) in b.iter().enumerate() {
                let t = mulm(k, bj);
                a[shift + j] = (a[shift + j] + PRIME - t) % PRIME;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Number of sign changes, zeros skipped.
pub(crate) fn sign_variations(c: &[BigInt]) -> usize {
    let mut count = 0;
    let mut last = Sign::NoSign;
    for a in c {
        let s = a.sign();
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// In place `p(t) -> p(t + 1)`.
pub(crate) fn taylor_shift_1(c: &mut [BigInt]) {
    let n = c.len();
    if n < 2 {
        return;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let (lo, hi) = c.split_at_mut(j + 1);
            lo[j] += &hi[0];
        }
    }
}

/// `2^deg · p(t/2)`
pub(crate) fn scale_half(c: &[BigInt]) -> Vec<BigInt> {
    let d = c.len().saturating_sub(1);
    c.iter().enumerate().map(|(i, a)| a << (d - i)).collect()
}

/// Descartes bound (exact when 0 or 1) on the roots of `p` in the open interval (0, 1).
pub(crate) fn descartes_unit(c: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = c.iter().rev().cloned().collect();
    taylor_shift_1(&mut r);
    sign_variations(&r)
}
