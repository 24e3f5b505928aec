//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::{int, Rat};
use super::scaled::ScaledPoly;

/// Coefficients lowest degree first; no trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(r: Rat) -> Self {
        Poly::from_coeffs(vec![r])
    }

    pub fn monomial(coef: Rat, deg: usize) -> Self {
        let mut c = vec![Rat::zero(); deg + 1];
        c[deg] = coef;
        Poly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&k| int(k)).collect())
    }

    /// `a x + b`
    pub fn linear(a: Rat, b: Rat) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.c.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        if self.c.len() <= 2 || x.is_integer() {
            let mut acc = Rat::zero();
            for a in self.c.iter().rev() {
                acc = acc * x + a;
            }
            return acc;
        }
        ScaledPoly::new(self).eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.c.iter().rev() {
            acc = acc * x + super::rat::to_f64(a);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative with constant term 0.
    pub fn antiderivative(&self) -> Poly {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(Rat::zero());
        for (i, a) in self.c.iter().enumerate() {
            c.push(a / Rat::from_integer(BigInt::from(i + 1)));
        }
        Poly::from_coeffs(c)
    }

    /// `∫_a^b p`
    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let q = self.antiderivative();
        q.eval(b) - q.eval(a)
    }

    pub fn scale(&self, r: &Rat) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|a| a * r).collect() }
    }

    /// `p(a x + b)`
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Poly {
        if self.c.len() > 2 {
            let shifted = if b.is_zero() { self.clone() } else { ScaledPoly::new(self).shift(b) };
            if a.is_one() {
                return shifted;
            }
            let mut ap = Rat::one();
            let mut c = shifted.c;
            for x in c.iter_mut() {
                *x *= &ap;
                ap *= a;
            }
            return Poly::from_coeffs(c);
        }
        let lin = Poly::linear(a.clone(), b.clone());
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] * &lead_inv;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * dc;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y).monic();
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Monic square-free part `p / gcd(p, p')`.
    pub fn square_free_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        if super::intpoly::IntPoly::from_poly(self).probably_square_free() {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Largest absolute coefficient, a crude size measure.
    pub fn max_abs_coeff(&self) -> Rat {
        self.c.iter().map(|a| a.abs()).max().unwrap_or_else(Rat::zero)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}
