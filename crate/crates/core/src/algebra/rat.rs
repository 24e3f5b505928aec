//! Rational scalars and the handful of exact helpers built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rat {
    let m = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rat::from_integer(m)
    } else {
        Rat::new(BigInt::one(), m)
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact value of a finite double.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Smallest `e` with `2^e >= r`, for `r > 0`.
pub fn ceil_log2(r: &Rat) -> i64 {
    assert!(r.is_positive(), "ceil_log2 of a non-positive rational");
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let mut e = n - d;
    while pow2(e) < *r {
        e += 1;
    }
    while pow2(e - 1) >= *r {
        e -= 1;
    }
    e
}

/// Largest `e` with `2^e <= r`, for `r > 0`.
pub fn floor_log2(r: &Rat) -> i64 {
    let c = ceil_log2(r);
    if pow2(c) == *r {
        c
    } else {
        c - 1
    }
}

/// Parse `a/b`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mag = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let v = if scale >= 0 {
        Rat::from_integer(digits * mag)
    } else {
        Rat::new(digits, mag)
    };
    Some(if neg { -v } else { v })
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn decimal(r: &Rat, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r.abs() * Rat::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (ip, fp) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{ip}");
    }
    format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = places)
}

/// Decimal rendering rounded toward negative (`up = false`) or positive infinity.
pub fn decimal_directed(r: &Rat, places: usize, up: bool) -> String {
    let scale = Rat::from_integer(num_traits::pow(BigInt::from(10), places));
    let scaled = r * &scale;
    let k = if up { scaled.ceil() } else { scaled.floor() };
    decimal(&(k / scale), places)
}

/// The rational with smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !hi.is_positive() {
        return -simplest_open(&-hi, Some(&-lo));
    }
    simplest_open(lo, Some(hi))
}

// lo >= 0; hi = None stands for +infinity.
fn simplest_open(lo: &Rat, hi: Option<&Rat>) -> Rat {
    let a = lo.floor();
    let next = &a + Rat::one();
    if hi.is_none_or(|h| next < *h) {
        return next;
    }
    let hi = hi.unwrap();
    let new_lo = (hi - &a).recip();
    let gap = lo - &a;
    let new_hi = if gap.is_zero() { None } else { Some(gap.recip()) };
    a + simplest_open(&new_lo, new_hi.as_ref()).recip()
}

pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a >= b {
        a
    } else {
        b
    }
}

/// Closest dyadic rational `m / 2^bits` to `x` (round to nearest).
pub fn dyadic_round(x: &Rat, bits: u32) -> Rat {
    let s = pow2(bits as i64);
    ((x * &s) + rat(1, 2)).floor() / s
}

/// Largest `m / 2^bits` not above `x`.
pub fn dyadic_floor(x: &Rat, bits: u32) -> Rat {
    let s = pow2(bits as i64);
    (x * &s).floor() / s
}

/// `max(0, ceil(log2 r))` as a count, for `r > 0`.
pub fn ceil_log2_nonneg(r: &Rat) -> usize {
    ceil_log2(r).max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rat("0.1"), Some(rat(1, 10)));
        assert_eq!(parse_rat("-2.50"), Some(rat(-5, 2)));
        assert_eq!(parse_rat("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rat(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(decimal(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&int(0), 3), "0.000");
        assert_eq!(decimal(&rat(-1, 10000), 2), "0.00");
        assert_eq!(decimal_directed(&rat(1, 3), 2, true), "0.34");
        assert_eq!(decimal_directed(&rat(-1, 3), 2, false), "-0.34");
    }

    #[test]
    fn logs() {
        assert_eq!(ceil_log2(&int(1)), 0);
        assert_eq!(ceil_log2(&int(3)), 2);
        assert_eq!(ceil_log2(&rat(1, 8)), -3);
        assert_eq!(ceil_log2(&rat(1, 7)), -2);
        assert_eq!(floor_log2(&rat(1, 7)), -3);
        assert_eq!(floor_log2(&int(4)), 2);
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&rat(1, 4), &rat(1, 2)), rat(1, 3));
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(-3, 4), &rat(-1, 4)), rat(-1, 2));
        assert_eq!(simplest_between(&int(2), &rat(7, 2)), int(3));
        assert_eq!(simplest_between(&int(1), &rat(3, 2)), rat(4, 3));
    }
}
