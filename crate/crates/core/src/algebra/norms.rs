//! Exact `∫|p|`, variation, and sup bounds of polynomials on intervals.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::intpoly::IntPoly;
use super::poly::Poly;
use super::rat::Rat;
use super::real::Real;
use super::roots::{isolate_roots, DefPoly, RootLoc};

/// `Σ_i s_i (F(x_{i+1}) - F(x_i))` where `x_i` runs over `a`, the roots of
/// `r` in `(a, b)`, and `b`, and `s_i` is the sign of `r` between them.
fn signed_telescope(r: &Poly, f: &Poly, a: &Rat, b: &Rat) -> Real {
    if r.is_zero() || a >= b {
        return Real::zero();
    }
    let boxes = isolate_roots(r, a, b).expect("nonzero polynomial");
    let inner: Vec<&RootLoc> = boxes
        .roots
        .iter()
        .filter(|x| !matches!(x, RootLoc::Exact(t) if t == a || t == b))
        .collect();
    // The square-free part loses sign information at roots of odd multiplicity >= 3
    // and the primitive form normalizes the leading sign, so sample `r` itself.
    let int = IntPoly::from_poly(r);
    let flip = if r.lead().is_negative() { -1 } else { 1 };
    let mut signs = Vec::with_capacity(inner.len() + 1);
    for i in 0..=inner.len() {
        let left = if i == 0 { a } else { inner[i - 1].right() };
        let right = if i == inner.len() { b } else { inner[i].left() };
        let sample = if left == right {
            left.clone()
        } else {
            (left + right) / Rat::from_integer(2.into())
        };
        let s = flip * int.sign_at(&sample);
        debug_assert!(s != 0, "sample point hit a root");
        signs.push(s);
    }
    let last = Rat::from_integer(signs[inner.len()].into());
    let first = Rat::from_integer(signs[0].into());
    let mut out = Real::from_rat(f.eval(b) * last - f.eval(a) * first);
    let mut reduced: Vec<(Arc<DefPoly>, Poly)> = Vec::new();
    for (i, root) in inner.iter().enumerate() {
        let w = signs[i] - signs[i + 1];
        if w == 0 {
            continue;
        }
        let w = Rat::from_integer(w.into());
        match root {
            RootLoc::Exact(t) => out = out.add_rat(&(f.eval(t) * w)),
            RootLoc::Isolated(alpha) => {
                let def = alpha.def();
                let r = match reduced.iter().find(|(d, _)| Arc::ptr_eq(d, def)) {
                    Some((_, r)) => r.clone(),
                    None => {
                        let r = f.rem(&def.poly);
                        reduced.push((def.clone(), r.clone()));
                        r
                    }
                };
                out.push_reduced(alpha.clone(), r.scale(&w));
            }
        }
    }
    out
}

/// `∫_a^b |p|`, exact.
pub fn integral_abs(p: &Poly, a: &Rat, b: &Rat) -> Real {
    assert!(a <= b, "integral_abs needs a <= b");
    if p.is_zero() || a == b {
        return Real::zero();
    }
    if p.is_constant() {
        return Real::from_rat(p.coeff(0).abs() * (b - a));
    }
    signed_telescope(p, &p.antiderivative(), a, b)
}

/// `V(p; [a, b]) = ∫_a^b |p'|`, exact.
pub fn poly_variation_on(p: &Poly, a: &Rat, b: &Rat) -> Real {
    let d = p.derivative();
    if d.is_zero() || a >= b {
        return Real::zero();
    }
    signed_telescope(&d, p, a, b)
}

/// `V(p)` on `[0, 1]`.
pub fn poly_variation(p: &Poly) -> Real {
    poly_variation_on(p, &Rat::zero(), &Rat::from_integer(1.into()))
}

/// Rational upper bound on `max_{[a,b]} |p|` within `tol` of the true maximum.
pub fn sup_abs_bound(p: &Poly, a: &Rat, b: &Rat, tol: &Rat) -> Rat {
    let mut best = p.eval(a).abs().max(p.eval(b).abs());
    let d = p.derivative();
    if d.is_zero() || a == b {
        return best;
    }
    let boxes = isolate_roots(&d, a, b).expect("nonzero derivative");
    for r in &boxes.roots {
        let cand = match r {
            RootLoc::Exact(t) => p.eval(t).abs(),
            RootLoc::Isolated(alpha) => {
                let (lo, hi) = Real::at_root(alpha, p).enclose(tol);
                lo.abs().max(hi.abs())
            }
        };
        if cand > best {
            best = cand;
        }
    }
    best
}

/// Exact signed integral `∫_a^b p`.
pub fn integral(p: &Poly, a: &Rat, b: &Rat) -> Rat {
    if p.is_zero() {
        return Rat::zero();
    }
    p.integrate(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};

    fn unit_abs(p: &Poly) -> Real {
        integral_abs(p, &int(0), &int(1))
    }

    #[test]
    fn triangles() {
        assert_eq!(unit_abs(&Poly::linear(int(1), rat(-1, 2))).to_rat(), Some(&rat(1, 4)));
        assert_eq!(unit_abs(&Poly::x()).to_rat(), Some(&rat(1, 2)));
        assert_eq!(unit_abs(&Poly::linear(int(-2), int(1))).to_rat(), Some(&rat(1, 2)));
        assert!(unit_abs(&Poly::zero()).is_zero());
    }

    #[test]
    fn variation_examples() {
        let p = Poly::from_ints(&[0, 1, -1]);
        assert_eq!(poly_variation(&p).to_rat(), Some(&rat(1, 2)));
        assert!(poly_variation(&Poly::constant(rat(3, 7))).is_zero());
        assert_eq!(poly_variation(&Poly::x()).to_rat(), Some(&int(1)));
    }

    #[test]
    fn irrational_norm() {
        // ∫_0^1 |x^2 - 1/2| = 2·(1/√2)^3·(2/3) - 1/2 + 1/3 ... checked numerically
        let p = Poly::from_coeffs(vec![rat(-1, 2), int(0), int(1)]);
        let v = unit_abs(&p);
        assert!(!v.is_rational());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = 2.0 * (0.5 * s - s * s * s / 3.0) + (1.0 / 3.0 - 0.5) ;
        assert!((v.to_f64() - expect).abs() < 1e-14, "{} vs {}", v.to_f64(), expect);
    }

    #[test]
    fn sup_bounds() {
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(sup_abs_bound(&p, &int(0), &int(1), &rat(1, 100)), int(1));
        let q = Poly::from_ints(&[0, 1, -1]);
        assert_eq!(sup_abs_bound(&q, &int(0), &int(1), &rat(1, 100)), rat(1, 4));
    }
}
