//! Polynomial bump mollifiers, exact convolution on `[0, 1]` and projection
//! of the resulting piecewise polynomials back onto single polynomials.

use num_traits::{One, Signed, Zero};

use rayon::prelude::*;

use crate::algebra::{ceil_log2_nonneg, int, integral_abs, poly_variation, pow2, PiecewisePoly, Poly, Rat, Real};
use crate::code::{bound_tol, bvcode_reindex, BVCode, ModulusFn};
use crate::error::{Error, Result};
use crate::projection::{project_with, ProjectOptions, Projection, Shape};

/// `K(x) = c_m (1 − x²)^m` on `[−1, 1]`, normalized to unit mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bump {
    m: u32,
    c: Rat,
    poly: Poly,
}

impl Bump {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("bump exponent must be at least 1".into()));
        }
        let base = Poly::from_ints(&[1, 0, -1]).pow(m);
        let mass = base.integrate(&int(-1), &int(1));
        let c = Rat::one() / mass;
        Ok(Bump { m, poly: base.scale(&c), c })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn normalizer(&self) -> &Rat {
        &self.c
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// `η_ε(y) = K(y/ε)/ε`, valid on `[−ε, ε]`.
    pub fn scaled(&self, eps: &Rat) -> Poly {
        let inv = Rat::one() / eps;
        self.poly.compose_affine(&inv, &Rat::zero()).scale(&inv)
    }

    /// `Φ(t) = ∫_{−1}^t K`, valid on `[−1, 1]`.
    pub fn cdf(&self) -> Poly {
        let a = self.poly.antiderivative();
        let shift = a.eval(&int(-1));
        &a - &Poly::constant(shift)
    }

    /// `∫|y| K(y) dy`
    pub fn first_abs_moment(&self) -> Rat {
        (&Poly::x() * &self.poly).integrate(&Rat::zero(), &int(1)) * int(2)
    }

    /// `‖K‖∞ = c_m`
    pub fn sup(&self) -> &Rat {
        &self.c
    }
}

struct Seg {
    c: Rat,
    d: Rat,
    p: Poly,
}

fn binomial_row(k: usize) -> Vec<Rat> {
    let mut row = vec![Rat::one()];
    for i in 0..k {
        let next = row[i].clone() * int((k - i) as i64) / int(i as i64 + 1);
        row.push(next);
    }
    row
}

/// `x ↦ ∫ K(x − z) g(z) dz` on `[lo, hi]`, where `K` is a polynomial supported
/// on `[−ε, ε]` and `g` is given by segments.
fn convolve(kernel: &Poly, eps: &Rat, segs: &[Seg], lo: &Rat, hi: &Rat) -> PiecewisePoly {
    let kd = kernel.degree().unwrap_or(0);
    // K(x − z) = Σ_l A_l(x) z^l
    let a: Vec<Poly> = (0..=kd)
        .map(|l| {
            let mut c = vec![Rat::zero(); kd - l + 1];
            for k in l..=kd {
                let b = &binomial_row(k)[l];
                c[k - l] = kernel.coeff(k) * b;
            }
            let p = Poly::from_coeffs(c);
            if l % 2 == 1 {
                -p
            } else {
                p
            }
        })
        .collect();
    struct Prep {
        at_c: Vec<Rat>,
        at_d: Vec<Rat>,
        plus: Vec<Poly>,
        minus: Vec<Poly>,
    }
    let preps: Vec<Prep> = segs
        .iter()
        .map(|s| {
            let qs: Vec<Poly> = (0..=kd)
                .map(|l| (&Poly::monomial(Rat::one(), l) * &s.p).antiderivative())
                .collect();
            Prep {
                at_c: qs.iter().map(|q| q.eval(&s.c)).collect(),
                at_d: qs.iter().map(|q| q.eval(&s.d)).collect(),
                plus: qs.iter().map(|q| q.compose_affine(&Rat::one(), eps)).collect(),
                minus: qs.iter().map(|q| q.compose_affine(&Rat::one(), &-eps)).collect(),
            }
        })
        .collect();
    let mut breaks = vec![lo.clone(), hi.clone()];
    for s in segs {
        for t in [&s.c + eps, &s.c - eps, &s.d + eps, &s.d - eps] {
            if t > *lo && t < *hi {
                breaks.push(t);
            }
        }
    }
    breaks.sort();
    breaks.dedup();
    let mut pieces = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let mut acc = Poly::zero();
        for (s, pr) in segs.iter().zip(&preps) {
            let l_aff = &mid - eps > s.c;
            let u_aff = &mid + eps < s.d;
            let l_val = if l_aff { &mid - eps } else { s.c.clone() };
            let u_val = if u_aff { &mid + eps } else { s.d.clone() };
            if u_val <= l_val {
                continue;
            }
            for l in 0..=kd {
                let upper = if u_aff { pr.plus[l].clone() } else { Poly::constant(pr.at_d[l].clone()) };
                let lower = if l_aff { &pr.minus[l] } else { &Poly::constant(pr.at_c[l].clone()) };
                acc = &acc + &(&a[l] * &(&upper - lower));
            }
        }
        pieces.push(acc);
    }
    PiecewisePoly::new(breaks, pieces).expect("sorted breakpoints").simplify()
}

/// Even reflection of `g` (on `[0, 1]`) across both endpoints, restricted to `[−ε, 1+ε]`.
fn reflected(g: &PiecewisePoly, eps: &Rat) -> Vec<Seg> {
    let one = int(1);
    let mut segs = Vec::new();
    let neg = Poly::linear(int(-1), Rat::zero());
    let two_minus = Poly::linear(int(-1), int(2));
    for (a, b, p) in g.segments() {
        if *a < *eps {
            let c = -b.min(eps);
            segs.push(Seg { c: c.max(-eps.clone()), d: -a, p: p.compose(&neg) });
        }
        segs.push(Seg { c: a.clone(), d: b.clone(), p: p.clone() });
    }
    let mut right = Vec::new();
    for (a, b, p) in g.segments() {
        if *b > &one - eps {
            let d = &int(2) - a;
            right.push(Seg { c: &int(2) - b, d: d.min(&one + eps), p: p.compose(&two_minus) });
        }
    }
    segs.retain(|s| s.c < s.d);
    right.retain(|s| s.c < s.d);
    segs.extend(right.into_iter().rev());
    segs
}

fn check_eps(eps: &Rat) -> Result<()> {
    if !eps.is_positive() || *eps > int(1) {
        return Err(Error::InvalidInput(format!("mollifier width {eps} must lie in (0, 1]")));
    }
    Ok(())
}

/// `g^ε = g̃ * η_ε` on `[0, 1]`, with `g̃` the even reflection of `g`. Exact.
pub fn mollify_pw(g: &PiecewisePoly, eps: &Rat, bump: &Bump) -> Result<PiecewisePoly> {
    check_eps(eps)?;
    if g.start() != &Rat::zero() || g.end() != &int(1) {
        return Err(Error::InvalidInput("mollification needs a function on [0, 1]".into()));
    }
    Ok(convolve(&bump.scaled(eps), eps, &reflected(g, eps), &Rat::zero(), &int(1)))
}

pub fn mollify_poly(p: &Poly, eps: &Rat, bump: &Bump) -> Result<PiecewisePoly> {
    mollify_pw(&PiecewisePoly::unit(p.clone()), eps, bump)
}

/// `Φ((x − t)/ε)` on `[0, 1]`, for `[t − ε, t + ε] ⊂ [0, 1]`.
pub fn smooth_heaviside(t: &Rat, eps: &Rat, bump: &Bump) -> PiecewisePoly {
    let inv = Rat::one() / eps;
    let ramp = bump.cdf().compose_affine(&inv, &(-t * &inv));
    let mut breaks = vec![Rat::zero()];
    let mut pieces = Vec::new();
    let (l, r) = (t - eps, t + eps);
    if l > Rat::zero() {
        breaks.push(l);
        pieces.push(Poly::zero());
    }
    breaks.push(r.clone());
    pieces.push(ramp);
    if r < int(1) {
        breaks.push(int(1));
        pieces.push(Poly::one());
    }
    PiecewisePoly::new(breaks, pieces).expect("ramp inside the unit interval")
}

pub const DEFAULT_SMOOTH_DEPTH: usize = 8;

/// A mollified indicator `S = Φ_a − Φ_b` together with its code.
#[derive(Clone, Debug)]
pub struct SmoothIndicator {
    pub code: BVCode,
    pub exact: PiecewisePoly,
    /// `‖S − χ_{[a,b]}‖₁`
    pub distance: Real,
    /// `∫|S'|`
    pub variation: Real,
}

/// Code of a piecewise monotone `s`, every level within `2^{-(depth+2)}` of `s`
/// and `v` the total variation of its shape.
pub(crate) fn code_of_shaped(s: &PiecewisePoly, shape: Shape, depth: usize) -> Result<BVCode> {
    let v = shape.variation();
    let opts = ProjectOptions { variation_cap: Some(v.clone()), shape: Some(shape), ..Default::default() };
    let pr = project_with(s, &pow2(-(depth as i64) - 2), &opts)?;
    BVCode::new(vec![pr.poly; depth + 1], v)
}

pub fn smooth_indicator(a: &Rat, b: &Rat, eps: &Rat, m: u32) -> Result<SmoothIndicator> {
    smooth_indicator_depth(a, b, eps, m, DEFAULT_SMOOTH_DEPTH)
}

pub fn smooth_indicator_depth(a: &Rat, b: &Rat, eps: &Rat, m: u32, depth: usize) -> Result<SmoothIndicator> {
    if !(Rat::zero() < *a && a < b && *b < int(1)) {
        return Err(Error::InvalidInput(format!("need 0 < a < b < 1, got a = {a}, b = {b}")));
    }
    let limit = a.clone().min(&int(1) - b).min((b - a) / int(2));
    if !eps.is_positive() || *eps >= limit {
        return Err(Error::GapTooSmall { eps: eps.clone(), limit });
    }
    let bump = Bump::new(m)?;
    let s = smooth_heaviside(a, eps, &bump).sub(&smooth_heaviside(b, eps, &bump)).simplify();
    let chi = PiecewisePoly::new(
        vec![Rat::zero(), a.clone(), b.clone(), int(1)],
        vec![Poly::zero(), Poly::one(), Poly::zero()],
    )
    .expect("ordered");
    let distance = s.sub(&chi).integral_abs();
    let variation = s.variation();
    let shape = Shape::of_step(
        &[Rat::zero(), a.clone(), b.clone(), int(1)],
        &[Rat::zero(), Rat::one(), Rat::zero()],
    );
    let code = code_of_shaped(&s, shape, depth)?;
    Ok(SmoothIndicator { code, exact: s, distance, variation })
}

/// Smoothed step function with values `values[i]` on `[t_i, t_{i+1})`, `t_0 = 0`, `t_M = 1`.
pub fn smooth_step(breaks: &[Rat], values: &[Rat], eps: &Rat, bump: &Bump) -> Result<PiecewisePoly> {
    if breaks.len() != values.len() + 1 || values.is_empty() {
        return Err(Error::InvalidInput("step needs one more breakpoint than values".into()));
    }
    if breaks[0] != Rat::zero() || *breaks.last().unwrap() != int(1) || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("step breakpoints must increase from 0 to 1".into()));
    }
    let gap = breaks.windows(2).map(|w| &w[1] - &w[0]).min().unwrap();
    let limit = gap / int(2);
    let interior = values.len() > 1;
    if !eps.is_positive() || (interior && *eps >= limit) || *eps > int(1) {
        return Err(Error::GapTooSmall { eps: eps.clone(), limit });
    }
    let mut s = PiecewisePoly::unit(Poly::constant(values[0].clone()));
    for i in 1..values.len() {
        let jump = &values[i] - &values[i - 1];
        if !jump.is_zero() {
            s = s.add(&smooth_heaviside(&breaks[i], eps, bump).scale(&jump));
        }
    }
    Ok(s.simplify())
}

/// BV code of a mollified step function, `v = Σ |jumps|`.
pub fn bvcode_step(breaks: &[Rat], values: &[Rat], eps: &Rat, m: u32, depth: usize) -> Result<BVCode> {
    let bump = Bump::new(m)?;
    let s = smooth_step(breaks, values, eps, &bump)?;
    code_of_shaped(&s, Shape::of_step(breaks, values), depth)
}

/// Grid exponents above this are refused by [`bvcode_from_modulus`].
pub const MAX_GRID_BITS: u32 = 16;

/// Step approximant on the grid `2^-e`: merged breakpoints and values.
fn grid_step(sampler: &(dyn Fn(&Rat) -> Rat + Sync), e: u32) -> (Vec<Rat>, Vec<Rat>) {
    let n = 1u64 << e;
    let h = pow2(-(e as i64));
    let samples: Vec<Rat> = (0..n).into_par_iter().map(|k| sampler(&(&h * int(k as i64)))).collect();
    let mut breaks = vec![Rat::zero()];
    let mut values: Vec<Rat> = Vec::new();
    for (k, y) in samples.into_iter().enumerate() {
        if values.last() != Some(&y) {
            if k > 0 {
                breaks.push(&h * int(k as i64));
            }
            values.push(y);
        }
    }
    breaks.push(int(1));
    (breaks, values)
}

fn step_value(breaks: &[Rat], values: &[Rat], x: &Rat) -> Rat {
    let i = breaks.partition_point(|b| b <= x).saturating_sub(1).min(values.len() - 1);
    values[i].clone()
}

/// Exact `‖f − g‖₁` of two step functions.
fn step_distance(f: &(Vec<Rat>, Vec<Rat>), g: &(Vec<Rat>, Vec<Rat>)) -> Rat {
    let mut cuts: Vec<Rat> = f.0.iter().chain(g.0.iter()).cloned().collect();
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let a = step_value(&f.0, &f.1, &w[0]);
            let b = step_value(&g.0, &g.1, &w[0]);
            (a - b).abs() * (&w[1] - &w[0])
        })
        .sum()
}

/// Code from point samples and a claimed modulus `h`: `f_n` is the step
/// function of the samples on the grid `2^{-h(n)}`. The claim
/// `‖f_n − f_{n+1}‖₁ < 2^{-n+1}` and the bound `Σ|jumps| ≤ v` are checked
/// exactly at every level used; `fs[n]` is a single polynomial within
/// `2^{-n}` of the limit, and the output is their re-indexed diagonal.
pub fn bvcode_from_modulus(
    sampler: &(dyn Fn(&Rat) -> Rat + Sync),
    h: &ModulusFn,
    v: &Rat,
    depth: usize,
    m: u32,
) -> Result<BVCode> {
    let bump = Bump::new(m)?;
    let top = depth + 4;
    let mut exps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let e = h.at(n).ok_or_else(|| Error::InvalidInput(format!("modulus undefined at {n}")))?;
        if e > MAX_GRID_BITS {
            return Err(Error::InvalidInput(format!("grid 2^-{e} at level {n} exceeds 2^-{MAX_GRID_BITS}")));
        }
        exps.push(e);
    }
    let steps: Vec<(Vec<Rat>, Vec<Rat>)> = exps.iter().map(|&e| grid_step(sampler, e)).collect();
    for (n, (_, values)) in steps.iter().enumerate() {
        let var: Rat = values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum();
        if var > *v {
            return Err(Error::VariationViolation { level: n, variation: Real::from_rat(var), bound: v.clone() });
        }
    }
    for n in 0..top {
        let d = step_distance(&steps[n], &steps[n + 1]);
        let bound = pow2(-(n as i64) + 1);
        if d >= bound {
            return Err(Error::RateViolation { level: n, norm: Real::from_rat(d), bound });
        }
    }
    let vbits = ceil_log2_nonneg(&v.clone().max(int(1))) as i64;
    let fs: Vec<Result<BVCode>> = (0..=depth + 1)
        .into_par_iter()
        .map(|n| {
            let (breaks, values) = &steps[n + 3];
            let e = (n as i64 + 3 + vbits).max(exps[n + 3] as i64 + 2);
            let s = smooth_step(breaks, values, &pow2(-e), &bump)?;
            code_of_shaped(&s, Shape::of_step(breaks, values), n)
        })
        .collect();
    let fs: Vec<BVCode> = fs.into_iter().collect::<Result<_>>()?;
    bvcode_reindex(&fs, v)
}

/// Certificate attached to [`mollify_code`].
#[derive(Clone, Debug)]
pub struct MollifyCertificate {
    pub eps: Rat,
    pub m: u32,
    /// Input variation bound.
    pub v: Rat,
    /// `2εv`, a bound on `‖f^ε − f‖₁` for the represented function.
    pub bound: Rat,
    /// `‖p_K^ε − p_K‖₁` for the deepest input polynomial.
    pub instance_error: Real,
    /// `‖q_k − p_{j(k)}^ε‖₁` at the deepest output level.
    pub projection_error: Real,
    /// `instance_error + projection_error` bound on `‖q_k − p_K‖₁` through `p_K^ε`.
    pub exact_error: Real,
    /// Variation bound of the output code.
    pub new_v: Rat,
}

/// Mollify every level of `f` and re-project. Output level `k` approximates
/// `(p_{min(k+2, K)})^ε` to within `2^{-(k+3)}`.
pub fn mollify_code(f: &BVCode, eps: &Rat, m: u32, out_depth: usize) -> Result<(BVCode, MollifyCertificate)> {
    check_eps(eps)?;
    let bump = Bump::new(m)?;
    let kin = f.depth();
    let mut cache: Vec<Option<PiecewisePoly>> = vec![None; kin + 1];
    let js: Vec<usize> = (0..=out_depth).map(|k| (k + 2).min(kin)).collect();
    let mut need: Vec<usize> = js.clone();
    need.push(kin);
    need.sort();
    need.dedup();
    let mollified: Vec<(usize, Result<PiecewisePoly>)> =
        need.par_iter().map(|&j| (j, mollify_poly(f.level(j), eps, &bump))).collect();
    for (j, r) in mollified {
        cache[j] = Some(r?);
    }
    let opts = ProjectOptions::default();
    let mut prefix: Vec<Poly> = Vec::with_capacity(out_depth + 1);
    let mut last: Option<(usize, Projection)> = None;
    for (k, &j) in js.iter().enumerate() {
        let target = pow2(-(k as i64) - 3);
        if let Some((lj, pr)) = &last {
            if *lj == j && pr.error.le_rat(&target) {
                prefix.push(pr.poly.clone());
                continue;
            }
        }
        let g = cache[j].as_ref().unwrap();
        let pr = project_with(g, &target, &opts)?;
        prefix.push(pr.poly.clone());
        last = Some((j, pr));
    }
    let new_v = prefix
        .iter()
        .map(|p| {
            let var = poly_variation(p);
            var.to_rat().cloned().unwrap_or_else(|| var.upper_bound(&bound_tol()))
        })
        .max()
        .unwrap();
    let code = BVCode::new(prefix, new_v.clone())?;
    let deep = cache[kin].as_ref().unwrap();
    let instance_error = deep.sub_poly(f.last()).integral_abs();
    let (lj, lp) = last.unwrap();
    let diff = cache[lj].as_ref().unwrap().sub_poly(&lp.poly).integral_abs();
    let projection_error = diff;
    let exact_error = instance_error.add(&projection_error);
    let cert = MollifyCertificate {
        eps: eps.clone(),
        m,
        v: f.v().clone(),
        bound: int(2) * eps * f.v(),
        instance_error,
        projection_error,
        exact_error,
        new_v,
    };
    Ok((code, cert))
}

/// Rational bounds on `(‖p_K^ε‖∞, ‖(p_K^ε)'‖∞)` from `‖p_K‖₁` and the kernel:
/// `2u‖η_ε‖∞` and `2u‖η_ε'‖∞`, the factor 2 covering the reflected copy.
pub fn mollify_sup_bounds(f: &BVCode, eps: &Rat, m: u32) -> Result<(Rat, Rat)> {
    check_eps(eps)?;
    let bump = Bump::new(m)?;
    let u = integral_abs(f.last(), &Rat::zero(), &int(1)).upper_bound(&bound_tol());
    let k_sup = bump.sup() / eps;
    let dk = crate::algebra::sup_abs_bound(&bump.poly().derivative(), &int(-1), &int(1), &bound_tol());
    let dk_sup = dk / (eps * eps);
    Ok((int(2) * &u * k_sup, int(2) * u * dk_sup))
}

/// `‖p − q‖₁` on `[0, 1]`.
pub fn l1_distance(p: &Poly, q: &Poly) -> Real {
    if p == q {
        return Real::zero();
    }
    integral_abs(&(p - q), &Rat::zero(), &int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn bump_mass_and_moments() {
        let b1 = Bump::new(1).unwrap();
        assert_eq!(b1.normalizer(), &rat(3, 4));
        assert_eq!(b1.first_abs_moment(), rat(3, 8));
        let b2 = Bump::new(2).unwrap();
        assert_eq!(b2.normalizer(), &rat(15, 16));
        assert_eq!(b2.poly().integrate(&int(-1), &int(1)), int(1));
        assert_eq!(b2.cdf().eval(&int(1)), int(1));
        assert_eq!(b2.cdf().eval(&Rat::zero()), rat(1, 2));
    }

    #[test]
    fn constants_are_fixed() {
        let b = Bump::new(2).unwrap();
        let c = Poly::constant(rat(2, 3));
        let g = mollify_poly(&c, &rat(1, 8), &b).unwrap();
        assert_eq!(g.is_single_poly(), Some(&c));
        let g = mollify_poly(&c, &int(1), &b).unwrap();
        assert_eq!(g.is_single_poly(), Some(&c));
    }

    #[test]
    fn interior_of_linear_is_fixed() {
        let b = Bump::new(1).unwrap();
        let eps = rat(1, 8);
        let g = mollify_poly(&Poly::x(), &eps, &b).unwrap();
        assert_eq!(g.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(g.pieces()[g.piece_index(&rat(1, 2))], Poly::x());
        assert!(g.is_continuous());
        let at0 = g.eval(&Rat::zero());
        assert_eq!(at0, &eps * b.first_abs_moment());
    }

    #[test]
    fn step_mollification_matches_heaviside() {
        let b = Bump::new(2).unwrap();
        let eps = rat(1, 16);
        let step = PiecewisePoly::new(vec![int(0), rat(1, 2), int(1)], vec![Poly::zero(), Poly::one()]).unwrap();
        let g = mollify_pw(&step, &eps, &b).unwrap();
        let h = smooth_heaviside(&rat(1, 2), &eps, &b);
        assert!(g.sub(&h).pieces().iter().all(Poly::is_zero));
    }

    #[test]
    fn indicator_closed_form() {
        let s = smooth_indicator_depth(&rat(1, 4), &rat(3, 4), &rat(1, 8), 1, 4).unwrap();
        assert_eq!(s.distance.to_rat(), Some(&rat(3, 32)));
        assert_eq!(s.variation.to_rat(), Some(&int(2)));
        assert_eq!(s.code.v(), &int(2));
        assert!(matches!(
            smooth_indicator(&rat(1, 4), &rat(3, 4), &rat(1, 4), 1),
            Err(Error::GapTooSmall { .. })
        ));
    }

    #[test]
    fn modulus_codes() {
        let c = bvcode_from_modulus(&|_| rat(1, 3), &ModulusFn::identity(), &int(0), 3, 1).unwrap();
        assert_eq!(c.v(), &int(0));
        assert!(c.prefix().iter().all(|p| p == &Poly::constant(rat(1, 3))));

        let id = bvcode_from_modulus(&|x| x.clone(), &ModulusFn::identity(), &int(1), 3, 1).unwrap();
        assert_eq!(id.depth(), 3);
        let d = l1_distance(id.last(), &Poly::x());
        assert!(d.le_rat(&pow2(-3)), "{}", d.to_f64());

        let wild = |x: &Rat| if *x >= rat(1, 2) && *x < rat(3, 4) { int(1) } else { int(0) };
        assert!(matches!(
            bvcode_from_modulus(&wild, &ModulusFn::Affine { slope: 0, offset: 2 }, &int(1), 2, 1),
            Err(Error::VariationViolation { level: 0, .. })
        ));

        let late = |x: &Rat| if *x >= rat(1, 4) { int(1) } else { int(0) };
        let h = ModulusFn::table(vec![0, 0, 0, 2, 2, 2, 2, 2]).unwrap();
        assert!(matches!(
            bvcode_from_modulus(&late, &h, &int(1), 2, 1),
            Err(Error::RateViolation { level: 2, .. })
        ));
    }
}
