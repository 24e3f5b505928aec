//! Piecewise polynomials on a closed interval.

use num_traits::{Signed, Zero};

use super::norms::{integral_abs, poly_variation_on, sup_abs_bound};
use super::poly::Poly;
use super::rat::{int, Rat};
use super::real::Real;
use crate::error::Error;

/// Breakpoints `t_0 < … < t_M` and pieces `p_1..p_M`, piece `i` living on
/// `[t_{i-1}, t_i]`. At an interior breakpoint the right-hand piece wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breaks: Vec<Rat>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<Rat>, pieces: Vec<Poly>) -> Result<Self, Error> {
        if breaks.len() < 2 || pieces.len() + 1 != breaks.len() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        Ok(PiecewisePoly { breaks, pieces })
    }

    pub fn from_poly(p: Poly, a: Rat, b: Rat) -> Self {
        PiecewisePoly { breaks: vec![a, b], pieces: vec![p] }
    }

    /// `p` on `[0, 1]`.
    pub fn unit(p: Poly) -> Self {
        Self::from_poly(p, int(0), int(1))
    }

    pub fn zero_on(a: Rat, b: Rat) -> Self {
        Self::from_poly(Poly::zero(), a, b)
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn start(&self) -> &Rat {
        &self.breaks[0]
    }

    pub fn end(&self) -> &Rat {
        self.breaks.last().unwrap()
    }

    /// `(a, b, p)` for every piece.
    pub fn segments(&self) -> impl Iterator<Item = (&Rat, &Rat, &Poly)> {
        self.pieces
            .iter()
            .enumerate()
            .map(move |(i, p)| (&self.breaks[i], &self.breaks[i + 1], p))
    }

    pub fn piece_index(&self, x: &Rat) -> usize {
        let m = self.pieces.len();
        match self.breaks[1..m].binary_search(x) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }

    /// Value at `x` (clamped to the domain).
    pub fn eval(&self, x: &Rat) -> Rat {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn is_single_poly(&self) -> Option<&Poly> {
        let first = &self.pieces[0];
        self.pieces.iter().all(|p| p == first).then_some(first)
    }

    /// Merge neighbours carrying the same polynomial.
    pub fn simplify(&self) -> Self {
        let mut breaks = vec![self.breaks[0].clone()];
        let mut pieces: Vec<Poly> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if pieces.last() == Some(p) {
                *breaks.last_mut().unwrap() = self.breaks[i + 1].clone();
            } else {
                pieces.push(p.clone());
                breaks.push(self.breaks[i + 1].clone());
            }
        }
        PiecewisePoly { breaks, pieces }
    }

    /// The same function on the refined breakpoint list `breaks` (a superset).
    fn refined(&self, breaks: &[Rat]) -> Vec<Poly> {
        let mut out = Vec::with_capacity(breaks.len() - 1);
        let mut j = 0;
        for w in breaks.windows(2) {
            while self.breaks[j + 1] <= w[0] {
                j += 1;
            }
            out.push(self.pieces[j].clone());
        }
        out
    }

    fn zip_with(&self, o: &PiecewisePoly, f: impl Fn(&Poly, &Poly) -> Poly) -> PiecewisePoly {
        assert!(
            self.start() == o.start() && self.end() == o.end(),
            "piecewise operands on different domains"
        );
        let mut breaks: Vec<Rat> = self.breaks.iter().chain(o.breaks.iter()).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let a = self.refined(&breaks);
        let b = o.refined(&breaks);
        let pieces = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        PiecewisePoly { breaks, pieces }
    }

    pub fn add(&self, o: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(o, |a, b| a * b)
    }

    pub fn sub_poly(&self, q: &Poly) -> PiecewisePoly {
        self.map(|p| p - q)
    }

    pub fn scale(&self, r: &Rat) -> PiecewisePoly {
        self.map(|p| p.scale(r))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PiecewisePoly {
        PiecewisePoly { breaks: self.breaks.clone(), pieces: self.pieces.iter().map(f).collect() }
    }

    pub fn derivative(&self) -> PiecewisePoly {
        self.map(Poly::derivative)
    }

    /// `x ↦ ∫_{t_0}^x f`, continuous across breakpoints.
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut acc = Rat::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (a, b, p) in self.segments() {
            let q = p.antiderivative();
            let shift = &acc - q.eval(a);
            let q = &q + &Poly::constant(shift);
            acc = q.eval(b);
            pieces.push(q);
        }
        PiecewisePoly { breaks: self.breaks.clone(), pieces }
    }

    pub fn integral(&self) -> Rat {
        self.segments().map(|(a, b, p)| p.integrate(a, b)).sum()
    }

    /// `∫|f|` exactly.
    pub fn integral_abs(&self) -> Real {
        let parts: Vec<Real> = self.segments().map(|(a, b, p)| integral_abs(p, a, b)).collect();
        Real::sum(parts.iter())
    }

    /// Rational upper bound on `‖f‖∞`, at most `tol` above it.
    pub fn sup_bound(&self, tol: &Rat) -> Rat {
        self.segments()
            .map(|(a, b, p)| sup_abs_bound(p, a, b, tol))
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Jumps at interior breakpoints, right value minus left value.
    pub fn jumps(&self) -> Vec<Rat> {
        (1..self.pieces.len())
            .map(|i| self.pieces[i].eval(&self.breaks[i]) - self.pieces[i - 1].eval(&self.breaks[i]))
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.jumps().iter().all(Zero::is_zero)
    }

    /// Pointwise variation: variation inside pieces plus absolute jumps.
    pub fn variation(&self) -> Real {
        let mut parts: Vec<Real> = self.segments().map(|(a, b, p)| poly_variation_on(p, a, b)).collect();
        parts.push(Real::from_rat(self.jumps().iter().map(|j| j.abs()).sum()));
        Real::sum(parts.iter())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let m = self.pieces.len();
        let mut i = 0;
        while i + 1 < m && super::rat::to_f64(&self.breaks[i + 1]) <= x {
            i += 1;
        }
        self.pieces[i].eval_f64(x)
    }
}

/// `∫|f|` of a piecewise polynomial.
pub fn pw_integral_abs(f: &PiecewisePoly) -> Real {
    f.integral_abs()
}

/// Upper bound on `‖f‖∞` within `tol`.
pub fn pw_sup_bound(f: &PiecewisePoly, tol: &Rat) -> Rat {
    f.sup_bound(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn tent() -> PiecewisePoly {
        PiecewisePoly::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![Poly::x(), Poly::linear(int(-1), int(1))],
        )
        .unwrap()
    }

    #[test]
    fn tent_norms() {
        let t = tent();
        assert_eq!(pw_integral_abs(&t).to_rat(), Some(&rat(1, 4)));
        assert_eq!(pw_sup_bound(&t, &rat(1, 1000)), rat(1, 2));
        assert_eq!(t.variation().to_rat(), Some(&int(1)));
        assert!(t.is_continuous());
    }

    #[test]
    fn zero_and_square() {
        let z = PiecewisePoly::zero_on(int(0), int(1));
        assert!(pw_integral_abs(&z).is_zero());
        assert_eq!(pw_sup_bound(&z, &rat(1, 10)), int(0));
        let sq = PiecewisePoly::unit(Poly::from_ints(&[0, 0, 1]));
        assert_eq!(pw_integral_abs(&sq).to_rat(), Some(&rat(1, 3)));
        assert_eq!(pw_sup_bound(&sq, &rat(1, 10)), int(1));
    }

    #[test]
    fn evaluation_convention() {
        let step = PiecewisePoly::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![Poly::zero(), Poly::one()],
        )
        .unwrap();
        assert_eq!(step.eval(&rat(1, 2)), int(1));
        assert_eq!(step.eval(&int(1)), int(1));
        assert_eq!(step.eval(&int(0)), int(0));
        assert_eq!(step.jumps(), vec![int(1)]);
        assert_eq!(step.variation().to_rat(), Some(&int(1)));
    }

    #[test]
    fn algebra_and_antiderivative() {
        let t = tent();
        let d = t.sub(&PiecewisePoly::unit(Poly::x()));
        assert_eq!(d.pieces().len(), 2);
        assert!(d.pieces()[0].is_zero());
        let a = t.antiderivative();
        assert_eq!(a.eval(&int(1)), rat(1, 4));
        assert!(a.is_continuous());
        let s = PiecewisePoly::new(
            vec![int(0), rat(1, 3), int(1)],
            vec![Poly::one(), Poly::one()],
        )
        .unwrap()
        .simplify();
        assert_eq!(s.pieces().len(), 1);
    }
}
