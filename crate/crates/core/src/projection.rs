//! Projection of piecewise polynomials onto single polynomials with an exact
//! L1 error certificate.
//!
//! Candidates come from floating-point least squares in the shifted Chebyshev
//! basis on a dyadic grid, optionally under derivative sign constraints. They
//! are then rounded to dyadic rationals and accepted only on the exact error.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::rat::{dyadic_floor, dyadic_round, floor_log2, from_f64, to_f64};
use crate::algebra::{int, poly_variation, pow2, PiecewisePoly, Poly, Rat, Real, ScaledPoly};
use crate::error::{Error, Result};


pub const DEFAULT_MAX_DEGREE: usize = 96;

const LADDER: [usize; 20] = [1, 2, 3, 4, 6, 8, 10, 12, 16, 20, 24, 28, 32, 40, 48, 56, 64, 80, 96, 128];

/// Sign pattern of a piecewise monotone target: on `[knots[i], knots[i+1]]`
/// the function runs monotonically (direction `signs[i]`) from `values[i]`
/// to `values[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub knots: Vec<Rat>,
    pub signs: Vec<i8>,
    pub values: Vec<Rat>,
}

impl Shape {
    /// Total variation of the target, `Σ |values[i+1] − values[i]|`.
    pub fn variation(&self) -> Rat {
        self.values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
    }

    /// Shape of a step function: runs of equal-sign jumps, turning in the
    /// middle of the plateau between runs.
    pub fn of_step(breaks: &[Rat], values: &[Rat]) -> Shape {
        let jumps: Vec<(usize, i8)> = (1..values.len())
            .filter_map(|i| {
                let j = &values[i] - &values[i - 1];
                (!j.is_zero()).then(|| (i, if j.is_positive() { 1 } else { -1 }))
            })
            .collect();
        let first = values[0].clone();
        let Some(&(_, s0)) = jumps.first() else {
            return Shape { knots: vec![Rat::zero(), int(1)], signs: vec![1], values: vec![first.clone(), first] };
        };
        let mut knots = vec![Rat::zero()];
        let mut signs = vec![s0];
        let mut kv = vec![first];
        for w in jumps.windows(2) {
            let ((i, si), (k, sk)) = (w[0], w[1]);
            if si != sk {
                knots.push((&breaks[i] + &breaks[k]) / int(2));
                kv.push(values[k - 1].clone());
                signs.push(sk);
            }
        }
        knots.push(int(1));
        kv.push(values[values.len() - 1].clone());
        Shape { knots, signs, values: kv }
    }
}

/// Options for [`project_with`].
#[derive(Clone, Debug)]
pub struct ProjectOptions {
    pub max_degree: usize,
    /// Candidates with `∫|q'|` above this are rescaled around `q(0)`.
    pub variation_cap: Option<Rat>,
    /// Derivative sign constraints for the least-squares fit.
    pub shape: Option<Shape>,
    /// Add a linear correction so that `q(0) = g(0)` and `q(1) = g(1)`.
    pub keep_endpoints: bool,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions { max_degree: DEFAULT_MAX_DEGREE, variation_cap: None, shape: None, keep_endpoints: false }
    }
}

/// A polynomial `q` with its exact distance `‖g − q‖₁`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub poly: Poly,
    pub error: Real,
}

/// Samples of `p` at `u / 2^s`, exact then rounded.
fn sample_exact(p: &Poly, us: &[u64], s: u32) -> Vec<f64> {
    let sp = ScaledPoly::new(p);
    let den = BigInt::one() << s;
    us.iter().map(|&u| to_f64(&sp.eval(&Rat::new(u.into(), den.clone())))).collect()
}

struct Grid {
    xs: Vec<f64>,
    gs: Vec<f64>,
}

fn grid_for(g: &PiecewisePoly, n: usize) -> Grid {
    let s = n.trailing_zeros() + 1;
    let us: Vec<u64> = (0..n as u64).map(|i| 2 * i + 1).collect();
    let xs: Vec<f64> = us.iter().map(|&u| u as f64 / (1u64 << s) as f64).collect();
    let mut gs = vec![0.0; n];
    let mut start = 0;
    let den = BigInt::one() << s;
    for (i, (_, b, p)) in g.segments().enumerate() {
        let last = i + 1 == g.pieces().len();
        let mut end = start;
        while end < n && (last || Rat::new(us[end].into(), den.clone()) < *b) {
            end += 1;
        }
        let vals = sample_exact(p, &us[start..end], s);
        gs[start..end].copy_from_slice(&vals);
        start = end;
    }
    Grid { xs, gs }
}

fn chebyshev_row(x: f64, n: usize, out: &mut [f64]) {
    let t = 2.0 * x - 1.0;
    out[0] = 1.0;
    if n >= 1 {
        out[1] = t;
    }
    for j in 2..=n {
        out[j] = 2.0 * t * out[j - 1] - out[j - 2];
    }
}

/// `d/dx T_j(2x − 1) = 2 j U_{j−1}(2x − 1)`.
fn chebyshev_deriv_row(x: f64, n: usize, out: &mut [f64]) {
    let t = 2.0 * x - 1.0;
    out[0] = 0.0;
    let (mut u0, mut u1) = (1.0, 2.0 * t);
    for j in 1..=n {
        out[j] = 2.0 * j as f64 * u0;
        let u2 = 2.0 * t * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
}

fn normal_equations(grid: &Grid, n: usize) -> (DMatrix<f64>, DVector<f64>) {
    let mut gram = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut rhs = DVector::<f64>::zeros(n + 1);
    let mut row = vec![0.0; n + 1];
    let w = 1.0 / grid.xs.len() as f64;
    for (&x, &g) in grid.xs.iter().zip(&grid.gs) {
        chebyshev_row(x, n, &mut row);
        for i in 0..=n {
            rhs[i] += w * row[i] * g;
            for j in 0..=i {
                gram[(i, j)] += w * row[i] * row[j];
            }
        }
    }
    for i in 0..=n {
        for j in 0..i {
            gram[(j, i)] = gram[(i, j)];
        }
    }
    (gram, rhs)
}

fn lsq(grid: &Grid, n: usize) -> Option<Vec<f64>> {
    let (gram, rhs) = normal_equations(grid, n);
    let sol = gram.clone().cholesky().map(|c| c.solve(&rhs)).or_else(|| gram.lu().solve(&rhs))?;
    sol.iter().all(|c| c.is_finite()).then(|| sol.iter().copied().collect())
}

/// Least squares subject to the monotone runs of `shape`, sampled on a grid.
fn shaped_lsq(grid: &Grid, n: usize, shape: &Shape) -> Option<Vec<f64>> {
    let (gram, rhs) = normal_equations(grid, n);
    let mut trip_i = Vec::new();
    let mut trip_j = Vec::new();
    let mut trip_v = Vec::new();
    for j in 0..=n {
        for i in 0..=j {
            trip_i.push(i);
            trip_j.push(j);
            trip_v.push(gram[(i, j)]);
        }
    }
    let p = CscMatrix::new_from_triplets(n + 1, n + 1, trip_i, trip_j, trip_v);
    let q: Vec<f64> = rhs.iter().map(|v| -v).collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    let m = 4 * (n + 1) + 16;
    let mut row = vec![0.0; n + 1];
    let knots: Vec<f64> = shape.knots.iter().map(to_f64).collect();
    for r in 0..shape.signs.len() {
        let s = shape.signs[r] as f64;
        let (lo, hi) = (knots[r], knots[r + 1]);
        let pts = ((hi - lo) * m as f64).ceil().max(2.0) as usize;
        for k in 0..=pts {
            let x = lo + (hi - lo) * k as f64 / pts as f64;
            chebyshev_deriv_row(x, n, &mut row);
            rows.push(row.iter().map(|v| -s * v).collect());
            b.push(0.0);
        }
        let v0 = to_f64(&shape.values[r]);
        let v1 = to_f64(&shape.values[r + 1]);
        chebyshev_row(lo, n, &mut row);
        rows.push(row.iter().map(|v| -s * v).collect());
        b.push(-s * v0);
        chebyshev_row(hi, n, &mut row);
        rows.push(row.iter().map(|v| s * v).collect());
        b.push(s * v1);
    }
    let mrows = rows.len();
    let (mut ai, mut aj, mut av) = (Vec::new(), Vec::new(), Vec::new());
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            if v != 0.0 {
                ai.push(i);
                aj.push(j);
                av.push(v);
            }
        }
    }
    let a = CscMatrix::new_from_triplets(mrows, n + 1, ai, aj, av);
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .tol_gap_abs(1e-12)
        .tol_gap_rel(1e-12)
        .tol_feas(1e-12)
        .max_iter(400)
        .build()
        .ok()?;
    let cones = [NonnegativeConeT(mrows)];
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).ok()?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            let x = solver.solution.x.clone();
            x.iter().all(|c| c.is_finite()).then_some(x)
        }
        _ => None,
    }
}

/// Shifted Chebyshev polynomials `T_j(2x − 1)`, exactly.
fn shifted_chebyshev(n: usize) -> Vec<Poly> {
    let t = Poly::linear(int(2), int(-1));
    let two_t = t.scale(&int(2));
    let mut out = vec![Poly::one(), t];
    while out.len() <= n {
        let k = out.len();
        let next = &(&two_t * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

fn exact_from_chebyshev(coef: &[f64], basis: &[Poly], bits: u32) -> Poly {
    let mut acc = Poly::zero();
    for (c, b) in coef.iter().zip(basis) {
        let r = dyadic_round(&from_f64(*c).unwrap_or_else(Rat::zero), bits);
        if !r.is_zero() {
            acc = &acc + &b.scale(&r);
        }
    }
    acc
}

fn endpoint_fix(q: &Poly, g0: &Rat, g1: &Rat) -> Poly {
    let d0 = g0 - q.eval(&Rat::zero());
    let d1 = g1 - q.eval(&int(1));
    q + &Poly::linear(&d1 - &d0, d0)
}

/// Returns `None` if the cap cannot be met without moving fixed endpoints.
fn apply_cap(q: Poly, cap: &Rat, keep_endpoints: bool) -> Option<Poly> {
    let var = poly_variation(&q);
    let (_, hi) = var.enclose(&(cap * pow2(-24)));
    if hi <= *cap {
        return Some(q);
    }
    if keep_endpoints || cap.is_zero() {
        return None;
    }
    let c = dyadic_floor(&(cap * (int(1) - pow2(-20)) / hi), 40 - floor_log2(cap).min(0) as u32);
    if !c.is_positive() {
        return None;
    }
    let mu = Poly::constant(q.eval(&Rat::zero()));
    Some(&mu + &(&q - &mu).scale(&c))
}

/// Candidates whose grid estimate exceeds this multiple of the target skip the exact check.
const PREFILTER: f64 = 1.25;

fn estimate_error(grid: &Grid, q: &Poly) -> f64 {
    let n = grid.xs.len();
    let s = n.trailing_zeros() + 1;
    let us: Vec<u64> = (0..n as u64).map(|i| 2 * i + 1).collect();
    let qs = sample_exact(q, &us, s);
    qs.iter().zip(&grid.gs).map(|(a, b)| (a - b).abs()).sum::<f64>() / n as f64
}

/// Least-squares polynomial `q` with certified `‖g − q‖₁ ≤ target`.
pub fn project_with(g: &PiecewisePoly, target: &Rat, opts: &ProjectOptions) -> Result<Projection> {
    if let Some(p) = g.is_single_poly() {
        if p.degree().unwrap_or(0) <= opts.max_degree
            && opts.variation_cap.as_ref().is_none_or(|c| poly_variation(p).le_rat(c))
        {
            return Ok(Projection { poly: p.clone(), error: Real::zero() });
        }
    }
    if !target.is_positive() {
        return Err(Error::ProjectionBudgetExceeded {
            max_degree: opts.max_degree,
            target: target.clone(),
            best: "none".into(),
        });
    }
    let g0 = g.eval(&Rat::zero());
    let g1 = g.eval(&int(1));
    let bits = ((-floor_log2(target)).max(0) as u32) + 30;
    let mut best = f64::INFINITY;
    let mut degrees: Vec<usize> = LADDER.iter().copied().filter(|&d| d < opts.max_degree).collect();
    degrees.push(opts.max_degree);
    let basis = shifted_chebyshev(opts.max_degree);
    let mut grid: Option<(usize, Grid)> = None;
    let tf = to_f64(target);
    for n in degrees {
        let size = (16 * (n + 1)).next_power_of_two().max(4096);
        if grid.as_ref().is_none_or(|(s, _)| *s != size) {
            grid = Some((size, grid_for(g, size)));
        }
        let gr = &grid.as_ref().unwrap().1;
        let coef = match &opts.shape {
            Some(shape) => shaped_lsq(gr, n, shape),
            None => lsq(gr, n),
        };
        let Some(coef) = coef else { continue };
        let mut q = exact_from_chebyshev(&coef, &basis, bits);
        if opts.keep_endpoints {
            q = endpoint_fix(&q, &g0, &g1);
        }
        let q = match &opts.variation_cap {
            Some(cap) => match apply_cap(q, cap, opts.keep_endpoints) {
                Some(q) => q,
                None => continue,
            },
            None => q,
        };
        let est = estimate_error(gr, &q);
        best = best.min(est);
        if est > PREFILTER * tf {
            continue;
        }
        let error = g.sub_poly(&q).integral_abs();
        if error.le_rat(target) {
            return Ok(Projection { poly: q, error });
        }
    }
    Err(Error::ProjectionBudgetExceeded {
        max_degree: opts.max_degree,
        target: target.clone(),
        best: format!("{best:.3e}"),
    })
}

pub fn project_to_poly(g: &PiecewisePoly, target: &Rat, max_degree: usize) -> Result<Projection> {
    project_with(g, target, &ProjectOptions { max_degree, ..Default::default() })
}
