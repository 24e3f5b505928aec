//! Majority-count bisection on `[0, 1]` and on the weighted product `[0, 1]^D`.

use num_traits::{Signed, Zero};

use crate::algebra::{int, pow2, Rat};
use crate::error::{Error, Result};

use super::{Candidate, LevelAssertion, SelectionCertificate};

/// Closed box `Π [lo_i, hi_i]`.
#[derive(Clone, Debug)]
struct Box_ {
    lo: Vec<Rat>,
    hi: Vec<Rat>,
}

impl Box_ {
    fn unit(d: usize) -> Self {
        Box_ { lo: vec![Rat::zero(); d], hi: vec![int(1); d] }
    }

    fn center(&self) -> Vec<Rat> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (a + b) / int(2)).collect()
    }
}

/// Halve coordinate `c`, keeping the closed half with more alive points (ties left).
fn halve(b: &mut Box_, c: usize, alive: &mut Vec<usize>, pts: &[&[Rat]]) {
    let mid = (&b.lo[c] + &b.hi[c]) / int(2);
    let left: Vec<usize> = alive.iter().copied().filter(|&i| pts[i][c] <= mid).collect();
    let right: Vec<usize> = alive.iter().copied().filter(|&i| pts[i][c] >= mid).collect();
    if left.len() >= right.len() {
        b.hi[c] = mid;
        *alive = left;
    } else {
        b.lo[c] = mid;
        *alive = right;
    }
}

fn check_unit(pts: &[&[Rat]]) -> Result<()> {
    for (n, p) in pts.iter().enumerate() {
        if let Some(x) = p.iter().find(|x| x.is_negative() || **x > int(1)) {
            return Err(Error::InvalidInput(format!("point {n} has coordinate {x} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Greedy strictly increasing `g` with `dist(g(n)) ≤ 2^-n`, `n = 0..=depth`.
fn greedy(n_pts: usize, depth: usize, dist: impl Fn(usize) -> Rat) -> (Vec<usize>, Vec<LevelAssertion>, Option<usize>) {
    let mut g = Vec::new();
    let mut levels = Vec::new();
    let mut next = 0;
    for n in 0..=depth {
        let bound = pow2(-(n as i64));
        let hit = (next..n_pts).map(|i| (i, dist(i))).find(|(_, d)| *d <= bound);
        match hit {
            Some((i, value)) => {
                g.push(i);
                levels.push(LevelAssertion { n, index: i, value, bound });
                next = i + 1;
            }
            None => return (g, levels, Some(n)),
        }
    }
    (g, levels, None)
}

/// Bolzano-Weierstraß selection on `[0, 1]`: `depth + 1` majority halvings,
/// candidate the midpoint of the last interval.
pub fn bw_select(xs: &[Rat], depth: usize) -> Result<SelectionCertificate> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let pts: Vec<&[Rat]> = xs.iter().map(std::slice::from_ref).collect();
    check_unit(&pts)?;
    let mut b = Box_::unit(1);
    let mut alive: Vec<usize> = (0..xs.len()).collect();
    for _ in 0..=depth {
        halve(&mut b, 0, &mut alive, &pts);
    }
    let c = b.center().remove(0);
    let (g, levels, exhausted_at) = greedy(xs.len(), depth, |i| (&xs[i] - &c).abs());
    Ok(SelectionCertificate {
        g,
        candidate: Candidate::Point(c),
        levels,
        exhausted_at,
        slack: Rat::zero(),
        survivors: alive,
    })
}

/// Weight `2^{-(c+1)}` of coordinate `c`.
pub fn weight(c: usize) -> Rat {
    pow2(-(c as i64) - 1)
}

/// `Σ_{c<D} 2^{-(c+1)} |x_c − y_c|`.
pub fn product_distance(x: &[Rat], y: &[Rat]) -> Rat {
    x.iter().zip(y).enumerate().map(|(c, (a, b))| weight(c) * (a - b).abs()).sum()
}

/// Width exponent of coordinate `c` at level `l`: `l + 2 − ⌊c/2⌋` when positive.
fn target_bits(c: usize, l: usize) -> Option<usize> {
    (l + 2).checked_sub(c / 2).filter(|&b| b > 0)
}

/// Bolzano-Weierstraß selection in `[0, 1]^D` with the product metric.
///
/// At level `l` every coordinate `c` is halved down to width `2^{-(l+2−⌊c/2⌋)}`,
/// so the box has diameter below `2^{-(l+1)}`; with the truncation slack
/// `2^-D ≤ 2^{-(depth+1)}` every point of the level-`n` box is within `2^-n`
/// of the candidate.
pub fn bw_product_select(ps: &[Vec<Rat>], depth: usize) -> Result<SelectionCertificate> {
    let Some(first) = ps.first() else {
        return Err(Error::InvalidInput("empty sequence".into()));
    };
    let dim = first.len();
    if let Some(p) = ps.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(dim, p.len()));
    }
    if dim < depth + 1 {
        return Err(Error::DimensionTooSmall { dim, depth });
    }
    let pts: Vec<&[Rat]> = ps.iter().map(|p| p.as_slice()).collect();
    check_unit(&pts)?;
    let mut b = Box_::unit(dim);
    let mut bits = vec![0usize; dim];
    let mut alive: Vec<usize> = (0..ps.len()).collect();
    for l in 0..=depth {
        for c in 0..dim {
            let Some(t) = target_bits(c, l) else { break };
            while bits[c] < t {
                halve(&mut b, c, &mut alive, &pts);
                bits[c] += 1;
            }
        }
    }
    let c = b.center();
    let slack = pow2(-(dim as i64));
    let (g, levels, exhausted_at) = greedy(ps.len(), depth, |i| product_distance(&ps[i], &c) + &slack);
    Ok(SelectionCertificate {
        g,
        candidate: Candidate::Product(c),
        levels,
        exhausted_at,
        slack,
        survivors: alive,
    })
}
