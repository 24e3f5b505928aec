//! Diagonal Arzelà-Ascoli selection for a doubly indexed family sampled on dyadic grids.

use num_traits::{Signed, Zero};

use crate::algebra::{int, pow2, Rat};
use crate::code::ModulusFn;
use crate::error::{Error, Result};

use super::bw::bw_product_select;
use super::SelectionCertificate;

/// Samples `f_{n,j}(i·2^{-e_j})`, `i = 0..=2^{e_j}`, with bounds `|f_{n,j}| ≤ u_j`
/// and moduli: `|x − y| ≤ 2^{-φ_j(l)}` implies `|f_{n,j}(x) − f_{n,j}(y)| ≤ 2^-l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquiFamily {
    samples: Vec<Vec<Vec<Rat>>>,
    grid_bits: Vec<u32>,
    bounds: Vec<Rat>,
    moduli: Vec<ModulusFn>,
}

impl EquiFamily {
    pub fn new(
        samples: Vec<Vec<Vec<Rat>>>,
        grid_bits: Vec<u32>,
        bounds: Vec<Rat>,
        moduli: Vec<ModulusFn>,
    ) -> Result<Self> {
        let fams = grid_bits.len();
        if fams == 0 || bounds.len() != fams || moduli.len() != fams {
            return Err(Error::InvalidInput("grid, bound and modulus lists must have one entry per family".into()));
        }
        if samples.is_empty() {
            return Err(Error::InvalidInput("empty family".into()));
        }
        for (n, member) in samples.iter().enumerate() {
            if member.len() != fams {
                return Err(Error::InvalidInput(format!("member {n} has {} families, expected {fams}", member.len())));
            }
            for (j, s) in member.iter().enumerate() {
                if s.len() != (1usize << grid_bits[j]) + 1 {
                    return Err(Error::InvalidInput(format!("member {n}, family {j}: wrong number of samples")));
                }
                if let Some(y) = s.iter().find(|y| y.abs() > bounds[j]) {
                    return Err(Error::BoundViolation { family: j, member: n, value: y.clone(), bound: bounds[j].clone() });
                }
            }
        }
        Ok(EquiFamily { samples, grid_bits, bounds, moduli })
    }

    /// Samples `f(n, j, x)` on the grids.
    pub fn from_fn(
        members: usize,
        grid_bits: Vec<u32>,
        bounds: Vec<Rat>,
        moduli: Vec<ModulusFn>,
        f: impl Fn(usize, usize, &Rat) -> Rat,
    ) -> Result<Self> {
        let samples = (0..members)
            .map(|n| {
                grid_bits
                    .iter()
                    .enumerate()
                    .map(|(j, &e)| {
                        let h = pow2(-(e as i64));
                        (0..=(1u64 << e)).map(|i| f(n, j, &(&h * int(i as i64)))).collect()
                    })
                    .collect()
            })
            .collect();
        EquiFamily::new(samples, grid_bits, bounds, moduli)
    }

    pub fn members(&self) -> usize {
        self.samples.len()
    }

    pub fn families(&self) -> usize {
        self.grid_bits.len()
    }

    pub fn samples(&self, n: usize, j: usize) -> &[Rat] {
        &self.samples[n][j]
    }

    pub fn grid_bits(&self, j: usize) -> u32 {
        self.grid_bits[j]
    }

    pub fn bound(&self, j: usize) -> &Rat {
        &self.bounds[j]
    }

    pub fn modulus(&self, j: usize) -> &ModulusFn {
        &self.moduli[j]
    }

    /// Grid agreement converts to sup agreement at level `k ≤ depth` when
    /// half a grid step is within `2^{-φ_j(k+2)}`, for every family `j ≤ depth`.
    pub fn check_grid(&self, depth: usize) -> Result<()> {
        for j in 0..self.families().min(depth + 1) {
            let need = self.moduli[j]
                .at(depth + 2)
                .ok_or_else(|| Error::InvalidInput(format!("modulus of family {j} undefined at {}", depth + 2)))?;
            if self.grid_bits[j] + 1 < need {
                return Err(Error::GridTooCoarse { family: j, level: depth + 2 });
            }
        }
        Ok(())
    }

    /// Rescaled samples `f/(2u) + 1/2` (global `u`), coordinates interleaved by
    /// the pairing `⟨i, j⟩` along antidiagonals with grid points in
    /// coarse-to-fine order, truncated to the `2(depth + 2)` coordinates that
    /// selection to `depth` can resolve.
    pub fn product_points(&self, depth: usize) -> Vec<Vec<Rat>> {
        let u = self.bounds.iter().max().cloned().unwrap_or_else(Rat::zero);
        let u = if u.is_zero() { int(1) } else { u };
        let scale = int(1) / (int(2) * u);
        let half = Rat::new(1.into(), 2.into());
        let orders: Vec<Vec<usize>> = self.grid_bits.iter().map(|&e| coarse_order(e)).collect();
        let total: usize = orders.iter().map(|o| o.len()).sum();
        let dim = total.min(2 * (depth + 2));
        let mut coords = Vec::with_capacity(dim);
        let mut s = 0;
        while coords.len() < dim {
            for j in 0..=s.min(self.families() - 1) {
                let i = s - j;
                if i < orders[j].len() && coords.len() < dim {
                    coords.push((j, orders[j][i]));
                }
            }
            s += 1;
        }
        self.samples
            .iter()
            .map(|member| coords.iter().map(|&(j, i)| &member[j][i] * &scale + &half).collect())
            .collect()
    }
}

/// Grid indices of `{i·2^-e}` in the order `0, 1, 1/2, 1/4, 3/4, 1/8, …`.
fn coarse_order(e: u32) -> Vec<usize> {
    let top = 1usize << e;
    let mut out = vec![0, top];
    for r in 1..=e {
        let step = top >> r;
        out.extend((1..(1usize << r)).step_by(2).map(|k| k * step));
    }
    out
}

/// Result of [`aa_diagonal_select`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AaSelection {
    pub g: Vec<usize>,
    /// Reference member every selected term is compared with.
    pub anchor: usize,
    /// First level with no admissible later index.
    pub exhausted_at: Option<usize>,
    pub bw: SelectionCertificate,
}

/// `max_i |f_{a,j} − f_{b,j}|` over the grid of family `j`.
pub fn grid_distance(fam: &EquiFamily, a: usize, b: usize, j: usize) -> Rat {
    fam.samples(a, j)
        .iter()
        .zip(fam.samples(b, j))
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Thin the survivors of a product selection: `g(n)` is the next survivor
/// whose samples of every family `j ≤ n` are within `< 2^{-(n+2)}` of the
/// anchor's (the last survivor). Any two terms from level `k` on then agree
/// to `< 2^{-(k+1)}` on the grids of families `j ≤ k`.
pub fn aa_thin(fam: &EquiFamily, bw: &SelectionCertificate, depth: usize) -> AaSelection {
    let anchor = *bw.survivors.last().expect("selection keeps at least one point");
    let mut g = Vec::new();
    let mut pos = 0;
    let mut exhausted_at = None;
    for n in 0..=depth {
        let bound = pow2(-(n as i64) - 2);
        let fams = fam.families().min(n + 1);
        let hit = bw.survivors[pos..]
            .iter()
            .position(|&i| (0..fams).all(|j| grid_distance(fam, i, anchor, j) < bound));
        match hit {
            Some(off) => {
                g.push(bw.survivors[pos + off]);
                pos += off + 1;
            }
            None => {
                exhausted_at = Some(n);
                break;
            }
        }
    }
    AaSelection { g, anchor, exhausted_at, bw: bw.clone() }
}

/// Subsequence `g` with `‖f_{g(n),j} − f_{g(n'),j}‖∞ < 2^-k` for all
/// `k ≤ depth`, `j ≤ k` and `n, n' ≥ k` in the range of `g`.
pub fn aa_diagonal_select(fam: &EquiFamily, depth: usize) -> Result<AaSelection> {
    fam.check_grid(depth)?;
    let pts = fam.product_points(depth);
    let bw = bw_product_select(&pts, depth)?;
    Ok(aa_thin(fam, &bw, depth))
}

/// Grid form of the contract: `max_i |f_{g(n),j} − f_{g(n'),j}| < 2^{-(k+1)}`
/// for every `k ≤ depth`, `j ≤ k` and `k ≤ n < n'`.
pub fn grid_contract_holds(fam: &EquiFamily, g: &[usize], depth: usize) -> bool {
    (0..=depth).all(|k| {
        let bound = pow2(-(k as i64) - 1);
        (0..fam.families().min(k + 1)).all(|j| {
            (k..g.len()).all(|n| (n + 1..g.len()).all(|m| grid_distance(fam, g[n], g[m], j) < bound))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn signed_family(members: usize, fams: usize, bits: u32) -> EquiFamily {
        EquiFamily::from_fn(
            members,
            vec![bits; fams],
            (0..fams).map(|j| pow2(-(j as i64))).collect(),
            vec![ModulusFn::identity(); fams],
            |n, j, x| if n % 2 == 0 { x * pow2(-(j as i64)) } else { -(x * pow2(-(j as i64))) },
        )
        .unwrap()
    }

    #[test]
    fn order_covers_grid() {
        let mut o = coarse_order(3);
        assert_eq!(&o[..5], &[0, 8, 4, 2, 6]);
        o.sort();
        assert_eq!(o, (0..=8).collect::<Vec<_>>());
    }

    #[test]
    fn constant_family_is_identity() {
        let flat = ModulusFn::Affine { slope: 0, offset: 0 };
        let fam = EquiFamily::from_fn(6, vec![3], vec![int(1)], vec![flat], |_, _, _| rat(1, 3)).unwrap();
        let s = aa_diagonal_select(&fam, 4).unwrap();
        assert_eq!(s.g, vec![0, 1, 2, 3, 4]);
        assert!(grid_contract_holds(&fam, &s.g, 4));
    }

    #[test]
    fn signed_ramps_pick_one_parity() {
        let fam = signed_family(16, 6, 8);
        let s = aa_diagonal_select(&fam, 5).unwrap();
        assert!(s.g.len() >= 6);
        let parity = s.g[0] % 2;
        assert!(s.g.iter().all(|i| i % 2 == parity));
        assert!(grid_contract_holds(&fam, &s.g, 5));
    }

    #[test]
    fn validation() {
        let r = EquiFamily::from_fn(2, vec![2], vec![rat(1, 2)], vec![ModulusFn::identity()], |_, _, x| x.clone());
        assert!(matches!(r, Err(Error::BoundViolation { family: 0, .. })));
        let fam = EquiFamily::from_fn(2, vec![2], vec![int(1)], vec![ModulusFn::identity()], |_, _, x| x.clone()).unwrap();
        assert!(matches!(aa_diagonal_select(&fam, 3), Err(Error::GridTooCoarse { family: 0, level: 5 })));
    }
}
