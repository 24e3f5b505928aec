//! Reference computations that share no code with `bvcode`: adaptive
//! Gauss-Kronrod quadrature in `f64` and brute-force searches over small
//! finite data.

#![allow(clippy::excessive_precision)]

const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XK[i];
        let s = f(c - d) + f(c + d);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `∫_a^b f` to absolute accuracy about `tol` by adaptive bisection.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth >= 60 || (b - a) < 1e-15 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol * 0.5, depth + 1) + rec(f, m, b, tol * 0.5, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Horner evaluation, coefficients lowest degree first.
pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
}

/// Sign changes of `p` in `(a, b)` located by dense sampling and bisection.
pub fn sign_changes(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    const SAMPLES: usize = 4096;
    let mut out = Vec::new();
    let at = |i: usize| a + (b - a) * i as f64 / SAMPLES as f64;
    for i in 0..SAMPLES {
        let (mut lo, mut hi) = (at(i), at(i + 1));
        let (flo, fhi) = (horner(c, lo), horner(c, hi));
        if fhi == 0.0 && i + 1 < SAMPLES {
            out.push(hi);
        }
        if flo * fhi >= 0.0 {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if horner(c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// `∫_a^b |p|` by quadrature between consecutive sign changes.
pub fn abs_integral(c: &[f64], a: f64, b: f64, tol: f64) -> f64 {
    let mut knots = vec![a];
    knots.extend(sign_changes(c, a, b));
    knots.push(b);
    knots.windows(2).map(|w| integrate(&|x| horner(c, x), w[0], w[1], tol).abs()).sum()
}

/// `∫_0^1 |p'|` by quadrature.
pub fn variation(c: &[f64], tol: f64) -> f64 {
    let d = derivative(c);
    abs_integral(&d, 0.0, 1.0, tol)
}

/// Representatives of dense clusters in `xs`: points with at least `min_count`
/// sequence members (among indices `>= tail_from`) within `radius`.
pub fn cluster_points(xs: &[f64], tail_from: usize, radius: f64, min_count: usize) -> Vec<f64> {
    let tail = &xs[tail_from.min(xs.len())..];
    tail.iter()
        .copied()
        .filter(|&c| tail.iter().filter(|&&y| (y - c).abs() <= radius).count() >= min_count)
        .collect()
}

/// All strictly increasing index subsequences of `0..n` of length `>= min_len`.
pub fn subsequences(n: usize, min_len: usize) -> Vec<Vec<usize>> {
    assert!(n <= 20, "brute force limited to small instances");
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize >= min_len)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_on_known_integrals() {
        assert!((abs_integral(&[-0.5, 1.0], 0.0, 1.0, 1e-13) - 0.25).abs() < 1e-12);
        assert!((integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13) - 2.0).abs() < 1e-12);
        assert!((variation(&[0.0, 1.0, -1.0], 1e-13) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn subsequence_count() {
        assert_eq!(subsequences(4, 0).len(), 16);
        assert_eq!(subsequences(4, 4).len(), 1);
    }
}
