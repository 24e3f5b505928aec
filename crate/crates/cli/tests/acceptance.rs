//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::time::Instant;

use bvcode::algebra::rat::to_f64;
use bvcode::algebra::{int, integral_abs, poly_variation, pow2, rat, Poly, Rat, Real};
use bvcode::code::{bvcode_from_poly_depth, bvcode_norm_l1, bvcode_reindex, BVCode, ModulusFn};
use bvcode::dual::{cantor_sum, decode_pi01, dual_eval_c0, GadgetProvenance, Pi01Gadget, TaggedCode, TestFn};
use bvcode::mollify::{mollify_poly, smooth_indicator, Bump};
use bvcode::selection::aa::{aa_diagonal_select, grid_contract_holds, EquiFamily};
use bvcode::selection::{
    bw_product_select, bw_to_hst_instance, helly_finish, helly_select, hst_to_bw_instance, verify_helly, HellyResult,
};
use bvcode_oracles as oracle;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 2 and 7: agreement with the quadrature oracle.
const QUADRATURE_TOL: f64 = 1e-10;
/// Criterion 5: distance from the norm interval to a brute-force cluster point.
const LIMIT_POINT_TOL_LOG2: i64 = -5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn first(failures: &[String]) -> String {
    failures.first().map(|f| format!("(first: {f})")).unwrap_or_default()
}

fn small_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| small_rat(rng, 20, 8)).collect())
}

fn upper(x: &Real) -> Rat {
    x.upper_bound(&pow2(-40))
}

/// Levels `p + 2^{-(k+2)} q` with `‖q‖₁ ≤ 1`, scaled so that `v ≤ 10`.
fn random_code(rng: &mut ChaCha8Rng, depth: usize) -> BVCode {
    let p = random_poly(rng, 6);
    let q = random_poly(rng, 3);
    let nq = upper(&integral_abs(&q, &Rat::zero(), &int(1)));
    let q = if nq.is_zero() { q } else { q.scale(&(int(1) / nq)) };
    let raw = upper(&poly_variation(&p)) + upper(&poly_variation(&q));
    let s = if raw > int(10) { int(10) / raw } else { int(1) };
    let levels: Vec<Poly> = (0..=depth).map(|k| (&p + &q.scale(&pow2(-(k as i64) - 2))).scale(&s)).collect();
    let v = levels.iter().map(|l| upper(&poly_variation(l))).max().unwrap();
    BVCode::new(levels, v).expect("random code validates")
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (depth, mut checks, mut failures) = (3, 0, Vec::new());
    for i in 0..100 {
        let f = random_code(&mut rng, depth);
        assert!(*f.v() <= int(10));
        let bump = Bump::new(1 + (i % 2) as u32).unwrap();
        for j in 1..=8 {
            let eps = pow2(-j);
            for k in 0..=depth {
                let p = f.level(k);
                let err = mollify_poly(p, &eps, &bump).unwrap().sub_poly(p).integral_abs();
                let bound = poly_variation(p).scale(&(int(2) * &eps));
                checks += 1;
                if !err.le(&bound) {
                    failures.push(format!("code {i}, eps 2^-{j}, level {k}: {err} > {bound}"));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checks} exact inequalities, {} failures {}", failures.len(), first(&failures)))
}

fn criterion_2() -> Outcome {
    let (a, b) = (rat(1, 4), rat(3, 4));
    let mut notes = Vec::new();
    let mut pass = true;
    for eps in [rat(1, 10), rat(1, 5)] {
        let s = smooth_indicator(&a, &b, &eps, 1).unwrap();
        let closed = &eps * rat(3, 4);
        let var_ok = s.variation.to_rat() == Some(&int(2)) && *s.code.v() == int(2);
        let dist_ok = s.distance.to_rat() == Some(&closed);
        let mut knots: Vec<f64> = s.exact.breaks().iter().map(to_f64).chain([0.25, 0.75]).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let chi = |x: f64| if (0.25..=0.75).contains(&x) { 1.0 } else { 0.0 };
        let quad: f64 = knots
            .windows(2)
            .map(|w| oracle::integrate(&|x| (s.exact.eval_f64(x) - chi(x)).abs(), w[0], w[1], 1e-14))
            .sum();
        let quad_ok = (quad - to_f64(&closed)).abs() <= QUADRATURE_TOL;
        pass &= var_ok && dist_ok && quad_ok;
        notes.push(format!("eps={eps}: V={} dist={} (3eps/4={closed}) quad={quad:.3e}", s.variation, s.distance));
    }
    outcome(pass, notes.join("; "))
}

fn indicator_family() -> Vec<BVCode> {
    let a = smooth_indicator(&rat(1, 4), &rat(3, 4), &rat(1, 8), 1).unwrap().code;
    let b = smooth_indicator(&rat(3, 8), &rat(3, 4), &rat(1, 8), 1).unwrap().code;
    (0..16).map(|n| if n % 2 == 0 { a.clone() } else { b.clone() }).collect()
}

fn criterion_3(fs: &[BVCode], r: &HellyResult) -> Outcome {
    let c = &r.certificate;
    let kmin = fs.iter().map(BVCode::depth).min().unwrap();
    let slack = pow2(-(kmin as i64) + 1);
    let mut checked = 0;
    let mut pass = verify_helly(fs, c) && fs.iter().all(|f| *f.v() == int(2));
    for k in 0..=6usize {
        let bound = pow2(-(k as i64)) + pow2(-(k as i64) + 2) * int(2) + &slack;
        for n in k..c.g.len() {
            for m in n + 1..c.g.len() {
                let d = bvcode::mollify::l1_distance(fs[c.g[n]].last(), fs[c.g[m]].last());
                checked += 1;
                pass &= d.le_rat(&bound);
            }
        }
    }
    pass &= c.g.len() >= 7;
    outcome(pass, format!("g = {:?}, {checked} pair checks over k <= 6, certificate re-validated", c.g))
}

fn criterion_4(cases: &[(&HellyResult, Rat)]) -> Outcome {
    let mut pass = true;
    for (r, v) in cases {
        pass &= BVCode::new(r.limit.prefix().to_vec(), v.clone()).is_ok();
    }
    outcome(pass, format!("{} limit codes validated against the input v", cases.len()))
}

fn clustered_sequence(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let clusters = rng.gen_range(2..=4);
    let mut centers: Vec<Rat> = Vec::new();
    while centers.len() < clusters {
        let c = rat(rng.gen_range(64..=960), 1024);
        if centers.iter().all(|d| (d - &c).abs() >= rat(1, 8)) {
            centers.push(c);
        }
    }
    (0..128)
        .map(|_| &centers[rng.gen_range(0..clusters)] + pow2(-13) * int(rng.gen_range(-8..=8)))
        .collect()
}

fn same_result(a: &HellyResult, b: &HellyResult) -> bool {
    a.certificate.g == b.certificate.g
        && a.certificate.exhausted_at == b.certificate.exhausted_at
        && a.certificate.slack == b.certificate.slack
        && a.shift == b.shift
        && a.limit == b.limit
        && a.certificate.pairs.len() == b.certificate.pairs.len()
        && a.certificate.pairs.iter().zip(&b.certificate.pairs).all(|(p, q)| {
            (p.n, p.m, p.k) == (q.n, q.m, q.k) && p.bound == q.bound && p.value.exactly_equals(&q.value)
        })
        && a.selection == b.selection
}

fn criterion_5(limits: &mut Vec<(HellyResult, Rat)>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (depth, tol) = (6, pow2(LIMIT_POINT_TOL_LOG2));
    let mut worst = Rat::zero();
    let mut failures = Vec::new();
    for t in 0..50 {
        let xs = clustered_sequence(&mut rng);
        let fs = bw_to_hst_instance(&xs).unwrap();
        let r = helly_select(&fs, &int(1), &int(0), depth).unwrap();
        let n = bvcode_norm_l1(&r.limit, r.limit.depth()).unwrap();
        let fx: Vec<f64> = xs.iter().map(to_f64).collect();
        let clusters = oracle::cluster_points(&fx, 64, 1.0 / 256.0, 8);
        let dist = clusters
            .iter()
            .map(|&c| {
                let c = bvcode::algebra::rat::from_f64(c).unwrap();
                if c < n.lo {
                    &n.lo - c
                } else if c > n.hi {
                    c - &n.hi
                } else {
                    Rat::zero()
                }
            })
            .min();
        let inst = hst_to_bw_instance(&fs, &int(1), &int(0), depth).unwrap();
        let bw = bw_product_select(&inst.points, depth).unwrap();
        let composed = helly_finish(&fs, &inst, &bw).unwrap();
        let identical = same_result(&r, &composed);
        match dist {
            Some(d) if d <= tol && identical => worst = worst.max(d),
            other => failures.push(format!("sequence {t}: distance {other:?}, bit-identical {identical}")),
        }
        if t < 4 {
            limits.push((r, int(0)));
        }
    }
    outcome(
        failures.is_empty(),
        format!("50 sequences, worst distance {worst} <= 2^{LIMIT_POINT_TOL_LOG2}, composition bit-identical {}", first(&failures)),
    )
}

fn criterion_6() -> Outcome {
    let (members, fams, bits, depth) = (32usize, 6usize, 7u32, 5usize);
    let slope = |n: usize, j: usize| if n % 2 == 0 { pow2(-(j as i64)) } else { -pow2(-(j as i64)) };
    // |x - y| <= 2^{-(l - j)} gives |Δf_{n,j}| <= 2^-l.
    let moduli: Vec<ModulusFn> =
        (0..fams).map(|j| ModulusFn::table((0..=depth + 2).map(|l| l.saturating_sub(j) as u32).collect()).unwrap()).collect();
    let fam = EquiFamily::from_fn(members, vec![bits; fams], (0..fams).map(|j| pow2(-(j as i64))).collect(), moduli, |n, j, x| {
        slope(n, j) * x
    })
    .unwrap();
    let sel = aa_diagonal_select(&fam, depth).unwrap();
    let g = &sel.g;
    let mut pairs = 0;
    let mut pass = g.len() > depth && g.windows(2).all(|w| w[0] < w[1]) && grid_contract_holds(&fam, g, depth);
    for k in 0..=depth {
        for j in 0..=k.min(fams - 1) {
            for n in k..g.len() {
                for m in n + 1..g.len() {
                    // sup over [0, 1] of |(s_a - s_b) x| is |s_a - s_b|.
                    let sup = (slope(g[n], j) - slope(g[m], j)).abs();
                    pairs += 1;
                    pass &= sup < pow2(-(k as i64));
                }
            }
        }
    }
    outcome(pass, format!("g = {g:?}, {pairs} exact sup checks for k <= {depth}, j <= k"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut identities) = (0.0f64, true);
    for _ in 0..500 {
        let p = random_poly(&mut rng, 8);
        let cs: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
        let (zero, one) = (Rat::zero(), int(1));
        let abs = integral_abs(&p, &zero, &one);
        let var = poly_variation(&p);
        worst = worst.max((abs.to_f64() - oracle::abs_integral(&cs, 0.0, 1.0, 1e-13)).abs());
        worst = worst.max((var.to_f64() - oracle::variation(&cs, 1e-13)).abs());
        let c = rat(rng.gen_range(0..=100), 100);
        let split = integral_abs(&p, &zero, &c).add(&integral_abs(&p, &c, &one));
        identities &= split.exactly_equals(&abs);
        identities &= var.exactly_equals(&integral_abs(&p.derivative(), &zero, &one));
    }
    outcome(worst <= QUADRATURE_TOL && identities, format!("500 polynomials, max oracle deviation {worst:.2e}, exact identities hold: {identities}"))
}

fn criterion_8() -> Outcome {
    let f = bvcode_from_poly_depth(Poly::x(), 24);
    let h = TestFn::from_poly(Poly::from_ints(&[0, 1, -1])).unwrap();
    let sup_dh = int(1);
    // Another code of the same class: x + 2^{-(k+2)}(x^2 - 1/3), re-indexed.
    let noisy = BVCode::new(
        (0..=24).map(|k| &Poly::x() + &Poly::from_coeffs(vec![rat(-1, 3), int(0), int(1)]).scale(&pow2(-(k as i64) - 2))).collect(),
        int(2),
    )
    .unwrap();
    let twin = bvcode_reindex(&vec![noisy; 24], &int(2)).unwrap();
    let mut pass = true;
    for k in 2..=24 {
        let d = dual_eval_c0(&f, &h, k).unwrap();
        pass &= d.contains(&rat(1, 6)) && d.radius <= &sup_dh * pow2(-(k as i64) + 1);
    }
    for k in 0..=twin.depth() {
        pass &= dual_eval_c0(&f, &h, k).unwrap().overlaps(&dual_eval_c0(&twin, &h, k).unwrap());
    }
    outcome(pass, format!("k = 2..=24 contain 1/6 with radius <= 2^(-k+1); re-indexed twin (depth {}) overlaps", twin.depth()))
}

fn criterion_9() -> Outcome {
    let cases: [(&[(usize, Option<usize>)], Rat, Rat); 3] = [
        (&[(0, None)], int(0), rat(1, 3)),
        (&[(0, Some(0))], rat(2, 3), int(1)),
        (&[(1, Some(3))], rat(2, 9), rat(1, 3)),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (table, lo, hi) in cases {
        let terms = table.iter().map(|r| r.0 + 1).max().unwrap();
        let t = cantor_sum(&Pi01Gadget::from_table(table), terms, 4).unwrap();
        for k in 3..=4 {
            let d = decode_pi01(&t, terms - 1, k).unwrap();
            pass &= lo <= d.position && d.position <= hi;
            if k == 4 {
                notes.push(format!("{table:?} -> {} in [{lo}, {hi}]", d.position));
            }
        }
    }
    outcome(pass, notes.join("; "))
}

fn public_fns(dir: &Path, out: &mut Vec<String>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            public_fns(&p, out);
        } else if p.extension().is_some_and(|x| x == "rs") {
            let text = std::fs::read_to_string(&p).unwrap();
            for line in text.lines() {
                if let Some(rest) = line.trim_start().strip_prefix("pub fn ") {
                    out.push(rest.split(['(', '<']).next().unwrap().to_string());
                }
            }
        }
    }
}

fn criterion_10() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("..");
    let mut fns = Vec::new();
    public_fns(&root.join("core/src"), &mut fns);
    public_fns(&root.join("cli/src"), &mut fns);
    let forbidden = ["v_l1", "variation_l1", "l1_variation", "dual_norm", "operator_norm", "norm_of_t", "t_norm", "functional_norm"];
    let offending: Vec<&String> = fns.iter().filter(|f| forbidden.iter().any(|b| f.contains(b))).collect();

    let mut help = Vec::new();
    bvcode_cli::run(["bvcode", "--help"], &mut help);
    let help = String::from_utf8(help).unwrap();
    let commands: Vec<&str> = help
        .lines()
        .skip_while(|l| !l.starts_with("Commands:"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .filter_map(|l| l.split_whitespace().next())
        .filter(|c| *c != "help")
        .collect();
    let expected = ["validate", "indicator", "mollify", "norm", "variation", "helly", "bw", "reduce", "sample", "demo-reversal", "jordan"];

    let g = Pi01Gadget::from_table(&[(0, Some(1))]);
    let t = cantor_sum(&g, 1, 3).unwrap();
    let bare = TaggedCode { code: t.code.clone(), provenance: None, truncation: Rat::zero() };
    let forged = TaggedCode {
        provenance: Some(GadgetProvenance { witnesses: vec![Some(2)], terms: 1, depth: 3 }),
        ..t.clone()
    };
    let plain = TaggedCode { code: bvcode_from_poly_depth(Poly::x(), 3), provenance: None, truncation: Rat::zero() };
    let rejects = [bare, forged, plain].iter().all(|c| matches!(decode_pi01(c, 0, 3), Err(bvcode::Error::NotAGadgetCode(_))));
    let accepts = decode_pi01(&t, 0, 3).is_ok();
    let pass = offending.is_empty() && commands == expected && rejects && accepts;
    outcome(
        pass,
        format!("{} public functions scanned, none named like V_L1/||T||; commands {commands:?}; non-gadget codes rejected: {rejects}", fns.len()),
    )
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        println!("criterion {n:>2} [{name}]: {} ({secs:.1}s) {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o, secs));
    };

    run(1, "mollification bound", &mut criterion_1);
    run(2, "indicator approximation", &mut criterion_2);
    let mut limits: Vec<(HellyResult, Rat)> = Vec::new();
    run(3, "Helly rate certificate", &mut || {
        let fs = indicator_family();
        match helly_select(&fs, &int(1), &int(2), 6) {
            Ok(r) => {
                let o = criterion_3(&fs, &r);
                limits.push((r, int(2)));
                o
            }
            Err(e) => outcome(false, format!("helly_select failed: {e}")),
        }
    });
    run(5, "instance-wise equivalence", &mut || criterion_5(&mut limits));
    run(4, "limit membership", &mut || criterion_4(&limits.iter().map(|(r, v)| (r, v.clone())).collect::<Vec<_>>()));
    run(6, "diagonal Arzela-Ascoli contract", &mut criterion_6);
    run(7, "exact norm engine", &mut criterion_7);
    run(8, "dual functional", &mut criterion_8);
    run(9, "reversal decode table", &mut criterion_9);
    run(10, "non-computability boundary", &mut criterion_10);

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria pass in {:.1}s", results.len() - failed.len(), results.len(), start.elapsed().as_secs_f64());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
