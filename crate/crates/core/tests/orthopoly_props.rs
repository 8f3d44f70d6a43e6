use approx::assert_relative_eq;
use hankeldet::orthopoly::*;
use hankeldet::quad::adaptive_real;
use hankeldet::Error;
use proptest::prelude::*;

fn weights() -> Vec<(&'static str, MomentWeight)> {
    let lag = MomentWeight::laguerre();
    let jac = MomentWeight::jacobi(0.5, 0.0).unwrap();
    vec![
        ("laguerre", lag.clone()),
        ("jacobi", jac.clone()),
        ("deformed laguerre", deformed_weight(&lag, 1.0, 0.1, 0.1).unwrap()),
        ("deformed jacobi", deformed_weight(&jac, 0.4, 0.1, 0.3).unwrap()),
    ]
}

// ∫ x^k w0(x) g(x) dx on the support, graded towards finite endpoints
fn weighted_moment(w: &MomentWeight, k: usize, g: &dyn Fn(f64) -> f64, extra: &[f64]) -> f64 {
    let (a, b) = w.support;
    let hi = if b.is_finite() { b } else { 200.0 };
    let mut br = vec![a, hi];
    for i in 1..40 {
        let d = (hi - a) * 0.5f64.powi(i);
        br.push(a + d);
        if b.is_finite() {
            br.push(b - d);
        }
    }
    br.extend(extra.iter().filter(|&&x| x > a && x < hi));
    br.sort_by(f64::total_cmp);
    br.dedup();
    adaptive_real(|x| x.powi(k as i32) * w.w0(x).unwrap() * g(x), &br, 1e-300, 1e-14).unwrap().0
}

fn small_det(m: &[f64], n: usize) -> f64 {
    nalgebra::DMatrix::from_fn(n, n, |i, j| m[i + j]).determinant()
}

#[test]
fn laguerre_hankel_determinants() {
    let lag = MomentWeight::laguerre();
    assert_eq!(hankel_det_product(&lag, 3).unwrap().0, 4.0);
    let ladder = build_ladder(&lag, 8).unwrap();
    let mut fact = 1.0;
    for (n, h) in ladder.h.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        assert_relative_eq!(*h, fact * fact, max_relative = 1e-14);
    }
}

#[test]
fn determinants_match_norm_products() {
    for (name, w) in weights() {
        for n in 1..=8 {
            let (d, p) = hankel_det_product(&w, n).unwrap();
            assert!((d / p - 1.0).abs() < 1e-8, "{name} n = {n}: {d:e} vs {p:e}");
        }
    }
}

#[test]
fn moments_agree_with_quadrature() {
    for (name, w) in weights() {
        for k in 0..10 {
            let q = weighted_moment(&w, k, &|_| 1.0, &[]);
            assert!((w.moment(k).unwrap() / q - 1.0).abs() < 1e-10, "{name} k = {k}");
        }
    }
}

#[test]
fn kernel_trace_and_reproduction() {
    for (name, w) in weights() {
        let n = 5;
        let ladder = build_ladder(&w, n).unwrap();
        let q = cd_kernel(&ladder, &w, n).unwrap();
        let (x, gw) = q.nodes(400, &[]);
        let trace: f64 = x.iter().zip(&gw).map(|(&xi, &wi)| wi * q.evaluate(xi, xi)).sum();
        assert!((trace - n as f64).abs() < 1e-8, "{name}: trace {trace}");
        // ∫Q(a, z)Q(z, b)dz = Q(a, b)
        let (a, b) = if w.support.1.is_finite() { (0.3, 0.7) } else { (0.8, 2.5) };
        let sq: f64 = x.iter().zip(&gw).map(|(&z, &wz)| wz * q.evaluate(a, z) * q.evaluate(z, b)).sum();
        assert!((sq - q.evaluate(a, b)).abs() < 1e-7, "{name}: {sq} vs {}", q.evaluate(a, b));
    }
}

#[test]
fn linear_statistic_matches_heine() {
    // det(I − M_h Q_n) = det[∫x^{j+k} w0 e^{−f}]/D_n
    for (name, w) in weights() {
        let cut = if w.support.1.is_finite() { 0.5 } else { 1.0 };
        let f = move |x: f64| -> f64 { if x > cut { 0.2 } else { 0.0 } };
        let g = |x: f64| (-f(x)).exp();
        for n in [2usize, 3] {
            let ladder = build_ladder(&w, n).unwrap();
            let q = cd_kernel(&ladder, &w, n).unwrap();
            let d = linear_statistic_det(&q, &f, 240, &[cut]).unwrap();
            let m: Vec<f64> = (0..2 * n - 1).map(|k| weighted_moment(&w, k, &g, &[cut])).collect();
            let mu = w.moments(2 * n - 1).unwrap();
            let want = small_det(&m, n) / small_det(&mu, n);
            assert!((d / want - 1.0).abs() < 1e-6, "{name} n = {n}: {d} vs {want}");
        }
    }
}

#[test]
fn zero_statistic_gives_one() {
    let w = MomentWeight::laguerre();
    let ladder = build_ladder(&w, 4).unwrap();
    let q = cd_kernel(&ladder, &w, 4).unwrap();
    assert_relative_eq!(linear_statistic_det(&q, &|_| 0.0, 120, &[]).unwrap(), 1.0, max_relative = 1e-14);
}

#[test]
fn recurrence_reproduces_the_second_polynomial() {
    // p_2 for e^{−x}: x² − 4x + 2
    let ladder = build_ladder(&MomentWeight::laguerre(), 3).unwrap();
    for &x in &[0.0, 1.5, 7.0] {
        assert_relative_eq!(ladder.eval(2, x), x * x - 4.0 * x + 2.0, epsilon = 1e-12);
    }
    assert_relative_eq!(ladder.beta[2], 4.0, max_relative = 1e-14);
}

#[test]
fn indefinite_table_is_rejected() {
    let w = MomentWeight::custom_table(vec![1.0, 2.0, 1.0, 0.0, 1.0]).unwrap();
    assert!(matches!(build_ladder(&w, 2), Err(Error::NotPositiveDefinite(_))));
}

#[test]
fn log_weight_moments_against_quadrature() {
    let kappa = 1.5f64;
    let mu = log_weight_moments(kappa, 12).unwrap();
    for (n, m) in mu.iter().enumerate() {
        // u = 1 − x, graded towards the log singularity at u = 0
        let mut br: Vec<f64> = (0..50).map(|i| 2.0 * 0.5f64.powi(i)).collect();
        br.push(0.0);
        br.sort_by(f64::total_cmp);
        let q = adaptive_real(|u| ((2.0 * kappa).ln() - u.ln()) * (1.0 - u).powi(n as i32), &br, 1e-300, 1e-15)
            .unwrap()
            .0;
        assert!((m - q).abs() < 1e-9 * q.abs().max(1e-3), "n = {n}: {m} vs {q}");
    }
    assert_relative_eq!(mu[0], 2.0 * (2.0 * kappa).ln() + 2.0 - 2.0 * std::f64::consts::LN_2, max_relative = 1e-15);
}

#[test]
fn harmonic_sum_tends_to_minus_two() {
    // the sum from m = 1 settles at −2, not 0
    let d = log_weight_asymptotic_check(1.5, 1_000_000);
    assert!((d + 2.0).abs() < 1e-5, "{d}");
    // adding the m = 0 term recovers log n + log 2 + γ
    for &n in &[10_000usize, 1_000_000] {
        let with_zero = log_weight_asymptotic_check(1.5, n) + 2.0;
        assert!(with_zero.abs() < 2.0 / n as f64 + 1e-12, "n = {n}: {with_zero}");
    }
}

#[test]
fn moment_matrix_is_not_hilbert_schmidt() {
    let s = log_weight_hs_partial_sums(1.5, 4096).unwrap();
    assert!(s.windows(2).all(|p| p[1] >= p[0]));
    // μ_j ~ log j/j, so every quadrupling adds more than the last
    let gains: Vec<f64> = [16usize, 64, 256, 1024].iter().map(|&j| s[4 * j] - s[j]).collect();
    assert!(gains.windows(2).all(|g| g[1] > g[0] && g[0] > 10.0), "{gains:?}");
}

#[test]
fn laguerre_synthesis_converges_slowly() {
    // partial sums oscillate about φ(2); the envelope shrinks block by block
    let (kappa, x) = (1.5f64, 2.0f64);
    let exact = log_weight_phi(kappa, x).unwrap();
    let mu = log_weight_moments(kappa, 6400).unwrap();
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    let mut partial = mu[0] * (-0.5 * x).exp();
    let mut errs = vec![partial - exact];
    for n in 1..6400 {
        partial += mu[n] * (-0.5 * x).exp() * l1;
        errs.push(partial - exact);
        let l2 = ((2 * n + 1) as f64 - x) / (n + 1) as f64 * l1 - n as f64 / (n + 1) as f64 * l0;
        l0 = l1;
        l1 = l2;
    }
    for &k in &[60usize, 1000] {
        let lib = log_weight_laguerre_synthesis(kappa, x, k).unwrap();
        assert!((lib - exact - errs[k - 1]).abs() < 1e-12);
    }
    let block = |lo: usize, hi: usize| errs[lo..hi].iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let env = [block(50, 400), block(400, 3200), block(3200, 6400)];
    assert!(env[0] > env[1] && env[1] > env[2], "{env:?}");
    // a 60-term synthesis is nowhere near 1e−6
    assert!(errs[59].abs() > 1e-2);
}

#[test]
fn struve_matrix_against_nfold_integral() {
    for n in 1..=3 {
        for &t in &[0.5, 1.0] {
            let (d, q) = struve_hankel_det(n, t).unwrap();
            assert!((d - q).abs() < 1e-8 * q.abs(), "n = {n}, t = {t}: {d:e} vs {q:e}");
        }
    }
    let (d, _) = struve_hankel_det(1, 1.0).unwrap();
    let direct = adaptive_real(|th: f64| th.cos().sin(), &[0.0, std::f64::consts::FRAC_PI_2], 1e-16, 1e-15).unwrap().0;
    assert_relative_eq!(d, direct, max_relative = 1e-13);
}

#[test]
fn semiclassical_moment_relations() {
    let lag = MomentWeight::laguerre();
    assert!(semiclassical_moment_check(&lag, 8).unwrap() < 1e-14);
    let jac = MomentWeight::jacobi(1.5, 0.5).unwrap();
    assert!(semiclassical_moment_check(&jac, 8).unwrap() < 1e-13);
    assert!(matches!(
        semiclassical_moment_check(&MomentWeight::log_weight(1.5).unwrap(), 3),
        Err(Error::MissingData(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jacobi_ladder_is_orthogonal(alpha in 0.0f64..3.0, beta in 0.0f64..3.0) {
        let w = MomentWeight::jacobi(alpha, beta).unwrap();
        let ladder = build_ladder(&w, 6).unwrap();
        prop_assert!(ladder.orthogonality_residual < 1e-12);
        prop_assert!(ladder.h.iter().all(|&h| h > 0.0));
        let (d, p) = hankel_det_product(&w, 6).unwrap();
        prop_assert!((d / p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn statistic_is_monotone_in_amplitude(c in 0.05f64..1.0) {
        let w = MomentWeight::jacobi(0.5, 0.5).unwrap();
        let ladder = build_ladder(&w, 3).unwrap();
        let q = cd_kernel(&ladder, &w, 3).unwrap();
        let d1 = linear_statistic_det(&q, &move |x: f64| c * x, 120, &[]).unwrap();
        let d2 = linear_statistic_det(&q, &move |x: f64| 2.0 * c * x, 120, &[]).unwrap();
        prop_assert!(d2 < d1 && d1 < 1.0 && d2 > 0.0);
    }
}
