use approx::assert_relative_eq;
use hankeldet::quad::gauss_laguerre;
use hankeldet::specfun::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

// Reference values computed once with 30-digit arithmetic.
const GAMMA_TABLE: [(f64, f64, f64, f64); 12] = [
    (0.1, 0.0, 9.5135076986687312858, 0.0),
    (2.5, 0.0, 1.3293403881791370205, 0.0),
    (-3.7, 0.0, 0.25164399590242268129, 0.0),
    (0.3, 1.0, 0.14539312348419798986, -0.50489421366415160247),
    (-1.5, 2.5, -0.003970857806963141942, 0.0053272733372258618606),
    (7.25, -3.5, 413.38648914857977482, -252.49453307381923277),
    (0.5, 20.0, -3.4307841591454817532e-14, 4.5428803574633433635e-14),
    (25.0, 10.0, 5.6998689501014214802e+22, 6.3104019148274616422e+22),
    (-10.3, 0.4, -1.5531482864835810526e-8, -2.3699604359942601183e-7),
    (1.0, 49.0, -2.9102185672870047685e-33, -5.8802046879880528198e-33),
    (40.0, -20.0, 7.4607475688847143062e+43, 1.382574724230929409e+44),
    (0.01, -0.02, 19.432936412460990423, 39.980583603316279436),
];

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn gamma_matches_reference_table() {
    for &(x, y, re, im) in &GAMMA_TABLE {
        let g = gamma(cz(x, y)).unwrap();
        let want = cz(re, im);
        let rel = (g - want).norm() / want.norm();
        assert!(rel < 1e-13, "Gamma({x}+{y}i): rel err {rel:e}");
    }
}

#[test]
fn real_special_functions_match_reference() {
    assert_relative_eq!(struve(0.0, 1.0).unwrap(), 0.56865662704828795099, max_relative = 1e-14);
    assert!((struve(1.0, 30.0).unwrap() - 0.72175037834698998506).abs() < 1e-12);
    assert_relative_eq!(struve(2.5, 12.0).unwrap(), 4.4871053194095608349, max_relative = 1e-13);
    assert_relative_eq!(struve(3.0, 25.0).unwrap(), 26.85903524805765539, max_relative = 1e-13);
    assert!((bessel_j0(100.0) - 0.019985850304223122424).abs() < 1e-13);
    assert!((bessel_j0(37.5) - 0.071722705110602229323).abs() < 1e-13);
    assert_relative_eq!(laguerre(5, 1.3), -0.14758691666666661063, max_relative = 1e-13);
}

#[test]
fn struve_integral_identity() {
    // int_0^{pi/2} sin(t cos th) dth = (pi/2) H_0(t)
    let (v, _) = hankeldet::quad::adaptive_real(
        |th: f64| (th.cos()).sin(),
        &[0.0, PI / 2.0],
        1e-15,
        1e-15,
    )
    .unwrap();
    assert_relative_eq!(v, PI / 2.0 * struve(0.0, 1.0).unwrap(), max_relative = 1e-13);
}

#[test]
fn bessel_j0_first_zero_by_bisection() {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(lo) * bessel_j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((lo - 2.404825557695773).abs() < 1e-13);
}

#[test]
fn webber_integral_for_j0() {
    // int_0^inf e^{-t} J0(2 sqrt(x t)) dt = e^{-x}
    let x: f64 = 0.7;
    let r = hankeldet::quad::adaptive_semi_infinite(
        |t| Complex64::new((-t).exp() * bessel_j0(2.0 * (x * t).sqrt()), 0.0),
        0.0,
        1e-13,
        1e-13,
    )
    .unwrap();
    assert_relative_eq!(r.value.re, (-x).exp(), max_relative = 1e-11);
}

#[test]
fn log_gamma_continuous_examples() {
    let v = log_gamma_continuous(&[cz(1.0, 0.0)]).unwrap();
    assert!(v[0].norm() < 1e-15);
    let v = log_gamma_continuous(&[cz(2.0, 0.0), cz(3.0, 0.0)]).unwrap();
    assert!(v[0].norm() < 1e-14);
    assert_relative_eq!(v[1].re, 2f64.ln(), max_relative = 1e-14);

    // A loop around z = 3 + 2i that encloses no pole returns to the principal value.
    let n = 400;
    let path: Vec<Complex64> = (0..=n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            cz(3.0, 2.0) + cz(t.cos(), t.sin()) * 1.5
        })
        .collect();
    let v = log_gamma_continuous(&path).unwrap();
    let direct = ln_gamma(path[n]).unwrap();
    assert!((v[n] - direct).norm() < 1e-12);
    assert!((v[n].exp() - gamma(path[n]).unwrap()).norm() < 1e-12 * gamma(path[n]).unwrap().norm());

    // Accumulated argument along a long vertical path grows well past pi.
    let path: Vec<Complex64> = (0..=2000).map(|k| cz(0.5, 0.02 * k as f64)).collect();
    let v = log_gamma_continuous(&path).unwrap();
    assert!(v[2000].im.abs() > 10.0);
    let coarse = [cz(0.5, 0.0), cz(0.5, 40.0)];
    assert!(matches!(log_gamma_continuous(&coarse), Err(hankeldet::Error::BranchJump { .. })));
}

#[test]
fn laguerre_orthonormal_under_gauss_laguerre() {
    let (x, w) = gauss_laguerre(200);
    for m in 0..=12 {
        for n in 0..=12 {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(&x, &w)| w * laguerre(m, x) * laguerre(n, x))
                .sum();
            let want = if m == n { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-10, "({m},{n}): {s}");
        }
    }
}

#[test]
fn chebyshev_recurrence_exact_at_dyadic_points() {
    for &x in &[0.0, 0.5, -0.5, 1.0, -1.0] {
        for n in 1..30 {
            let lhs = chebyshev_u(n + 1, x);
            let rhs = 2.0 * x * chebyshev_u(n, x) - chebyshev_u(n - 1, x);
            assert_eq!(lhs, rhs);
        }
        // U_n(1) = n + 1 exactly
        assert_eq!(chebyshev_u(17, 1.0), 18.0);
    }
}

fn strip_point() -> impl Strategy<Value = Complex64> {
    (-20.0f64..30.0, -30.0f64..30.0).prop_map(|(x, y)| cz(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(z in strip_point()) {
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let a = gamma(z + 1.0).unwrap();
        let b = z * gamma(z).unwrap();
        prop_assert!((a / b - 1.0).norm() < 1e-12, "z={} a={} b={}", z, a, b);
    }

    #[test]
    fn gamma_reflection(z in (-5.0f64..5.0, -8.0f64..8.0).prop_map(|(x, y)| cz(x, y))) {
        prop_assume!((z - z.re.round()).norm() > 1e-2);
        let lhs = gamma(z).unwrap() * gamma(Complex64::new(1.0, 0.0) - z).unwrap();
        let rhs = Complex64::new(PI, 0.0) / (z * PI).sin();
        prop_assert!((lhs / rhs - 1.0).norm() < 1e-11);
    }

    #[test]
    fn pfq_matches_truncated_sum(
        a in -2.0f64..3.0, b in 0.2f64..3.0, c in 0.1f64..4.0, x in -3.0f64..3.0, y in -3.0f64..3.0
    ) {
        // 1F2(a; b, c; z): p <= q so the series is entire
        let z = cz(x, y);
        let p = PFQParams::new(vec![cz(a, 0.0)], vec![cz(b, 0.0), cz(c, 0.0)]);
        let v = pfq(&p, z).unwrap().value;
        let mut term = cz(1.0, 0.0);
        let mut sum = cz(1.0, 0.0);
        for k in 0..200 {
            let kf = k as f64;
            term = term * (a + kf) / ((b + kf) * (c + kf) * (kf + 1.0)) * z;
            sum += term;
        }
        prop_assert!((v - sum).norm() <= 1e-13 * sum.norm().max(1.0));
    }
}
