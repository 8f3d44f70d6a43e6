use hankeldet::barnes::*;
use hankeldet::quad::gauss_legendre;
use hankeldet::specfun::{pfq, PFQParams};
use hankeldet::symbols::GammaQuotientParams;
use hankeldet::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
fn wynn(s: &[Complex64]) -> Complex64 {
    let n = s.len();
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = s.to_vec();
    let mut best = *s.last().unwrap();
    let mut col = 0;
    while cur.len() > 1 {
        let next: Vec<Complex64> = (0..cur.len() - 1)
            .map(|i| prev[i + 1] + (cur[i + 1] - cur[i]).inv())
            .collect();
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.re.is_finite() && v.im.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

/// (1/2π)∫ g(ξ) e^{iξx} dξ over the real line, by Gauss–Legendre on
/// half-periods followed by epsilon extrapolation of the partial sums.
fn oscillatory_oracle<G: Fn(f64) -> Complex64>(g: G, x: f64, halfperiods: usize) -> Complex64 {
    let (gx, gw) = gauss_legendre(24);
    let h = PI / x;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sums = Vec::with_capacity(halfperiods);
    for k in 0..halfperiods {
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        // grade the first panel towards the origin
        let panels: Vec<(f64, f64)> = if k == 0 {
            let mut v = Vec::new();
            let mut b = hi;
            for _ in 0..30 {
                v.push((0.5 * b, b));
                b *= 0.5;
            }
            v.push((0.0, b));
            v
        } else {
            vec![(lo, hi)]
        };
        for (a, b) in panels {
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            for (t, w) in gx.iter().zip(&gw) {
                let xi = m + r * t;
                let e = Complex64::from_polar(1.0, xi * x);
                acc += (g(xi) * e + g(-xi) * e.conj()) * (w * r);
            }
        }
        sums.push(acc / (2.0 * PI));
    }
    wynn(&sums[sums.len() - 40..])
}

fn m1_set() -> GammaQuotientParams {
    GammaQuotientParams::new(&[0.3], &[0.5], &[0.4], &[0.2])
}

fn ratio(p: &GammaQuotientParams, xi: f64) -> Complex64 {
    let s = Complex64::new(0.0, xi);
    p.right_factor(s) / p.left_factor(s) - 1.0
}

#[test]
fn phi1_matches_fourier_inversion() {
    let p = m1_set();
    let e = residue_expand_phi1(&p, 200).unwrap();
    for &x in &[0.5, 1.0, 2.0] {
        let want = oscillatory_oracle(|xi| ratio(&p, xi), x, 400);
        let got = e.evaluate(x);
        let rel = (got - want).norm() / want.norm();
        assert!(rel < 1e-6, "x={x} got={got} want={want} rel={rel:e}");
    }
}

#[test]
fn phi2_matches_fourier_inversion() {
    let p = m1_set();
    let q = p.swapped();
    let e = residue_expand_phi2(&p, 200).unwrap();
    for &x in &[0.5, 1.0, 2.0] {
        let want = oscillatory_oracle(|xi| ratio(&q, xi), x, 400);
        let got = e.evaluate(x);
        let rel = (got - want).norm() / want.norm();
        assert!(rel < 1e-6, "x={x} got={got} want={want} rel={rel:e}");
    }
}

#[test]
fn m2_expansion_matches_fourier_inversion() {
    let p = GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[0.5, 0.9], &[0.6, 0.8]);
    let e = residue_expand_phi1(&p, 300).unwrap();
    for &x in &[0.5, 1.0, 1.5, 2.0, 3.0] {
        let want = oscillatory_oracle(|xi| ratio(&p, xi), x, 400);
        let got = e.evaluate(x);
        let rel = (got - want).norm() / want.norm();
        assert!(rel < 1e-6, "x={x} got={got} want={want} rel={rel:e}");
    }
}

#[test]
fn hypergeometric_resummation_matches_residues() {
    let p = GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[0.5, 0.9], &[0.6, 0.8]);
    let e = residue_expand_phi1(&p, 400).unwrap();
    let z: f64 = 0.3;
    let x = -z.ln();
    let mut total = c(0.0);
    for j in 0..2 {
        let (pre, f) = hypergeometric_form(&p, j).unwrap();
        total += pre * z.powf(p.a[j].re) * pfq(&f, c(z)).unwrap().value;
    }
    let direct = e.evaluate(x);
    assert!((total - direct).norm() < 1e-10 * direct.norm());
}

#[test]
fn symmetric_parameters_give_equal_expansions() {
    let p = GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[0.3, 0.7], &[0.4, 0.6]);
    let e1 = residue_expand_phi1(&p, 50).unwrap();
    let e2 = residue_expand_phi2(&p, 50).unwrap();
    assert_eq!(e1, e2);
}

#[test]
fn meijer_g11_matches_residue_sum() {
    let (a, b, x) = (0.6, 0.3, 0.5f64);
    let p = MeijerGParams { m: 1, n: 1, a: vec![a], b: vec![b] };
    let g = meijer_g(&p, x, 80.0).unwrap();
    // Σ (−1)^k/k! Γ(1−a+b+k) x^{b+k}
    let mut sum = 0.0;
    let mut term = hankeldet::specfun::gamma_real(1.0 - a + b) * x.powf(b);
    for k in 0..200 {
        sum += term;
        let kf = k as f64;
        term *= -(1.0 - a + b + kf) * x / (kf + 1.0);
    }
    assert!((g.re - sum).abs() < 1e-9 * sum.abs(), "{} vs {sum}", g.re);
    let closed = hankeldet::specfun::gamma_real(1.0 - a + b) * x.powf(b) * (1.0 + x).powf(-(1.0 - a + b));
    assert!((sum - closed).abs() < 1e-12);
}

#[test]
fn scattering_divisor_identity() {
    let lam = 1.7;
    let d = divisor_of_scattering(lam);
    let want = GammaDivisor::left(c(-1.0), -1)
        + GammaDivisor::right(c(lam), -1)
        + GammaDivisor::right(c(1.0), 1)
        + GammaDivisor::left(c(-lam), 1);
    assert_eq!(d, want);
    // the same divisor from the gamma-quotient form of −S
    let gq = GammaQuotientParams::new(&[1.0], &[lam], &[lam], &[1.0]);
    assert_eq!(divisor_of_gamma_quotient(&gq), d);
}

fn params() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.15f64..0.95, 2),
        prop::collection::vec(0.15f64..0.95, 2),
        prop::collection::vec(0.15f64..0.95, 2),
        prop::collection::vec(0.15f64..0.95, 2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_has_period_m((a, b, cc, d) in params()) {
        prop_assume!((a[0] - a[1]).abs() > 0.02);
        let p = GammaQuotientParams::new(&a, &b, &cc, &d);
        prop_assume!(a.iter().all(|x| b.iter().all(|y| (x - y).abs() > 1e-3)));
        let info = residue_coefficients(&p, 40).unwrap();
        for j in 0..38 {
            prop_assert_eq!(info.grid[j + 2], info.grid[j] + 1.0);
        }
        let e = residue_expand_phi1(&p, 40).unwrap();
        prop_assert!(e.coefficients.iter().all(|z| z.im.abs() < 1e-10 * z.norm().max(1.0)));
    }

    #[test]
    fn divisor_is_additive((a, b, cc, d) in params(), (a2, b2, c2, d2) in params()) {
        let p = GammaQuotientParams::new(&a, &b, &cc, &d);
        let q = GammaQuotientParams::new(&a2, &b2, &c2, &d2);
        let mut pq = p.clone();
        pq.a.extend(q.a.iter()); pq.b.extend(q.b.iter());
        pq.c.extend(q.c.iter()); pq.d.extend(q.d.iter());
        prop_assert_eq!(divisor_of_gamma_quotient(&pq), divisor_of_gamma_quotient(&p) + divisor_of_gamma_quotient(&q));
    }

    #[test]
    fn divisor_shift_cancels(s in -3.0f64..3.0, k in 1i64..5) {
        let z = c(s);
        let d = GammaDivisor::right(z, 1) - GammaDivisor::right(z + k as f64, 1);
        for i in 0..k {
            prop_assert_eq!(d.multiplicity(z + i as f64), 1);
        }
        prop_assert_eq!(d.multiplicity(z + k as f64), 0);
        prop_assert!((GammaDivisor::left(z, 3) - GammaDivisor::left(z, 3)).is_zero());
    }
}

#[test]
fn pfq_truncated_sum_matches_m1_closed_form() {
    // m = 1: 2F1(0.8, 0.5; 0.7; z)
    let f = PFQParams::new(vec![c(0.8), c(0.5)], vec![c(0.7)]);
    let v = pfq(&f, c(0.2)).unwrap().value;
    let mut t = 1.0;
    let mut s = 0.0;
    for k in 0..200 {
        s += t;
        let kf = k as f64;
        t *= (0.8 + kf) * (0.5 + kf) / ((0.7 + kf) * (kf + 1.0)) * 0.2;
    }
    assert!((v.re - s).abs() < 1e-14);
}
