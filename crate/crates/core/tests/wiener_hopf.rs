use hankeldet::symbols::*;
use hankeldet::Complex64;
use std::f64::consts::PI;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn gamma_quotient_factors_match_closed_form() {
    let p = GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[0.3, 0.7], &[0.4, 0.6]);
    let s = gamma_quotient_symbol(&p).unwrap();
    let t = std::time::Instant::now();
    let f = wiener_hopf_factorize(&s, None, 1e-8).unwrap();
    eprintln!("factorize {:?} residual {:e}", t.elapsed(), f.reconstruction_residual);
    for &z in &[cz(0.0, 0.0), cz(0.02, 1.0), cz(-0.03, -4.0), cz(0.5, 2.0)] {
        let want = p.right_factor(z);
        let got = f.psi_plus(z).unwrap();
        assert!((got - want).norm() < 1e-8 * want.norm(), "z={z} got={got} want={want}");
    }
    for &z in &[cz(0.0, 0.0), cz(-0.5, 3.0)] {
        let want = p.left_factor(z);
        let got = f.psi_minus(z).unwrap();
        assert!((got - want).norm() < 1e-8 * want.norm(), "z={z} got={got} want={want}");
    }
}

#[test]
fn sinh_kernel_reconstruction() {
    let s = sinh_kernel_symbol(PI * PI).unwrap();
    let t = std::time::Instant::now();
    let f = wiener_hopf_factorize(&s, None, 1e-8).unwrap();
    eprintln!("factorize {:?}", t.elapsed());
    for &xi in &[0.0, 1.0, -1.0, 3.0, -3.0] {
        let z = cz(0.0, xi);
        let r = f.psi_minus(z).unwrap() * f.psi_plus(z).unwrap() / s.evaluate(z) - 1.0;
        assert!(r.norm() < 1e-8, "xi={xi} {r}");
    }
}

#[test]
fn asymmetric_gamma_quotient_factors() {
    let p = GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[0.5, 0.9], &[0.6, 0.8]);
    let s = gamma_quotient_symbol(&p).unwrap();
    let t = std::time::Instant::now();
    let f = wiener_hopf_factorize(&s, None, 1e-8).unwrap();
    eprintln!("factorize {:?} residual {:e}", t.elapsed(), f.reconstruction_residual);
    for &z in &[cz(0.0, 0.0), cz(0.02, 1.0), cz(-0.03, -4.0), cz(0.5, 2.0), cz(0.0, 200.0)] {
        let want = p.right_factor(z);
        let got = f.psi_plus(z).unwrap();
        assert!((got - want).norm() < 1e-8 * want.norm(), "z={z} got={got} want={want}");
    }
}

#[test]
fn sinh_kernel_factor_is_scaled_gamma_quotient() {
    let g = 2.0 * PI * PI;
    let s = sinh_kernel_symbol(g).unwrap();
    let f = wiener_hopf_factorize(&s, None, 1e-8).unwrap();
    let p = GammaQuotientParams::sinh_kernel(g);
    for &xi in &[0.0, 2.0, -7.0] {
        let z = cz(0.0, xi);
        let want = p.right_factor(z / (2.0 * g));
        let got = f.psi_plus(z).unwrap();
        assert!((got - want).norm() < 1e-8, "xi={xi} got={got} want={want}");
    }
}
