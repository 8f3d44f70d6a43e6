//! Inverse Fourier transforms k(x) = (1/2pi) ∫ g(ξ) e^{iξx} dξ of functions
//! that are analytic off a band around the imaginary axis.
//!
//! The real line is deformed into [-T, T] joined to two rays leaving ±T at
//! 45 degrees into the half-plane where e^{iξx} decays. Poles and branch
//! points of g must satisfy |Re ξ| < T. The rule is precomputed once, so a
//! transform at many abscissae of one sign is a plain exponential sum.

use crate::quad::{gauss_legendre, panel_rule};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct ContourFt {
    points: Vec<Complex64>,
    gw: Vec<Complex64>,
    sign: f64,
}

impl ContourFt {
    /// Rule valid for abscissae with the given sign and magnitude in
    /// [x_min, x_max].
    pub fn new<G: Fn(Complex64) -> Complex64 + Sync>(
        g: G,
        sign: f64,
        t_re: f64,
        x_min: f64,
        x_max: f64,
    ) -> Self {
        let sign = if sign < 0.0 { -1.0 } else { 1.0 };
        let order = 20;
        let width = (10.0 / x_max.max(1e-3)).min(0.25);
        let npan = ((2.0 * t_re / width).ceil() as usize).max(4);
        let breaks: Vec<f64> = (0..=npan)
            .map(|k| -t_re + 2.0 * t_re * k as f64 / npan as f64)
            .collect();
        let (xs, ws) = panel_rule(&breaks, order);
        let mut points: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut weights: Vec<Complex64> = ws.iter().map(|&w| Complex64::new(w, 0.0)).collect();

        // ray r in [0, r_max], geometric panels
        let alpha = PI / 4.0;
        let r_max = 45.0 / (x_min.max(1e-12) * alpha.sin());
        let mut rb = vec![0.0];
        let mut r = (1.0 / x_max.max(1e-3)).min(0.05);
        while r < r_max {
            rb.push(r);
            r *= 1.5;
        }
        rb.push(r_max);
        let (gr, gwr) = gauss_legendre(order);
        let right = Complex64::from_polar(1.0, sign * alpha);
        let left = -Complex64::from_polar(1.0, -sign * alpha);
        for win in rb.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let h = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (gi, wi) in gr.iter().zip(&gwr) {
                let rr = mid + h * gi;
                let dr = h * wi;
                points.push(Complex64::new(t_re, 0.0) + right * rr);
                weights.push(right * dr);
                // the left ray runs inwards, towards -T
                points.push(Complex64::new(-t_re, 0.0) + left * rr);
                weights.push(-left * dr);
            }
        }
        let gw: Vec<Complex64> = points
            .par_iter()
            .zip(weights.par_iter())
            .map(|(&p, &w)| g(p) * w / (2.0 * PI))
            .collect();
        Self { points, gw, sign }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Contour points and the weights g(ξ)·w/2π attached to them.
    pub fn parts(&self) -> (&[Complex64], &[Complex64]) {
        (&self.points, &self.gw)
    }

    /// k(x); `x` must have the sign this rule was built for.
    pub fn eval(&self, x: f64) -> Complex64 {
        debug_assert!(x * self.sign >= 0.0);
        let ix = Complex64::new(0.0, x);
        self.points
            .iter()
            .zip(&self.gw)
            .fold(Complex64::new(0.0, 0.0), |acc, (&p, &gw)| acc + gw * (ix * p).exp())
    }
}

/// One-shot inverse transform at a single abscissa.
pub fn inverse_ft<G: Fn(Complex64) -> Complex64 + Sync>(g: G, x: f64, t_re: f64) -> Complex64 {
    let rule = ContourFt::new(g, x.signum(), t_re, x.abs(), x.abs());
    rule.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_of_lorentzian() {
        // g = 2/(1+ξ²) ⇒ k(x) = e^{-|x|}
        let g = |xi: Complex64| Complex64::new(2.0, 0.0) / (xi * xi + 1.0);
        for &x in &[0.01, 0.5, 2.0, 7.0] {
            let k = inverse_ft(g, x, 1.0);
            assert!((k.re - f64::exp(-x)).abs() < 1e-12, "x={x} k={k}");
            let k = inverse_ft(g, -x, 1.0);
            assert!((k.re - f64::exp(-x)).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_of_slowly_decaying_symbol() {
        // g = 1/(1 + iξ) ⇒ k(x) = e^{-x} for x > 0 and 0 for x < 0
        let g = |xi: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) + Complex64::i() * xi);
        let rule = ContourFt::new(g, 1.0, 0.5, 1e-3, 20.0);
        for &x in &[1e-3, 0.3, 3.0, 20.0] {
            assert!((rule.eval(x) - f64::exp(-x)).norm() < 1e-11, "x={x}");
        }
        let rule = ContourFt::new(g, -1.0, 0.5, 1e-3, 20.0);
        assert!(rule.eval(-0.7).norm() < 1e-11);
    }
}
