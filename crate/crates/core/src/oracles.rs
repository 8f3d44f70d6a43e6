//! Brute-force quadrature oracles used by the verification suite. None of
//! these share a code path with the routines they check beyond the basic
//! Gauss rules.

use crate::error::Result;
use crate::orthopoly::MomentWeight;
use crate::quad::{adaptive_real, gauss_legendre};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Wynn's epsilon algorithm on a sequence of partial sums; the last
/// finite even column entry.
pub fn wynn_epsilon(s: &[Complex64]) -> Complex64 {
    let mut prev = vec![Complex64::new(0.0, 0.0); s.len() + 1];
    let mut cur = s.to_vec();
    let mut best = *s.last().unwrap_or(&Complex64::new(0.0, 0.0));
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

/// (1/2π)∫ g(ξ) e^{iξx} dξ along the real line for x > 0: Gauss–Legendre on
/// half-periods of the oscillation, then epsilon extrapolation of the last
/// 40 partial sums. The first half-period is graded towards ξ = 0.
pub fn fourier_inversion<G: Fn(f64) -> Complex64>(g: G, x: f64, halfperiods: usize) -> Complex64 {
    let (gx, gw) = gauss_legendre(24);
    let h = PI / x;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sums = Vec::with_capacity(halfperiods);
    for k in 0..halfperiods {
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        let mut panels = Vec::new();
        if k == 0 {
            let mut b = hi;
            for _ in 0..30 {
                panels.push((0.5 * b, b));
                b *= 0.5;
            }
            panels.push((0.0, b));
        } else {
            panels.push((lo, hi));
        }
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
    wynn_epsilon(&sums[sums.len().saturating_sub(40)..])
}

/// ∫ x^k w0(x) g(x) dx over the weight's support with 40 dyadic levels at
/// finite endpoints; a semi-infinite support is cut at 200.
pub fn weighted_moment(w: &MomentWeight, k: usize, g: &dyn Fn(f64) -> f64, extra: &[f64]) -> Result<f64> {
    let (a, b) = w.support;
    let hi = if b.is_finite() { b } else { a + 200.0 };
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
    let mut bad = None;
    let v = adaptive_real(
        |x| match w.w0(x) {
            Ok(v) => x.powi(k as i32) * v * g(x),
            Err(e) => {
                bad = Some(e);
                0.0
            }
        },
        &br,
        1e-300,
        1e-14,
    )?
    .0;
    match bad {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// ∫_{−1}^1 x^n log(2κ/(1 − x)) dx with u = 1 − x graded towards u = 0.
pub fn log_weight_moment_quadrature(kappa: f64, n: usize) -> Result<f64> {
    let mut br: Vec<f64> = (0..50).map(|i| 2.0 * 0.5f64.powi(i)).collect();
    br.push(0.0);
    br.sort_by(f64::total_cmp);
    let l2k = (2.0 * kappa).ln();
    Ok(adaptive_real(|u| (l2k - u.ln()) * (1.0 - u).powi(n as i32), &br, 1e-300, 1e-15)?.0)
}

/// 2∫_0^π log|x − cos φ| r(φ) dφ, where r(φ) = ρ(cos φ) sin φ. `extra`
/// lists further θ-breakpoints.
pub fn log_potential(r: &dyn Fn(f64) -> f64, x: f64, extra: &[f64]) -> Result<f64> {
    let mut br = vec![0.0, x.clamp(-1.0, 1.0).acos(), PI];
    br.extend(extra.iter().filter(|&&p| p > 0.0 && p < PI));
    br.sort_by(f64::total_cmp);
    br.dedup();
    Ok(2.0 * adaptive_real(|p| (x - p.cos()).abs().ln() * r(p), &br, 1e-15, 1e-13)?.0)
}

/// Determinant of the n×n Hankel matrix [m_{j+k}] by partial pivoting.
pub fn hankel_det(m: &[f64], n: usize) -> f64 {
    nalgebra::DMatrix::from_fn(n, n, |i, j| m[i + j]).determinant()
}
