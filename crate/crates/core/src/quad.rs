//! Quadrature rules: Gauss–Legendre, Gauss–Laguerre, composite panels and
//! adaptive Gauss–Kronrod.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
            z = 0.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        w[0] = 2.0;
    }
    (x, w)
}

// L_n(x) and L_{n-1}(x) scaled by exp(-scale), plus the scale.
fn laguerre_pair_scaled(n: usize, x: f64) -> (f64, f64, f64) {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    let mut scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
        let m = l1.abs().max(l0.abs());
        if m > 1e100 {
            l0 /= m;
            l1 /= m;
            scale += m.ln();
        }
    }
    (l1, l0, scale)
}

/// Gauss–Laguerre rule for weight e^{-x} on (0, inf). Golub–Welsch supplies
/// starting nodes, which are polished by Newton steps on L_n; weights come
/// from w = x / (n L_{n-1}(x))^2 evaluated with overflow-safe scaling.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, lw) = gauss_laguerre_log(n);
    (x, lw.into_iter().map(f64::exp).collect())
}

/// Gauss–Laguerre nodes with the logarithms of the weights, for rules whose
/// weights underflow.
pub fn gauss_laguerre_log(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        j[(k, k)] = 2.0 * k as f64 + 1.0;
        if k + 1 < n {
            j[(k, k + 1)] = k as f64 + 1.0;
            j[(k + 1, k)] = k as f64 + 1.0;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let nf = n as f64;
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        if n > 1 {
            for _ in 0..4 {
                let (ln, lm, _) = laguerre_pair_scaled(n, *x);
                let dl = nf * (ln - lm) / *x;
                let step = ln / dl;
                *x -= step;
                if step.abs() < 1e-15 * x.abs() {
                    break;
                }
            }
        }
        let (_, lm, scale) = laguerre_pair_scaled(n, *x);
        let lw = x.ln() - 2.0 * (nf * lm.abs()).ln() - 2.0 * scale;
        weights.push(lw);
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule over consecutive breakpoints.
pub fn panel_rule(breaks: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (g, w) = gauss_legendre(order);
    let mut xs = Vec::with_capacity((breaks.len().saturating_sub(1)) * order);
    let mut ws = Vec::with_capacity(xs.capacity());
    for win in breaks.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let h = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (gi, wi) in g.iter().zip(&w) {
            xs.push(mid + h * gi);
            ws.push(h * wi);
        }
    }
    (xs, ws)
}

/// Breakpoints 0, h 2^{-levels}, ..., h/2, h graded towards the origin.
pub fn dyadic_breaks(h: f64, levels: usize) -> Vec<f64> {
    let mut b = vec![0.0];
    for i in (0..=levels).rev() {
        b.push(h * 0.5f64.powi(i as i32));
    }
    b
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        rk += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            rg += (f1 + f2) * WG[j / 2];
        }
    }
    let err = ((rk - rg) * h).norm();
    (rk * h, err)
}

struct Seg {
    a: f64,
    b: f64,
    val: Complex64,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss–Kronrod (7/15) integration on a finite interval, starting
/// from the supplied breakpoints.
pub fn adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e) = gk15(&mut f, w[0], w[1]);
        evals += 15;
        total += v;
        total_err += e;
        heap.push(Seg {
            a: w[0],
            b: w[1],
            val: v,
            err: e,
        });
    }
    let mut nseg = heap.len();
    while total_err > abs_tol.max(rel_tol * total.norm()) {
        if nseg >= max_segments {
            if !total.re.is_finite() || !total.im.is_finite() {
                return Err(Error::Quadrature("non-finite integrand".into()));
            }
            return Err(Error::Quadrature(format!(
                "segment limit {max_segments} reached, error estimate {total_err:e}"
            )));
        }
        let s = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let m = 0.5 * (s.a + s.b);
        if m <= s.a || m >= s.b {
            heap.push(s);
            break;
        }
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        evals += 30;
        total += v1 + v2 - s.val;
        total_err += e1 + e2 - s.err;
        heap.push(Seg {
            a: s.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Seg {
            a: m,
            b: s.b,
            val: v2,
            err: e2,
        });
        nseg += 1;
    }
    // Re-sum in a fixed order so the value does not depend on heap history.
    let mut segs: Vec<Seg> = heap.into_vec();
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = segs.iter().fold(Complex64::new(0.0, 0.0), |acc, s| acc + s.val);
    let error = segs.iter().map(|s| s.err).sum();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Quadrature("non-finite integrand".into()));
    }
    Ok(QuadResult {
        value,
        error,
        evaluations: evals,
    })
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let r = adaptive(|x| Complex64::new(f(x), 0.0), breaks, abs_tol, rel_tol, 20_000)?;
    Ok((r.value.re, r.error))
}

/// Integral over (a, inf) through x = a + t/(1-t).
pub fn adaptive_semi_infinite<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + t / s;
        let v = f(x);
        if v == Complex64::new(0.0, 0.0) {
            v
        } else {
            v / (s * s)
        }
    };
    let breaks = [0.0, 0.25, 0.5, 0.75, 0.875, 0.9375, 0.97, 0.99, 1.0];
    adaptive(g, &breaks, abs_tol, rel_tol, 20_000)
}
