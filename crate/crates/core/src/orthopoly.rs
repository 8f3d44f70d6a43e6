//! Moment sequences, monic orthogonal polynomials, Hankel determinants of
//! moments, Christoffel–Darboux kernels and linear-statistic determinants.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quad::{adaptive_real, adaptive_semi_infinite, gauss_legendre, panel_rule};
use crate::specfun::{gamma_real, laguerre, struve, EULER_GAMMA};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn default_eps() -> f64 {
    0.1
}

/// Weight description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// e^{−x} on (0, ∞).
    Laguerre,
    /// (1 − x)^α x^β on (0, 1).
    Jacobi { alpha: f64, beta: f64 },
    /// log(2κ/(1 − x)) on (−1, 1).
    LogWeight { kappa: f64 },
    /// base·exp(βπ/2 − β·atan((x − t)/ε)).
    Deformed {
        base: Box<WeightSpec>,
        t: f64,
        #[serde(default = "default_eps")]
        eps: f64,
        beta: f64,
    },
    /// Moments only; no pointwise weight.
    CustomTable { moments: Vec<f64> },
}

/// Polynomials (V, W), coefficients in ascending order, with W·w0′ = 2V·w0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalData {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

/// A positive weight on an interval with a cached moment sequence.
#[derive(Clone)]
pub struct MomentWeight {
    pub spec: WeightSpec,
    pub support: (f64, f64),
    w0: Option<RealFn>,
    closed_form: Option<Arc<dyn Fn(usize) -> f64 + Send + Sync>>,
    features: Vec<f64>,
    pub semiclassical: Option<SemiclassicalData>,
    cache: Arc<Mutex<Vec<f64>>>,
}

impl std::fmt::Debug for MomentWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MomentWeight")
            .field("spec", &self.spec)
            .field("support", &self.support)
            .finish()
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_real(a) + ln_gamma_real(b) - ln_gamma_real(a + b)
}

fn ln_gamma_real(x: f64) -> f64 {
    crate::specfun::ln_gamma(Complex64::new(x, 0.0))
        .map(|z| z.re)
        .unwrap_or(f64::NAN)
}

impl MomentWeight {
    fn build(
        spec: WeightSpec,
        support: (f64, f64),
        w0: Option<RealFn>,
        closed_form: Option<Arc<dyn Fn(usize) -> f64 + Send + Sync>>,
        features: Vec<f64>,
        semiclassical: Option<SemiclassicalData>,
    ) -> Self {
        Self {
            spec,
            support,
            w0,
            closed_form,
            features,
            semiclassical,
            cache: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn laguerre() -> Self {
        Self::build(
            WeightSpec::Laguerre,
            (0.0, f64::INFINITY),
            Some(Arc::new(|x: f64| (-x).exp())),
            Some(Arc::new(|k| (1..=k).map(|j| j as f64).product())),
            vec![],
            Some(SemiclassicalData {
                v: vec![0.0, -0.5],
                w: vec![0.0, 1.0],
            }),
        )
    }

    /// (1 − x)^α x^β on (0, 1), α, β > −1.
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::InvalidInput("Jacobi exponents must exceed −1".into()));
        }
        Ok(Self::build(
            WeightSpec::Jacobi { alpha, beta },
            (0.0, 1.0),
            Some(Arc::new(move |x: f64| (1.0 - x).powf(alpha) * x.powf(beta))),
            Some(Arc::new(move |k| {
                let mut m = ln_beta(beta + 1.0, alpha + 1.0).exp();
                for j in 1..=k {
                    let jf = j as f64;
                    m *= (jf + beta) / (jf + beta + alpha + 1.0);
                }
                m
            })),
            vec![],
            Some(SemiclassicalData {
                v: vec![0.5 * beta, -0.5 * (alpha + beta)],
                w: vec![0.0, 1.0, -1.0],
            }),
        ))
    }

    /// log(2κ/(1 − x)) on (−1, 1), κ > 1.
    pub fn log_weight(kappa: f64) -> Result<Self> {
        if !(kappa > 1.0) {
            return Err(Error::InvalidInput("κ must exceed 1".into()));
        }
        let l2k = (2.0 * kappa).ln();
        Ok(Self::build(
            WeightSpec::LogWeight { kappa },
            (-1.0, 1.0),
            Some(Arc::new(move |x: f64| l2k - (1.0 - x).ln())),
            Some(Arc::new(move |k| log_weight_moment(kappa, k))),
            vec![],
            None,
        ))
    }

    pub fn custom_table(moments: Vec<f64>) -> Result<Self> {
        if moments.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidInput("moments must be finite".into()));
        }
        let w = Self::build(
            WeightSpec::CustomTable {
                moments: moments.clone(),
            },
            (f64::NEG_INFINITY, f64::INFINITY),
            None,
            None,
            vec![],
            None,
        );
        *w.cache.lock().expect("moment cache") = moments;
        Ok(w)
    }

    pub fn from_spec(spec: &WeightSpec) -> Result<Self> {
        match spec {
            WeightSpec::Laguerre => Ok(Self::laguerre()),
            WeightSpec::Jacobi { alpha, beta } => Self::jacobi(*alpha, *beta),
            WeightSpec::LogWeight { kappa } => Self::log_weight(*kappa),
            WeightSpec::Deformed { base, t, eps, beta } => {
                deformed_weight(&Self::from_spec(base)?, *t, *eps, *beta)
            }
            WeightSpec::CustomTable { moments } => Self::custom_table(moments.clone()),
        }
    }

    /// Attaches (V, W) after checking W·w0′ = 2V·w0 on a probe grid.
    pub fn with_semiclassical(mut self, data: SemiclassicalData) -> Result<Self> {
        let r = self.semiclassical_residual(&data)?;
        if r > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "W·w0′ − 2V·w0 residual {r:e} on the probe grid"
            )));
        }
        self.semiclassical = Some(data);
        Ok(self)
    }

    /// Largest |W·w0′ − 2V·w0| / (|W·w0′| + |2V·w0|) over interior probes,
    /// with w0′ from a five-point difference.
    pub fn semiclassical_residual(&self, data: &SemiclassicalData) -> Result<f64> {
        let w0 = self.w0_fn()?;
        let (a, b) = self.support;
        let hi = if b.is_finite() { b } else { a + 12.0 };
        let mut worst: f64 = 0.0;
        for k in 1..16 {
            let x = a + (hi - a) * k as f64 / 16.0;
            let h = 1e-3 * (hi - a).min(1.0);
            let d = (w0(x - 2.0 * h) - 8.0 * w0(x - h) + 8.0 * w0(x + h) - w0(x + 2.0 * h)) / (12.0 * h);
            let l = poly_eval(&data.w, x) * d;
            let r = 2.0 * poly_eval(&data.v, x) * w0(x);
            let scale = l.abs() + r.abs();
            if scale > 0.0 {
                worst = worst.max((l - r).abs() / scale);
            }
        }
        Ok(worst)
    }

    fn w0_fn(&self) -> Result<&RealFn> {
        self.w0
            .as_ref()
            .ok_or_else(|| Error::MissingData("weight has no pointwise values".into()))
    }

    /// w0(x); zero outside the support.
    pub fn w0(&self, x: f64) -> Result<f64> {
        let f = self.w0_fn()?;
        let (a, b) = self.support;
        Ok(if x > a && x < b { f(x) } else { 0.0 })
    }

    /// Breakpoints for quadrature on the support: dyadic grading towards
    /// finite endpoints, the weight's feature points, and geometric panels
    /// on a semi-infinite support up to `a + tail`.
    pub fn breakpoints(&self, extra: &[f64], tail: f64, levels: i32) -> Vec<f64> {
        let (a, b) = self.support;
        let mut v = vec![a];
        let hi = if b.is_finite() { b } else { a + tail };
        let len = hi - a;
        for i in (1..=levels).rev() {
            v.push(a + len * 0.5f64.powi(i) * 0.5);
            if b.is_finite() {
                v.push(b - len * 0.5f64.powi(i) * 0.5);
            }
        }
        if b.is_finite() {
            v.push(0.5 * (a + b));
            v.push(b);
        } else {
            let mut x = 1.0;
            while x < tail {
                v.push(a + x);
                x *= 2.0;
            }
            v.push(hi);
        }
        v.extend(extra.iter().chain(&self.features).filter(|&&x| x > a && x < hi));
        v.sort_by(f64::total_cmp);
        v.dedup_by(|p, q| (*p - *q).abs() < 1e-14 * (1.0 + q.abs()));
        v
    }

    /// ∫ x^k w0(x) dx by adaptive quadrature.
    pub fn quadrature_moment(&self, k: usize) -> Result<f64> {
        let w0 = self.w0_fn()?.clone();
        let (a, b) = self.support;
        let f = |x: f64| x.powi(k as i32) * w0(x);
        if b.is_finite() {
            let br = self.breakpoints(&[], 0.0, 30);
            Ok(adaptive_real(f, &br, 1e-300, 1e-14)?.0)
        } else {
            let tail = 64.0;
            let br = self.breakpoints(&[], tail, 30);
            let head = adaptive_real(f, &br, 1e-300, 1e-14)?.0;
            let rest = adaptive_semi_infinite(|x| Complex64::new(f(x), 0.0), a + tail, 1e-300, 1e-13)?;
            Ok(head + rest.value.re)
        }
    }

    /// μ_k, from the closed form when one exists and from quadrature
    /// otherwise; cached.
    pub fn moment(&self, k: usize) -> Result<f64> {
        {
            let c = self.cache.lock().expect("moment cache");
            if k < c.len() {
                return Ok(c[k]);
            }
        }
        if matches!(self.spec, WeightSpec::CustomTable { .. }) {
            let got = self.cache.lock().expect("moment cache").len();
            return Err(Error::Length { needed: k + 1, got });
        }
        let start = self.cache.lock().expect("moment cache").len();
        let mut fresh = Vec::with_capacity(k + 1 - start);
        for j in start..=k {
            let m = match &self.closed_form {
                Some(f) => f(j),
                None => self.quadrature_moment(j)?,
            };
            if !m.is_finite() {
                return Err(Error::Quadrature(format!("moment {j} is not finite")));
            }
            fresh.push(m);
        }
        let mut c = self.cache.lock().expect("moment cache");
        if c.len() == start {
            c.extend(fresh);
        }
        Ok(c[k])
    }

    /// μ_0..μ_{n−1}.
    pub fn moments(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Ok(vec![]);
        }
        self.moment(n - 1)?;
        Ok(self.cache.lock().expect("moment cache")[..n].to_vec())
    }

    /// CSV `k,mu_k` for k < n.
    pub fn moments_csv(&self, n: usize) -> Result<String> {
        let mut out = String::from("k,mu\n");
        for (k, m) in self.moments(n)?.iter().enumerate() {
            out.push_str(&format!("{k},{}\n", crate::fmt_num(*m)));
        }
        Ok(out)
    }
}

/// w0·exp(βπ/2 − β·atan((x − t)/ε)).
pub fn deformed_weight(weight: &MomentWeight, t: f64, eps: f64, beta: f64) -> Result<MomentWeight> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("ε must be positive".into()));
    }
    let base = weight.w0_fn()?.clone();
    let w: RealFn = Arc::new(move |x: f64| base(x) * (beta * (0.5 * PI - ((x - t) / eps).atan())).exp());
    let mut features = weight.features.clone();
    for k in [-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0] {
        features.push(t + k * eps);
    }
    Ok(MomentWeight::build(
        WeightSpec::Deformed {
            base: Box::new(weight.spec.clone()),
            t,
            eps,
            beta,
        },
        weight.support,
        Some(w),
        if beta == 0.0 { weight.closed_form.clone() } else { None },
        features,
        None,
    ))
}

/// Monic orthogonal polynomials p_0..p_n of a weight with their norms and
/// recurrence x p_k = p_{k+1} + α_k p_k + β_k p_{k−1}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OPLadder {
    /// h_k = ⟨p_k, p_k⟩, k = 0..=n.
    pub h: Vec<f64>,
    /// α_k, k = 0..n.
    pub alpha: Vec<f64>,
    /// β_k = h_k/h_{k−1} for k ≥ 1; β_0 = h_0 by convention.
    pub beta: Vec<f64>,
    /// Row k holds the coefficients of p_k in ascending order.
    pub monic_coeffs: Vec<Vec<f64>>,
    /// max |⟨p_j, p_k⟩| / √(h_j h_k) over j ≠ k.
    pub orthogonality_residual: f64,
}

impl OPLadder {
    /// (p_k(x), p_k′(x)) from the three-term recurrence.
    fn eval_both(&self, k: usize, x: f64) -> (f64, f64) {
        let (mut p0, mut p1) = (0.0, 1.0);
        let (mut d0, mut d1) = (0.0, 0.0);
        for j in 0..k {
            let b = if j == 0 { 0.0 } else { self.beta[j] };
            let p2 = (x - self.alpha[j]) * p1 - b * p0;
            let d2 = p1 + (x - self.alpha[j]) * d1 - b * d0;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        (p1, d1)
    }

    /// p_k(x) for k ≤ n.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        self.eval_both(k, x).0
    }

    fn eval_deriv(&self, k: usize, x: f64) -> f64 {
        self.eval_both(k, x).1
    }
}

fn moment_matrix(mu: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |j, k| mu[j + k])
}

/// Monic OPs from the moment matrix [μ_{j+k}]_{j,k≤n}, factorized as
/// L D Lᵀ in double-double arithmetic: the pivots of D are the h_k and the
/// rows of L⁻¹ are the monic coefficients. Moment matrices are badly
/// conditioned, so the extra precision keeps h_k and the recurrence
/// coefficients accurate to the moments' own precision.
pub fn build_ladder(weight: &MomentWeight, n: usize) -> Result<OPLadder> {
    let mu: Vec<Dd> = weight.moments(2 * n + 1)?.into_iter().map(Dd::from).collect();
    let m = n + 1;
    let zero = Dd::from(0.0);
    let mut l = vec![vec![zero; m]; m];
    let mut d = vec![zero; m];
    for j in 0..m {
        let mut dj = mu[2 * j];
        for k in 0..j {
            dj = dj - l[j][k] * l[j][k] * d[k];
        }
        if !(dj.0 > 1e-28 * mu[2 * j].0.abs()) {
            return Err(Error::NotPositiveDefinite(j));
        }
        d[j] = dj;
        l[j][j] = Dd::from(1.0);
        for i in j + 1..m {
            let mut v = mu[i + j];
            for k in 0..j {
                v = v - l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = v / dj;
        }
    }
    // C = L⁻¹ by forward substitution
    let mut c = vec![vec![zero; m]; m];
    for k in 0..m {
        c[k][k] = Dd::from(1.0);
        for j in (0..k).rev() {
            let mut v = zero;
            for i in j + 1..=k {
                v = v - c[k][i] * l[i][j];
            }
            c[k][j] = v;
        }
    }
    let mut resid: f64 = 0.0;
    for a in 0..m {
        for b in a + 1..m {
            let mut g = zero;
            for i in 0..=a {
                for j in 0..=b {
                    g = g + c[a][i] * c[b][j] * mu[i + j];
                }
            }
            resid = resid.max(g.to_f64().abs() / (d[a].to_f64() * d[b].to_f64()).sqrt());
        }
    }
    let h: Vec<f64> = d.iter().map(|v| v.to_f64()).collect();
    let sub = |k: usize| if k == 0 { zero } else { c[k][k - 1] };
    let alpha = (0..n).map(|k| (sub(k) - sub(k + 1)).to_f64()).collect();
    let beta = (0..m)
        .map(|k| if k == 0 { h[0] } else { (d[k] / d[k - 1]).to_f64() })
        .collect();
    let monic_coeffs = c
        .iter()
        .enumerate()
        .map(|(k, row)| row[..=k].iter().map(|v| v.to_f64()).collect())
        .collect();
    Ok(OPLadder {
        h,
        alpha,
        beta,
        monic_coeffs,
        orthogonality_residual: resid,
    })
}

fn det_dd(mu: &[f64], n: usize) -> f64 {
    let mut a: Vec<Vec<Dd>> = (0..n).map(|i| (0..n).map(|j| Dd::from(mu[i + j])).collect()).collect();
    let mut det = Dd::from(1.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().0.total_cmp(&a[j][k].abs().0))
            .unwrap_or(k);
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let piv = a[k][k];
        if piv.0 == 0.0 {
            return 0.0;
        }
        det = det * piv;
        for i in k + 1..n {
            let f = a[i][k] / piv;
            for j in k + 1..n {
                let v = a[k][j];
                a[i][j] = a[i][j] - f * v;
            }
        }
    }
    det.to_f64()
}

/// (det[μ_{j+k}]_{j,k<n} by pivoted elimination, ∏_{j<n} h_j), both in
/// double-double arithmetic.
pub fn hankel_det_product(weight: &MomentWeight, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Ok((1.0, 1.0));
    }
    let mu = weight.moments(2 * n - 1)?;
    let direct = det_dd(&mu, n);
    let ladder = build_ladder(weight, n - 1)?;
    Ok((direct, ladder.h.iter().product()))
}

/// Q_n(x, y) = Σ_{k<n} p_k(x) p_k(y)/h_k · √(w0(x) w0(y)).
#[derive(Clone)]
pub struct CDKernel {
    pub n: usize,
    ladder: OPLadder,
    weight: MomentWeight,
}

impl CDKernel {
    /// Christoffel–Darboux closed form, its derivative limit on the
    /// diagonal, and the plain sum when x and y are close enough for the
    /// closed form to cancel.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let n = self.n;
        let wx = self.weight.w0(x).unwrap_or(0.0);
        let wy = self.weight.w0(y).unwrap_or(0.0);
        let sw = (wx * wy).sqrt();
        if sw == 0.0 {
            return 0.0;
        }
        let lad = &self.ladder;
        let hn1 = lad.h[n - 1];
        if x == y {
            let v = lad.eval_deriv(n, x) * lad.eval(n - 1, x) - lad.eval(n, x) * lad.eval_deriv(n - 1, x);
            return sw * v / hn1;
        }
        if (x - y).abs() < 1e-3 * (1.0 + x.abs().max(y.abs())) {
            return sw * (0..n).map(|k| lad.eval(k, x) * lad.eval(k, y) / lad.h[k]).sum::<f64>();
        }
        let v = lad.eval(n, x) * lad.eval(n - 1, y) - lad.eval(n, y) * lad.eval(n - 1, x);
        sw * v / (hn1 * (x - y))
    }

    pub fn weight(&self) -> &MomentWeight {
        &self.weight
    }

    /// Quadrature nodes and weights on the support, with a tail cut where
    /// w0 times polynomials of degree 2n is negligible.
    pub fn nodes(&self, n_nodes: usize, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let br = self.weight.breakpoints(breaks, 128.0, 20);
        let order = n_nodes.div_ceil(br.len() - 1).max(10);
        panel_rule(&br, order)
    }
}

pub fn cd_kernel(ladder: &OPLadder, weight: &MomentWeight, n: usize) -> Result<CDKernel> {
    if n == 0 || n >= ladder.h.len() {
        return Err(Error::InvalidInput(format!(
            "kernel order {n} needs a ladder through degree {n}"
        )));
    }
    weight.w0_fn()?;
    Ok(CDKernel {
        n,
        ladder: ladder.clone(),
        weight: weight.clone(),
    })
}

fn lin_stat_on(kernel: &CDKernel, f: &dyn Fn(f64) -> f64, n_nodes: usize, breaks: &[f64]) -> Result<f64> {
    let (x, w) = kernel.nodes(n_nodes, breaks);
    let m = x.len();
    let hx: Vec<f64> = x.iter().map(|&xi| 1.0 - (-f(xi)).exp()).collect();
    let a = DMatrix::from_fn(m, m, |i, j| {
        let v = (w[i] * w[j]).sqrt() * kernel.evaluate(x[i], x[j]);
        (if i == j { 1.0 } else { 0.0 }) - hx[i] * v
    });
    let d = a.lu().determinant();
    if !d.is_finite() {
        return Err(Error::Quadrature("non-finite determinant".into()));
    }
    Ok(d)
}

/// det(I − M_h Q_n) with h = 1 − e^{−f}, by Nyström on the weight's
/// support. `breaks` marks discontinuities of f; the node count is doubled
/// once and a change above 1e−8 is reported as a quadrature failure.
pub fn linear_statistic_det(kernel: &CDKernel, f: &dyn Fn(f64) -> f64, n_nodes: usize, breaks: &[f64]) -> Result<f64> {
    let d1 = lin_stat_on(kernel, f, n_nodes, breaks)?;
    let d2 = lin_stat_on(kernel, f, 2 * n_nodes, breaks)?;
    if (d1 - d2).abs() > 1e-8 * (1.0 + d2.abs()) {
        return Err(Error::Quadrature(format!(
            "node doubling moved the determinant by {:e}",
            (d1 - d2).abs()
        )));
    }
    Ok(d2)
}

/// μ_n of log(2κ/(1 − x)) on (−1, 1):
/// (1 − (−1)^{n+1})/(n+1)·log 2κ + (2 − 2 log 2 + (1 + (−1)^{n+1}) log 2 + Σ_{m=1}^n (1 − (−1)^{m+1})/(m+1))/(n+1).
pub fn log_weight_moment(kappa: f64, n: usize) -> f64 {
    let s: f64 = (1..=n).map(|m| log_sum_term(m)).sum();
    log_weight_moment_with_sum(kappa, n, s)
}

fn log_sum_term(m: usize) -> f64 {
    if m % 2 == 0 {
        2.0 / (m as f64 + 1.0)
    } else {
        0.0
    }
}

fn log_weight_moment_with_sum(kappa: f64, n: usize, partial: f64) -> f64 {
    let nf = n as f64;
    let odd = n % 2 == 1;
    let first = if odd { 0.0 } else { 2.0 / (nf + 1.0) };
    let alt = if odd { 2.0 } else { 0.0 };
    first * (2.0 * kappa).ln() + (2.0 - 2.0 * LN_2 + alt * LN_2 + partial) / (nf + 1.0)
}

pub fn log_weight_moments(kappa: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(kappa > 1.0) {
        return Err(Error::InvalidInput("κ must exceed 1".into()));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut s = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            s += log_sum_term(n);
        }
        out.push(log_weight_moment_with_sum(kappa, n, s));
    }
    Ok(out)
}

/// Σ_{m=1}^n (1 − (−1)^{m+1})/(m+1) − (log n + log 2 + γ).
pub fn log_weight_asymptotic_check(_kappa: f64, n: usize) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for m in 1..=n {
        let t = log_sum_term(m);
        let u = s + t;
        c += if s.abs() >= t.abs() { (s - u) + t } else { (t - u) + s };
        s = u;
    }
    (s + c) - ((n as f64).ln() + LN_2 + EULER_GAMMA)
}

/// Σ_{j≤J} j μ_j², whose growth shows that the moment matrix is not
/// Hilbert–Schmidt.
pub fn log_weight_hs_partial_sums(kappa: f64, j_max: usize) -> Result<Vec<f64>> {
    let mu = log_weight_moments(kappa, j_max)?;
    let mut acc = 0.0;
    Ok(mu
        .iter()
        .enumerate()
        .map(|(j, m)| {
            acc += j as f64 * m * m;
            acc
        })
        .collect())
}

/// φ(x) = e^{x/2} ∫_{1/2}^∞ log(2κs) e^{−sx} ds/s, written with s = 1/2 + u
/// as ∫_0^∞ log(κ(1 + 2u)) e^{−ux}/(1/2 + u) du.
pub fn log_weight_phi(kappa: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidInput("x must be positive".into()));
    }
    let f = |u: f64| (kappa * (1.0 + 2.0 * u)).ln() * (-u * x).exp() / (0.5 + u);
    let cut = 40.0 / x;
    let mut br: Vec<f64> = (0..=10).map(|k| cut * (k as f64 / 10.0).powi(2)).collect();
    br.dedup();
    let head = adaptive_real(f, &br, 1e-300, 1e-13)?.0;
    let tail = adaptive_semi_infinite(|u| Complex64::new(f(u), 0.0), cut, 1e-300, 1e-12)?;
    Ok(head + tail.value.re)
}

/// Σ_{n<terms} μ_n e^{−x/2} L_n(x).
pub fn log_weight_laguerre_synthesis(kappa: f64, x: f64, terms: usize) -> Result<f64> {
    if terms == 0 {
        return Ok(0.0);
    }
    let mu = log_weight_moments(kappa, terms - 1)?;
    let e = (-0.5 * x).exp();
    Ok(mu.iter().enumerate().map(|(n, m)| m * e * laguerre(n, x)).sum())
}

/// ∫_0^{π/2} sin^{2m}θ sin(t cos θ) dθ = √π Γ(m + 1/2) 2^{m−1} H_m(t)/t^m.
pub fn struve_entry(m: usize, t: f64) -> Result<f64> {
    let mf = m as f64;
    Ok(PI.sqrt() * gamma_real(mf + 0.5) * 2f64.powf(mf - 1.0) * struve(mf, t)? / t.powf(mf))
}

fn struve_nfold(n: usize, t: f64, q: usize) -> f64 {
    let (g, w) = gauss_legendre(q);
    let half = 0.25 * PI;
    let s: Vec<f64> = g.iter().map(|&x| (half * (x + 1.0)).sin().powi(2)).collect();
    let f: Vec<f64> = g
        .iter()
        .zip(&w)
        .map(|(&x, &wi)| half * wi * (t * (half * (x + 1.0)).cos()).sin())
        .collect();
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut v = 1.0;
        for j in 0..n {
            v *= f[idx[j]];
            for k in j + 1..n {
                let d = s[idx[j]] - s[idx[k]];
                v *= d * d;
            }
        }
        total += v;
        let mut p = 0;
        loop {
            if p == n {
                let nf: f64 = (1..=n).map(|k| k as f64).product();
                return total / nf;
            }
            idx[p] += 1;
            if idx[p] < q {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// (det[∫ sin^{2(j+k)}θ sin(t cos θ) dθ]_{j,k<n}, (1/n!)·n-fold integral).
/// The matrix entries come from Struve functions; the n-fold integral from a
/// tensor Gauss rule, checked against a finer rule.
pub fn struve_hankel_det(n: usize, t: f64) -> Result<(f64, f64)> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidInput("n must lie in 1..=4".into()));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    let entries: Vec<f64> = (0..2 * n - 1).map(|m| struve_entry(m, t)).collect::<Result<_>>()?;
    let d_matrix = moment_matrix(&entries, n).lu().determinant();
    let d1 = struve_nfold(n, t, 24);
    let d2 = struve_nfold(n, t, 32);
    if (d1 - d2).abs() > 1e-12 * d2.abs().max(1e-300) {
        return Err(Error::Quadrature(format!("n-fold rule unstable: {d1:e} vs {d2:e}")));
    }
    Ok((d_matrix, d2))
}

/// Largest relative residual of Σ_j [ν W_j μ_{j+ν−1} + (W′ + 2V)_j μ_{j+ν}]
/// for ν = 0..=ν_max, which vanishes when the boundary terms of
/// ∫(x^ν W w0)′ do. With W(0) = 0 this is Σ_j (νξ_j + η_j) μ_{j+ν} with
/// ξ_j = W_{j+1} and η_j = (W′ + 2V)_j.
pub fn semiclassical_moment_check(weight: &MomentWeight, nu_max: usize) -> Result<f64> {
    let data = weight
        .semiclassical
        .as_ref()
        .ok_or_else(|| Error::MissingData("weight has no (V, W) data".into()))?;
    let wp = poly_deriv(&data.w);
    let deg = data.w.len().max(data.v.len()).max(wp.len());
    let eta: Vec<f64> = (0..deg)
        .map(|j| wp.get(j).copied().unwrap_or(0.0) + 2.0 * data.v.get(j).copied().unwrap_or(0.0))
        .collect();
    let mu = weight.moments(nu_max + deg + 1)?;
    let mut worst: f64 = 0.0;
    for nu in 0..=nu_max {
        let mut r = 0.0;
        let mut scale = 0.0;
        for (j, &wj) in data.w.iter().enumerate() {
            if nu > 0 && wj != 0.0 {
                let t = nu as f64 * wj * mu[j + nu - 1];
                r += t;
                scale += t.abs();
            }
        }
        for (j, &e) in eta.iter().enumerate() {
            let t = e * mu[j + nu];
            r += t;
            scale += t.abs();
        }
        if scale > 0.0 {
            worst = worst.max(r.abs() / scale);
        }
    }
    Ok(worst)
}
