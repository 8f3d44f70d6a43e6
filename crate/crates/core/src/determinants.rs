//! Fredholm and Carleman determinants, the Wiener–Hopf/Hankel determinant
//! identity, R-matrices and their Cauchy–Binet expansion.

use crate::error::{Error, Result};
use crate::fourier::ContourFt;
use crate::hankel::{
    hankel_nodes, hankel_nystrom_on, DiscretizedOperator, ExponentialExpansion, ScatteringFunction,
};
use crate::quad::{dyadic_breaks, panel_rule};
use crate::symbols::{Symbol, WienerHopfFactors};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type CMat = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nystrom,
    Rmatrix,
    CauchyBinet,
    LeadingTerm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Nystrom => "nystrom",
            Method::Rmatrix => "rmatrix",
            Method::CauchyBinet => "cauchy_binet",
            Method::LeadingTerm => "leading_term",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetResult {
    pub value: Complex64,
    pub method: Method,
    pub error_estimate: f64,
}

impl DetResult {
    fn new(value: Complex64, method: Method, error_estimate: f64) -> Self {
        Self {
            value,
            method,
            error_estimate: error_estimate.abs(),
        }
    }

    /// {method, value_re, value_im, error_estimate, params_hash}
    pub fn to_json(&self, params_hash: &str) -> serde_json::Value {
        serde_json::json!({
            "method": self.method.name(),
            "value_re": crate::fmt_num(self.value.re),
            "value_im": crate::fmt_num(self.value.im),
            "error_estimate": crate::fmt_num(self.error_estimate),
            "params_hash": params_hash,
        })
    }
}

fn det_checked(m: CMat) -> Result<Complex64> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Evaluation("matrix has non-finite entries".into()));
    }
    let d = m.lu().determinant();
    if !(d.norm() >= 1e-300) {
        return Err(Error::Singular(d.norm()));
    }
    Ok(d)
}

fn roundoff(k: &CMat) -> f64 {
    let n = k.nrows().max(1) as f64;
    let f: f64 = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    f64::EPSILON * n * (1.0 + f)
}

/// det(I ± K).
pub fn fredholm_det(op: &DiscretizedOperator, shift_sign: i32) -> Result<DetResult> {
    let n = op.dim();
    let s = if shift_sign < 0 { -1.0 } else { 1.0 };
    let m = CMat::identity(n, n) + op.kernel_matrix.scale(s);
    let d = det_checked(m)?;
    Ok(DetResult::new(d, Method::Nystrom, roundoff(&op.kernel_matrix) * d.norm()))
}

/// det(I ± Γ_φ) with the node count doubled to estimate the error.
pub fn hankel_fredholm_det(phi: &ScatteringFunction, n_nodes: usize, shift_sign: i32, shift: f64) -> Result<DetResult> {
    let (x, w) = hankel_nodes(phi.decay_rate, n_nodes);
    let d1 = fredholm_det(&hankel_nystrom_on(phi, &x, &w, shift)?, shift_sign)?;
    let (x, w) = hankel_nodes(phi.decay_rate, 2 * n_nodes);
    let d2 = fredholm_det(&hankel_nystrom_on(phi, &x, &w, shift)?, shift_sign)?;
    Ok(DetResult::new(d2.value, Method::Nystrom, (d2.value - d1.value).norm() + d2.error_estimate))
}

/// det₂(I + K) = det(I + K)·e^{−tr K}.
pub fn carleman_det2(op: &DiscretizedOperator) -> Result<DetResult> {
    let d = fredholm_det(op, 1)?;
    let tr = op.kernel_matrix.trace();
    let v = d.value * (-tr).exp();
    Ok(DetResult::new(v, Method::Nystrom, d.error_estimate * v.norm() / d.value.norm()))
}

/// det(I − K1 K2) and det₂ of the block operator [[0, K1], [K2, 0]].
#[derive(Debug, Clone, Copy)]
pub struct RhsResult {
    pub det: DetResult,
    pub det2: DetResult,
}

fn rhs_on_nodes(phi1: &ScatteringFunction, phi2: &ScatteringFunction, n_nodes: usize) -> Result<(Complex64, Complex64, f64)> {
    let decay = phi1.decay_rate.min(phi2.decay_rate);
    let (x, w) = hankel_nodes(decay, n_nodes);
    let k1 = hankel_nystrom_on(phi1, &x, &w, 0.0)?.kernel_matrix;
    let k2 = hankel_nystrom_on(phi2, &x, &w, 0.0)?.kernel_matrix;
    let n = x.len();
    let prod = &k1 * &k2;
    let d = det_checked(CMat::identity(n, n) - &prod)?;
    let mut block = CMat::identity(2 * n, 2 * n);
    block.view_mut((0, n), (n, n)).copy_from(&k1);
    block.view_mut((n, 0), (n, n)).copy_from(&k2);
    // tr Φ = 0, so det₂ = det here; computed from the block to keep the paths apart
    let tr = block.trace() - Complex64::new((2 * n) as f64, 0.0);
    let d2 = det_checked(block)? * (-tr).exp();
    Ok((d, d2, roundoff(&prod)))
}

/// det(I − Γ_{φ1}Γ_{φ2}) by Nyström, with det₂(I + Γ_Φ) for the block
/// Φ = [[0, φ1], [φ2, 0]]; fails when the two disagree beyond the error
/// estimate.
pub fn main_identity_rhs(phi1: &ScatteringFunction, phi2: &ScatteringFunction, n_nodes: usize) -> Result<RhsResult> {
    let (d_a, d2_a, _) = rhs_on_nodes(phi1, phi2, n_nodes)?;
    let (d_b, d2_b, r) = rhs_on_nodes(phi1, phi2, 2 * n_nodes)?;
    let err = (d_b - d_a).norm() + r;
    let err2 = (d2_b - d2_a).norm() + r;
    if (d_b - d2_b).norm() > err + err2 + 1e-12 {
        return Err(Error::Evaluation(format!(
            "det and det₂ disagree: {d_b} vs {d2_b}"
        )));
    }
    Ok(RhsResult {
        det: DetResult::new(d_b, Method::Nystrom, err),
        det2: DetResult::new(d2_b, Method::Nystrom, err2),
    })
}

/// Tolerance for the truncation-doubling check of [`main_identity_lhs`].
pub const LHS_TOL: f64 = 1e-8;

fn lhs_nodes(l: f64, n_nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let pw = (l / 8.0).min(2.0);
    let mut breaks = dyadic_breaks(pw, 14);
    let mut b = pw;
    while b + 1e-12 < l {
        b = (b + pw).min(l);
        breaks.push(b);
    }
    let order = n_nodes.div_ceil(breaks.len() - 1).max(4);
    panel_rule(&breaks, order)
}

// Hankel matrix √w_i k(σ(x_i + x_j)) √w_j of a contour-FT rule, assembled as
// V diag(g) Vᵀ with V_ip = √w_i e^{iσ ξ_p x_i}.
fn hankel_from_rule(rule: &ContourFt, x: &[f64], w: &[f64], sigma: f64) -> CMat {
    let (pts, gw) = rule.parts();
    let n = x.len();
    let p = pts.len();
    let cols: Vec<Vec<Complex64>> = (0..p)
        .into_par_iter()
        .map(|k| {
            let iz = Complex64::i() * pts[k] * sigma;
            x.iter().zip(w).map(|(&xi, &wi)| (iz * xi).exp() * wi.sqrt()).collect()
        })
        .collect();
    let v = CMat::from_fn(n, p, |i, k| cols[k][i]);
    let vg = CMat::from_fn(n, p, |i, k| cols[k][i] * gw[k]);
    &vg * v.transpose()
}

fn lhs_det(symbol: &Symbol, l: f64, n_nodes: usize) -> Result<Complex64> {
    let (x, w) = lhs_nodes(l, n_nodes);
    let x_min = 2.0 * x[0];
    let x_max = 2.0 * l;
    let t_re = symbol.singularities.max_abs_im + 1.0;
    let s1 = symbol.clone();
    let g1 = move |xi: Complex64| s1.at_xi(xi) - 1.0;
    let s2 = symbol.clone();
    let g2 = move |xi: Complex64| s2.at_xi(xi).inv() - 1.0;
    let r1 = ContourFt::new(g1, 1.0, t_re, x_min, x_max);
    let r2 = ContourFt::new(g2, -1.0, t_re, x_min, x_max);
    let a = hankel_from_rule(&r1, &x, &w, 1.0);
    let b = hankel_from_rule(&r2, &x, &w, -1.0);
    let n = x.len();
    det_checked(CMat::identity(n, n) - &a * &b)
}

/// 1/det(W(ψ)W(ψ⁻¹)).
///
/// The product W(ψ)W(ψ⁻¹) on L²(0,∞) is I − H(ψ)H(ψ̃⁻¹), where H(ψ) has
/// kernel k₁(x+y), H(ψ̃⁻¹) has kernel k₂(−x−y), and k₁, k₂ are the inverse
/// Fourier transforms of ψ(iξ) − 1 and 1/ψ(iξ) − 1. Both kernels come from
/// contour-deformed Fourier integrals and are sampled on [0, L]. `l ≤ 0`
/// selects L = 24/(r₁ + r₂) from the decay rates of the two kernels.
pub fn main_identity_lhs(symbol: &Symbol, factors: &WienerHopfFactors, l: f64, n_nodes: usize) -> Result<DetResult> {
    let probes = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, -5.0),
    ];
    let res = factors.residual_on(&probes)?;
    if !(res < 1e-6) {
        return Err(Error::Hypothesis(format!("factorization residual {res:e} too large")));
    }
    let r1 = symbol.kernel_decay_plus();
    let r2 = symbol.inverse_kernel_decay_minus();
    let l = if l > 0.0 {
        l
    } else {
        let r = (r1.min(50.0) + r2.min(50.0)).max(1e-3);
        24.0 / r
    };
    let d1 = lhs_det(symbol, l, n_nodes)?;
    let d2 = lhs_det(symbol, 2.0 * l, 2 * n_nodes)?;
    let change = (d2 - d1).norm() / d2.norm();
    if change > 10.0 * LHS_TOL {
        return Err(Error::Truncation(change));
    }
    let v = d2.inv();
    Ok(DetResult::new(v, Method::Nystrom, change * v.norm()))
}

/// R-matrices of two exponential expansions at shift x.
#[derive(Debug, Clone)]
pub struct RMatrixPair {
    /// [e^{−x(η_ℓ+λ_j)} ξ_j/(η_ℓ+λ_j)]_{ℓ,j}
    pub r12: CMat,
    /// [e^{−x(η_j+λ_ℓ)} γ_j/(η_j+λ_ℓ)]_{ℓ,j}
    pub r21: CMat,
    pub x: f64,
    pub lambda: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    pub xi: Vec<Complex64>,
    pub gamma: Vec<Complex64>,
}

fn flush(z: Complex64) -> Complex64 {
    if z.norm() < 1e-300 {
        Complex64::new(0.0, 0.0)
    } else {
        z
    }
}

pub fn build_r_matrices(exp1: &ExponentialExpansion, exp2: &ExponentialExpansion, x: f64, n: usize) -> Result<RMatrixPair> {
    if n > exp1.len() || n > exp2.len() {
        return Err(Error::Length {
            needed: n,
            got: exp1.len().min(exp2.len()),
        });
    }
    if x < 0.0 {
        return Err(Error::InvalidInput("x must be non-negative".into()));
    }
    let lambda = exp1.exponents[..n].to_vec();
    let xi = exp1.coefficients[..n].to_vec();
    let eta = exp2.exponents[..n].to_vec();
    let gamma = exp2.coefficients[..n].to_vec();
    let r12 = CMat::from_fn(n, n, |l, j| {
        let s = eta[l] + lambda[j];
        flush((-s * x).exp() * xi[j] / s)
    });
    let r21 = CMat::from_fn(n, n, |l, j| {
        let s = eta[j] + lambda[l];
        flush((-s * x).exp() * gamma[j] / s)
    });
    Ok(RMatrixPair {
        r12,
        r21,
        x,
        lambda,
        eta,
        xi,
        gamma,
    })
}

/// det(I − R12 R21).
pub fn det_from_r(pair: &RMatrixPair) -> Result<DetResult> {
    let n = pair.r12.nrows();
    let prod = &pair.r12 * &pair.r21;
    let d = det_checked(CMat::identity(n, n) - &prod)?;
    Ok(DetResult::new(d, Method::Rmatrix, roundoff(&prod) * d.norm()))
}

/// Expansions with k and 2k terms, combined by Richardson extrapolation in
/// 1/k² (the truncation error of det(I − R12R21) at x = 0).
pub fn det_from_expansions_extrapolated(
    exp1: &ExponentialExpansion,
    exp2: &ExponentialExpansion,
    x: f64,
    k: usize,
) -> Result<DetResult> {
    let d1 = det_from_r(&build_r_matrices(exp1, exp2, x, k)?)?.value;
    let d2 = det_from_r(&build_r_matrices(exp1, exp2, x, 2 * k)?)?.value;
    let v = (4.0 * d2 - d1) / 3.0;
    Ok(DetResult::new(v, Method::Rmatrix, (d2 - d1).norm() / 3.0))
}

/// One Cauchy–Binet summand (−1)^k det R12[T,S] det R21[S,T].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetTerm {
    /// Indices into λ.
    pub s: Vec<usize>,
    /// Indices into η.
    pub t: Vec<usize>,
    /// Product of the two minors.
    pub value: Complex64,
    /// Vandermonde–Cauchy closed form.
    pub closed_form: Complex64,
}

#[derive(Debug, Clone)]
pub struct CauchyBinet {
    pub terms: Vec<SubsetTerm>,
    /// Partial sums through each order 0..=max_order.
    pub partial_sums: Vec<Complex64>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor(m: &CMat, rows: &[usize], cols: &[usize]) -> Complex64 {
    let k = rows.len();
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    CMat::from_fn(k, k, |i, j| m[(rows[i], cols[j])]).lu().determinant()
}

fn log_vandermonde_sq(v: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            acc += 2.0 * (v[j] - v[i]).ln();
        }
    }
    acc
}

/// (−1)^k e^{−2x(Σλ_S + Ση_T)} Πξ_S Πγ_T Δ(λ_S)² Δ(η_T)² / Π(λ_j + η_ℓ)²,
/// accumulated in log space.
fn closed_form(pair: &RMatrixPair, s: &[usize], t: &[usize]) -> Result<Complex64> {
    let k = s.len();
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let lam: Vec<Complex64> = s.iter().map(|&j| pair.lambda[j]).collect();
    let eta: Vec<Complex64> = t.iter().map(|&l| pair.eta[l]).collect();
    let mut lg = log_vandermonde_sq(&lam) + log_vandermonde_sq(&eta);
    let mut sum = Complex64::new(0.0, 0.0);
    for &j in s {
        lg += pair.xi[j].ln();
        sum += pair.lambda[j];
    }
    for &l in t {
        lg += pair.gamma[l].ln();
        sum += pair.eta[l];
    }
    lg -= 2.0 * pair.x * sum;
    for a in &lam {
        for b in &eta {
            lg -= 2.0 * (a + b).ln();
        }
    }
    if lg.re > 700.0 {
        return Err(Error::Overflow("Cauchy–Binet term overflows".into()));
    }
    let v = lg.exp();
    Ok(if k % 2 == 1 { -v } else { v })
}

/// Terms of det(I − R12R21) = Σ_k (−1)^k Σ_{|S|=|T|=k} det R12[T,S] det R21[S,T]
/// through order `max_order`, enumerated by (k, S, T) lexicographically.
pub fn cauchy_binet_expansion(pair: &RMatrixPair, max_order: usize) -> Result<CauchyBinet> {
    let n = pair.lambda.len();
    let mut terms = Vec::new();
    let mut partial = Vec::with_capacity(max_order + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=max_order.min(n) {
        let subsets = combinations(n, k);
        if (subsets.len() as f64).powi(2) > 1e7 {
            return Err(Error::Overflow(format!("{} subset pairs at order {k}", subsets.len().pow(2))));
        }
        let pairs: Vec<(usize, usize)> = (0..subsets.len())
            .flat_map(|a| (0..subsets.len()).map(move |b| (a, b)))
            .collect();
        let layer: Vec<Result<SubsetTerm>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let s = &subsets[a];
                let t = &subsets[b];
                let mut v = minor(&pair.r12, t, s) * minor(&pair.r21, s, t);
                if k % 2 == 1 {
                    v = -v;
                }
                Ok(SubsetTerm {
                    s: s.clone(),
                    t: t.clone(),
                    value: v,
                    closed_form: closed_form(pair, s, t)?,
                })
            })
            .collect();
        for term in layer {
            let term = term?;
            acc += term.value;
            terms.push(term);
        }
        partial.push(acc);
    }
    Ok(CauchyBinet {
        terms,
        partial_sums: partial,
    })
}

/// CSV rows `S,T,value_re,value_im` with index sets joined by ';'.
pub fn terms_csv(terms: &[SubsetTerm]) -> String {
    let mut out = String::from("S,T,value_re,value_im\n");
    let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";");
    for t in terms {
        out.push_str(&format!(
            "{},{},{},{}\n",
            join(&t.s),
            join(&t.t),
            crate::fmt_num(t.value.re),
            crate::fmt_num(t.value.im)
        ));
    }
    out
}

/// 1 − e^{−2x(λ0+η0)} ξ0 γ0/(λ0+η0)² from the slowest exponents.
pub fn leading_term_approx(pair: &RMatrixPair) -> DetResult {
    let pick = |v: &[Complex64]| (0..v.len()).min_by(|&i, &j| v[i].re.total_cmp(&v[j].re));
    let one = Complex64::new(1.0, 0.0);
    match (pick(&pair.lambda), pick(&pair.eta)) {
        (Some(j), Some(l)) => {
            let s = pair.lambda[j] + pair.eta[l];
            let v = one - (-2.0 * pair.x * s).exp() * pair.xi[j] * pair.gamma[l] / (s * s);
            DetResult::new(v, Method::LeadingTerm, 0.0)
        }
        _ => DetResult::new(one, Method::LeadingTerm, 0.0),
    }
}

/// (det P(I+K)P, det P⊥(I+K)⁻¹P⊥) for P the span of the first `p_dim`
/// coordinates; their ratio is det(I+K).
pub fn jacobi_ratio_check(op: &DiscretizedOperator, p_dim: usize) -> Result<(Complex64, Complex64)> {
    let n = op.dim();
    if p_dim > n {
        return Err(Error::InvalidInput("projection rank exceeds dimension".into()));
    }
    let m = CMat::identity(n, n) + &op.kernel_matrix;
    let top = if p_dim == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        det_checked(m.view((0, 0), (p_dim, p_dim)).into_owned())?
    };
    let inv = m.try_inverse().ok_or(Error::Singular(0.0))?;
    let q = n - p_dim;
    let bottom = if q == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        det_checked(inv.view((p_dim, p_dim), (q, q)).into_owned())?
    };
    Ok((top, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::hankel_nystrom;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn single(l: f64, x: f64) -> ExponentialExpansion {
        ExponentialExpansion::real(&[l], &[x]).unwrap()
    }

    #[test]
    fn fredholm_examples() {
        let zero = hankel_nystrom(&ScatteringFunction::zero(), 40, 0.0).unwrap();
        assert_eq!(fredholm_det(&zero, 1).unwrap().value, c(1.0));
        let op = hankel_nystrom(&ScatteringFunction::exponential(1.0, 1.0), 240, 0.0).unwrap();
        assert!((fredholm_det(&op, 1).unwrap().value - 1.5).norm() < 1e-12);
        assert!((carleman_det2(&op).unwrap().value - 1.5 * (-0.5f64).exp()).norm() < 1e-12);
        assert_relative_eq!(1.5 * (-0.5f64).exp(), 0.909795989568, max_relative = 1e-11);
    }

    #[test]
    fn rhs_examples() {
        let e1 = ScatteringFunction::exponential(1.0, 1.0);
        let r = main_identity_rhs(&e1, &e1, 120).unwrap();
        assert!((r.det.value - 0.75).norm() < 1e-12);
        let r = main_identity_rhs(&e1, &ScatteringFunction::zero(), 120).unwrap();
        assert!((r.det.value - 1.0).norm() < 1e-14);
        let r = main_identity_rhs(&e1, &ScatteringFunction::exponential(2.0, 1.0), 120).unwrap();
        assert!((r.det.value - 8.0 / 9.0).norm() < 1e-10);
        assert!((r.det2.value - 8.0 / 9.0).norm() < 1e-10);
    }

    #[test]
    fn r_matrix_examples() {
        let p = build_r_matrices(&single(1.0, 1.0), &single(1.0, 1.0), 0.0, 1).unwrap();
        assert_eq!(p.r12[(0, 0)], c(0.5));
        assert!((det_from_r(&p).unwrap().value - 0.75).norm() < 1e-15);
        assert!((leading_term_approx(&p).value - 0.75).norm() < 1e-15);
        let p = build_r_matrices(&single(1.0, 1.0), &single(1.0, 1.0), 1.0, 1).unwrap();
        assert!((p.r21[(0, 0)] - (-2.0f64).exp() / 2.0).norm() < 1e-16);
        let p = build_r_matrices(&single(1.0, 0.0), &single(1.0, 1.0), 0.0, 1).unwrap();
        assert_eq!(det_from_r(&p).unwrap().value, c(1.0));
        assert_eq!(leading_term_approx(&p).value, c(1.0));
    }

    #[test]
    fn cauchy_binet_low_orders() {
        let p = build_r_matrices(&single(0.7, 0.4), &single(1.1, 0.9), 0.5, 1).unwrap();
        let cb = cauchy_binet_expansion(&p, 2).unwrap();
        assert_eq!(cb.partial_sums[0], c(1.0));
        let want = 1.0 - (-2.0 * 0.5 * 1.8f64).exp() * 0.36 / (1.8 * 1.8);
        assert!((cb.partial_sums[1] - want).norm() < 1e-15);
        assert!((cb.terms[1].closed_form - cb.terms[1].value).norm() < 1e-16);
    }

    #[test]
    fn jacobi_examples() {
        let zero = hankel_nystrom(&ScatteringFunction::zero(), 20, 0.0).unwrap();
        assert_eq!(jacobi_ratio_check(&zero, 3).unwrap(), (c(1.0), c(1.0)));
        let op = hankel_nystrom(&ScatteringFunction::exponential(1.0, 1.0), 40, 0.0).unwrap();
        let (t, b) = jacobi_ratio_check(&op, op.dim()).unwrap();
        assert_eq!(b, c(1.0));
        assert!((t - fredholm_det(&op, 1).unwrap().value).norm() < 1e-13);
    }

    #[test]
    fn det_result_json() {
        let d = DetResult::new(c(0.75), Method::Rmatrix, 0.0);
        let j = d.to_json("abc");
        assert_eq!(j["method"], "rmatrix");
        assert_eq!(j["value_re"], "7.5000000000000000e-1");
    }
}
