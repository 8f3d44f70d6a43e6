//! Residue expansions of the scattering functions attached to gamma-quotient
//! symbols, gamma divisors and Meijer G by contour quadrature.
//!
//! For ψ+(s) = Π Γ(a_j+s)/Γ(b_j+s) and ψ−(s) = Π Γ(c_j−s)/Γ(d_j−s) the
//! first scattering function is
//!
//!   φ1(x) = (1/2π) ∫ (ψ+/ψ−(iξ) − 1) e^{iξx} dξ = Σ_j Σ_k ξ_{jk} e^{−(a_j+k)x},
//!
//! a sum over the left poles s = −a_j − k. φ2 uses (c, d, a, b) in place of
//! (a, b, c, d).

use crate::error::{Error, Result};
use crate::fourier::ContourFt;
use crate::hankel::{ExponentialExpansion, ScatteringFunction};
use crate::quad;
use crate::specfun::{ln_gamma, PFQParams};
use crate::symbols::GammaQuotientParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

const GENERIC_TOL: f64 = 1e-9;

fn near_integer(z: Complex64) -> bool {
    z.im.abs() < GENERIC_TOL && (z.re - z.re.round()).abs() < GENERIC_TOL
}

fn check_generic(p: &GammaQuotientParams) -> Result<()> {
    for (i, ai) in p.a.iter().enumerate() {
        for (j, aj) in p.a.iter().enumerate() {
            if i != j && near_integer(ai - aj) {
                return Err(Error::NonGeneric(format!("a_{i} − a_{j} = {} is an integer", ai - aj)));
            }
        }
        for (l, bl) in p.b.iter().enumerate() {
            if near_integer(bl - ai) {
                return Err(Error::NonGeneric(format!("b_{l} − a_{i} = {} is an integer", bl - ai)));
            }
        }
    }
    Ok(())
}

fn lg(z: Complex64) -> Result<Complex64> {
    ln_gamma(z)
}

/// log of the residue coefficient of ψ+/ψ− at s = −a_j − k.
fn log_pole_coefficient(p: &GammaQuotientParams, j: usize, k: usize) -> Result<Complex64> {
    let aj = p.a[j];
    let kf = k as f64;
    let mut v = -lg(Complex64::new(kf + 1.0, 0.0))?;
    if k % 2 == 1 {
        v += Complex64::new(0.0, PI);
    }
    for (l, al) in p.a.iter().enumerate() {
        if l != j {
            v += lg(al - aj - kf)?;
        }
    }
    for b in &p.b {
        v -= lg(b - aj - kf)?;
    }
    for d in &p.d {
        v += lg(d + aj + kf)?;
    }
    for c in &p.c {
        v -= lg(c + aj + kf)?;
    }
    Ok(v)
}

fn pole_coefficient(p: &GammaQuotientParams, j: usize, k: usize) -> Result<Complex64> {
    let v = log_pole_coefficient(p, j, k)?;
    if v.re > 700.0 {
        return Err(Error::Overflow(format!("coefficient of pole ({j}, {k}) overflows")));
    }
    Ok(v.exp())
}

/// Residue data for one scattering function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidueCoefficients {
    /// C_j, the k = 0 coefficient of each pole ladder.
    pub base_coeffs: Vec<Complex64>,
    /// Exponent grid a_{r+1} + k in interleaved order.
    #[serde(with = "crate::symbols::cparams")]
    pub grid: Vec<Complex64>,
    pub series_params: Vec<PFQParams>,
}

// Tail of Σ_k |ξ_k|/λ_k from a power-law fit to the last terms of a ladder.
fn ladder_tail(vals: &[(f64, f64)]) -> f64 {
    let n = vals.len();
    if n < 8 {
        return f64::INFINITY;
    }
    let (k1, v1) = vals[n / 2];
    let (k2, v2) = vals[n - 1];
    if v2 == 0.0 {
        return 0.0;
    }
    let p = (v2 / v1).ln() / (k2 / k1).ln();
    if p >= -1.0 {
        return f64::INFINITY;
    }
    v2 * k2 / (-p - 1.0)
}

fn expand(p: &GammaQuotientParams, k_terms: usize) -> Result<ExponentialExpansion> {
    p.check_shape()?;
    check_generic(p)?;
    let m = p.m();
    if m == 0 {
        return ExponentialExpansion::new(vec![], vec![], 0.0);
    }
    let mut lam = Vec::with_capacity(k_terms);
    let mut xi = Vec::with_capacity(k_terms);
    let mut per_ladder: Vec<Vec<(f64, f64)>> = vec![Vec::new(); m];
    for idx in 0..k_terms {
        let (k, r) = (idx / m, idx % m);
        // λ_{j+m} = λ_j + 1 exactly
        let l = if idx < m { p.a[r] } else { lam[idx - m] + 1.0 };
        let c = pole_coefficient(p, r, k)?;
        per_ladder[r].push((l.re, c.norm() / l.re));
        lam.push(l);
        xi.push(c);
    }
    let tail: f64 = per_ladder.iter().map(|v| ladder_tail(v)).sum();
    // keep the interleaved order; ExponentialExpansion sorts stably
    ExponentialExpansion::new(lam, xi, tail)
}

/// φ1 as Σ ξ_j e^{−λ_j x} with λ_{mk+r} = a_{r+1} + k.
pub fn residue_expand_phi1(params: &GammaQuotientParams, k_terms: usize) -> Result<ExponentialExpansion> {
    expand(params, k_terms)
}

/// φ2 from the same formula with (c, d, a, b) in place of (a, b, c, d).
pub fn residue_expand_phi2(params: &GammaQuotientParams, k_terms: usize) -> Result<ExponentialExpansion> {
    expand(&params.swapped(), k_terms)
}

/// Prefactor C_j and parameters with pole j contributing C_j z^{a_j} pFq(z),
/// z = e^{−x}.
pub fn hypergeometric_form(params: &GammaQuotientParams, j: usize) -> Result<(Complex64, PFQParams)> {
    params.check_shape()?;
    check_generic(params)?;
    if j >= params.m() {
        return Err(Error::InvalidInput(format!("pole index {j} out of range")));
    }
    let aj = params.a[j];
    let one = Complex64::new(1.0, 0.0);
    let mut num: Vec<Complex64> = params.b.iter().map(|b| one - b + aj).collect();
    num.extend(params.d.iter().map(|d| d + aj));
    let mut den: Vec<Complex64> = params
        .a
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != j)
        .map(|(_, a)| one - a + aj)
        .collect();
    den.extend(params.c.iter().map(|c| c + aj));
    Ok((pole_coefficient(params, j, 0)?, PFQParams::new(num, den)))
}

/// Resolved residue data for φ1.
pub fn residue_coefficients(params: &GammaQuotientParams, k_terms: usize) -> Result<ResidueCoefficients> {
    let m = params.m();
    let mut base = Vec::with_capacity(m);
    let mut series = Vec::with_capacity(m);
    for j in 0..m {
        let (c, s) = hypergeometric_form(params, j)?;
        base.push(c);
        series.push(s);
    }
    let mut grid: Vec<Complex64> = Vec::with_capacity(k_terms);
    for idx in 0..if m == 0 { 0 } else { k_terms } {
        let l = if idx < m { params.a[idx] } else { grid[idx - m] + 1.0 };
        grid.push(l);
    }
    Ok(ResidueCoefficients {
        base_coeffs: base,
        grid,
        series_params: series,
    })
}

/// Leading terms (C₁, a₁) of φ1 and the analogue for φ2, for real a and c.
pub fn leading_asymptotics(params: &GammaQuotientParams) -> Result<(Complex64, f64, Complex64, f64)> {
    params.check_shape()?;
    let lead = |p: &GammaQuotientParams| -> Result<(Complex64, f64)> {
        check_generic(p)?;
        let j = (0..p.m())
            .min_by(|&i, &k| p.a[i].re.total_cmp(&p.a[k].re))
            .ok_or_else(|| Error::InvalidInput("empty parameter list".into()))?;
        Ok((pole_coefficient(p, j, 0)?, p.a[j].re))
    };
    let (c1, r1) = lead(params)?;
    let (c2, r2) = lead(&params.swapped())?;
    Ok((c1, r1, c2, r2))
}

/// Abscissa below which [`phi1_function`] switches from the residue series to
/// the contour Fourier integral.
pub const SERIES_SWITCH: f64 = 1.0;

fn hybrid(p: &GammaQuotientParams, k_terms: usize, x_min: f64) -> Result<ScatteringFunction> {
    let exp = expand(p, k_terms)?;
    let t_re = 1.0
        + p.a
            .iter()
            .chain(&p.b)
            .chain(&p.c)
            .chain(&p.d)
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
    let q = p.clone();
    let g = move |xi: Complex64| {
        let s = Complex64::i() * xi;
        q.right_factor(s) / q.left_factor(s) - 1.0
    };
    let rule = ContourFt::new(g, 1.0, t_re, x_min, SERIES_SWITCH);
    let decay = exp.decay_rate();
    Ok(ScatteringFunction::new(
        move |x| {
            if x >= SERIES_SWITCH {
                exp.evaluate(x)
            } else {
                rule.eval(x)
            }
        },
        decay,
    ))
}

/// φ1 on [x_min, ∞): contour Fourier integral of ψ+/ψ− − 1 below
/// [`SERIES_SWITCH`] and the residue series (k_terms terms) above it.
pub fn phi1_function(params: &GammaQuotientParams, k_terms: usize, x_min: f64) -> Result<ScatteringFunction> {
    hybrid(params, k_terms, x_min)
}

/// φ2 counterpart of [`phi1_function`].
pub fn phi2_function(params: &GammaQuotientParams, k_terms: usize, x_min: f64) -> Result<ScatteringFunction> {
    hybrid(&params.swapped(), k_terms, x_min)
}

/// Expansion record [(λ_j, Re ξ_j, Im ξ_j)].
pub fn expansion_json(exp: &ExponentialExpansion) -> serde_json::Value {
    exp.to_json_triples()
}

/// Integer-valued map on ℂ built from ladders (s)_R = δ_s + δ_{s+1} + …
/// and (s)_L = δ_s + δ_{s−1} + …, plus finitely many point masses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GammaDivisor {
    pub right_ladders: Vec<(Complex64, i64)>,
    pub left_ladders: Vec<(Complex64, i64)>,
    pub finite_part: Vec<(Complex64, i64)>,
}

const POINT_TOL: f64 = 1e-12;

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < POINT_TOL
}

fn same_class(a: Complex64, b: Complex64) -> Option<i64> {
    let d = a - b;
    if d.im.abs() < POINT_TOL && (d.re - d.re.round()).abs() < POINT_TOL {
        Some(d.re.round() as i64)
    } else {
        None
    }
}

fn accumulate(list: &mut Vec<(Complex64, i64)>, z: Complex64, n: i64) {
    if let Some(e) = list.iter_mut().find(|(p, _)| same_point(*p, z)) {
        e.1 += n;
    } else {
        list.push((z, n));
    }
}

fn sort_points(list: &mut Vec<(Complex64, i64)>) {
    list.retain(|&(_, n)| n != 0);
    list.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
}

impl GammaDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn right(s: Complex64, n: i64) -> Self {
        Self {
            right_ladders: vec![(s, n)],
            ..Self::default()
        }.canonical()
    }

    pub fn left(s: Complex64, n: i64) -> Self {
        Self {
            left_ladders: vec![(s, n)],
            ..Self::default()
        }.canonical()
    }

    pub fn point(s: Complex64, n: i64) -> Self {
        Self {
            finite_part: vec![(s, n)],
            ..Self::default()
        }.canonical()
    }

    pub fn is_zero(&self) -> bool {
        self.right_ladders.is_empty() && self.left_ladders.is_empty() && self.finite_part.is_empty()
    }

    /// Unique form: ladders whose starts differ by integers are merged at
    /// the leftmost start for (·)_R and the rightmost for (·)_L, the
    /// difference moving into the finite part.
    pub fn canonical(&self) -> Self {
        let mut finite = Vec::new();
        for &(z, n) in &self.finite_part {
            accumulate(&mut finite, z, n);
        }
        let merge = |ladders: &[(Complex64, i64)], right: bool, finite: &mut Vec<(Complex64, i64)>| {
            let mut classes: Vec<(Complex64, Vec<(Complex64, i64)>)> = Vec::new();
            for &(z, n) in ladders {
                if let Some(c) = classes.iter_mut().find(|(b, _)| same_class(z, *b).is_some()) {
                    c.1.push((z, n));
                } else {
                    classes.push((z, vec![(z, n)]));
                }
            }
            let mut out = Vec::new();
            for (_, members) in classes {
                let pick = members
                    .iter()
                    .map(|m| m.0)
                    .reduce(|a, b| {
                        if (right && b.re < a.re) || (!right && b.re > a.re) {
                            b
                        } else {
                            a
                        }
                    })
                    .unwrap_or_default();
                let mut total = 0;
                for (z, n) in members {
                    total += n;
                    let off = same_class(z, pick).unwrap_or(0).abs();
                    // (s+j)_R = (s)_R − δ_s − … − δ_{s+j−1}, mirrored for L
                    for i in 0..off {
                        let shift = if right { i as f64 } else { -(i as f64) };
                        accumulate(finite, pick + shift, -n);
                    }
                }
                if total != 0 {
                    out.push((pick, total));
                }
            }
            sort_points(&mut out);
            out
        };
        let right_ladders = merge(&self.right_ladders, true, &mut finite);
        let left_ladders = merge(&self.left_ladders, false, &mut finite);
        sort_points(&mut finite);
        Self {
            right_ladders,
            left_ladders,
            finite_part: finite,
        }
    }

    /// Multiplicity at a point.
    pub fn multiplicity(&self, z: Complex64) -> i64 {
        let mut n = 0;
        for &(s, m) in &self.right_ladders {
            if let Some(k) = same_class(z, s) {
                if k >= 0 {
                    n += m;
                }
            }
        }
        for &(s, m) in &self.left_ladders {
            if let Some(k) = same_class(z, s) {
                if k <= 0 {
                    n += m;
                }
            }
        }
        for &(s, m) in &self.finite_part {
            if same_point(s, z) {
                n += m;
            }
        }
        n
    }
}

impl Add for GammaDivisor {
    type Output = GammaDivisor;
    fn add(mut self, o: GammaDivisor) -> GammaDivisor {
        self.right_ladders.extend(o.right_ladders);
        self.left_ladders.extend(o.left_ladders);
        self.finite_part.extend(o.finite_part);
        self.canonical()
    }
}

impl Neg for GammaDivisor {
    type Output = GammaDivisor;
    fn neg(self) -> GammaDivisor {
        let f = |v: Vec<(Complex64, i64)>| v.into_iter().map(|(z, n)| (z, -n)).collect();
        GammaDivisor {
            right_ladders: f(self.right_ladders),
            left_ladders: f(self.left_ladders),
            finite_part: f(self.finite_part),
        }
    }
}

impl Sub for GammaDivisor {
    type Output = GammaDivisor;
    fn sub(self, o: GammaDivisor) -> GammaDivisor {
        self + (-o)
    }
}

/// Zeros minus poles of ψ(s) = Π Γ(a+s)Γ(c−s)/(Γ(b+s)Γ(d−s)).
pub fn divisor_of_gamma_quotient(p: &GammaQuotientParams) -> GammaDivisor {
    let mut d = GammaDivisor::zero();
    for a in &p.a {
        d = d + GammaDivisor::left(-a, -1);
    }
    for b in &p.b {
        d = d + GammaDivisor::left(-b, 1);
    }
    for c in &p.c {
        d = d + GammaDivisor::right(*c, -1);
    }
    for dd in &p.d {
        d = d + GammaDivisor::right(*dd, 1);
    }
    d
}

/// Divisor of S(ξ|λ) in z = iξ: −(−1)_L − (λ)_R + (1)_R + (−λ)_L.
pub fn divisor_of_scattering(lambda: f64) -> GammaDivisor {
    let c = |x: f64| Complex64::new(x, 0.0);
    GammaDivisor::left(c(-1.0), -1)
        + GammaDivisor::right(c(lambda), -1)
        + GammaDivisor::right(c(1.0), 1)
        + GammaDivisor::left(c(-lambda), 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeijerGParams {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerGParams {
    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }
}

/// G^{m,n}_{p,q}(x) by quadrature along Re s = γ, truncated at |Im s| = R.
pub fn meijer_g(params: &MeijerGParams, x: f64, contour_r: f64) -> Result<Complex64> {
    let (m, n, p, q) = (params.m, params.n, params.p(), params.q());
    if m > q || n > p {
        return Err(Error::InvalidInput("need m ≤ q and n ≤ p".into()));
    }
    let excess = 2 * (m + n) as i64 - (p + q) as i64;
    if excess <= 0 {
        return Err(Error::Convergence(format!(
            "p + q − 2m − 2n = {} must be negative",
            -excess
        )));
    }
    if !(x > 0.0) {
        return Err(Error::InvalidInput("x must be positive".into()));
    }
    // Γ(b_j − s), j ≤ m, has poles at s ≥ b_j; Γ(1 − a_j + s), j ≤ n, at s ≤ a_j − 1
    let hi = params.b[..m].iter().copied().fold(f64::INFINITY, f64::min);
    let lo = params.a[..n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::ContourPole(hi));
    }
    let gamma = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (false, true) => hi - 0.5,
        (true, false) => lo + 0.5,
        (false, false) => 0.0,
    };
    let lx = x.ln();
    let integrand = |t: f64| -> Complex64 {
        let s = Complex64::new(gamma, t);
        let one = Complex64::new(1.0, 0.0);
        let mut v = s * lx;
        for j in 0..q {
            if j < m {
                v += ln_gamma(params.b[j] - s).unwrap_or_default();
            } else {
                v -= ln_gamma(one - params.b[j] + s).unwrap_or_default();
            }
        }
        for j in 0..p {
            if j < n {
                v += ln_gamma(one - params.a[j] + s).unwrap_or_default();
            } else {
                v -= ln_gamma(params.a[j] - s).unwrap_or_default();
            }
        }
        v.exp() / (2.0 * PI)
    };
    let r = contour_r.max(1.0);
    let mut breaks = vec![-r];
    let pieces = (r / 2.0).ceil() as usize;
    for i in 1..2 * pieces {
        breaks.push(-r + i as f64 * r / pieces as f64);
    }
    breaks.push(r);
    let res = quad::adaptive(integrand, &breaks, 1e-15, 1e-13, 20_000)?;
    // tail beyond R decays like e^{−excess·π|t|/2}
    let rate = excess as f64 * PI / 2.0;
    let tail = (integrand(r).norm() + integrand(-r).norm()) / rate;
    if tail > 1e-10 * res.value.norm().max(1e-300) {
        return Err(Error::Convergence(format!("contour tail {tail:e} beyond R = {r}")));
    }
    Ok(res.value)
}
