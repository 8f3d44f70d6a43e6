//! Equilibrium measures on a given interval and linear statistics: the
//! Chebyshev–Fourier density, the mean and variance of a linear statistic,
//! the step and arctan fields, and a Mellin/cosine Plancherel identity.
//!
//! Throughout, x = m + h·cos θ with m the midpoint and h the half-width of
//! the support.

use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_real};
use crate::specfun::chebyshev_u;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// External field as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    Zero,
    /// Ascending coefficients.
    Polynomial { coeffs: Vec<f64> },
    /// β·atan((x − t)/ε)/π.
    Arctan { t: f64, eps: f64, beta: f64 },
}

fn minus_one() -> f64 {
    -1.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(default = "minus_one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(flatten)]
    pub kind: PotentialKind,
}

#[derive(Clone)]
pub struct PotentialOnInterval {
    pub a: f64,
    pub b: f64,
    v0: RealFn,
}

impl std::fmt::Debug for PotentialOnInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialOnInterval")
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}

impl PotentialOnInterval {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(a: f64, b: f64, v0: F) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!("support [{a}, {b}] is not a finite interval")));
        }
        Ok(Self { a, b, v0: Arc::new(v0) })
    }

    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        match &spec.kind {
            PotentialKind::Zero => Self::new(spec.a, spec.b, |_| 0.0),
            PotentialKind::Polynomial { coeffs } => {
                let c = coeffs.clone();
                Self::new(spec.a, spec.b, move |x| c.iter().rev().fold(0.0, |acc, &k| acc * x + k))
            }
            PotentialKind::Arctan { t, eps, beta } => {
                if !(*eps > 0.0) {
                    return Err(Error::InvalidInput("ε must be positive".into()));
                }
                let (t, eps, beta) = (*t, *eps, *beta);
                Self::new(spec.a, spec.b, move |x| beta * ((x - t) / eps).atan() / PI)
            }
        }
    }

    pub fn v0(&self, x: f64) -> f64 {
        (self.v0)(x)
    }

    fn mid_half(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.b - self.a))
    }
}

fn cosine_coeffs(g: &dyn Fn(f64) -> f64, n_max: usize, panels: usize) -> Vec<f64> {
    // trapezoid on [0, π] with halved end weights; exact for cosine
    // polynomials of degree below 2·panels
    let vals: Vec<f64> = (0..=panels).map(|j| g(PI * j as f64 / panels as f64)).collect();
    (0..=n_max)
        .map(|n| {
            let mut s = 0.0;
            for (j, v) in vals.iter().enumerate() {
                let w = if j == 0 || j == panels { 0.5 } else { 1.0 };
                s += w * v * (n as f64 * PI * j as f64 / panels as f64).cos();
            }
            let c = 2.0 * s / panels as f64;
            if n == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

/// Cosine coefficients of v0(m + h cos θ) = Σ_{n≥0} a_n cos nθ, so that
/// (π/2)a_n = ∫_0^π v0(m + h cos θ) cos nθ dθ for n ≥ 1. Index n holds
/// a_n; a_0 is the mean value.
pub fn fourier_coeffs(potential: &PotentialOnInterval, n_max: usize) -> Result<Vec<f64>> {
    let (m, h) = potential.mid_half();
    let g = |th: f64| potential.v0(m + h * th.cos());
    let panels = (8 * n_max).max(2048);
    let a = cosine_coeffs(&g, n_max, panels);
    let b = cosine_coeffs(&g, n_max, 2 * panels);
    let scale = 1.0 + b.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let diff = a.iter().zip(&b).fold(0.0f64, |s, (x, y)| s.max((x - y).abs()));
    if !diff.is_finite() || diff > 1e-11 * scale {
        return Err(Error::Quadrature(format!("cosine coefficients unresolved ({diff:e})")));
    }
    Ok(b)
}

/// σ0(x(θ))·h·sin θ = Σ_n cheb_coeffs[n] cos nθ on 0 < θ < π, with
/// cheb_coeffs[0] = 1/π and cheb_coeffs[n] = −n a_n/(2π).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumDensity {
    pub a: f64,
    pub b: f64,
    pub cheb_coeffs: Vec<f64>,
    /// Minimum of σ0(x(θ)) h sin θ on a probe grid.
    pub min_theta_density: f64,
    /// False when the signed solution dips below −1e−8.
    pub admissible: bool,
}

impl EquilibriumDensity {
    /// σ0(x(θ))·h·sin θ, the density in the θ variable.
    pub fn theta_density(&self, theta: f64) -> f64 {
        self.cheb_coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * (n as f64 * theta).cos())
            .sum()
    }

    /// σ0(x) for a < x < b.
    pub fn density(&self, x: f64) -> f64 {
        let m = 0.5 * (self.a + self.b);
        let h = 0.5 * (self.b - self.a);
        let u = ((x - m) / h).clamp(-1.0, 1.0);
        let th = u.acos();
        self.theta_density(th) / (h * th.sin())
    }

    /// ∫σ0 = π·cheb_coeffs[0].
    pub fn mass(&self) -> f64 {
        PI * self.cheb_coeffs[0]
    }

    /// CSV `theta,x,sigma0` on `n` interior points.
    pub fn sample_csv(&self, n: usize) -> String {
        let m = 0.5 * (self.a + self.b);
        let h = 0.5 * (self.b - self.a);
        let mut out = String::from("theta,x,sigma0\n");
        for j in 0..n {
            let th = PI * (j as f64 + 0.5) / n as f64;
            let x = m + h * th.cos();
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_num(th),
                crate::fmt_num(x),
                crate::fmt_num(self.density(x))
            ));
        }
        out
    }
}

/// Density of the equilibrium measure on the supplied support: the signed
/// solution of v0(x) = 2∫log|x − y| σ0(dy) + C with unit mass. Fails when
/// (n a_n) has not decayed by n_max.
pub fn equilibrium_density(potential: &PotentialOnInterval, n_max: usize) -> Result<EquilibriumDensity> {
    let a = fourier_coeffs(potential, 2 * n_max)?;
    let head: f64 = (1..=n_max).map(|n| (n as f64 * a[n]).powi(2)).sum();
    let tail: f64 = (n_max + 1..=2 * n_max).map(|n| (n as f64 * a[n]).powi(2)).sum();
    if tail > 1e-20 + 1e-12 * head {
        return Err(Error::NonSummable(format!(
            "Σ(n a_n)² beyond n = {n_max} is {tail:e}"
        )));
    }
    let mut c = vec![1.0 / PI];
    c.extend((1..=n_max).map(|n| -(n as f64) * a[n] / (2.0 * PI)));
    let mut d = EquilibriumDensity {
        a: potential.a,
        b: potential.b,
        cheb_coeffs: c,
        min_theta_density: 0.0,
        admissible: true,
    };
    let probes = 4 * n_max + 64;
    d.min_theta_density = (0..=probes)
        .map(|j| d.theta_density(PI * j as f64 / probes as f64))
        .fold(f64::INFINITY, f64::min);
    d.admissible = d.min_theta_density >= -1e-8;
    Ok(d)
}

fn theta_breaks(a: f64, b: f64, x_breaks: &[f64]) -> Vec<f64> {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut br = vec![0.0, PI];
    br.extend(
        x_breaks
            .iter()
            .filter(|&&x| x > a && x < b)
            .map(|&x| ((x - m) / h).acos()),
    );
    br.sort_by(f64::total_cmp);
    br.dedup();
    br
}

/// S₂ = ∫ f σ0 = ∫_0^π f(x(θ)) σ0(x(θ)) h sin θ dθ. `x_breaks` marks
/// discontinuities of f.
pub fn linear_statistic_mean(density: &EquilibriumDensity, f: &dyn Fn(f64) -> f64, x_breaks: &[f64]) -> Result<f64> {
    let m = 0.5 * (density.a + density.b);
    let h = 0.5 * (density.b - density.a);
    let br = theta_breaks(density.a, density.b, x_breaks);
    Ok(adaptive_real(|th| f(m + h * th.cos()) * density.theta_density(th), &br, 1e-15, 1e-14)?.0)
}

/// Mean of the step ϑ(x − t) on [−1, 1]:
/// cos⁻¹(t)/π − Σ_{n≥1} √(1 − t²) U_{n−1}(t) a_n/(2π).
pub fn step_mean_chebyshev(potential: &PotentialOnInterval, t: f64, n_max: usize) -> Result<f64> {
    if potential.a != -1.0 || potential.b != 1.0 {
        return Err(Error::InvalidInput("the step formula needs support [−1, 1]".into()));
    }
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::InvalidInput("t must lie in (−1, 1)".into()));
    }
    let a = fourier_coeffs(potential, n_max)?;
    let r = (1.0 - t * t).sqrt();
    let terms: Vec<f64> = (1..=n_max).map(|n| r * chebyshev_u(n - 1, t) * a[n] / (2.0 * PI)).collect();
    let big = terms.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let last = terms[terms.len() * 3 / 4..].iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if last > 1e-13 * (1.0 + big) {
        return Err(Error::NonSummable(format!("series terms near n = {n_max} are {last:e}")));
    }
    Ok(t.acos() / PI - terms.iter().sum::<f64>())
}

/// Variance of a linear statistic by two routes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VarianceResult {
    /// Symmetrized double integral
    /// (1/4π²)∫∫ ((f(x) − f(y))/(x − y))² (1 − xy)/√((1 − x²)(1 − y²)) dx dy
    /// in normalized coordinates.
    pub pv: f64,
    /// (1/4)Σ n c_n² with f(x(θ)) = Σ c_n cos nθ.
    pub chebyshev: f64,
}

fn variance_double(g: &dyn Fn(f64) -> f64, n_nodes: usize) -> f64 {
    let panels = n_nodes.div_ceil(16).max(1);
    let br: Vec<f64> = (0..=panels).map(|k| PI * k as f64 / panels as f64).collect();
    let (t1, w1) = crate::quad::panel_rule(&br, 16);
    let (t2, w2) = crate::quad::panel_rule(&br, 17);
    let g1: Vec<f64> = t1.iter().map(|&t| g(t)).collect();
    let g2: Vec<f64> = t2.iter().map(|&t| g(t)).collect();
    let c1: Vec<f64> = t1.iter().map(|t| t.cos()).collect();
    let c2: Vec<f64> = t2.iter().map(|t| t.cos()).collect();
    let mut s = 0.0;
    for i in 0..t1.len() {
        let mut row = 0.0;
        for j in 0..t2.len() {
            let dq = (g1[i] - g2[j]) / (c1[i] - c2[j]);
            row += w2[j] * dq * dq * (1.0 - c1[i] * c2[j]);
        }
        s += w1[i] * row;
    }
    s / (4.0 * PI * PI)
}

/// S₁ for f on [a, b]. The classical variance normalization is used; the
/// double integral is the symmetrized form of the hypersingular kernel
/// ∂_y(√((b − y)(y − a))/(x − y)), which avoids a principal value. Fails
/// when doubling the node count moves that integral by more than 1e−7.
pub fn linear_statistic_variance(f: &dyn Fn(f64) -> f64, support: (f64, f64), n_nodes: usize) -> Result<VarianceResult> {
    let (a, b) = support;
    if !(a < b) {
        return Err(Error::InvalidInput("empty support".into()));
    }
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let g = |th: f64| f(m + h * th.cos());
    let p1 = variance_double(&g, n_nodes);
    let p2 = variance_double(&g, 2 * n_nodes);
    if !p2.is_finite() || (p1 - p2).abs() > 1e-7 * (1.0 + p2.abs()) {
        return Err(Error::Singularity(format!(
            "double integral unstable under node doubling: {p1:e} vs {p2:e}"
        )));
    }
    let panels = 8192;
    let c = cosine_coeffs(&g, panels / 4, panels);
    let cheb = 0.25 * c.iter().enumerate().map(|(n, v)| n as f64 * v * v).sum::<f64>();
    Ok(VarianceResult { pv: p2, chebyshev: cheb })
}

/// √(z² − 1) with √(z² − 1) ~ z at infinity, cut along [−1, 1]. The branch
/// is followed from z = 2 along a path that avoids the cut and compared with
/// the product form.
pub fn sqrt_z2m1(z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let direct = (z - one).sqrt() * (z + one).sqrt();
    let on_cut = z.im == 0.0 && z.re.abs() <= 1.0;
    if on_cut {
        return Err(Error::Branch(format!("{z} lies on the cut [−1, 1]")));
    }
    let start = Complex64::new(2.0_f64.max(z.re.abs() + 1.0), 0.0);
    let corner = Complex64::new(start.re, z.im);
    let mut prev = (start * start - one).sqrt();
    for (p, q) in [(start, corner), (corner, z)] {
        for k in 1..=256 {
            let w = p + (q - p) * (k as f64 / 256.0);
            let s = (w * w - one).sqrt();
            prev = if (s - prev).norm() <= (s + prev).norm() { s } else { -s };
        }
    }
    if (prev - direct).norm() > 1e-10 * (1.0 + direct.norm()) {
        return Err(Error::Branch(format!("continuation to {z} disagrees with the product form")));
    }
    Ok(direct)
}

/// Coefficients (A, D, C) of
/// ρ(x) = 2 Re(A/(x − z₊))·√(1 − x²) + (D x + C)/√(1 − x²),
/// z₊ = t + iε, A = 1/(4π² i √(z₊² − 1)), D = 2 Re A, and C from ∫ρ = 0.
fn arctan_rho_coeffs(t: f64, eps: f64) -> Result<(Complex64, f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("ε must be positive".into()));
    }
    let z = Complex64::new(t, eps);
    let s = sqrt_z2m1(z)?;
    let a = (Complex64::new(0.0, 4.0 * PI * PI) * s).inv();
    let d = 2.0 * a.re;
    // ∫√(1 − y²)/(y − z) dy = −π(z − √(z² − 1))
    let c = 2.0 * (a * (z - s)).re;
    Ok((a, d, c))
}

/// Solution ρ of π⁻¹ atan((x − t)/ε) = 2∫_{−1}^1 log|x − y| ρ(y) dy + c₁
/// with ∫ρ = 0, for −1 < x < 1.
pub fn arctan_rho(t: f64, eps: f64, x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::InvalidInput("x must lie in (−1, 1)".into()));
    }
    let (a, d, c) = arctan_rho_coeffs(t, eps)?;
    let z = Complex64::new(t, eps);
    let r = (1.0 - x * x).sqrt();
    Ok(2.0 * (a / (x - z)).re * r + (d * x + c) / r)
}

/// ρ(cos φ)·sin φ, the form that stays bounded at the endpoints.
pub fn arctan_rho_theta(t: f64, eps: f64, phi: f64) -> Result<f64> {
    let (a, d, c) = arctan_rho_coeffs(t, eps)?;
    let z = Complex64::new(t, eps);
    let x = phi.cos();
    let s = phi.sin();
    Ok(2.0 * (a / (x - z)).re * s * s + d * x + c)
}

/// ∫ g ρ over [−1, 1] for the arctan field, the first-order shift of the
/// mean of g when β·atan((x − t)/ε)/π is added to the field.
pub fn arctan_response(t: f64, eps: f64, g: &dyn Fn(f64) -> f64) -> Result<f64> {
    arctan_rho_coeffs(t, eps)?;
    let mut br = vec![0.0, PI];
    let p = t.clamp(-1.0, 1.0).acos();
    for k in -4i32..=4 {
        let q = (t + k as f64 * eps).clamp(-1.0, 1.0).acos();
        br.push(q);
        br.push(p);
    }
    br.sort_by(f64::total_cmp);
    br.dedup();
    let mut bad = None;
    let v = adaptive_real(
        |phi| match arctan_rho_theta(t, eps, phi) {
            Ok(r) => g(phi.cos()) * r,
            Err(e) => {
                bad = Some(e);
                0.0
            }
        },
        &br,
        1e-15,
        1e-13,
    )?
    .0;
    match bad {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

fn mellin_sqrt_at(f: &dyn Fn(f64) -> f64, y: f64, cutoff: f64) -> Result<Complex64> {
    // F(iy) = ∫_0^∞ x^{iy−1} f(√x) dx = 2∫_0^∞ u^{2iy−1} f(u) du, continued
    // to Re s = 0 by subtracting f(0) on (0, 1)
    let f0 = f(0.0);
    let lo = adaptive(
        |v: f64| Complex64::from_polar(1.0, 2.0 * y * v) * (f(v.exp()) - f0),
        &[-cutoff, -cutoff / 2.0, -4.0, -2.0, -1.0, 0.0],
        1e-15,
        1e-13,
        20_000,
    )?;
    let hi = adaptive(
        |v: f64| Complex64::from_polar(1.0, 2.0 * y * v) * f(v.exp()),
        &[0.0, 0.5, 1.0, 2.0, 3.0, cutoff.ln().max(4.0)],
        1e-15,
        1e-13,
        20_000,
    )?;
    Ok(2.0 * (lo.value + hi.value + f0 / Complex64::new(0.0, 2.0 * y)))
}

/// The two sides of
/// (1/π²)∫|F(iy)|² y tanh(πy) dy = (1/π²)∫_0^∞ x C(x)² dx
/// for even f, with F(s) = ∫_0^∞ x^{s−1} f(√x) dx and
/// C(x) = ∫_{−∞}^∞ f(t) cos(xt) dt. Both integrals run up to `cutoff`.
pub fn mellin_variance_identity_check(f: &dyn Fn(f64) -> f64, cutoff: f64) -> Result<(f64, f64)> {
    if !(cutoff > 1.0) {
        return Err(Error::InvalidInput("cutoff must exceed 1".into()));
    }
    let mut err = None;
    let mut left = |y: f64| {
        if y == 0.0 {
            return 0.0;
        }
        match mellin_sqrt_at(f, y, cutoff) {
            Ok(v) => v.norm_sqr() * y * (PI * y).tanh(),
            Err(e) => {
                err = Some(e);
                0.0
            }
        }
    };
    let yb: Vec<f64> = (0..=16).map(|k| cutoff * k as f64 / 16.0).collect();
    let lhs = 2.0 * adaptive_real(&mut left, &yb, 1e-14, 1e-11)?.0 / (PI * PI);
    if let Some(e) = err {
        return Err(e);
    }
    let cosine = |x: f64| -> Result<f64> {
        let br: Vec<f64> = (0..=32).map(|k| cutoff * k as f64 / 32.0).collect();
        Ok(2.0 * adaptive_real(|t| f(t) * (x * t).cos(), &br, 1e-15, 1e-13)?.0)
    };
    let mut err = None;
    let mut right = |x: f64| match cosine(x) {
        Ok(c) => x * c * c,
        Err(e) => {
            err = Some(e);
            0.0
        }
    };
    let rhs = adaptive_real(&mut right, &yb, 1e-14, 1e-11)?.0 / (PI * PI);
    if let Some(e) = err {
        return Err(e);
    }
    Ok((lhs, rhs))
}
