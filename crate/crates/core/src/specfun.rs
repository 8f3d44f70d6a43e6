//! Complex gamma and log-gamma, Pochhammer symbols, generalized
//! hypergeometric series, and a few real special functions.

use crate::error::{Error, Result};
use crate::dd::Dd;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

// A(z) in Gamma(z+1) = sqrt(2 pi) t^(z+1/2) e^(-t) A(z), t = z + g + 1/2.
fn lanczos_sum(z: Complex64) -> Complex64 {
    let mut s = c(LANCZOS_COEF[0]);
    for (k, &ck) in LANCZOS_COEF.iter().enumerate().skip(1) {
        s += ck / (z + k as f64);
    }
    s
}

/// log sin(pi z), stable for large |Im z|.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 4.0 {
        (z * PI).sin().ln()
    } else if z.im > 0.0 {
        let e = (i * 2.0 * PI * z).exp();
        -i * PI * z + (c(1.0) - e).ln() - Complex64::new(0.0, -2.0).ln()
    } else {
        let e = (-i * 2.0 * PI * z).exp();
        i * PI * z + (c(1.0) - e).ln() - Complex64::new(0.0, 2.0).ln()
    }
}

/// Euler's gamma function on the complex plane.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {z}")));
    }
    if z.im.abs() > 30.0 {
        return Ok(ln_gamma(z)?.exp());
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Ok(c(PI) / (s * gamma(c(1.0) - z)?));
    }
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    let lead = ((zm + 0.5) * t.ln() - t).exp();
    Ok(lead * (2.0 * PI).sqrt() * lanczos_sum(zm))
}

/// Real gamma function for positive arguments.
pub fn gamma_real(x: f64) -> f64 {
    gamma(c(x)).map(|v| v.re).unwrap_or(f64::NAN)
}

/// A logarithm of the gamma function. The imaginary part is continuous on
/// Re z >= 1/2; for Re z < 1/2 the value comes from the reflection formula
/// and may differ from the principal branch by a multiple of 2 pi i.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    if z.re < 0.5 {
        return Ok(c(PI.ln()) - ln_sin_pi(z) - ln_gamma(c(1.0) - z)?);
    }
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    Ok((zm + 0.5) * t.ln() - t + LN_SQRT_2PI + lanczos_sum(zm).ln())
}

// Local slope of log Gamma, used to predict the argument increment of a step.
fn ln_gamma_slope(z: Complex64, dz: Complex64) -> Result<Complex64> {
    let h = dz * 1e-5;
    let d = ln_gamma(z + h)? - ln_gamma(z - h)?;
    let k = (d.im / (2.0 * PI)).round();
    Ok(Complex64::new(d.re, d.im - 2.0 * PI * k) / (h * 2.0))
}

const BERNOULLI: [f64; 21] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
];

fn bernoulli_poly(n: usize, x: Complex64) -> Complex64 {
    let mut binom = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &b) in BERNOULLI.iter().enumerate().take(n + 1) {
        if b != 0.0 {
            acc += binom * b * x.powu((n - k) as u32);
        }
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// ln Γ(s+a) − ln Γ(s+b) without cancellation for large |s| away from the
/// negative real axis.
pub fn ln_gamma_ratio(s: Complex64, a: Complex64, b: Complex64) -> Result<Complex64> {
    let scale = 40.0 + 4.0 * a.norm().max(b.norm());
    if s.norm() < scale || (s.re < 0.0 && s.im.abs() < -s.re) {
        return Ok(ln_gamma(s + a)? - ln_gamma(s + b)?);
    }
    let inv = s.inv();
    let mut pw = inv;
    let mut acc = (a - b) * s.ln();
    for n in 1..20 {
        let c = (bernoulli_poly(n + 1, a) - bernoulli_poly(n + 1, b)) / (n * (n + 1)) as f64;
        let term = if n % 2 == 1 { c * pw } else { -c * pw };
        acc += term;
        if term.norm() < 1e-17 * acc.norm().max(1e-300) {
            break;
        }
        pw *= inv;
    }
    Ok(acc)
}

/// log Gamma along a path with the imaginary part kept continuous. Each
/// step is unwrapped towards the increment predicted by the local slope;
/// steps whose predicted argument change reaches pi are rejected.
pub fn log_gamma_continuous(path: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(path.len());
    for (idx, &z) in path.iter().enumerate() {
        let v = ln_gamma(z)?;
        if idx == 0 {
            out.push(v);
            continue;
        }
        let prev_z = path[idx - 1];
        let dz = z - prev_z;
        let prev = out[idx - 1];
        let predicted = if dz.norm() == 0.0 {
            0.0
        } else {
            let s0 = ln_gamma_slope(prev_z, dz)?;
            let s1 = ln_gamma_slope(z, dz)?;
            ((s0 + s1) * 0.5 * dz).im
        };
        if predicted.abs() >= PI {
            return Err(Error::BranchJump {
                index: idx,
                increment: predicted,
            });
        }
        let k = ((prev.im + predicted - v.im) / (2.0 * PI)).round();
        let adj = Complex64::new(v.re, v.im + 2.0 * PI * k);
        let inc = adj.im - prev.im;
        if inc.abs() >= PI {
            return Err(Error::BranchJump {
                index: idx,
                increment: inc,
            });
        }
        out.push(adj);
    }
    Ok(out)
}

/// Rising factorial (c)_k = c (c+1) ... (c+k-1).
pub fn pochhammer(c0: Complex64, k: usize) -> Complex64 {
    (0..k).fold(c(1.0), |acc, j| acc * (c0 + j as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PFQParams {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
}

impl PFQParams {
    pub fn new(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> Self {
        Self {
            numerator,
            denominator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfqValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub terms: usize,
}

pub const PFQ_TERM_CAP: usize = 10_000;

/// Generalized hypergeometric series pFq(a; b; z) summed term by term.
pub fn pfq(params: &PFQParams, z: Complex64) -> Result<PfqValue> {
    for (j, b) in params.denominator.iter().enumerate() {
        if b.im.abs() < 1e-14 && b.re <= 0.0 && (b.re - b.re.round()).abs() < 1e-14 {
            return Err(Error::DenominatorPole(j));
        }
    }
    let p = params.numerator.len();
    let q = params.denominator.len();
    let terminating = params.numerator.iter().any(|a| is_nonpositive_integer(*a));
    if !terminating && z != c(0.0) {
        if p == q + 1 && z.norm() >= 1.0 {
            return Err(Error::Divergence(format!(
                "{p}F{q} needs |z| < 1, got |z| = {}",
                z.norm()
            )));
        }
        if p > q + 1 {
            return Err(Error::Divergence(format!("{p}F{q} series has zero radius")));
        }
    }
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let mut abs_sum = 1.0;
    let mut small_run = 0;
    for k in 0..PFQ_TERM_CAP {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for a in &params.numerator {
            ratio *= a + kf;
        }
        for b in &params.denominator {
            ratio /= b + kf;
        }
        term *= ratio;
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= 1e-15 * sum.norm() || term == c(0.0) {
            small_run += 1;
            if small_run >= 2 || term == c(0.0) {
                return Ok(PfqValue {
                    value: sum,
                    error_estimate: term.norm() + 4.0 * f64::EPSILON * abs_sum,
                    terms: k + 2,
                });
            }
        } else {
            small_run = 0;
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Overflow("pFq partial sum".into()));
        }
    }
    Err(Error::Convergence(format!(
        "pFq did not converge within {PFQ_TERM_CAP} terms"
    )))
}

/// Chebyshev polynomial of the second kind.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let (mut u0, mut u1) = (1.0, 2.0 * x);
    if n == 0 {
        return u0;
    }
    for _ in 1..n {
        let u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if n == 0 {
        return l0;
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

pub const STRUVE_MAX_X: f64 = 40.0;

/// Struve function H_nu(x) by its ascending series, summed in
/// double-double precision to absorb cancellation.
pub fn struve(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || nu < 0.0 {
        return Err(Error::InvalidInput(format!("struve needs x > 0, nu >= 0 (x={x}, nu={nu})")));
    }
    if x > STRUVE_MAX_X {
        return Err(Error::Convergence(format!(
            "ascending Struve series unsupported for x = {x} > {STRUVE_MAX_X}"
        )));
    }
    let lead = (0.5 * x).powf(nu + 1.0) / (gamma_real(1.5) * gamma_real(nu + 1.5));
    let h2 = Dd::from(0.5 * x) * Dd::from(0.5 * x);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for k in 0..500 {
        let kf = k as f64;
        let den = Dd::from(kf + 1.5) * Dd::from(kf + nu + 1.5);
        term = -(term * h2 / den);
        sum = sum + term;
        if term.0.abs() < 1e-34 * sum.0.abs().max(1e-300) {
            return Ok(lead * (sum.0 + sum.1));
        }
    }
    Err(Error::Convergence("Struve series".into()))
}

/// Bessel J_0 from the trapezoid rule on its periodic integral
/// representation, which converges geometrically once the node count
/// exceeds the argument.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    let n = (((x + 12.0 * x.cbrt() + 30.0) / 2.0).ceil() as usize) * 2;
    let mut s = 0.0;
    for k in 0..n {
        s += (x * (2.0 * PI * k as f64 / n as f64).sin()).cos();
    }
    s / n as f64
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
