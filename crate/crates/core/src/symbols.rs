//! Symbols on a vertical strip, winding numbers and Wiener–Hopf
//! factorization through Cauchy integrals of log ψ.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::ln_gamma_ratio;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Serde helper: real parameters are written as plain numbers, complex ones
/// as `[re, im]`.
pub mod cparams {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum P {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<P> = v
            .iter()
            .map(|z| if z.im == 0.0 { P::Real(z.re) } else { P::Pair([z.re, z.im]) })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v: Vec<P> = Vec::deserialize(d)?;
        Ok(v.into_iter()
            .map(|p| match p {
                P::Real(x) => Complex64::new(x, 0.0),
                P::Pair([x, y]) => Complex64::new(x, y),
            })
            .collect())
    }
}

/// ψ(s) = Π Γ(a_j+s)/Γ(b_j+s) · Π Γ(c_j−s)/Γ(d_j−s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaQuotientParams {
    #[serde(with = "cparams")]
    pub a: Vec<Complex64>,
    #[serde(with = "cparams")]
    pub b: Vec<Complex64>,
    #[serde(with = "cparams", default)]
    pub c: Vec<Complex64>,
    #[serde(with = "cparams", default)]
    pub d: Vec<Complex64>,
}

fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

impl GammaQuotientParams {
    pub fn new(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Self {
        Self {
            a: reals(a),
            b: reals(b),
            c: reals(c),
            d: reals(d),
        }
    }

    /// 1 − F for the sinh kernel, written as a gamma quotient in the scaled
    /// variable y = ξ/(2γ): a = c = 1/2 ± iπ/(2γ), b = d = 1/2 ± θ/(2π)
    /// with cos θ = e^{−π²/γ}.
    pub fn sinh_kernel(gamma: f64) -> Self {
        let q = PI / (2.0 * gamma);
        let theta = (-PI * PI / gamma).exp().acos();
        let tau = theta / (2.0 * PI);
        let a = vec![Complex64::new(0.5, q), Complex64::new(0.5, -q)];
        let b = vec![Complex64::new(0.5 - tau, 0.0), Complex64::new(0.5 + tau, 0.0)];
        Self {
            a: a.clone(),
            b: b.clone(),
            c: a,
            d: b,
        }
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn mu(&self) -> usize {
        self.c.len()
    }

    pub fn imbalance(&self) -> (Complex64, Complex64) {
        let ab = self.a.iter().sum::<Complex64>() - self.b.iter().sum::<Complex64>();
        let cd = self.c.iter().sum::<Complex64>() - self.d.iter().sum::<Complex64>();
        (ab, cd)
    }

    pub fn check_balance(&self) -> Result<()> {
        let (ab, cd) = self.imbalance();
        if ab.norm() > 1e-12 || cd.norm() > 1e-12 {
            return Err(Error::Balance {
                ab: ab.norm(),
                cd: cd.norm(),
            });
        }
        Ok(())
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.a.len() != self.b.len() || self.c.len() != self.d.len() {
            return Err(Error::InvalidInput(
                "a/b and c/d must have equal lengths".into(),
            ));
        }
        if self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .chain(&self.d)
            .any(|p| !(p.re > 0.0))
        {
            return Err(Error::InvalidInput("parameters need positive real part".into()));
        }
        Ok(())
    }

    /// Swap roles (a, b, c, d) → (c, d, a, b), which maps φ1 data to φ2 data.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.c.clone(),
            b: self.d.clone(),
            c: self.a.clone(),
            d: self.b.clone(),
        }
    }

    /// log ψ(s), on an arbitrary branch.
    pub fn log_eval(&self, s: Complex64) -> Complex64 {
        let r = |z: Complex64, p: &Complex64, q: &Complex64| {
            ln_gamma_ratio(z, *p, *q).unwrap_or(Complex64::new(f64::INFINITY, 0.0))
        };
        let mut v = Complex64::new(0.0, 0.0);
        for (a, b) in self.a.iter().zip(&self.b) {
            v += r(s, a, b);
        }
        for (c, d) in self.c.iter().zip(&self.d) {
            v += r(-s, c, d);
        }
        v
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.log_eval(s).exp()
    }

    /// Π Γ(a_j+s)/Γ(b_j+s), holomorphic and zero-free on Re s > −min Re(a, b).
    pub fn right_factor(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for (a, b) in self.a.iter().zip(&self.b) {
            v += ln_gamma_ratio(s, *a, *b).unwrap_or_default();
        }
        v.exp()
    }

    /// Π Γ(c_j−s)/Γ(d_j−s), holomorphic and zero-free on Re s < min Re(c, d).
    pub fn left_factor(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for (c, d) in self.c.iter().zip(&self.d) {
            v += ln_gamma_ratio(-s, *c, *d).unwrap_or_default();
        }
        v.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinhSymbolParams {
    pub gamma: f64,
}

/// Builtin symbols outside the gamma-quotient families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CustomSymbol {
    /// ψ ≡ 1
    Identity,
    /// ψ(z) = Π (z − z_k)/(z − p_k)
    Rational {
        #[serde(with = "cparams")]
        zeros: Vec<Complex64>,
        #[serde(with = "cparams")]
        poles: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SymbolKind {
    GammaQuotient(GammaQuotientParams),
    SinhKernel(SinhSymbolParams),
    Scattering { lambda: f64 },
    Custom(CustomSymbol),
}

/// JSON record {kind, params, eps, delta}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    #[serde(flatten)]
    pub kind: SymbolKind,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
}

impl SymbolSpec {
    /// SHA-256 of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).unwrap_or_default();
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// Distances from the imaginary axis to the nearest pole and zero on each
/// side, plus the largest |Im z| of any singularity (|Re ξ| in ξ = −iz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityData {
    pub left_pole: f64,
    pub left_zero: f64,
    pub right_pole: f64,
    pub right_zero: f64,
    pub max_abs_im: f64,
}

type EvalFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A symbol ψ on the strip |Re z| < ε with ψ = 1 + O(|z|^{−1/2−δ}).
#[derive(Clone)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub eps: f64,
    pub delta: f64,
    pub singularities: SingularityData,
    eval: EvalFn,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("kind", &self.kind)
            .field("eps", &self.eps)
            .field("delta", &self.delta)
            .finish()
    }
}

impl Symbol {
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    /// ψ(iξ) for complex ξ.
    pub fn at_xi(&self, xi: Complex64) -> Complex64 {
        (self.eval)(Complex64::i() * xi)
    }

    pub fn spec(&self) -> SymbolSpec {
        SymbolSpec {
            kind: self.kind.clone(),
            eps: Some(self.eps),
            delta: Some(self.delta),
        }
    }

    pub fn from_spec(spec: &SymbolSpec) -> Result<Symbol> {
        let mut s = match &spec.kind {
            SymbolKind::GammaQuotient(p) => gamma_quotient_symbol(p)?,
            SymbolKind::SinhKernel(p) => sinh_kernel_symbol(p.gamma)?,
            SymbolKind::Scattering { lambda } => scattering_symbol(*lambda)?,
            SymbolKind::Custom(CustomSymbol::Identity) => identity_symbol(),
            SymbolKind::Custom(CustomSymbol::Rational { zeros, poles }) => {
                rational_symbol(zeros.clone(), poles.clone())?
            }
        };
        if let Some(e) = spec.eps {
            if !(e > 0.0) {
                return Err(Error::InvalidInput("eps must be positive".into()));
            }
            s.eps = e;
        }
        if let Some(d) = spec.delta {
            if !(d > 0.0 && d <= 0.5) {
                return Err(Error::InvalidInput("delta must lie in (0, 1/2]".into()));
            }
            s.delta = d;
        }
        Ok(s)
    }

    /// Custom symbol from a closure.
    pub fn custom<F>(f: F, eps: f64, delta: f64, singularities: SingularityData) -> Symbol
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Symbol {
            kind: SymbolKind::Custom(CustomSymbol::Identity),
            eps,
            delta,
            singularities,
            eval: Arc::new(f),
        }
    }

    /// Rate at which the kernel of ψ − 1 decays for x → +∞.
    pub fn kernel_decay_plus(&self) -> f64 {
        self.singularities.left_pole
    }

    /// Rate at which the kernel of 1/ψ − 1 decays for x → −∞.
    pub fn inverse_kernel_decay_minus(&self) -> f64 {
        self.singularities.right_zero
    }
}

pub fn identity_symbol() -> Symbol {
    Symbol {
        kind: SymbolKind::Custom(CustomSymbol::Identity),
        eps: 1.0,
        delta: 0.5,
        singularities: SingularityData {
            left_pole: f64::INFINITY,
            left_zero: f64::INFINITY,
            right_pole: f64::INFINITY,
            right_zero: f64::INFINITY,
            max_abs_im: 0.0,
        },
        eval: Arc::new(|_| Complex64::new(1.0, 0.0)),
    }
}

pub fn rational_symbol(zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Result<Symbol> {
    if zeros.len() != poles.len() {
        return Err(Error::InvalidInput(
            "rational symbol needs as many zeros as poles".into(),
        ));
    }
    let side = |pts: &[Complex64], left: bool| {
        pts.iter()
            .filter(|p| if left { p.re < 0.0 } else { p.re > 0.0 })
            .map(|p| p.re.abs())
            .fold(f64::INFINITY, f64::min)
    };
    let on_axis = zeros.iter().chain(&poles).map(|p| p.re.abs()).fold(f64::INFINITY, f64::min);
    let eps = if on_axis > 0.0 { on_axis } else { 1.0 };
    let singularities = SingularityData {
        left_pole: side(&poles, true),
        left_zero: side(&zeros, true),
        right_pole: side(&poles, false),
        right_zero: side(&zeros, false),
        max_abs_im: zeros.iter().chain(&poles).map(|p| p.im.abs()).fold(0.0, f64::max),
    };
    let (zs, ps) = (zeros.clone(), poles.clone());
    Ok(Symbol {
        kind: SymbolKind::Custom(CustomSymbol::Rational { zeros, poles }),
        eps,
        delta: 0.5,
        singularities,
        eval: Arc::new(move |z| {
            zs.iter()
                .zip(&ps)
                .fold(Complex64::new(1.0, 0.0), |acc, (a, b)| acc * (z - a) / (z - b))
        }),
    })
}

/// K(x) = γ sin(πx)/(π sinh(γx)), with K(0) = 1.
pub fn sinh_kernel(gamma: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let ax = x.abs();
    // sinh(γx) overflows long after the kernel underflows
    if gamma * ax > 700.0 {
        return 0.0;
    }
    gamma * (PI * ax).sin() / (PI * (gamma * ax).sinh())
}

/// F(ξ) = sinh(π²/γ)/(cosh(π²/γ) + cosh(πξ/γ)) for complex ξ.
pub fn sinh_symbol_complex(gamma: f64, xi: Complex64) -> Complex64 {
    let q = PI * PI / gamma;
    let mut w = xi * (PI / gamma);
    if w.re < 0.0 {
        w = -w;
    }
    let e1 = (-w).exp();
    let e2 = e1 * e1;
    e1 * (2.0 * q.sinh()) / (e1 * (2.0 * q.cosh()) + 1.0 + e2)
}

pub fn sinh_symbol(gamma: f64, xi: f64) -> f64 {
    sinh_symbol_complex(gamma, Complex64::new(xi, 0.0)).re
}

/// ψ(z) = 1 − F(−iz), the symbol of I − K for the sinh kernel.
pub fn sinh_kernel_symbol(gamma: f64) -> Result<Symbol> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    let gq = GammaQuotientParams::sinh_kernel(gamma);
    let scale = 2.0 * gamma;
    let zero_dist = scale * gq.b[0].re;
    let pole_dist = gamma;
    Ok(Symbol {
        kind: SymbolKind::SinhKernel(SinhSymbolParams { gamma }),
        eps: zero_dist.min(pole_dist),
        delta: 0.5,
        singularities: SingularityData {
            left_pole: pole_dist,
            left_zero: zero_dist,
            right_pole: pole_dist,
            right_zero: zero_dist,
            max_abs_im: PI,
        },
        eval: Arc::new(move |z| {
            Complex64::new(1.0, 0.0) - sinh_symbol_complex(gamma, -Complex64::i() * z)
        }),
    })
}

/// Symbol of a gamma quotient; requires Σ(a−b) = Σ(c−d) = 0.
pub fn gamma_quotient_symbol(params: &GammaQuotientParams) -> Result<Symbol> {
    params.check_shape()?;
    params.check_balance()?;
    Ok(gamma_quotient_symbol_unchecked(params))
}

fn min_re(v: &[Complex64]) -> f64 {
    v.iter().map(|p| p.re).fold(f64::INFINITY, f64::min)
}

fn gamma_quotient_symbol_unchecked(params: &GammaQuotientParams) -> Symbol {
    let sing = SingularityData {
        left_pole: min_re(&params.a),
        left_zero: min_re(&params.b),
        right_pole: min_re(&params.c),
        right_zero: min_re(&params.d),
        max_abs_im: params
            .a
            .iter()
            .chain(&params.b)
            .chain(&params.c)
            .chain(&params.d)
            .map(|p| p.im.abs())
            .fold(0.0, f64::max),
    };
    let eps = sing
        .left_pole
        .min(sing.left_zero)
        .min(sing.right_pole)
        .min(sing.right_zero);
    let p = params.clone();
    Symbol {
        kind: SymbolKind::GammaQuotient(params.clone()),
        eps,
        delta: 0.5,
        singularities: sing,
        eval: Arc::new(move |z| p.eval(z)),
    }
}

/// S(ξ|λ) = −Γ(1+iξ)Γ(λ−iξ)/(Γ(1−iξ)Γ(λ+iξ)) as a function of z = iξ.
pub fn scattering_symbol(lambda: f64) -> Result<Symbol> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    let p = GammaQuotientParams::new(&[1.0], &[lambda], &[lambda], &[1.0]);
    let mut s = gamma_quotient_symbol_unchecked(&p);
    s.kind = SymbolKind::Scattering { lambda };
    s.eval = Arc::new(move |z| -p.eval(z));
    Ok(s)
}

/// λ with 1 − λ + Σ(b_j − a_j) = 0.
pub fn scattering_lambda_for(a: &[f64], b: &[f64]) -> f64 {
    1.0 + b.iter().sum::<f64>() - a.iter().sum::<f64>()
}

fn principal_arg_step(from: Complex64, to: Complex64) -> f64 {
    (to / from).arg()
}

// Argument increment across [a, b], bisecting while it is large.
fn refine_step(sym: &Symbol, a: f64, va: Complex64, b: f64, vb: Complex64, depth: u32) -> Result<f64> {
    let d = principal_arg_step(va, vb);
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth >= 60 {
        return Err(Error::Resolution(0.5 * (a + b)));
    }
    let m = 0.5 * (a + b);
    let vm = sym.at_xi(Complex64::new(m, 0.0));
    if !(vm.norm() >= 1e-12) {
        return Err(Error::ZeroOnContour(m));
    }
    Ok(refine_step(sym, a, va, m, vm, depth + 1)? + refine_step(sym, m, vm, b, vb, depth + 1)?)
}

/// Winding number of {ψ(iξ) : −R ≤ ξ ≤ R}, closed through 1, with the
/// orientation that counts zeros in the right half-plane positively.
pub fn winding_number(symbol: &Symbol, r: f64) -> Result<i64> {
    let n = ((16.0 * r) as usize).clamp(4096, 4_000_000);
    winding_number_with(symbol, r, n)
}

pub fn winding_number_with(symbol: &Symbol, r: f64, samples: usize) -> Result<i64> {
    let mut total = 0.0;
    let mut prev: Option<Complex64> = None;
    let mut first = Complex64::new(1.0, 0.0);
    let mut last = Complex64::new(1.0, 0.0);
    for k in 0..=samples {
        let xi = -r + 2.0 * r * k as f64 / samples as f64;
        let v = symbol.at_xi(Complex64::new(xi, 0.0));
        if !(v.norm() >= 1e-12) {
            return Err(Error::ZeroOnContour(xi));
        }
        if let Some(p) = prev {
            let xi0 = xi - 2.0 * r / samples as f64;
            total += refine_step(symbol, xi0, p, xi, v, 0)?;
        } else {
            first = v;
        }
        prev = Some(v);
        last = v;
    }
    if (first - 1.0).norm() >= 0.5 || (last - 1.0).norm() >= 0.5 {
        return Err(Error::Hypothesis(format!(
            "|ψ − 1| ≥ 1/2 at |ξ| = {r}; enlarge R"
        )));
    }
    total += principal_arg_step(last, first);
    Ok(-(total / (2.0 * PI)).round() as i64)
}

/// Continuous branch of log ψ along the vertical line Re z = η, tabulated on
/// a sinh-graded grid and seeded at the far end where ψ ≈ 1.
#[derive(Debug, Clone)]
pub struct LogTable {
    pub eta: f64,
    u_max: f64,
    du: f64,
    args: Vec<f64>,
}

fn xi_of_u(u: f64) -> f64 {
    u.sinh()
}

impl LogTable {
    pub fn build(symbol: &Symbol, eta: f64, r_max: f64, n: usize) -> Result<LogTable> {
        let u_max = r_max.asinh();
        let du = 2.0 * u_max / n as f64;
        let mut args = Vec::with_capacity(n + 1);
        let mut prev: Option<Complex64> = None;
        let mut acc = 0.0;
        for k in 0..=n {
            let xi = xi_of_u(-u_max + du * k as f64);
            let v = symbol.evaluate(Complex64::new(eta, xi));
            if !(v.norm() >= 1e-12) || !v.re.is_finite() {
                return Err(Error::ZeroInStrip(format!("{}", Complex64::new(eta, xi))));
            }
            match prev {
                None => acc = v.arg(),
                Some(p) => {
                    let d = principal_arg_step(p, v);
                    if d.abs() >= PI / 2.0 {
                        return Err(Error::Resolution(xi));
                    }
                    acc += d;
                }
            }
            args.push(acc);
            prev = Some(v);
        }
        let end = *args.last().unwrap_or(&0.0);
        if end.abs() > 1.0 {
            return Err(Error::NonzeroWinding((end / (2.0 * PI)).round() as i64));
        }
        Ok(LogTable {
            eta,
            u_max,
            du,
            args,
        })
    }

    /// log ψ(η + iξ) on the tabulated branch.
    pub fn log_psi(&self, symbol: &Symbol, xi: f64) -> Complex64 {
        let v = symbol.evaluate(Complex64::new(self.eta, xi));
        let l = v.ln();
        let u = xi.asinh();
        let pos = ((u + self.u_max) / self.du).clamp(0.0, (self.args.len() - 1) as f64);
        let i0 = (pos.floor() as usize).min(self.args.len() - 2);
        let t = pos - i0 as f64;
        let guide = self.args[i0] * (1.0 - t) + self.args[i0 + 1] * t;
        let k = ((guide - l.im) / (2.0 * PI)).round();
        Complex64::new(l.re, l.im + 2.0 * PI * k)
    }
}

/// Record of the contour data used for χ±.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiContourData {
    pub line_minus: f64,
    pub line_plus: f64,
    pub split_radius: f64,
    pub quad_tol: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone)]
pub struct WienerHopfFactors {
    pub symbol: Symbol,
    pub eps_prime: f64,
    pub winding: i64,
    pub chi_contour_data: ChiContourData,
    pub reconstruction_residual: f64,
    log_right: LogTable,
    log_left: LogTable,
}

impl WienerHopfFactors {
    // (1/2π) ∫ log ψ(η+iξ)/(η+iξ−w) dξ
    fn cauchy(&self, table: &LogTable, w: Complex64) -> Result<Complex64> {
        let eta = table.eta;
        let sym = &self.symbol;
        let f = |xi: f64| table.log_psi(sym, xi) / (Complex64::new(eta, xi) - w);
        let r = self.chi_contour_data.split_radius.max(2.0 * w.im.abs() + 10.0);
        let d = (w.re - eta).abs().max(1e-3);
        let mut breaks = vec![-r, r, 0.0];
        for m in [-8.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0] {
            let b = w.im + m * d;
            if b > -r && b < r {
                breaks.push(b);
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let tol = self.chi_contour_data.quad_tol;
        let mid = quad::adaptive(f, &breaks, tol, 0.0, 40_000)?;
        // tails through ξ = ±r/t
        let tail = |sgn: f64| {
            let g = |t: f64| {
                if t <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let xi = sgn * r / t;
                f(xi) * (r / (t * t))
            };
            quad::adaptive(g, &[0.0, 0.25, 0.5, 1.0], tol, 0.0, 40_000)
        };
        let tp = tail(1.0)?;
        let tm = tail(-1.0)?;
        Ok((mid.value + tp.value + tm.value) / (2.0 * PI))
    }

    /// χ− from the line Re z = +ε′, holomorphic on Re w < ε′.
    pub fn chi_minus(&self, w: Complex64) -> Result<Complex64> {
        if w.re >= self.eps_prime {
            return Err(Error::InvalidInput(format!("χ− needs Re w < ε′, got {w}")));
        }
        self.cauchy(&self.log_right, w)
    }

    /// χ+ from the line Re z = −ε′, holomorphic on Re w > −ε′.
    pub fn chi_plus(&self, w: Complex64) -> Result<Complex64> {
        if w.re <= -self.eps_prime {
            return Err(Error::InvalidInput(format!("χ+ needs Re w > −ε′, got {w}")));
        }
        self.cauchy(&self.log_left, w)
    }

    /// Left factor ψ− = exp(χ−).
    pub fn psi_minus(&self, w: Complex64) -> Result<Complex64> {
        Ok(self.chi_minus(w)?.exp())
    }

    /// Right factor ψ+ = exp(−χ+).
    pub fn psi_plus(&self, w: Complex64) -> Result<Complex64> {
        Ok((-self.chi_plus(w)?).exp())
    }

    /// max |ψ−ψ+/ψ − 1| over the given points.
    pub fn residual_on(&self, probes: &[Complex64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &z in probes {
            let rec = self.psi_minus(z)? * self.psi_plus(z)? / self.symbol.evaluate(z);
            worst = worst.max((rec - 1.0).norm());
        }
        Ok(worst)
    }
}

/// 64 probe points on the three lines Re z ∈ {−ε′/2, 0, ε′/2}.
pub fn probe_grid(eps_prime: f64, count: usize) -> Vec<Complex64> {
    let lines = [-0.5 * eps_prime, 0.0, 0.5 * eps_prime];
    let per = count.div_ceil(3);
    let mut out = Vec::with_capacity(count);
    for (j, &x) in lines.iter().enumerate() {
        for k in 0..per {
            if out.len() >= count {
                break;
            }
            let t = (k as f64 + 0.5 * j as f64 / 3.0) / per as f64;
            let y = 20.0 * (2.0 * t - 1.0).powi(3) + 3.0 * (2.0 * t - 1.0);
            out.push(Complex64::new(x, y));
        }
    }
    out
}

/// Smallest R ≥ 50 with |ψ(η+iξ) − 1| < 1/2 for |ξ| ≥ R on the strip lines.
fn find_radius(symbol: &Symbol, eps_prime: f64) -> Result<f64> {
    let mut r = 50.0;
    while r < 1e7 {
        let ok = [-eps_prime, 0.0, eps_prime].iter().all(|&eta| {
            (0..40).all(|k| {
                let xi = r * 1.5f64.powi(k);
                [xi, -xi].iter().all(|&x| (symbol.evaluate(Complex64::new(eta, x)) - 1.0).norm() < 0.5)
            })
        });
        if ok {
            return Ok(r);
        }
        r *= 4.0;
    }
    Err(Error::Hypothesis("ψ does not tend to 1 along the strip".into()))
}

/// Wiener–Hopf factorization ψ = ψ−ψ+ on |Re z| < ε′.
pub fn wiener_hopf_factorize(
    symbol: &Symbol,
    eps_prime: Option<f64>,
    tol: f64,
) -> Result<WienerHopfFactors> {
    let eps_prime = eps_prime.unwrap_or(symbol.eps / 4.0);
    if !(eps_prime > 0.0 && eps_prime < symbol.eps) {
        return Err(Error::InvalidInput(format!(
            "ε′ = {eps_prime} must lie in (0, ε = {})",
            symbol.eps
        )));
    }
    let r = find_radius(symbol, eps_prime)?;
    let winding = winding_number(symbol, r)?;
    if winding != 0 {
        return Err(Error::NonzeroWinding(winding));
    }
    for &eta in &[-eps_prime, 0.0, eps_prime] {
        for k in 0..=4000 {
            let xi = -r + 2.0 * r * k as f64 / 4000.0;
            if symbol.evaluate(Complex64::new(eta, xi)).norm() < 1e-12 {
                return Err(Error::ZeroInStrip(format!("{}", Complex64::new(eta, xi))));
            }
        }
    }
    let table_n = 200_000;
    let r_table = 1e9;
    let log_right = LogTable::build(symbol, eps_prime, r_table, table_n)?;
    let log_left = LogTable::build(symbol, -eps_prime, r_table, table_n)?;

    // tail bound from |log ψ| ≤ M |ξ|^{−1/2−δ} fitted at the split radius
    let p = 0.5 + symbol.delta;
    let m = [-eps_prime, eps_prime]
        .iter()
        .flat_map(|&eta| [r, -r].map(move |x| (eta, x)))
        .map(|(eta, x)| symbol.evaluate(Complex64::new(eta, x)).ln().norm() * r.powf(p))
        .fold(0.0, f64::max);
    let tail_bound = m * r.powf(-p) / (PI * p);

    let quad_tol = (tol * 1e-3).max(1e-14);
    let mut f = WienerHopfFactors {
        symbol: symbol.clone(),
        eps_prime,
        winding,
        chi_contour_data: ChiContourData {
            line_minus: eps_prime,
            line_plus: -eps_prime,
            split_radius: r,
            quad_tol,
            tail_bound,
        },
        reconstruction_residual: 0.0,
        log_right,
        log_left,
    };
    let probes = probe_grid(eps_prime, 12);
    let res = f.residual_on(&probes)?;
    f.reconstruction_residual = res;
    if !(res < tol) {
        return Err(Error::Quadrature(format!(
            "reconstruction residual {res:e} exceeds tolerance {tol:e}"
        )));
    }
    Ok(f)
}

/// Serializable summary of a factorization, for caching by content hash.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorRecord {
    pub hash: String,
    pub symbol: SymbolSpec,
    pub eps_prime: f64,
    pub winding: i64,
    pub reconstruction_residual: f64,
    pub chi_contour_data: ChiContourData,
    /// (Re z, Im z, Re ψ−, Im ψ−, Re ψ+, Im ψ+)
    pub samples: Vec<[f64; 6]>,
}

impl FactorRecord {
    pub fn from_factors(f: &WienerHopfFactors, points: &[Complex64]) -> Result<FactorRecord> {
        let spec = f.symbol.spec();
        let mut samples = Vec::with_capacity(points.len());
        for &z in points {
            let m = f.psi_minus(z)?;
            let p = f.psi_plus(z)?;
            samples.push([z.re, z.im, m.re, m.im, p.re, p.im]);
        }
        Ok(FactorRecord {
            hash: spec.content_hash(),
            symbol: spec,
            eps_prime: f.eps_prime,
            winding: f.winding,
            reconstruction_residual: f.reconstruction_residual,
            chi_contour_data: f.chi_contour_data.clone(),
            samples,
        })
    }

    pub fn cache_path(dir: &std::path::Path, spec: &SymbolSpec) -> std::path::PathBuf {
        dir.join(format!("{}.json", spec.content_hash()))
    }

    pub fn save(&self, dir: &std::path::Path) -> std::io::Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.hash));
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }

    pub fn load(dir: &std::path::Path, spec: &SymbolSpec) -> Option<FactorRecord> {
        let text = std::fs::read_to_string(Self::cache_path(dir, spec)).ok()?;
        serde_json::from_str(&text).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sinh_kernel_examples() {
        assert_eq!(sinh_kernel(2.0, 0.0), 1.0);
        assert!(sinh_kernel(PI, 1.0).abs() < 1e-15);
        assert_relative_eq!(
            sinh_kernel(1.0, 0.5),
            1.0 / (PI * 0.5f64.sinh()),
            max_relative = 1e-15
        );
    }

    #[test]
    fn sinh_symbol_examples() {
        assert_relative_eq!(sinh_symbol(PI * PI, 0.0), 0.5f64.tanh(), max_relative = 1e-15);
        assert!(sinh_symbol(PI * PI, 1e4) < 1e-300);
    }

    #[test]
    fn sinh_symbol_is_gamma_quotient() {
        for &g in &[PI * PI, 2.0 * PI * PI, 3.0] {
            let p = GammaQuotientParams::sinh_kernel(g);
            for &xi in &[0.0, 0.7, -2.5, 11.0] {
                let y = xi / (2.0 * g);
                let v = p.eval(Complex64::new(0.0, y));
                assert!((v - (1.0 - sinh_symbol(g, xi))).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn gamma_quotient_examples() {
        let s = gamma_quotient_symbol(&GammaQuotientParams::new(&[0.5], &[0.5], &[0.7], &[0.7]))
            .unwrap();
        assert!((s.evaluate(Complex64::new(0.1, 3.0)) - 1.0).norm() < 1e-15);
        let s = gamma_quotient_symbol(&GammaQuotientParams::new(&[0.3, 0.7], &[0.4, 0.6], &[], &[]))
            .unwrap();
        assert_relative_eq!(s.evaluate(Complex64::new(0.0, 0.0)).re, 1.1755705045849463944, max_relative = 1e-14);
        assert_eq!(s.delta, 0.5);
        assert_relative_eq!(s.eps, 0.3);
        let bad = GammaQuotientParams::new(&[0.3], &[0.5], &[0.4], &[0.2]);
        assert!(matches!(gamma_quotient_symbol(&bad), Err(Error::Balance { .. })));
    }

    #[test]
    fn scattering_examples() {
        let s = scattering_symbol(2.0).unwrap();
        assert!((s.at_xi(Complex64::new(0.0, 0.0)) + 1.0).norm() < 1e-14);
        for &xi in &[0.3, -1.7, 12.0] {
            assert_relative_eq!(s.at_xi(Complex64::new(xi, 0.0)).norm(), 1.0, max_relative = 1e-13);
        }
        assert_relative_eq!(scattering_lambda_for(&[0.3, 0.7], &[0.4, 0.9]), 1.3, max_relative = 1e-15);
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(&identity_symbol(), 100.0).unwrap(), 0);
        let m = rational_symbol(vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(-1.0, 0.0)]).unwrap();
        assert_eq!(winding_number(&m, 1e4).unwrap(), 1);
        let z = rational_symbol(vec![Complex64::new(0.0, 0.5)], vec![Complex64::new(-1.0, 0.0)]).unwrap();
        assert!(matches!(winding_number(&z, 100.0), Err(Error::ZeroOnContour(_))));
    }

    #[test]
    fn spec_roundtrip() {
        let json = r#"{"kind":"gamma_quotient","params":{"a":[0.3,0.7],"b":[0.4,0.6],"c":[0.3,0.7],"d":[0.4,0.6]}}"#;
        let spec: SymbolSpec = serde_json::from_str(json).unwrap();
        let s = Symbol::from_spec(&spec).unwrap();
        let back = Symbol::from_spec(&s.spec()).unwrap();
        assert_eq!(s.spec(), back.spec());
        let bc: SymbolSpec = serde_json::from_str(r#"{"kind":"sinh_kernel","params":{"gamma":9.8696}}"#).unwrap();
        assert!(Symbol::from_spec(&bc).is_ok());
        let id: SymbolSpec = serde_json::from_str(r#"{"kind":"custom","params":{"name":"identity"}}"#).unwrap();
        assert!(Symbol::from_spec(&id).is_ok());
        assert_eq!(spec.content_hash().len(), 64);
    }

    #[test]
    fn identity_factors_are_trivial() {
        let f = wiener_hopf_factorize(&identity_symbol(), None, 1e-8).unwrap();
        let z = Complex64::new(0.1, 2.0);
        assert!((f.psi_minus(z).unwrap() - 1.0).norm() < 1e-15);
        assert!((f.psi_plus(z).unwrap() - 1.0).norm() < 1e-15);
    }
}
