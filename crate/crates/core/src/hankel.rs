//! Hankel integral operators Γ_φ on L²(0,∞) with kernel φ(x+y).

use crate::error::{Error, Result};
use crate::quad::{self, dyadic_breaks, gauss_laguerre_log, panel_rule};
use crate::specfun::laguerre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

type PhiFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Scattering function φ on (0,∞) with its slowest exponential decay rate.
#[derive(Clone)]
pub struct ScatteringFunction {
    f: PhiFn,
    pub decay_rate: f64,
}

impl fmt::Debug for ScatteringFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScatteringFunction")
            .field("decay_rate", &self.decay_rate)
            .finish()
    }
}

impl ScatteringFunction {
    pub fn new<F>(f: F, decay_rate: f64) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            decay_rate,
        }
    }

    /// ξ e^{−λx}
    pub fn exponential(lambda: f64, coeff: f64) -> Self {
        Self::new(move |x| Complex64::new(coeff * (-lambda * x).exp(), 0.0), lambda)
    }

    pub fn zero() -> Self {
        Self::new(|_| Complex64::new(0.0, 0.0), 1.0)
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    /// x ↦ φ(x + s)
    pub fn shifted(&self, s: f64) -> Self {
        let f = self.f.clone();
        Self::new(move |x| f(x + s), self.decay_rate)
    }
}

/// φ(x) = Σ ξ_j e^{−λ_j x} with Re λ_j > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentialExpansion {
    #[serde(with = "crate::symbols::cparams")]
    pub exponents: Vec<Complex64>,
    pub coefficients: Vec<Complex64>,
    /// Bound on Σ|ξ_j|e^{−Re λ_j x}/Re λ_j over dropped terms.
    pub truncation_bound: f64,
}

impl ExponentialExpansion {
    /// Sorts the terms by (Re λ, Im λ); ties keep their input order.
    pub fn new(exponents: Vec<Complex64>, coefficients: Vec<Complex64>, truncation_bound: f64) -> Result<Self> {
        if exponents.len() != coefficients.len() {
            return Err(Error::InvalidInput("exponents and coefficients differ in length".into()));
        }
        if exponents.iter().any(|l| !(l.re > 0.0)) {
            return Err(Error::InvalidInput("exponents need positive real part".into()));
        }
        let mut idx: Vec<usize> = (0..exponents.len()).collect();
        idx.sort_by(|&i, &j| {
            exponents[i]
                .re
                .total_cmp(&exponents[j].re)
                .then(exponents[i].im.total_cmp(&exponents[j].im))
                .then(i.cmp(&j))
        });
        Ok(Self {
            exponents: idx.iter().map(|&i| exponents[i]).collect(),
            coefficients: idx.iter().map(|&i| coefficients[i]).collect(),
            truncation_bound,
        })
    }

    pub fn real(exponents: &[f64], coefficients: &[f64]) -> Result<Self> {
        Self::new(
            exponents.iter().map(|&l| Complex64::new(l, 0.0)).collect(),
            coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            0.0,
        )
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .fold(Complex64::new(0.0, 0.0), |acc, (&l, &c)| acc + c * (-l * x).exp())
    }

    /// Smallest Re λ_j.
    pub fn decay_rate(&self) -> f64 {
        self.exponents.first().map(|l| l.re).unwrap_or(1.0)
    }

    /// Drops the tail once Σ_{j≥J}|ξ_j|e^{−Re λ_j x_min}/Re λ_j < tol.
    pub fn truncated(&self, x_min: f64, tol: f64) -> Self {
        let tails: Vec<f64> = {
            let mut acc = 0.0;
            let mut v: Vec<f64> = self
                .exponents
                .iter()
                .zip(&self.coefficients)
                .rev()
                .map(|(l, c)| {
                    acc += c.norm() * (-l.re * x_min).exp() / l.re;
                    acc
                })
                .collect();
            v.reverse();
            v
        };
        let keep = tails.iter().position(|&t| t < tol).unwrap_or(self.len());
        // tails[keep] already certifies everything that is dropped
        let dropped = tails.get(keep).copied().unwrap_or(0.0);
        Self {
            exponents: self.exponents[..keep].to_vec(),
            coefficients: self.coefficients[..keep].to_vec(),
            truncation_bound: self.truncation_bound + dropped,
        }
    }

    /// JSON array of (λ_j, Re ξ_j, Im ξ_j); λ_j is written as [re, im] when
    /// it is not real.
    pub fn to_json_triples(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.exponents
                .iter()
                .zip(&self.coefficients)
                .map(|(l, c)| {
                    if l.im == 0.0 {
                        serde_json::json!([l.re, c.re, c.im])
                    } else {
                        serde_json::json!([[l.re, l.im], c.re, c.im])
                    }
                })
                .collect(),
        )
    }
}

pub fn expansion_to_scattering(exp: &ExponentialExpansion) -> ScatteringFunction {
    let e = exp.clone();
    let decay = exp.decay_rate();
    ScatteringFunction::new(move |x| e.evaluate(x), decay)
}

/// Sampled operator K[i][j] = √w_i k(x_i, x_j) √w_j.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kernel_matrix: DMatrix<Complex64>,
    pub node_rule: String,
    pub shift: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DumpHeader {
    n: usize,
    node_rule: String,
    shift: f64,
    complex: bool,
    data_file: String,
}

impl DiscretizedOperator {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// Frobenius norm squared Σ|K_ij|².
    pub fn frobenius_sq(&self) -> f64 {
        self.kernel_matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Writes `<stem>.json` and a sidecar `<stem>.bin` holding the matrix
    /// row-major as little-endian f64 pairs (re, im).
    pub fn dump(&self, dir: &Path, stem: &str) -> std::io::Result<()> {
        let n = self.dim();
        let data_file = format!("{stem}.bin");
        let header = DumpHeader {
            n,
            node_rule: self.node_rule.clone(),
            shift: self.shift,
            complex: true,
            data_file: data_file.clone(),
        };
        let mut bytes = Vec::with_capacity(n * n * 16);
        for i in 0..n {
            for j in 0..n {
                let z = self.kernel_matrix[(i, j)];
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        std::fs::write(dir.join(&data_file), bytes)?;
        std::fs::write(
            dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(&header)?,
        )
    }

    /// Reads back the matrix written by [`dump`](Self::dump).
    pub fn load_matrix(dir: &Path, stem: &str) -> std::io::Result<DMatrix<Complex64>> {
        let header: DumpHeader =
            serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
        let bytes = std::fs::read(dir.join(&header.data_file))?;
        let n = header.n;
        if bytes.len() != n * n * 16 {
            return Err(std::io::Error::new(std::io::ErrorKind::InvalidData, "size mismatch"));
        }
        let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            Complex64::new(f(k), f(k + 1))
        }))
    }
}

/// Quadrature rule on (0,∞) for kernels decaying like e^{−s x}: dyadic
/// grading towards 0 followed by panels one decade of e^{−s x} wide.
pub fn hankel_nodes(decay: f64, n_nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let s = decay.max(1e-3);
    let h = 1.0 / s;
    let levels = 14;
    let decades = 17;
    let mut breaks = dyadic_breaks(h, levels);
    let step = std::f64::consts::LN_10 / s;
    for k in 1..=decades {
        breaks.push(h + step * k as f64);
    }
    let panels = breaks.len() - 1;
    let order = n_nodes.div_ceil(panels).max(2);
    panel_rule(&breaks, order)
}

/// Nyström matrix of Γ_φ with kernel φ(x + y + 2t).
pub fn hankel_nystrom(phi: &ScatteringFunction, n_nodes: usize, shift: f64) -> Result<DiscretizedOperator> {
    if n_nodes < 2 {
        return Err(Error::InvalidInput("n_nodes must be at least 2".into()));
    }
    let (x, w) = hankel_nodes(phi.decay_rate, n_nodes);
    hankel_nystrom_on(phi, &x, &w, shift)
}

/// Nyström matrix on a caller-supplied rule.
pub fn hankel_nystrom_on(
    phi: &ScatteringFunction,
    nodes: &[f64],
    weights: &[f64],
    shift: f64,
) -> Result<DiscretizedOperator> {
    if shift < 0.0 {
        return Err(Error::InvalidInput("shift must be non-negative".into()));
    }
    let n = nodes.len();
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| phi.evaluate(nodes[i] + nodes[j] + 2.0 * shift) * (sw[i] * sw[j]))
                .collect()
        })
        .collect();
    if let Some((i, j)) = rows
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()).map(|j| (i, j)))
    {
        return Err(Error::Evaluation(format!(
            "φ not finite at x = {}",
            nodes[i] + nodes[j] + 2.0 * shift
        )));
    }
    Ok(DiscretizedOperator {
        nodes: nodes.to_vec(),
        weights: weights.to_vec(),
        kernel_matrix: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        node_rule: format!("graded-gauss-legendre:{}", n),
        shift,
    })
}

/// (∫₀^∞ t|φ(t)|² dt)^{1/2}
pub fn hs_norm(phi: &ScatteringFunction) -> Result<f64> {
    let s = phi.decay_rate.max(1e-3);
    let mut breaks = dyadic_breaks(1.0 / s, 30);
    let x_end = 60.0 / s;
    let mut b = 2.0 / s;
    while b < x_end {
        breaks.push(b);
        b += 2.0 / s;
    }
    breaks.push(x_end);
    let (v, _) = quad::adaptive_real(|t| t * phi.evaluate(t).norm_sqr(), &breaks, 0.0, 1e-12)?;
    // tail beyond x_end bounded through the local decay of the integrand
    let g = |t: f64| t * phi.evaluate(t).norm_sqr();
    let (g1, g2) = (g(x_end), g(x_end + 1.0 / s));
    if !g1.is_finite() || !g2.is_finite() || !v.is_finite() {
        return Err(Error::Divergence("∫ t|φ|² is not finite".into()));
    }
    let tail = if g2 < g1 && g2 > 0.0 {
        g1 / (g1 / g2).ln() * s
    } else if g1 == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    if !tail.is_finite() || tail > 1e-10 * v.max(1e-300) {
        return Err(Error::Divergence(format!("tail of ∫ t|φ|² not negligible ({tail:e})")));
    }
    Ok(v.sqrt())
}

/// μ_n = ∫₀^∞ φ(x) L_n(x) e^{−x/2} dx for n = 0..=n_max, by Gauss–Laguerre
/// in u = x/2 so the rule's weight absorbs e^{−x/2}.
pub fn laguerre_moments(phi: &ScatteringFunction, n_max: usize) -> Result<Vec<Complex64>> {
    let rule = |nodes: usize| -> Vec<Complex64> {
        let (u, lw) = gauss_laguerre_log(nodes);
        let samples: Vec<(f64, Complex64)> = u
            .iter()
            .zip(&lw)
            .map(|(&u, &lw)| (2.0 * u, phi.evaluate(2.0 * u) * (2.0 * lw.exp())))
            .filter(|(_, s)| s.norm() > 0.0)
            .collect();
        (0..=n_max)
            .map(|n| {
                samples
                    .iter()
                    .fold(Complex64::new(0.0, 0.0), |acc, &(x, s)| acc + s * laguerre(n, x))
            })
            .collect()
    };
    let mut nodes = (2 * n_max + 30).max(40);
    let mut prev = rule(nodes);
    for _ in 0..3 {
        nodes *= 2;
        let next = rule(nodes);
        let scale = next.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        let diff = next
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if diff <= 1e-10 * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature(
        "Laguerre moments did not settle under node doubling".into(),
    ))
}

/// Entries ν_k = μ_k − μ_{k+1} of Γ_φ in the orthonormal basis
/// e_n(x) = L_n(x)e^{−x/2}, from e_j * e_k = e_{j+k} − e_{j+k+1}.
pub fn laguerre_basis_entries(mu: &[Complex64]) -> Vec<Complex64> {
    mu.windows(2).map(|w| w[0] - w[1]).collect()
}

/// M[j][k] = μ_{j+k}, 0 ≤ j, k < n.
pub fn hankel_matrix_from_moments(mu: &[Complex64], n: usize) -> Result<DMatrix<Complex64>> {
    let needed = (2 * n).saturating_sub(1);
    if mu.len() < needed {
        return Err(Error::Length {
            needed,
            got: mu.len(),
        });
    }
    Ok(DMatrix::from_fn(n, n, |j, k| mu[j + k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn top_eigen(op: &DiscretizedOperator) -> f64 {
        let re = op.kernel_matrix.map(|z| z.re);
        let e = nalgebra::SymmetricEigen::new(re).eigenvalues;
        e.iter().copied().fold(f64::MIN, f64::max)
    }

    #[test]
    fn rank_one_eigenvalue() {
        let phi = ScatteringFunction::exponential(1.0, 1.0);
        let op = hankel_nystrom(&phi, 240, 0.0).unwrap();
        assert!((top_eigen(&op) - 0.5).abs() < 1e-13);
        let op = hankel_nystrom(&phi, 240, 1.0).unwrap();
        assert!((top_eigen(&op) - (-2.0f64).exp() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn hs_norm_examples() {
        assert_relative_eq!(hs_norm(&ScatteringFunction::exponential(1.0, 1.0)).unwrap(), 0.5, max_relative = 1e-11);
        assert_relative_eq!(hs_norm(&ScatteringFunction::exponential(2.0, 1.0)).unwrap(), 0.25, max_relative = 1e-11);
    }

    #[test]
    fn moment_examples() {
        let mu = laguerre_moments(&ScatteringFunction::exponential(1.0, 1.0), 4).unwrap();
        assert_relative_eq!(mu[0].re, 2.0 / 3.0, max_relative = 1e-11);
        assert_relative_eq!(mu[4].re, 2.0 / 3.0 / 81.0, max_relative = 1e-10);
        let mu = laguerre_moments(&ScatteringFunction::exponential(0.5, 1.0), 3).unwrap();
        assert!((mu[0] - 1.0).norm() < 1e-11 && mu[1].norm() < 1e-11);
        let mu = laguerre_moments(&ScatteringFunction::exponential(2.0, 1.0), 1).unwrap();
        assert_relative_eq!(mu[1].re, 6.0 / 25.0, max_relative = 1e-11);
    }

    #[test]
    fn moment_matrix_examples() {
        let m = hankel_matrix_from_moments(&[c(1.0), c(0.0), c(0.0)], 2).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]));
        let m = hankel_matrix_from_moments(&[c(1.0), c(1.0), c(2.0)], 2).unwrap();
        assert_eq!(m[(1, 1)], c(2.0));
        assert!(matches!(hankel_matrix_from_moments(&[c(1.0)], 2), Err(Error::Length { .. })));
    }

    #[test]
    fn expansion_examples() {
        let e = ExponentialExpansion::real(&[1.0], &[1.0]).unwrap();
        assert_relative_eq!(expansion_to_scattering(&e).evaluate(0.7).re, (-0.7f64).exp());
        let z = ExponentialExpansion::new(vec![], vec![], 0.0).unwrap();
        assert_eq!(expansion_to_scattering(&z).evaluate(0.3), c(0.0));
        let e = ExponentialExpansion::new(vec![c(2.0), c(0.5)], vec![c(3.0), Complex64::new(0.0, 1.0)], 0.0).unwrap();
        assert_eq!(e.exponents, vec![c(0.5), c(2.0)]);
        let want = Complex64::new(3.0 * (-0.6f64).exp(), (-0.15f64).exp());
        assert!((e.evaluate(0.3) - want).norm() < 1e-15);
    }

    #[test]
    fn truncation_keeps_bound() {
        let lam: Vec<f64> = (1..=60).map(|k| k as f64).collect();
        let e = ExponentialExpansion::real(&lam, &[1.0; 60]).unwrap();
        let t = e.truncated(1.0, 1e-14);
        assert!(t.len() < 40 && t.truncation_bound < 1e-14);
        assert!((t.evaluate(1.0) - e.evaluate(1.0)).norm() < 1e-12);
    }

    #[test]
    fn dump_roundtrip() {
        let phi = ScatteringFunction::exponential(1.0, 1.0);
        let op = hankel_nystrom(&phi, 40, 0.0).unwrap();
        let dir = std::env::temp_dir().join(format!("hankeldet-dump-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        op.dump(&dir, "op").unwrap();
        let m = DiscretizedOperator::load_matrix(&dir, "op").unwrap();
        assert_eq!(m, op.kernel_matrix);
        std::fs::remove_dir_all(&dir).ok();
    }
}
