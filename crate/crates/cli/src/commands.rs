use crate::{Cli, Command, Failure, Output};
use hankeldet::barnes::{
    leading_asymptotics, phi1_function, phi2_function, residue_expand_phi1, residue_expand_phi2,
};
use hankeldet::determinants::{
    build_r_matrices, cauchy_binet_expansion, det_from_expansions_extrapolated, det_from_r, leading_term_approx,
    main_identity_lhs, main_identity_rhs, DetResult, Method,
};
use hankeldet::equilibrium::{
    equilibrium_density, linear_statistic_mean, step_mean_chebyshev, PotentialOnInterval, PotentialSpec,
};
use hankeldet::hankel::{expansion_to_scattering, ExponentialExpansion};
use hankeldet::orthopoly::{
    build_ladder, cd_kernel, hankel_det_product, linear_statistic_det, struve_hankel_det, MomentWeight, WeightSpec,
};
use hankeldet::symbols::{
    probe_grid, wiener_hopf_factorize, FactorRecord, GammaQuotientParams, Symbol, SymbolKind, SymbolSpec,
};
use hankeldet::verify::{self, VerifyConfig};
use hankeldet::{fmt_num, Complex64};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    if cli.nodes < 8 {
        return Err(Failure::Usage("--nodes must be at least 8".into()));
    }
    if cli.only.is_some() && !matches!(cli.command, Command::Verify) {
        return Err(Failure::Usage("--only applies to verify".into()));
    }
    let (name, body) = match &cli.command {
        Command::Factorize => ("factorize", factorize(&config(cli)?, cli)?),
        Command::Det => ("det", det(&config(cli)?, cli)?),
        Command::Barnes => ("barnes", barnes(&config(cli)?)?),
        Command::Moments => ("moments", moments(&config(cli)?)?),
        Command::Ortho => ("ortho", ortho(&config(cli)?, cli)?),
        Command::Struve => ("struve", struve(&config(cli)?)?),
        Command::Equilibrium => ("equilibrium", equilibrium(&config(cli)?)?),
        Command::Verify => {
            let cfg = VerifyConfig {
                tol: cli.tol,
                nodes: cli.nodes,
                only: cli.only.clone(),
            };
            let report = verify::run(&cfg)?;
            return Ok(Output {
                json: report.to_json(&cfg),
                csv: None,
            });
        }
    };
    let mut json = Map::new();
    json.insert("schema".into(), json!(1));
    json.insert("command".into(), json!(name));
    json.insert("tol".into(), json!(fmt_num(cli.tol)));
    json.insert("nodes".into(), json!(cli.nodes));
    let csv = match body {
        Value::Object(mut m) => {
            let csv = m.remove("csv").and_then(|v| v.as_str().map(String::from));
            json.extend(m);
            csv
        }
        other => {
            json.insert("result".into(), other);
            None
        }
    };
    Ok(Output {
        json: Value::Object(json),
        csv,
    })
}

fn config<T: DeserializeOwned>(cli: &Cli) -> Result<T, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Usage("this command needs --config <json>".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn c(z: Complex64) -> Value {
    json!([fmt_num(z.re), fmt_num(z.im)])
}

fn nums(v: &[f64]) -> Value {
    v.iter().map(|&x| fmt_num(x)).collect()
}

/// [(λ, ξ)] with both as [re, im] strings.
fn triples(e: &ExponentialExpansion) -> Value {
    e.exponents.iter().zip(&e.coefficients).map(|(&l, &x)| json!([c(l), c(x)])).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizeConfig {
    symbol: SymbolSpec,
    #[serde(default = "default_samples")]
    samples: usize,
}

fn default_samples() -> usize {
    8
}

fn factorize(cfg: &FactorizeConfig, cli: &Cli) -> Result<Value, Failure> {
    let sym = Symbol::from_spec(&cfg.symbol)?;
    let f = wiener_hopf_factorize(&sym, None, cli.tol)?;
    let probes = probe_grid(f.eps_prime, 64);
    let probe_residual = f.residual_on(&probes)?;
    let points: Vec<Complex64> = probes.iter().step_by((64 / cfg.samples.max(1)).max(1)).copied().collect();
    let rec = FactorRecord::from_factors(&f, &points)?;
    Ok(json!({
        "hash": rec.hash,
        "symbol": rec.symbol,
        "eps_prime": fmt_num(rec.eps_prime),
        "winding": rec.winding,
        "reconstruction_residual": fmt_num(rec.reconstruction_residual),
        "probe_residual": fmt_num(probe_residual),
        "split_radius": fmt_num(rec.chi_contour_data.split_radius),
        "tail_bound": fmt_num(rec.chi_contour_data.tail_bound),
        "samples": rec.samples.iter().map(|s| nums(s)).collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RealExpansion {
    exponents: Vec<f64>,
    coefficients: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetConfig {
    symbol: Option<SymbolSpec>,
    phi1: Option<RealExpansion>,
    phi2: Option<RealExpansion>,
    #[serde(default)]
    x: f64,
    /// Residue terms for the R-matrix route in symbol mode.
    #[serde(default = "default_k_terms")]
    k_terms: usize,
    /// Terms kept for the Cauchy-Binet expansion in symbol mode.
    #[serde(default = "default_cb_terms")]
    cb_terms: usize,
}

fn default_k_terms() -> usize {
    160
}

fn default_cb_terms() -> usize {
    6
}

fn deviations(vals: &[(&str, Complex64)]) -> Value {
    let mut out = Vec::new();
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            out.push(json!({
                "a": vals[i].0,
                "b": vals[j].0,
                "relative": fmt_num(rel(vals[i].1, vals[j].1)),
            }));
        }
    }
    Value::Array(out)
}

fn det(cfg: &DetConfig, cli: &Cli) -> Result<Value, Failure> {
    match (&cfg.symbol, &cfg.phi1, &cfg.phi2) {
        (Some(spec), None, None) => det_symbol(spec, cfg, cli),
        (None, Some(e1), Some(e2)) => det_expansions(e1, e2, cfg.x, cli),
        _ => Err(Failure::Usage("det needs either \"symbol\" or both \"phi1\" and \"phi2\"".into())),
    }
}

fn cb_json(partial: &[Complex64]) -> Value {
    partial.iter().map(|&z| c(z)).collect()
}

fn det_expansions(e1: &RealExpansion, e2: &RealExpansion, x: f64, cli: &Cli) -> Result<Value, Failure> {
    let e1 = ExponentialExpansion::real(&e1.exponents, &e1.coefficients)?;
    let e2 = ExponentialExpansion::real(&e2.exponents, &e2.coefficients)?;
    if e1.len() != e2.len() || e1.is_empty() {
        return Err(Failure::Usage("phi1 and phi2 need the same positive number of terms".into()));
    }
    if !(x >= 0.0) {
        return Err(Failure::Usage("x must be non-negative".into()));
    }
    let hash = format!("{:x}", fnv(&format!("{:?}{:?}{x}", e1, e2)));
    // Γ_φ on L²(x, ∞) is Γ_{φ(· + 2x)} on L²(0, ∞)
    let p1 = expansion_to_scattering(&e1).shifted(2.0 * x);
    let p2 = expansion_to_scattering(&e2).shifted(2.0 * x);
    let nys = main_identity_rhs(&p1, &p2, cli.nodes)?.det;
    let pair = build_r_matrices(&e1, &e2, x, e1.len())?;
    let rm = det_from_r(&pair)?;
    let cb = cauchy_binet_expansion(&pair, e1.len())?;
    let cb_val = *cb.partial_sums.last().unwrap_or(&Complex64::new(1.0, 0.0));
    let lead = leading_term_approx(&pair);
    let cb_res = DetResult {
        value: cb_val,
        method: Method::CauchyBinet,
        error_estimate: 0.0,
    };
    Ok(json!({
        "mode": "expansions",
        "x": fmt_num(x),
        "params_hash": hash,
        "methods": [nys.to_json(&hash), rm.to_json(&hash), cb_res.to_json(&hash), lead.to_json(&hash)],
        "cauchy_binet_partial_sums": cb_json(&cb.partial_sums),
        "deviations": deviations(&[
            ("nystrom", nys.value),
            ("rmatrix", rm.value),
            ("cauchy_binet", cb_val),
            ("leading_term", lead.value),
        ]),
    }))
}

// Stable 64-bit FNV-1a, used to tag expansion-mode results.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn det_symbol(spec: &SymbolSpec, cfg: &DetConfig, cli: &Cli) -> Result<Value, Failure> {
    if cfg.x != 0.0 {
        return Err(Failure::Usage("symbol mode computes the identity at x = 0 only".into()));
    }
    let hash = spec.content_hash();
    let sym = Symbol::from_spec(spec)?;
    let f = wiener_hopf_factorize(&sym, None, cli.tol)?;
    let lhs = main_identity_lhs(&sym, &f, 0.0, (cli.nodes / 2).max(16))?;
    let mut methods = vec![lhs.to_json(&hash)];
    let mut vals = vec![("lhs", lhs.value)];
    let params = match &spec.kind {
        SymbolKind::GammaQuotient(p) => Some(p.clone()),
        SymbolKind::SinhKernel(s) => Some(GammaQuotientParams::sinh_kernel(s.gamma)),
        _ => None,
    };
    let mut body = json!({ "mode": "symbol", "params_hash": hash });
    if let Some(p) = params {
        let k = cfg.k_terms.max(2 * cfg.cb_terms).max(4);
        let rhs = main_identity_rhs(&phi1_function(&p, k, 1e-6)?, &phi2_function(&p, k, 1e-6)?, cli.nodes)?;
        let e1 = residue_expand_phi1(&p, k)?;
        let e2 = residue_expand_phi2(&p, k)?;
        let rm = det_from_expansions_extrapolated(&e1, &e2, 0.0, k / 2)?;
        let pair = build_r_matrices(&e1, &e2, 0.0, cfg.cb_terms.min(e1.len()))?;
        let cb = cauchy_binet_expansion(&pair, pair.lambda.len())?;
        let lead = leading_term_approx(&pair);
        methods.push(rhs.det.to_json(&hash));
        methods.push(rm.to_json(&hash));
        methods.push(lead.to_json(&hash));
        vals.push(("rhs_nystrom", rhs.det.value));
        vals.push(("rhs_det2", rhs.det2.value));
        vals.push(("rmatrix", rm.value));
        body["cauchy_binet_terms"] = json!(pair.lambda.len());
        body["cauchy_binet_partial_sums"] = cb_json(&cb.partial_sums);
        body["leading_term"] = c(lead.value);
    } else {
        body["note"] = json!("no residue expansion for this symbol family; LHS only");
    }
    body["methods"] = Value::Array(methods);
    body["values"] = vals.iter().map(|(n, v)| json!({ "name": n, "value": c(*v) })).collect();
    body["deviations"] = deviations(&vals);
    Ok(body)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BarnesConfig {
    a: Value,
    b: Value,
    c: Value,
    d: Value,
    #[serde(default = "default_barnes_terms")]
    k_terms: usize,
    #[serde(default)]
    x: Vec<f64>,
}

fn default_barnes_terms() -> usize {
    40
}

fn barnes(cfg: &BarnesConfig) -> Result<Value, Failure> {
    let p: GammaQuotientParams = serde_json::from_value(json!({"a": cfg.a, "b": cfg.b, "c": cfg.c, "d": cfg.d}))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    p.check_balance()?;
    let e1 = residue_expand_phi1(&p, cfg.k_terms)?;
    let e2 = residue_expand_phi2(&p, cfg.k_terms)?;
    let (c1, r1, c2, r2) = leading_asymptotics(&p)?;
    let mut values = Vec::new();
    if !cfg.x.is_empty() {
        let x_min = cfg.x.iter().copied().fold(f64::INFINITY, f64::min);
        if !(x_min > 0.0) {
            return Err(Failure::Usage("sample points must be positive".into()));
        }
        let f1 = phi1_function(&p, cfg.k_terms, x_min)?;
        let f2 = phi2_function(&p, cfg.k_terms, x_min)?;
        for &x in &cfg.x {
            values.push(json!({ "x": fmt_num(x), "phi1": c(f1.evaluate(x)), "phi2": c(f2.evaluate(x)) }));
        }
    }
    Ok(json!({
        "m": p.m(),
        "phi1": { "terms": triples(&e1), "truncation_bound": fmt_num(e1.truncation_bound) },
        "phi2": { "terms": triples(&e2), "truncation_bound": fmt_num(e2.truncation_bound) },
        "leading": {
            "phi1": { "coefficient": c(c1), "rate": fmt_num(r1) },
            "phi2": { "coefficient": c(c2), "rate": fmt_num(r2) },
        },
        "values": values,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentsConfig {
    weight: WeightSpec,
    n: usize,
}

fn moments(cfg: &MomentsConfig) -> Result<Value, Failure> {
    let w = MomentWeight::from_spec(&cfg.weight)?;
    let m = w.moments(cfg.n)?;
    Ok(json!({
        "weight": cfg.weight,
        "moments": nums(&m),
        "csv": w.moments_csv(cfg.n)?,
    }))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Statistic {
    /// f = height·1{x > t}
    Step { t: f64, height: f64 },
    /// f = slope·x
    Linear { slope: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrthoConfig {
    weight: WeightSpec,
    n: usize,
    statistic: Option<Statistic>,
}

fn ortho(cfg: &OrthoConfig, cli: &Cli) -> Result<Value, Failure> {
    if cfg.n == 0 {
        return Err(Failure::Usage("n must be positive".into()));
    }
    let w = MomentWeight::from_spec(&cfg.weight)?;
    let ladder = build_ladder(&w, cfg.n)?;
    let (d, prod) = hankel_det_product(&w, cfg.n)?;
    let mut body = json!({
        "weight": cfg.weight,
        "n": cfg.n,
        "h": nums(&ladder.h),
        "alpha": nums(&ladder.alpha),
        "beta": nums(&ladder.beta),
        "orthogonality_residual": fmt_num(ladder.orthogonality_residual),
        "hankel_det": fmt_num(d),
        "norm_product": fmt_num(prod),
    });
    // the kernel needs pointwise weight values
    if matches!(cfg.weight, WeightSpec::CustomTable { .. }) {
        if cfg.statistic.is_some() {
            return Err(Failure::Usage("a moment table has no kernel; drop \"statistic\"".into()));
        }
        return Ok(body);
    }
    let q = cd_kernel(&ladder, &w, cfg.n)?;
    let (x, gw) = q.nodes(cli.nodes, &[]);
    let trace: f64 = x.iter().zip(&gw).map(|(&xi, &wi)| wi * q.evaluate(xi, xi)).sum();
    body["kernel_trace"] = json!(fmt_num(trace));
    if let Some(s) = &cfg.statistic {
        let v = match *s {
            Statistic::Step { t, height } => {
                linear_statistic_det(&q, &move |x: f64| if x > t { height } else { 0.0 }, cli.nodes, &[t])?
            }
            Statistic::Linear { slope } => linear_statistic_det(&q, &move |x: f64| slope * x, cli.nodes, &[])?,
        };
        body["statistic_det"] = json!(fmt_num(v));
    }
    Ok(body)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StruveConfig {
    n: usize,
    t: f64,
}

fn struve(cfg: &StruveConfig) -> Result<Value, Failure> {
    let (d, q) = struve_hankel_det(cfg.n, cfg.t)?;
    Ok(json!({
        "n": cfg.n,
        "t": fmt_num(cfg.t),
        "hankel_det": fmt_num(d),
        "nfold_integral": fmt_num(q),
        "relative_deviation": fmt_num((d - q).abs() / q.abs().max(f64::MIN_POSITIVE)),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquilibriumConfig {
    potential: PotentialSpec,
    #[serde(default = "default_n_max")]
    n_max: usize,
    #[serde(default)]
    step_t: Vec<f64>,
    #[serde(default = "default_csv_samples")]
    samples: usize,
}

fn default_n_max() -> usize {
    64
}

fn default_csv_samples() -> usize {
    201
}

fn equilibrium(cfg: &EquilibriumConfig) -> Result<Value, Failure> {
    let pot = PotentialOnInterval::from_spec(&cfg.potential)?;
    let d = equilibrium_density(&pot, cfg.n_max)?;
    let mut steps = Vec::new();
    for &t in &cfg.step_t {
        let quad = linear_statistic_mean(&d, &move |x: f64| if x > t { 1.0 } else { 0.0 }, &[t])?;
        let mut row = json!({ "t": fmt_num(t), "quadrature": fmt_num(quad) });
        if pot.a == -1.0 && pot.b == 1.0 {
            row["series"] = json!(fmt_num(step_mean_chebyshev(&pot, t, cfg.n_max)?));
        }
        steps.push(row);
    }
    Ok(json!({
        "potential": cfg.potential,
        "support": [fmt_num(d.a), fmt_num(d.b)],
        "cheb_coeffs": nums(&d.cheb_coeffs),
        "min_theta_density": fmt_num(d.min_theta_density),
        "admissible": d.admissible,
        "mass": fmt_num(d.mass()),
        "step_means": steps,
        "csv": d.sample_csv(cfg.samples),
    }))
}
