//! Command-line front end. Every subcommand is a thin wrapper that loads a
//! model descriptor, calls the library and renders a [`Report`] as CSV or
//! canonical JSON.

pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exceptional::{
    find_eps_with, robustness_sweep, series_check, Disorder, EpReport, RobustnessConfig, SeriesSpec, Side,
};
use crate::gauge::{build_gauge, Gauge, DEFAULT_TOL};
use crate::hamiltonian::descriptor::{content_hash, load_model, to_canonical_json};
use crate::hamiltonian::ChainModel;
use crate::models::{build_biased, build_defect, BiasedBoundary, BiasedSpec, DefectSpec};
use crate::numerics::{format_rational, parse_rational, rational_to_f64, GaussianRational};
use crate::spectral::{eigen_general, evolve, SpectralOptions};
use crate::two_level::{hermitize_via_g, metric_from_condition, Mat2, PtMatrix};

use output::{complex_json, float_json, num, Format, Meta, Report};

#[derive(Parser, Debug)]
#[command(
    name = "qhchain",
    version,
    about = "Non-Hermitian tridiagonal chains: gauges, spectra, exceptional points"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Override the gauge and solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for stochastic commands (recorded in the output).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a model descriptor for one of the built-in families.
    Generate(GenerateArgs),
    /// Eigenvalues with multiplicities, reality flags and residuals.
    Spectrum(PointArgs),
    /// Diagonal similarity gauge and quasi-Hermiticity verdict.
    Gauge(PointArgs),
    /// Exact discriminant of the characteristic polynomial.
    Discriminant(ModelArgs),
    /// Exceptional points: real discriminant roots and their Jordan structure.
    Ep(ModelArgs),
    /// Eigenvalue branches over a parameter range.
    Sweep(SweepArgs),
    /// Metric-preserving time evolution.
    Evolve(EvolveArgs),
    /// EP location under random couplings.
    Robustness(RobustnessArgs),
    /// Metric and hermitization of [[a, b], [b*, a*]].
    Metric2x2(MetricArgs),
    /// Power-law fit of eigenvalue branches near a parameter value.
    SeriesCheck(SeriesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    BiasedObc,
    BiasedPbcNaive,
    BiasedPbcCorrected,
    Defect,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: Family,
    #[arg(long)]
    pub n: usize,
    /// Hopping scale J.
    #[arg(long, default_value = "1")]
    pub j: String,
    /// Fix δ instead of keeping it symbolic.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Forward couplings: one value for all bonds or a comma list.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub t: String,
    /// Backward couplings before the perturbation (comma list).
    #[arg(long, allow_hyphen_values = true)]
    pub back: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub beta: String,
    /// Fix γ instead of keeping it symbolic.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Perturbed bond, 1-based (default N−1).
    #[arg(long)]
    pub bond: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Descriptor file, or - for stdin.
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    pub model: PathBuf,
    /// Parameter value (exact: 1/3, 0.25, -2).
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub model: PathBuf,
    /// lo:hi:steps
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    pub model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<String>,
    /// Initial state as a comma list of complex numbers (2, -1.5i, 0.5+2i);
    /// drawn at random from --seed when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub psi0: Option<String>,
    /// lo:hi:steps
    #[arg(long, default_value = "0:10:101")]
    pub times: String,
}

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub bond: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Value of the fixed coupling t_k.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub fixed: String,
    #[arg(long, value_enum, default_value_t = DisorderArg::Symmetric)]
    pub disorder: DisorderArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DisorderArg {
    Symmetric,
    Independent,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    /// Use [[iγ, 1], [1, −iγ]].
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    pub gamma: Option<f64>,
    /// Diagonal entry a as a complex literal.
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    pub a: Option<String>,
    /// Off-diagonal entry b as a complex literal.
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Above,
    Below,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    pub model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum)]
    pub side: SideArg,
    #[arg(long, default_value_t = 1e-10)]
    pub near: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub far: f64,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    #[arg(long, default_value_t = 2)]
    pub branches: usize,
}

/// Parse arguments, run, print; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn options(cli: &Cli) -> SpectralOptions {
    let mut o = SpectralOptions::default();
    if let Some(t) = cli.tol {
        o.tol = t;
    }
    o
}

fn gauge_tol(cli: &Cli) -> f64 {
    cli.tol.unwrap_or(DEFAULT_TOL)
}

fn read_model(path: &PathBuf) -> Result<ChainModel> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    load_model(&text)
}

fn rational(text: &str, what: &str) -> Result<BigRational> {
    parse_rational(text).ok_or_else(|| Error::Usage(format!("{what}: not a number: {text:?}")))
}

fn rational_list(text: &str, what: &str) -> Result<Vec<BigRational>> {
    text.split(',').map(|s| rational(s, what)).collect()
}

/// "2", "-1.5i", "0.5+2i", "1e-3-4i".
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("not a complex number: {text:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(Complex64::new(
        re.parse().map_err(|_| bad())?,
        im.parse().map_err(|_| bad())?,
    ))
}

fn param_of(model: &ChainModel, text: &Option<String>) -> Result<Option<BigRational>> {
    match text {
        Some(t) => Ok(Some(rational(t, "--param")?)),
        None if model.is_symbolic() => Err(Error::Usage(format!(
            "model depends on {}; pass --param",
            model.parameter_or_default()
        ))),
        None => Ok(None),
    }
}

fn meta(model: Option<&ChainModel>, seed: Option<u64>) -> Meta {
    Meta {
        model_hash: model.map(content_hash),
        seed,
    }
}

fn parameter_json(model: &ChainModel, param: &Option<BigRational>) -> Value {
    match param {
        Some(p) => json!({ "name": model.parameter_or_default(), "value": format_rational(p) }),
        None => Value::Null,
    }
}

fn execute(cli: &Cli) -> Result<String> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Usage("--tol must be a nonnegative number".into()));
        }
    }
    let report = match &cli.command {
        Command::Generate(a) => return generate(a),
        Command::Spectrum(a) => spectrum(cli, a)?,
        Command::Gauge(a) => gauge(cli, a)?,
        Command::Discriminant(a) => discriminant(a)?,
        Command::Ep(a) => ep(cli, a)?,
        Command::Sweep(a) => sweep_cmd(cli, a)?,
        Command::Evolve(a) => evolve_cmd(cli, a)?,
        Command::Robustness(a) => robustness(cli, a)?,
        Command::Metric2x2(a) => metric2x2(cli, a)?,
        Command::SeriesCheck(a) => series(cli, a)?,
    };
    report.render(cli.format)
}

fn generate(a: &GenerateArgs) -> Result<String> {
    let model = match a.kind {
        Family::Defect => {
            if a.n < 2 {
                return Err(Error::Usage("--n must be at least 2".into()));
            }
            let mut t = rational_list(&a.t, "--t")?;
            if t.len() == 1 {
                t = vec![t[0].clone(); a.n - 1];
            }
            build_defect(&DefectSpec {
                n: a.n,
                beta: rational(&a.beta, "--beta")?,
                t,
                j: a.back.as_deref().map(|s| rational_list(s, "--back")).transpose()?,
                bond: a.bond.unwrap_or(a.n - 1),
                gamma: a.gamma.as_deref().map(|s| rational(s, "--gamma")).transpose()?,
            })?
        }
        kind => build_biased(&BiasedSpec {
            n: a.n,
            hopping: rational(&a.j, "--j")?,
            delta: a.delta.as_deref().map(|s| rational(s, "--delta")).transpose()?,
            boundary: match kind {
                Family::BiasedObc => BiasedBoundary::Obc,
                Family::BiasedPbcNaive => BiasedBoundary::PbcNaive,
                _ => BiasedBoundary::PbcCorrected,
            },
        })?,
    };
    Ok(to_canonical_json(&model))
}

fn spectrum(cli: &Cli, a: &PointArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let param = param_of(&model, &a.param)?;
    let s = eigen_general(&model, param.as_ref(), &options(cli))?;
    let clusters: Vec<Value> = s
        .clusters
        .iter()
        .map(|c| {
            json!({
                "re": c.value.re,
                "im": c.value.im,
                "exact": c.exact.as_ref().map(|e| e.to_string()),
                "algebraic": c.algebraic,
                "geometric": c.geometric,
                "real": c.real,
                "residual": float_json(c.residual),
            })
        })
        .collect();
    let mut r = Report::new(
        meta(Some(&model), None),
        json!({
            "parameter": parameter_json(&model, &param),
            "method": format!("{:?}", s.method),
            "real": s.is_real(),
            "eigenvalues": clusters,
        }),
        &["re", "im", "exact", "algebraic", "geometric", "real", "residual"],
    );
    for c in &s.clusters {
        r.rows.push(vec![
            num(c.value.re),
            num(c.value.im),
            c.exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
            c.algebraic.to_string(),
            c.geometric.to_string(),
            c.real.to_string(),
            num(c.residual),
        ]);
    }
    Ok(r)
}

fn gauge(cli: &Cli, a: &PointArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let param = param_of(&model, &a.param)?;
    let g = build_gauge(&model, param.as_ref(), gauge_tol(cli))?;
    let ratios = g.ratios_c64();
    let weights = g.weights();
    let metric = g.metric();
    let exact_weights: Option<Vec<String>> = match &g {
        Gauge::Exact(r) => r
            .weights_squared
            .as_ref()
            .map(|w| w.iter().map(GaussianRational::to_string).collect()),
        Gauge::Numeric(_) => None,
    };
    let transformed = g.transformed_c64().map(|t| {
        json!({
            "diag": t.diag.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            "upper": t.upper.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            "lower": t.lower.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            "corner": t.corner.as_ref().map(|c| json!({
                "h_1n": complex_json(c.h_1n),
                "h_n1": complex_json(c.h_n1),
            })),
        })
    });
    let mut r = Report::new(
        meta(Some(&model), None),
        json!({
            "parameter": parameter_json(&model, &param),
            "verdict": g.verdict().to_string(),
            "witness": g.witness().map(|w| serde_json::to_value(w).expect("serializable")),
            "ratios": ratios.iter().map(|(bond, v, kind)| json!({
                "bond": bond,
                "value": v.map(complex_json),
                "kind": serde_json::to_value(kind).expect("serializable"),
            })).collect::<Vec<_>>(),
            "weights": weights.clone().map(|w| w.into_iter().map(float_json).collect::<Vec<_>>()),
            "weights_squared_exact": exact_weights,
            "metric": metric.clone().map(|w| w.into_iter().map(float_json).collect::<Vec<_>>()),
            "transformed": transformed,
        }),
        &[
            "site",
            "weight",
            "metric",
            "ratio_re",
            "ratio_im",
            "ratio_kind",
            "verdict",
        ],
    );
    let verdict = g.verdict().to_string();
    for site in 0..model.n() {
        let ratio = ratios.iter().find(|(b, _, _)| *b == site + 1);
        r.rows.push(vec![
            (site + 1).to_string(),
            weights.as_ref().map(|w| num(w[site])).unwrap_or_default(),
            metric.as_ref().map(|w| num(w[site])).unwrap_or_default(),
            ratio.and_then(|r| r.1).map(|v| num(v.re)).unwrap_or_default(),
            ratio.and_then(|r| r.1).map(|v| num(v.im)).unwrap_or_default(),
            ratio
                .map(|r| {
                    serde_json::to_value(r.2)
                        .expect("serializable")
                        .as_str()
                        .unwrap_or_default()
                        .to_string()
                })
                .unwrap_or_default(),
            verdict.clone(),
        ]);
    }
    Ok(r)
}

/// Exact coefficients as strings, lowest degree first.
pub fn coefficient_strings(p: &crate::numerics::ParamPoly) -> Vec<String> {
    p.coeffs().iter().map(GaussianRational::to_string).collect()
}

fn discriminant(a: &ModelArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let f = crate::exceptional::discriminant_of_model(&model)?;
    let name = model.parameter_or_default().to_string();
    let coeffs = coefficient_strings(&f);
    let mut r = Report::new(
        meta(Some(&model), None),
        json!({
            "parameter": name,
            "degree": f.degree(),
            "coefficients": coeffs,
            "polynomial": f.display_with(&name).to_string(),
        }),
        &["power", "coefficient"],
    );
    for (k, c) in coeffs.into_iter().enumerate() {
        r.rows.push(vec![k.to_string(), c]);
    }
    Ok(r)
}

/// JSON document for an EP search (shared with the C interface).
pub fn ep_json(report: &EpReport) -> Value {
    let candidates: Vec<Value> = report
        .candidates
        .iter()
        .map(|c| {
            json!({
                "location": c.location.to_string(),
                "approx": c.location.approx(),
                "root_multiplicity": c.root_multiplicity,
                "is_ep": c.is_ep(),
                "diabolic": c.is_diabolic(),
                "order": c.order(),
                "coalescences": c.coalescences.iter().map(|k| json!({
                    "re": k.value.re,
                    "im": k.value.im,
                    "exact": k.exact.as_ref().map(|e| e.to_string()),
                    "algebraic": k.algebraic,
                    "geometric": k.geometric,
                    "order": k.order,
                    "certified": k.certified,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "parameter": report.parameter,
        "discriminant": coefficient_strings(&report.discriminant),
        "degree": report.degree,
        "excluded": report.excluded.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "candidates": candidates,
    })
}

fn ep(cli: &Cli, a: &ModelArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let report = find_eps_with(&model, &options(cli))?;
    let mut r = Report::new(
        meta(Some(&model), None),
        ep_json(&report),
        &[
            "location",
            "approx",
            "root_multiplicity",
            "is_ep",
            "eigen_re",
            "eigen_im",
            "eigen_exact",
            "algebraic",
            "geometric",
            "order",
        ],
    );
    for c in &report.candidates {
        let base = [
            c.location.to_string(),
            num(c.location.approx()),
            c.root_multiplicity.to_string(),
            c.is_ep().to_string(),
        ];
        if c.coalescences.is_empty() {
            let mut row = base.to_vec();
            row.extend(std::iter::repeat(String::new()).take(6));
            r.rows.push(row);
        }
        for k in &c.coalescences {
            let mut row = base.to_vec();
            row.extend([
                num(k.value.re),
                num(k.value.im),
                k.exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                k.algebraic.to_string(),
                k.geometric.to_string(),
                k.order.to_string(),
            ]);
            r.rows.push(row);
        }
    }
    Ok(r)
}

fn sweep_cmd(cli: &Cli, a: &SweepArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let (lo, hi, steps) = sweep::parse_range(&a.range)?;
    let table = sweep::sweep(&model, &sweep::linspace(lo, hi, steps), &options(cli))?;
    for x in &table.clipped {
        eprintln!(
            "warning: {} = {x} is a pole of the model; point dropped",
            table.parameter
        );
    }
    let n = model.n();
    let mut header = vec![table.parameter.clone()];
    for k in 1..=n {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut r = Report::new(
        meta(Some(&model), None),
        json!({
            "parameter": table.parameter,
            "grid": table.grid,
            "branches": table.rows.iter().map(|row| row.iter().map(|z| complex_json(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "clipped": table.clipped,
        }),
        &header_refs,
    );
    for (x, row) in table.grid.iter().zip(&table.rows) {
        let mut line = vec![num(*x)];
        for z in row {
            line.push(num(z.re));
            line.push(num(z.im));
        }
        r.rows.push(line);
    }
    Ok(r)
}

fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = DVector::from_column_slice(&v).norm();
    v.into_iter().map(|z| z / norm).collect()
}

fn evolve_cmd(cli: &Cli, a: &EvolveArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let param = param_of(&model, &a.param)?;
    let (psi0, seed) = match &a.psi0 {
        Some(text) => (text.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?, None),
        None => {
            let seed = cli.seed.unwrap_or(0);
            (random_state(model.n(), seed), Some(seed))
        }
    };
    let (lo, hi, steps) = sweep::parse_range(&a.times)?;
    let times = sweep::linspace(lo, hi, steps);
    let trace = evolve(&model, param.as_ref(), &psi0, &times)?;
    let n = model.n();
    let mut header = vec!["t".to_string(), "eta_norm".into(), "gauge_norm".into()];
    for k in 1..=n {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut r = Report::new(
        meta(Some(&model), seed),
        json!({
            "parameter": parameter_json(&model, &param),
            "weights": trace.weights,
            "eta_drift": trace.eta_drift(),
            "gauge_norm_drift": trace.gauge_norm_drift(),
            "times": trace.times,
            "eta_norms": trace.eta_norms,
            "gauge_norms": trace.gauge_norms,
            "states": trace.states.iter().map(|s| s.iter().map(|z| complex_json(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        &header_refs,
    );
    for k in 0..trace.times.len() {
        let mut line = vec![num(trace.times[k]), num(trace.eta_norms[k]), num(trace.gauge_norms[k])];
        for z in trace.states[k].iter() {
            line.push(num(z.re));
            line.push(num(z.im));
        }
        r.rows.push(line);
    }
    Ok(r)
}

fn ordering_name(o: Option<std::cmp::Ordering>) -> &'static str {
    match o {
        Some(std::cmp::Ordering::Less) => "below",
        Some(std::cmp::Ordering::Equal) => "equal",
        Some(std::cmp::Ordering::Greater) => "above",
        None => "none",
    }
}

fn robustness(cli: &Cli, a: &RobustnessArgs) -> Result<Report> {
    let seed = cli.seed.unwrap_or(0);
    let config = RobustnessConfig {
        n: a.n,
        bond: a.bond.unwrap_or(a.n.saturating_sub(1)),
        fixed: rational(&a.fixed, "--fixed")?,
        trials: a.trials,
        seed,
        disorder: match a.disorder {
            DisorderArg::Symmetric => Disorder::Symmetric,
            DisorderArg::Independent => Disorder::Independent,
        },
    };
    let s = robustness_sweep(&config)?;
    let mut r = Report::new(
        meta(None, Some(seed)),
        json!({
            "n": config.n,
            "bond": config.bond,
            "fixed": format_rational(&config.fixed),
            "disorder": serde_json::to_value(config.disorder).expect("serializable"),
            "trials": config.trials,
            "at_fixed": s.at_fixed(),
            "above_fixed": s.above_fixed(),
            "below_fixed": s.below_fixed(),
            "without_ep": s.without_ep(),
            "outcomes": s.trials.iter().map(|t| json!({
                "trial": t.trial,
                "t": t.t.iter().map(format_rational).collect::<Vec<_>>(),
                "back": t.j.as_ref().map(|j| j.iter().map(format_rational).collect::<Vec<_>>()),
                "eps": t.ep_locations.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "smallest_positive": t.smallest_positive.as_ref().map(|l| l.to_string()),
                "versus_fixed": ordering_name(t.versus_fixed),
            })).collect::<Vec<_>>(),
        }),
        &["trial", "smallest_positive", "approx", "versus_fixed", "ep_count"],
    );
    for t in &s.trials {
        r.rows.push(vec![
            t.trial.to_string(),
            t.smallest_positive.as_ref().map(|l| l.to_string()).unwrap_or_default(),
            t.smallest_positive
                .as_ref()
                .map(|l| num(l.approx()))
                .unwrap_or_default(),
            ordering_name(t.versus_fixed).to_string(),
            t.ep_locations.len().to_string(),
        ]);
    }
    Ok(r)
}

fn mat_json(m: &Mat2) -> Value {
    json!([
        [complex_json(m[(0, 0)]), complex_json(m[(0, 1)])],
        [complex_json(m[(1, 0)]), complex_json(m[(1, 1)])],
    ])
}

fn metric2x2(cli: &Cli, a: &MetricArgs) -> Result<Report> {
    let h = match (a.gamma, &a.a, &a.b) {
        (Some(g), _, _) => PtMatrix::imaginary_potential(g),
        (None, Some(x), Some(y)) => PtMatrix {
            a: parse_complex(x)?,
            b: parse_complex(y)?,
        },
        _ => return Err(Error::Usage("pass --gamma, or both --a and --b".into())),
    };
    let g = metric_from_condition(&h)?;
    let [g1, g2] = g.eigenvalues();
    let mut doc = Map::new();
    doc.insert("h".into(), mat_json(&h.matrix()));
    doc.insert("g12".into(), complex_json(g.g12));
    doc.insert("metric_eigenvalues".into(), json!([g1, g2]));
    doc.insert("positive_definite".into(), Value::Bool(g.is_positive_definite()));
    let mut r = Report::new(meta(None, None), Value::Null, &["quantity", "row", "col", "re", "im"]);
    let push = |r: &mut Report, name: &str, m: &Mat2| {
        for i in 0..2 {
            for j in 0..2 {
                r.rows.push(vec![
                    name.into(),
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                    num(m[(i, j)].re),
                    num(m[(i, j)].im),
                ]);
            }
        }
    };
    push(&mut r, "h", &h.matrix());
    push(&mut r, "g", &g.matrix());
    if g.is_positive_definite() {
        let out = hermitize_via_g(&h.matrix(), &g, cli.tol.unwrap_or(1e-12))?;
        doc.insert("sqrt_metric".into(), mat_json(&out.sqrt_metric));
        doc.insert("transformed".into(), mat_json(&out.transformed));
        doc.insert("condition_residual".into(), float_json(out.condition_residual));
        doc.insert("hermiticity_residual".into(), float_json(out.hermiticity_residual));
        push(&mut r, "sqrt_g", &out.sqrt_metric);
        push(&mut r, "h_tilde", &out.transformed);
    } else {
        eprintln!("warning: metric is not positive-definite; no hermitization");
    }
    r.json = Value::Object(doc);
    Ok(r)
}

fn series(cli: &Cli, a: &SeriesArgs) -> Result<Report> {
    let model = read_model(&a.model)?;
    let point = rational(&a.point, "--point")?;
    if !(a.near > 0.0 && a.far > a.near) {
        return Err(Error::Usage("need 0 < --near < --far".into()));
    }
    let side = match a.side {
        SideArg::Above => Side::Above,
        SideArg::Below => Side::Below,
    };
    let spec = SeriesSpec::geometric(point.clone(), side, a.near, a.far, a.steps, a.branches);
    let check = series_check(&model, &spec, &options(cli))?;
    let mut r = Report::new(
        meta(Some(&model), None),
        json!({
            "point": format_rational(&point),
            "point_approx": rational_to_f64(&point),
            "side": serde_json::to_value(side).expect("serializable"),
            "distances": check.distances,
            "fits": check.fits.iter().map(|f| json!({
                "branch": f.branch,
                "exponent": float_json(f.exponent),
                "coefficient": complex_json(f.coefficient),
                "residual": float_json(f.residual),
                "reliable": f.reliable,
            })).collect::<Vec<_>>(),
        }),
        &[
            "branch",
            "exponent",
            "coefficient_re",
            "coefficient_im",
            "residual",
            "reliable",
        ],
    );
    for f in &check.fits {
        if !f.reliable {
            eprintln!(
                "warning: branch {} fit residual {:e} is above the reliability limit",
                f.branch, f.residual
            );
        }
        r.rows.push(vec![
            f.branch.to_string(),
            num(f.exponent),
            num(f.coefficient.re),
            num(f.coefficient.im),
            num(f.residual),
            f.reliable.to_string(),
        ]);
    }
    Ok(r)
}
