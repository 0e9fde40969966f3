use std::collections::BTreeMap;
use std::path::Path;

use ermcurve::classification::{erm_curve, expected_erm_risk};
use ermcurve::corrections::{corrected_curve, corrected_expected_erm, limit_curve, LimitVariant};
use ermcurve::montecarlo::{estimate_erm_risk, GibbsSampler, McConfig};
use ermcurve::pac::{
    classical_pac_bound, fit_attunement_dist, fit_attunement_samples, pac_sample_bound,
    posterior_tail, PacQuery,
};
use ermcurve::regression::regression_curve;
use ermcurve::{ClassificationScenario, Curve, Error, HypothesisCount, RiskDistribution};
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{csv_table, fmt_g};
use crate::{BoundChoice, Command, McArgs, PerceptronVariant, SamplerChoice};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 1 for computational failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) if is_input_error(e) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    match e {
        Error::Domain(_) | Error::Unsupported(_) => true,
        Error::CurvePoint { source, .. } => is_input_error(source),
        _ => false,
    }
}

/// Everything a subcommand produces besides timing.
pub struct Outcome {
    pub subcommand: &'static str,
    pub body: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
    pub diagnostics: BTreeMap<String, Value>,
}

impl Outcome {
    fn new(subcommand: &'static str) -> Self {
        Outcome {
            subcommand,
            body: String::new(),
            parameters: BTreeMap::new(),
            seed: None,
            warnings: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

fn version_meta() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    m
}

fn curve_csv(curve: &Curve) -> String {
    let mut meta = version_meta();
    meta.extend(curve.metadata.clone());
    let rows: Vec<Vec<f64>> = curve.points.iter().map(|&(x, y)| vec![x, y]).collect();
    csv_table(
        &meta,
        &[curve.x_label.as_str(), curve.y_label.as_str()],
        &rows,
    )
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::BetaRiskCurve { a, b, h, m } => {
            let dist = RiskDistribution::beta(*a, *b)?;
            let curve = erm_curve(&ClassificationScenario::new(dist, 0, *h)?, &m.points)?;
            let mut out = Outcome::new("beta-risk-curve");
            out.param("a", *a)
                .param("b", *b)
                .param("H", h.to_string())
                .param("m", m.text.as_str());
            out.body = curve_csv(&curve);
            Ok(out)
        }
        Command::GammaPrecisionCurve { a, h, m } => {
            let curve = regression_curve(*a, *h, &m.points)?;
            let mut out = Outcome::new("gamma-precision-curve");
            out.param("a", *a)
                .param("H", h.to_string())
                .param("m", m.text.as_str());
            out.body = curve_csv(&curve);
            Ok(out)
        }
        Command::Rho { dist, r, log } => rho(dist, &r.points, &r.text, *log),
        Command::PerceptronCurve { p, m, variant, h } => {
            perceptron(*p, &m.points, &m.text, *variant, *h)
        }
        Command::LimitCurve { alpha } => limit(&alpha.points, &alpha.text),
        Command::PacBound {
            a,
            b,
            epsilon,
            delta,
            variant,
            h,
        } => pac(*a, *b, *epsilon, *delta, *variant, *h),
        Command::McValidate(args) => mc_validate(args),
        Command::FitAttunement {
            dist,
            samples,
            window,
            points,
        } => fit(dist.as_ref(), samples.as_deref(), &window.points, *points),
    }
}

fn rho(dist: &RiskDistribution, grid: &[f64], text: &str, log: bool) -> Result<Outcome, CliError> {
    let values: Vec<f64> = grid
        .iter()
        .map(|&r| {
            if log {
                dist.log_density(r)
            } else {
                dist.density(r)
            }
        })
        .collect::<Result<_, _>>()?;
    let densities: Vec<f64> = if log {
        values.iter().map(|v| v.exp()).collect()
    } else {
        values.clone()
    };
    let trapezoid: f64 = grid
        .windows(2)
        .zip(densities.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum();

    let mut meta = version_meta();
    meta.insert("model".into(), dist.to_string());
    let (lo, hi) = dist.support();
    meta.insert("support".into(), format!("{}:{}", fmt_g(lo), fmt_g(hi)));
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .zip(&values)
        .map(|(&r, &v)| vec![r, v])
        .collect();
    let mut out = Outcome::new("rho");
    out.param("dist", dist.to_string())
        .param("r", text)
        .param("log", log);
    out.diagnostics
        .insert("trapezoid_integral".into(), json!(trapezoid));
    out.body = csv_table(
        &meta,
        &["r", if log { "log_density" } else { "density" }],
        &rows,
    );
    Ok(out)
}

fn perceptron(
    p: u32,
    grid: &[u64],
    text: &str,
    variant: PerceptronVariant,
    h: HypothesisCount,
) -> Result<Outcome, CliError> {
    let dist = RiskDistribution::realisable_perceptron(p)?;
    let mut curve = match variant {
        PerceptronVariant::Annealed => erm_curve(&ClassificationScenario::new(dist, 0, h)?, grid)?,
        PerceptronVariant::BetaApprox => {
            let beta = dist.beta_approximation()?.into_distribution();
            erm_curve(&ClassificationScenario::new(beta, 0, h)?, grid)?
        }
        PerceptronVariant::Corrected => {
            if !h.is_infinite() {
                return Err(CliError::Usage(
                    "the corrected variant is defined for H = inf only".into(),
                ));
            }
            corrected_curve(p, grid)?
        }
    };
    let name = match variant {
        PerceptronVariant::Annealed => "annealed",
        PerceptronVariant::BetaApprox => "beta-approx",
        PerceptronVariant::Corrected => "corrected",
    };
    curve.metadata.insert("variant".into(), name.into());
    curve.metadata.insert("model".into(), dist.to_string());
    let mut out = Outcome::new("perceptron-curve");
    out.param("p", p)
        .param("m", text)
        .param("variant", name)
        .param("H", h.to_string());
    out.body = curve_csv(&curve);
    Ok(out)
}

fn limit(grid: &[f64], text: &str) -> Result<Outcome, CliError> {
    let annealed = limit_curve(grid, LimitVariant::Annealed)?;
    let corrected = limit_curve(grid, LimitVariant::Corrected)?;
    let mut out = Outcome::new("limit-curve");
    out.param("alpha", text);
    for c in [&annealed, &corrected] {
        if let Some(b) = c.metadata.get("boundary_alphas") {
            out.warnings.push(format!(
                "{} maximiser on the boundary at alpha = {b}",
                c.metadata["variant"]
            ));
        }
    }
    let rows: Vec<Vec<f64>> = annealed
        .points
        .iter()
        .zip(&corrected.points)
        .map(|(a, c)| vec![a.0, a.1, c.1])
        .collect();
    let mut meta = version_meta();
    meta.insert("model".into(), "perceptron:p=inf".into());
    out.body = csv_table(&meta, &["alpha", "annealed", "corrected"], &rows);
    Ok(out)
}

fn pac(
    a: f64,
    b: f64,
    epsilon: f64,
    delta: f64,
    choice: BoundChoice,
    h: Option<f64>,
) -> Result<Outcome, CliError> {
    let mut out = Outcome::new("pac-bound");
    out.param("a", a)
        .param("b", b)
        .param("epsilon", epsilon)
        .param("delta", delta);
    for variant in choice.variants() {
        let m_star = pac_sample_bound(&PacQuery {
            a,
            b,
            epsilon,
            delta,
            variant,
        })?;
        let m = m_star.ceil().max(0.0);
        let tail = posterior_tail(a, b, m, epsilon)?;
        if tail > delta {
            out.warnings.push(format!(
                "{variant}: posterior tail {tail:e} at m = {m} exceeds delta"
            ));
        }
        out.body.push_str(&format!(
            "variant={variant} m_star={} m={} tail_at_m={}\n",
            fmt_g(m_star),
            fmt_g(m),
            fmt_g(tail)
        ));
    }
    out.param("variant", format!("{choice:?}"));
    if let Some(h) = h {
        let m_star = classical_pac_bound(h, epsilon, delta)?;
        out.param("H", h);
        out.warnings.push(
            "classical bound uses (ln H + ln(1/delta))/epsilon, so it grows as delta shrinks"
                .into(),
        );
        out.body.push_str(&format!(
            "variant=classical m_star={} m={}\n",
            fmt_g(m_star),
            fmt_g(m_star.ceil().max(0.0))
        ));
    }
    Ok(out)
}

fn mc_validate(args: &McArgs) -> Result<Outcome, CliError> {
    let sampler = match args.sampler {
        SamplerChoice::Rejection => GibbsSampler::Rejection,
        SamplerChoice::HitAndRun => {
            let GibbsSampler::HitAndRun { burn_in, thin } = GibbsSampler::hit_and_run_for(args.p)
            else {
                unreachable!()
            };
            GibbsSampler::HitAndRun {
                burn_in: args.burn_in.unwrap_or(burn_in),
                thin: args.thin.unwrap_or(thin),
            }
        }
    };
    let p32 = u32::try_from(args.p).map_err(|_| CliError::Usage("p is too large".into()))?;
    let dist = RiskDistribution::realisable_perceptron(p32)?;
    let mut out = Outcome::new("mc-validate");
    out.seed = Some(args.seed);
    out.param("p", args.p)
        .param("m", args.m.text.as_str())
        .param("datasets", args.datasets)
        .param("hypotheses", args.hypotheses)
        .param("max_tries", args.max_tries)
        .param("sampler", format!("{sampler:?}"));

    let mut rows = Vec::new();
    for &m in &args.m.points {
        let config = McConfig {
            p: args.p,
            m: m as usize,
            n_datasets: args.datasets,
            n_hypotheses_per_dataset: args.hypotheses,
            max_rejection_tries: args.max_tries,
            seed: args.seed,
            sampler,
        };
        let est = estimate_erm_risk(&config)?;
        if est.rejected_datasets > 0 {
            out.warnings.push(format!(
                "m = {m}: {} datasets exhausted the rejection budget",
                est.rejected_datasets
            ));
        }
        let annealed = expected_erm_risk(&ClassificationScenario::new(
            dist,
            m,
            HypothesisCount::Infinite,
        )?)?;
        let corrected = corrected_expected_erm(p32, m)?;
        rows.push(vec![m as f64, est.mean, est.std_error, annealed, corrected]);
    }
    let mut meta = version_meta();
    meta.insert("model".into(), dist.to_string());
    meta.insert("seed".into(), args.seed.to_string());
    meta.insert("sampler".into(), format!("{sampler:?}"));
    out.body = csv_table(
        &meta,
        &["m", "mc_mean", "mc_stderr", "annealed", "corrected"],
        &rows,
    );
    Ok(out)
}

fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{}: '{t}' is not a number", path.display())))
        })
        .collect()
}

fn fit(
    dist: Option<&RiskDistribution>,
    samples: Option<&Path>,
    window: &[f64],
    n: usize,
) -> Result<Outcome, CliError> {
    let &[lo, hi] = window else {
        return Err(CliError::Usage(
            "fit window must be two numbers lo,hi".into(),
        ));
    };
    let mut out = Outcome::new("fit-attunement");
    out.param("window", format!("{lo},{hi}")).param("points", n);
    let fit = match (dist, samples) {
        (Some(d), _) => {
            out.param("dist", d.to_string());
            fit_attunement_dist(d, (lo, hi), n)?
        }
        (None, Some(path)) => {
            let xs = read_samples(path)?;
            out.param("samples", path.display().to_string());
            out.diagnostics.insert("n_samples".into(), json!(xs.len()));
            fit_attunement_samples(&xs, (lo, hi), n)?
        }
        (None, None) => return Err(CliError::Usage("give --dist or --samples".into())),
    };
    out.body = format!(
        "exponent={} leading_coefficient={} window={}:{} residual={}\n",
        fmt_g(fit.exponent),
        fmt_g(fit.leading_coefficient),
        fmt_g(fit.fit_window.0),
        fmt_g(fit.fit_window.1),
        fmt_g(fit.residual)
    );
    Ok(out)
}
