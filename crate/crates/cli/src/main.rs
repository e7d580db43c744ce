#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod presets;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aber_core::aber::{sweep, AberCurve, AberScenario, Method};
use aber_core::config::{ConfigError, FadingConfig, FitChoice, MimoSection, NoiseSection, ScenarioConfig, SnrRange};
use aber_core::fading::MimoConfig;
use aber_core::nlfit::{default_grid, fit_q_approx};
use aber_core::noise::{max_abs_deviation, NoiseModel, QApprox};
use aber_core::quadrature::integrate_semi_infinite;
use aber_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use presets::Curve;

const VERIFY_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "aber",
    version,
    about = "Average error rates of STBC MIMO links over eta-mu / kappa-mu shadowed fading with generalized Gaussian noise",
    after_help = "SNR grids are start:step:stop in dB, inclusive. Each value is the mean SNR per branch, \
                  converted to linear power as 10^(dB/10).\n\
                  Exit codes: 0 ok, 1 verification failure, 2 usage or config error, 3 numerical failure.\n\
                  ABER_THREADS sets the worker count (0 or unset = one per core)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form ABER sweep, optionally with both quadrature oracles.
    Aber(AberArgs),
    /// Refit the four-exponential Q approximation, or print the builtin rows.
    Qfit(QfitArgs),
    /// Compare the closed form against both oracles over a scenario grid.
    Verify(VerifyArgs),
    /// Evaluate a fading density.
    Pdf(PdfArgs),
}

#[derive(Args, Clone, Default)]
struct FadingArgs {
    /// kappa-mu-shadowed, eta-mu, lambda-mu, kappa-mu, rician-shadowed, hoyt,
    /// rician, nakagami-m, rayleigh, one-sided-gaussian
    #[arg(long)]
    model: Option<String>,
    /// eta-mu format: 1 (eta) or 2 (lambda)
    #[arg(long)]
    format: Option<u8>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    /// Rician factor K
    #[arg(long)]
    k: Option<f64>,
    /// Hoyt q
    #[arg(long)]
    q: Option<f64>,
}

impl FadingArgs {
    fn to_config(&self, mean_power: Option<f64>, mean_power_db: Option<f64>) -> Result<FadingConfig, Failure> {
        let model = self.model.clone().ok_or_else(|| Failure::Usage("--model is required".into()))?;
        Ok(FadingConfig {
            model,
            format: self.format,
            eta: self.eta,
            lambda: self.lambda,
            kappa: self.kappa,
            mu: self.mu,
            m: self.m,
            k: self.k,
            q: self.q,
            mean_power,
            mean_power_db,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FitArg {
    Table,
    Refit,
}

#[derive(Args)]
struct ScenarioArgs {
    /// JSON scenario file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// fig1 ... fig6
    #[arg(long)]
    preset: Option<String>,
    #[command(flatten)]
    fading: FadingArgs,
    #[arg(long, default_value_t = 1)]
    nt: u32,
    #[arg(long, default_value_t = 1)]
    nr: u32,
    /// bpsk, bfsk, qpsk, <M>pam, <M>psk, <M>qam[-rect|-nonrect]
    #[arg(long = "mod")]
    modulation: Option<String>,
    /// Noise shape a
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    fit: FitArg,
    /// start:step:stop in dB
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
}

#[derive(Args)]
struct AberArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Add oracle-approx, oracle-exact and rel_dev columns
    #[arg(long)]
    verify: bool,
    /// JSON instead of CSV
    #[arg(long)]
    json: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Multiply the closed form's fit weights by this factor (fault injection)
    #[arg(long, default_value_t = 1.0)]
    p_scale: f64,
}

#[derive(Args)]
struct QfitArgs {
    #[arg(long, required_unless_present = "table")]
    a: Option<f64>,
    /// Print the builtin rows instead of fitting
    #[arg(long, conflicts_with_all = ["a", "grid"])]
    table: bool,
    /// Comma-separated fitting grid in the squared-argument variable
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct PdfArgs {
    #[command(flatten)]
    fading: FadingArgs,
    /// Mean SNR per branch, linear
    #[arg(long, conflicts_with = "mean_power_db")]
    mean_power: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mean_power_db: Option<f64>,
    #[arg(long, default_value_t = 1)]
    nt: u32,
    #[arg(long, default_value_t = 1)]
    nr: u32,
    /// Comma-separated evaluation points
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    gamma: Vec<f64>,
    /// Append the quadrature value of the density's integral
    #[arg(long)]
    check_norm: bool,
}

enum Failure {
    Verify,
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Numerical(inner) => Failure::Numerical(inner.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parameter problems are the caller's; everything else is numerical.
fn classify(e: Error) -> Failure {
    match e {
        Error::InvalidParameter { .. }
        | Error::NoiseShapeOutOfRange { .. }
        | Error::NotTabulated { .. }
        | Error::Precondition { .. } => Failure::Usage(e.to_string()),
        other => Failure::Numerical(other.to_string()),
    }
}

fn number(v: f64) -> String {
    format!("{v:.8e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Numerical(format!("stdout: {e}")))
        }
    }
}

struct Resolved {
    preset: Option<String>,
    curves: Vec<Curve>,
}

fn resolve(args: &ScenarioArgs) -> Result<Resolved, Failure> {
    if let Some(name) = &args.preset {
        let curves = presets::preset(name).ok_or_else(|| {
            Failure::Usage(format!("unknown preset `{name}` (expected one of {})", presets::NAMES.join(", ")))
        })?;
        return Ok(Resolved { preset: Some(name.clone()), curves });
    }
    let config = if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        ScenarioConfig::from_json(&text)?
    } else {
        let need = |name: &str| Failure::Usage(format!("--{name} is required without --config or --preset"));
        let snr: SnrRange = args.snr.as_deref().ok_or_else(|| need("snr"))?.parse()?;
        ScenarioConfig {
            fading: args.fading.to_config(None, None)?,
            mimo: MimoSection { nt: args.nt, nr: args.nr },
            noise: NoiseSection {
                a: args.a.ok_or_else(|| need("a"))?,
                fit: match args.fit {
                    FitArg::Table => FitChoice::Table,
                    FitArg::Refit => FitChoice::Refit,
                },
            },
            modulation: args.modulation.clone().ok_or_else(|| need("mod"))?,
            snr_db: snr,
        }
    };
    Ok(Resolved { preset: None, curves: vec![Curve { label: "aber_closed".into(), config }] })
}

fn build_all(curves: &[Curve]) -> Result<Vec<AberScenario>, Failure> {
    curves.iter().map(|c| c.config.build().map_err(Failure::from)).collect()
}

fn first_gap(label: &str, curve: &AberCurve) -> Option<Failure> {
    curve.points.iter().find_map(|p| {
        p.error.as_ref().map(|e| Failure::Numerical(format!("{label} ({}): failed at {} dB: {e}", curve.method, p.snr_db)))
    })
}

struct Evaluated {
    closed: AberCurve,
    approx: Option<AberCurve>,
    exact: Option<AberCurve>,
}

impl Evaluated {
    fn rel_dev(&self, i: usize) -> Option<f64> {
        let c = self.closed.points[i].aber?;
        let a = self.approx.as_ref()?.points[i].aber?;
        Some((c - a).abs() / a)
    }

    fn gap(&self, label: &str) -> Option<Failure> {
        [Some(&self.closed), self.approx.as_ref(), self.exact.as_ref()]
            .into_iter()
            .flatten()
            .find_map(|c| first_gap(label, c))
    }
}

fn evaluate(scenario: &AberScenario, oracles: bool, p_scale: f64) -> Evaluated {
    let mut closed_scenario = scenario.clone();
    closed_scenario.fit = scenario.fit.scaled(p_scale);
    Evaluated {
        closed: sweep(&closed_scenario, Method::ClosedForm),
        approx: oracles.then(|| sweep(scenario, Method::OracleApprox)),
        exact: oracles.then(|| sweep(scenario, Method::OracleExact)),
    }
}

fn cmd_aber(args: &AberArgs) -> Result<(), Failure> {
    let resolved = resolve(&args.scenario)?;
    let scenarios = build_all(&resolved.curves)?;
    let results: Vec<Evaluated> = scenarios.iter().map(|s| evaluate(s, args.verify, 1.0)).collect();
    let grid = scenarios[0].snr_db().to_vec();
    let single = resolved.preset.is_none();

    let text = if args.json {
        let curves: Vec<_> = resolved
            .curves
            .iter()
            .zip(&results)
            .map(|(c, r)| {
                let rows: Vec<_> = (0..r.closed.points.len())
                    .map(|i| {
                        let mut row = json!({"snr_db": r.closed.points[i].snr_db, "aber_closed": r.closed.points[i].aber});
                        if let (Some(a), Some(e)) = (&r.approx, &r.exact) {
                            row["aber_oracle_approx"] = json!(a.points[i].aber);
                            row["aber_oracle_exact"] = json!(e.points[i].aber);
                            row["rel_dev"] = json!(r.rel_dev(i));
                        }
                        row
                    })
                    .collect();
                let mut diagnostics = r.closed.diagnostics.clone();
                for extra in [&r.approx, &r.exact].into_iter().flatten() {
                    diagnostics.extend(extra.diagnostics.iter().map(|d| format!("{}: {d}", extra.method)));
                }
                json!({"label": c.label, "scenario": c.config, "rows": rows, "diagnostics": diagnostics})
            })
            .collect();
        let doc = match &resolved.preset {
            Some(name) => json!({"preset": name, "note": presets::NOTE, "curves": curves}),
            None => curves.into_iter().next().expect("one curve"),
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    } else {
        let mut header = vec!["snr_db".to_string()];
        for c in &resolved.curves {
            if args.verify {
                let base = if single { String::new() } else { format!("{}_", c.label) };
                header.push(if single { "aber_closed".into() } else { c.label.clone() });
                header.push(format!("{base}aber_oracle_approx"));
                header.push(format!("{base}aber_oracle_exact"));
                header.push(format!("{base}rel_dev"));
            } else {
                header.push(c.label.clone());
            }
        }
        let mut text = header.join(",") + "\n";
        for (i, db) in grid.iter().enumerate() {
            let mut row = vec![format!("{db}")];
            for r in &results {
                row.push(cell(r.closed.points[i].aber));
                if args.verify {
                    row.push(cell(r.approx.as_ref().and_then(|c| c.points[i].aber)));
                    row.push(cell(r.exact.as_ref().and_then(|c| c.points[i].aber)));
                    row.push(cell(r.rel_dev(i)));
                }
            }
            text += &(row.join(",") + "\n");
        }
        text
    };
    write_out(&args.output, &text)?;
    for (c, r) in resolved.curves.iter().zip(&results) {
        for d in &r.closed.diagnostics {
            eprintln!("note: {}: {d}", c.label);
        }
        if let Some(f) = r.gap(&c.label) {
            return Err(f);
        }
    }
    Ok(())
}

fn stats(values: &mut [f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let median = if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) };
    (values[n - 1], median)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    if !(args.p_scale.is_finite()) {
        return Err(Failure::Usage("--p-scale must be finite".into()));
    }
    let resolved = resolve(&args.scenario)?;
    let scenarios = build_all(&resolved.curves)?;
    let mut pass = true;
    let mut gap = None;
    for (c, s) in resolved.curves.iter().zip(&scenarios) {
        let r = evaluate(s, true, args.p_scale);
        let exact = r.exact.as_ref().expect("oracles requested");
        let mut vs_approx: Vec<f64> = (0..r.closed.points.len()).filter_map(|i| r.rel_dev(i)).collect();
        let mut vs_exact: Vec<f64> = r
            .closed
            .points
            .iter()
            .zip(&exact.points)
            .filter_map(|(c, e)| Some((c.aber? - e.aber?).abs() / e.aber?))
            .collect();
        let (max_a, med_a) = stats(&mut vs_approx);
        let (max_e, med_e) = stats(&mut vs_exact);
        let ok = vs_approx.iter().all(|d| *d <= VERIFY_TOL) && vs_approx.len() == r.closed.points.len();
        pass &= ok;
        println!(
            "{}: closed vs oracle-approx max {max_a:.3e} median {med_a:.3e}; closed vs oracle-exact max {max_e:.3e} median {med_e:.3e}; {}",
            c.label,
            if ok { "ok" } else { "FAIL" }
        );
        if gap.is_none() {
            gap = r.gap(&c.label);
        }
    }
    println!("verify: {} (closed vs oracle-approx tolerance {VERIFY_TOL:e})", if pass { "PASS" } else { "FAIL" });
    if let Some(f) = gap {
        return Err(f);
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn fit_row(fit: &QApprox, max_abs_dev: f64) -> serde_json::Value {
    json!({"a": fit.a, "p": fit.p, "q": fit.q, "max_abs_dev": max_abs_dev, "source": fit.source})
}

fn cmd_qfit(args: &QfitArgs) -> Result<(), Failure> {
    let grid = match &args.grid {
        Some(text) => text
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("--grid: `{t}` is not a number"))))
            .collect::<Result<Vec<f64>, Failure>>()?,
        None => default_grid(),
    };
    if args.table {
        let rows = QApprox::builtin_table()
            .iter()
            .map(|f| {
                let model = NoiseModel::new(f.a).map_err(classify)?;
                Ok(fit_row(f, max_abs_deviation(f, &model, &grid).map_err(classify)?))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        return write_out(&None, &(serde_json::to_string_pretty(&rows).expect("serializable") + "\n"));
    }
    let a = args.a.expect("clap enforces --a without --table");
    match fit_q_approx(a, Some(&grid)) {
        Ok(fit) => {
            let model = NoiseModel::new(a).map_err(classify)?;
            let dev = max_abs_deviation(&fit, &model, &grid).map_err(classify)?;
            write_out(&None, &(fit_row(&fit, dev).to_string() + "\n"))
        }
        Err(Error::FitFailed { best, max_abs_dev }) => {
            write_out(&None, &(fit_row(&best, max_abs_dev).to_string() + "\n"))?;
            Err(Failure::Numerical(format!("fit for a = {a} did not converge; best-so-far printed")))
        }
        Err(e) => Err(classify(e)),
    }
}

fn cmd_pdf(args: &PdfArgs) -> Result<(), Failure> {
    let fading = args.fading.to_config(args.mean_power, args.mean_power_db)?.to_spec()?;
    let mimo = MimoConfig::new(args.nt, args.nr).map_err(classify)?;
    if let Some(g) = args.gamma.iter().find(|g| !(**g >= 0.0)) {
        return Err(Failure::Usage(format!("--gamma: {g} must be non-negative")));
    }
    let mut text = String::from("gamma,pdf\n");
    for &g in &args.gamma {
        let v = fading.pdf(&mimo, g).map_err(|e| Failure::Numerical(format!("pdf at gamma = {g}: {e}")))?;
        text += &format!("{g},{}\n", number(v));
    }
    if args.check_norm {
        let est = integrate_semi_infinite(|g| fading.pdf(&mimo, g), 1e-11).map_err(classify)?;
        text += &format!("norm,{}\n", number(est.value));
    }
    write_out(&None, &text)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ABER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Failure::Usage(format!("ABER_THREADS=`{raw}` is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("ABER_THREADS: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Aber(a) => cmd_aber(a),
        Command::Qfit(a) => cmd_qfit(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Pdf(a) => cmd_pdf(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verify => {}
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Numerical(msg) => eprintln!("numerical failure: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
