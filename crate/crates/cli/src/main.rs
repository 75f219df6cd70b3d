//! `eta-embed`: batch evaluation, coefficient tables, zero finding and
//! identity audits.
//!
//! Exit codes: 0 success, 1 a verify/audit check failed, 2 usage error,
//! 3 numeric or domain error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eta_embed::audit::{run_suite, Suite, SuiteConfig};
use eta_embed::coefficients::{coeff_sums_from, CoeffTable, DEFAULT_ORDER, DEFAULT_SERIES_TOL};
use eta_embed::numkernel::{format_complex, format_real, parse_complex, ComplexValue};
use eta_embed::zeros::{count_strip_zeros, count_zeros_rect, locate_zeros, winding_number, zeros_to_csv, zeros_to_json};
use eta_embed::{eta, eta_derivative, eta_embedding, lambda_factor, EmbeddingParams, EtaError, EvalConfig, Rect};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "eta-embed", version, about = "Dirichlet eta, its embedding and identity audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (>= 1).
    #[arg(long, global = true, env = "ETA_EMBED_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    /// Target absolute error of the eta series.
    #[arg(long, global = true, default_value_t = 1e-14, value_parser = positive)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// eta, eta', lambda and the functional-equation residual.
    Eval(PointArgs),
    /// eta_{kappa,nu} next to eta.
    Embed {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        nu: f64,
    },
    /// Coefficient table a_n, b_n and the coefficient-sum identities.
    Coeffs {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        n: usize,
    },
    /// Locate and refine zeros on the critical line.
    ZerosScan {
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 0.05, value_parser = positive)]
        step: f64,
    },
    /// Count zeros in a rectangle (`--rect smin,smax,tmin,tmax`), or
    /// nontrivial zeros of the strip between `--tmin` and `--tmax`.
    ZerosCount {
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true, conflicts_with_all = ["tmin", "tmax"])]
        rect: Option<Rect>,
        #[arg(long, requires = "tmax")]
        tmin: Option<f64>,
        #[arg(long, requires = "tmin")]
        tmax: Option<f64>,
    },
    /// Run a pass/fail suite; exit 1 if any check fails.
    Verify(SuiteArgs),
    /// Full audit report including informational checks.
    Audit(SuiteArgs),
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Point `a+bi`; repeatable.
    #[arg(long = "s", value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<ComplexValue>,
    /// Real part for a vertical grid (with --tmin/--tmax/--step).
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, requires_all = ["tmax", "step"])]
    tmin: Option<f64>,
    #[arg(long, requires_all = ["tmin", "step"])]
    tmax: Option<f64>,
    #[arg(long, value_parser = positive)]
    step: Option<f64>,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long, value_enum)]
    suite: Option<SuiteName>,
    /// JSON suite configuration replacing the built-in grids.
    #[arg(long, conflicts_with = "suite")]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteName {
    Identities,
    Claims,
    All,
}

fn positive(text: &str) -> Result<f64, String> {
    let x: f64 = text.parse().map_err(|_| format!("'{text}' is not a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be finite and > 0, got {text}"))
    }
}

fn parse_point(text: &str) -> Result<ComplexValue, String> {
    parse_complex(text).map_err(|e| e.to_string())
}

fn parse_rect(text: &str) -> Result<Rect, String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.parse::<f64>().map_err(|_| format!("'{p}' is not a number")))
        .collect::<Result<_, _>>()?;
    if parts.len() != 4 {
        return Err("expected smin,smax,tmin,tmax".into());
    }
    Rect::new(parts[0], parts[1], parts[2], parts[3]).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<EtaError> for Failure {
    fn from(e: EtaError) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

struct Output {
    text: String,
    checks_failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, checks_failed: false }
    }
}

fn cj(z: ComplexValue) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

impl PointArgs {
    fn collect(&self) -> Result<Vec<ComplexValue>, Failure> {
        let mut pts = self.points.clone();
        if let (Some(lo), Some(hi), Some(step)) = (self.tmin, self.tmax, self.step) {
            if !(lo <= hi) {
                return Err(Failure::Usage(format!("--tmin {lo} exceeds --tmax {hi}")));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            pts.extend((0..count).map(|k| ComplexValue::new(self.sigma, lo + k as f64 * step)));
        }
        if pts.is_empty() {
            return Err(Failure::Usage("no points: give --s or --tmin/--tmax/--step".into()));
        }
        Ok(pts)
    }
}

fn run_eval(points: &[ComplexValue], cfg: &EvalConfig, format: Format) -> Result<Output, Failure> {
    use rayon::prelude::*;
    let rows = points
        .par_iter()
        .map(|&s| {
            let e = eta(s, cfg)?;
            let d = eta_derivative(s, cfg)?;
            let lam = match lambda_factor(s) {
                Ok(l) => Some(l),
                Err(EtaError::Singularity(_)) => None,
                Err(err) => return Err(err),
            };
            let residual = match lam {
                Some(l) => Some((e.value - l * eta(ComplexValue::new(1.0, 0.0) - s, cfg)?.value).norm()),
                None => None,
            };
            Ok((s, e, d.value, lam, residual))
        })
        .collect::<Result<Vec<_>, EtaError>>()?;
    let text = match format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(s, e, d, lam, res)| {
                    json!({
                        "s": cj(*s),
                        "eta": cj(e.value),
                        "est_error": e.est_error,
                        "terms_used": e.terms_used,
                        "eta_prime": cj(*d),
                        "lambda": lam.map(cj),
                        "functional_residual": res,
                    })
                })
                .collect(),
        )),
        Format::Csv => {
            let mut out = String::from("s,eta_re,eta_im,est_error,eta_prime_re,eta_prime_im,lambda_re,lambda_im,functional_residual\n");
            for (s, e, d, lam, res) in &rows {
                let opt = |x: Option<f64>| x.map(format_real).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    format_complex(*s),
                    format_real(e.value.re),
                    format_real(e.value.im),
                    format_real(e.est_error),
                    format_real(d.re),
                    format_real(d.im),
                    opt(lam.map(|l| l.re)),
                    opt(lam.map(|l| l.im)),
                    opt(*res),
                ));
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn run_embed(points: &[ComplexValue], kappa: f64, nu: f64, cfg: &EvalConfig, format: Format) -> Result<Output, Failure> {
    use rayon::prelude::*;
    let params = EmbeddingParams::new(kappa, nu)?;
    let rows = points
        .par_iter()
        .map(|&s| Ok((s, eta_embedding(s, &params, cfg)?, eta(s, cfg)?.value)))
        .collect::<Result<Vec<_>, EtaError>>()?;
    let text = match format {
        Format::Json => pretty(&json!({
            "kappa": kappa,
            "nu": nu,
            "points": rows.iter().map(|(s, e, plain)| json!({
                "s": cj(*s),
                "eta_kappa_nu": cj(e.value),
                "est_error": e.est_error,
                "eta": cj(*plain),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("s,kappa,nu,eta_kappa_nu_re,eta_kappa_nu_im,est_error,eta_re,eta_im\n");
            for (s, e, plain) in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    format_complex(*s),
                    format_real(kappa),
                    format_real(nu),
                    format_real(e.value.re),
                    format_real(e.value.im),
                    format_real(e.est_error),
                    format_real(plain.re),
                    format_real(plain.im),
                ));
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn run_coeffs(kappa: f64, n: usize, format: Format) -> Result<Output, Failure> {
    let table = CoeffTable::build(kappa, n, DEFAULT_SERIES_TOL)?;
    let sums = coeff_sums_from(&table)?;
    let text = match format {
        Format::Json => pretty(&json!({ "table": table, "sums": sums })),
        Format::Csv => {
            let mut out = String::from("n,a,b\n");
            for (k, (a, b)) in table.a.iter().zip(&table.b).enumerate() {
                out.push_str(&format!("{k},{},{}\n", format_real(*a), format_real(*b)));
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn run_zeros_scan(tmin: f64, tmax: f64, step: f64, cfg: &EvalConfig, format: Format) -> Result<Output, Failure> {
    let zeros = locate_zeros(tmin, tmax, step, cfg)?;
    Ok(Output::ok(match format {
        Format::Csv => zeros_to_csv(&zeros),
        Format::Json => zeros_to_json(&zeros),
    }))
}

fn run_zeros_count(rect: Option<Rect>, window: Option<(f64, f64)>, cfg: &EvalConfig, format: Format) -> Result<Output, Failure> {
    let (value, row) = match (rect, window) {
        (Some(r), _) => {
            let w = winding_number(&r, cfg)?;
            let n = count_zeros_rect(&r, cfg)?;
            (
                json!({ "rect": r, "winding": w, "count": n }),
                format!(
                    "sigma_min,sigma_max,t_min,t_max,winding,count\n{},{},{},{},{},{}\n",
                    format_real(r.sigma_min),
                    format_real(r.sigma_max),
                    format_real(r.t_min),
                    format_real(r.t_max),
                    format_real(w),
                    n
                ),
            )
        }
        (None, Some((lo, hi))) => {
            let sc = count_strip_zeros(lo, hi, cfg)?;
            let row = format!(
                "tmin,tmax,total,trivial,nontrivial\n{},{},{},{},{}\n",
                format_real(lo),
                format_real(hi),
                sc.total,
                sc.trivial.len(),
                sc.nontrivial
            );
            (serde_json::to_value(&sc).expect("strip count serializes"), row)
        }
        (None, None) => return Err(Failure::Usage("zeros-count needs --rect or --tmin/--tmax".into())),
    };
    Ok(Output::ok(match format {
        Format::Json => pretty(&value),
        Format::Csv => row,
    }))
}

fn run_suite_cmd(args: &SuiteArgs, default: Suite, cfg: &EvalConfig) -> Result<Output, Failure> {
    let config = match (&args.config, args.suite) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| Failure::Usage(format!("invalid suite config {}: {e}", path.display())))?
        }
        (None, name) => {
            let suite = match name {
                Some(SuiteName::Identities) => Suite::Identities,
                Some(SuiteName::Claims) => Suite::Claims,
                Some(SuiteName::All) => Suite::All,
                None => default,
            };
            SuiteConfig { eval: *cfg, ..SuiteConfig::for_suite(suite) }
        }
    };
    let report = run_suite(&config)?;
    Ok(Output { text: report.to_json(), checks_failed: report.failed() })
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let cfg = EvalConfig { tol: cli.tol, ..EvalConfig::default() };
    cfg.validate()?;
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Eval(p) => run_eval(&p.collect()?, &cfg, fmt(Format::Json)),
        Command::Embed { points, kappa, nu } => run_embed(&points.collect()?, *kappa, *nu, &cfg, fmt(Format::Json)),
        Command::Coeffs { kappa, n } => run_coeffs(*kappa, *n, fmt(Format::Json)),
        Command::ZerosScan { tmin, tmax, step } => run_zeros_scan(*tmin, *tmax, *step, &cfg, fmt(Format::Csv)),
        Command::ZerosCount { rect, tmin, tmax } => {
            let window = tmin.zip(*tmax);
            run_zeros_count(*rect, window, &cfg, fmt(Format::Json))
        }
        Command::Verify(args) => {
            if cli.format == Some(Format::Csv) {
                return Err(Failure::Usage("verify writes JSON only".into()));
            }
            run_suite_cmd(args, Suite::Identities, &cfg)
        }
        Command::Audit(args) => {
            if cli.format == Some(Format::Csv) {
                return Err(Failure::Usage("audit writes JSON only".into()));
            }
            run_suite_cmd(args, Suite::All, &cfg)
        }
    }
}

fn write_output(cli: &Cli, text: &str) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };

    match pool.install(|| dispatch(&cli)) {
        Ok(out) => {
            if let Err(e) = write_output(&cli, &out.text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(if out.checks_failed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
