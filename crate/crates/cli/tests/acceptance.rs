//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use eta_embed::audit::{
    asymptotic_order, coefficient_audit, embed_functional_configs, embed_functional_residual, expansion_audit,
    functional_grid, functional_grid_audit, run_suite, AsymptoticSpec, CoeffSpec, ExpansionSpec, Suite, SuiteConfig,
    Verdict,
};
use eta_embed::coefficients::{CoeffTable, DEFAULT_ORDER, DEFAULT_SERIES_TOL};
use eta_embed::numkernel::c;
use eta_embed::zeros::{count_strip_zeros, locate_zeros, winding_number, Rect};
use eta_embed::{eta, EmbeddingParams, EvalConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn special_values(cfg: &EvalConfig) -> Outcome {
    let at = |s| eta(s, cfg).map(|v| v.value);
    let checks = [
        ("eta(1) - ln2", at(c(1.0, 0.0)).map(|v| (v - LN_2).norm()), 1e-12),
        ("eta(2) - pi^2/12", at(c(2.0, 0.0)).map(|v| (v - PI * PI / 12.0).norm()), 1e-12),
        ("eta(-2)", at(c(-2.0, 0.0)).map(|v| v.norm()), 1e-10),
        ("eta(1 + 2 pi i/ln2)", at(c(1.0, 2.0 * PI / LN_2)).map(|v| v.norm()), 1e-8),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, got, tol) in checks {
        match got {
            Ok(r) => {
                pass &= r <= tol;
                parts.push(format!("{name} = {r:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn functional_equation(cfg: &EvalConfig) -> Outcome {
    match functional_grid_audit(&functional_grid(), cfg) {
        Ok(r) => outcome(
            r.verdict == Verdict::Pass,
            format!("worst residual {:.2e} over {} points ({} singular skipped)", r.residual, r.inputs["points"], r.inputs["skipped_singular"]),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn coefficients() -> Outcome {
    match coefficient_audit(&CoeffSpec { kappa: 2.0, order: 25 }) {
        Ok(rs) => outcome(
            rs.iter().all(|r| r.verdict == Verdict::Pass),
            rs.iter().map(|r| format!("{} {:.1e}", r.check_id, r.residual)).collect::<Vec<_>>().join(", "),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn expansion(cfg: &EvalConfig) -> Outcome {
    let mut worst_exp: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut pass = true;
    for kappa in [1.5, 2.0, 5.0, 10.0] {
        for nu in [0.6, 1.0, 2.0] {
            let spec = ExpansionSpec { kappa, nu, points: eta_embed::audit::strip_points() };
            match expansion_audit(&spec, cfg) {
                Ok(rs) => {
                    pass &= rs.iter().all(|r| r.verdict == Verdict::Pass);
                    worst_exp = worst_exp.max(rs[0].residual);
                    worst_inv = worst_inv.max(rs[1].residual);
                }
                Err(e) => return outcome(false, format!("kappa {kappa} nu {nu}: {e}")),
            }
        }
    }
    outcome(pass, format!("expansion worst {worst_exp:.2e} (tol 1e-9), inversion worst {worst_inv:.2e} (tol 1e-8)"))
}

fn asymptotics(cfg: &EvalConfig) -> Outcome {
    let spec = AsymptoticSpec { s: c(0.5, 3.0), nu: 1.0, kappas: vec![10.0, 20.0, 40.0] };
    match asymptotic_order(&spec, cfg) {
        Ok(rs) => outcome(
            rs.iter().all(|r| r.verdict == Verdict::Pass),
            format!(
                "first-order slope {:.4}, corrected slope {:.4}, leading-coefficient residual {:.2e}",
                rs[0].lhs.re, rs[1].lhs.re, rs[2].residual
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn zeros(cfg: &EvalConfig) -> Outcome {
    const WANT: [f64; 3] = [14.134725, 21.022040, 25.010858];
    let found = match locate_zeros(10.0, 30.0, 0.05, cfg) {
        Ok(z) => z,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut pass = found.len() == 3;
    let mut worst_t: f64 = 0.0;
    let mut worst_sigma: f64 = 0.0;
    for (z, w) in found.iter().zip(WANT) {
        worst_t = worst_t.max((z.t - w).abs());
        worst_sigma = worst_sigma.max((z.sigma - 0.5).abs());
    }
    pass &= worst_t <= 1e-5 && worst_sigma <= 1e-6;

    let mut boxes: Vec<Rect> = vec![Rect::new(-0.5, 1.5, 10.0, 30.0).unwrap()];
    for z in &found {
        boxes.push(Rect::new(z.sigma - 5e-4, z.sigma + 5e-4, z.t - 5e-4, z.t + 5e-4).unwrap());
    }
    let mut worst_frac: f64 = 0.0;
    for r in &boxes {
        match winding_number(r, cfg) {
            Ok(w) => worst_frac = worst_frac.max((w - w.round()).abs()),
            Err(e) => return outcome(false, format!("{r:?}: {e}")),
        }
    }
    pass &= worst_frac <= 0.05;
    let strip = match count_strip_zeros(10.0, 30.0, cfg) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    pass &= strip.nontrivial == found.len() as i64;
    outcome(
        pass,
        format!(
            "{} zeros, max |t - ref| {worst_t:.1e}, max |sigma - 1/2| {worst_sigma:.1e}, max winding offset {worst_frac:.1e}, strip count {}",
            found.len(),
            strip.nontrivial
        ),
    )
}

fn embed_functional(cfg: &EvalConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let configs = embed_functional_configs();
    for spec in &configs {
        let run = CoeffTable::build(spec.kappa, DEFAULT_ORDER, DEFAULT_SERIES_TOL).and_then(|table| {
            let p = EmbeddingParams::new(spec.kappa, spec.nu)?;
            embed_functional_residual(spec.s, &p, &table, cfg)
        });
        match run {
            Ok(r) => {
                pass &= r.residual < 1e-7;
                worst = worst.max(r.residual);
            }
            Err(e) => return outcome(false, format!("{spec:?}: {e}")),
        }
    }
    outcome(pass, format!("{} configurations, worst residual {worst:.2e}", configs.len()))
}

fn claim_audits() -> Outcome {
    let config = SuiteConfig::for_suite(Suite::All);
    let (a, b) = match (run_suite(&config), run_suite(&config)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
    };
    let identical = a.to_json() == b.to_json();
    let modulus: Vec<_> = a
        .reports
        .iter()
        .filter(|r| r.check_id.contains("lambda-ratio.modulus") || r.check_id.contains("lambda-ratio.lambda-modulus"))
        .filter(|r| r.verdict != Verdict::Informational)
        .collect();
    let modulus_ok = !modulus.is_empty() && modulus.iter().all(|r| r.verdict == Verdict::Pass);
    let complex: Vec<_> = a.reports.iter().filter(|r| r.check_id.contains("lambda-ratio.complex")).collect();
    let profile: Vec<_> = a.reports.iter().filter(|r| r.check_id.contains("rh.shift-invariance")).collect();
    let informational_ok = !complex.is_empty()
        && !profile.is_empty()
        && complex.iter().chain(&profile).all(|r| r.verdict == Verdict::Informational);
    let worst_modulus = modulus.iter().map(|r| r.residual).fold(0.0, f64::max);
    outcome(
        identical && modulus_ok && informational_ok && a.skipped.is_empty(),
        format!(
            "bit-identical: {identical}, modulus checks {} worst {worst_modulus:.1e}, informational reports {} + {}, suite summary {:?}",
            modulus.len(),
            complex.len(),
            profile.len(),
            a.summary
        ),
    )
}

fn thread_determinism() -> Outcome {
    let matrix: &[&[&str]] = &[
        &["eval", "--sigma", "0.5", "--tmin", "1", "--tmax", "30", "--step", "0.25"],
        &["eval", "--s", "0.3+5i", "--s", "-2.5-1i", "--format", "csv"],
        &["embed", "--s", "0.5+3i", "--s", "2", "--kappa", "2", "--nu", "1"],
        &["coeffs", "--kappa", "2", "--n", "32"],
        &["coeffs", "--kappa", "5", "--n", "20", "--format", "csv"],
        &["zeros-scan", "--tmin", "10", "--tmax", "30"],
        &["zeros-count", "--tmin", "10", "--tmax", "30"],
        &["zeros-count", "--rect=-5,-3,-1,1"],
        &["verify"],
        &["audit"],
    ];
    let bin = env!("CARGO_BIN_EXE_eta-embed");
    for args in matrix {
        let run = |threads: &str| {
            Command::new(bin).args(*args).args(["--threads", threads]).env_remove("ETA_EMBED_THREADS").output()
        };
        match (run("1"), run("8")) {
            (Ok(a), Ok(b)) => {
                if a.stdout != b.stdout || a.status.code() != b.status.code() || a.stdout.is_empty() {
                    return outcome(false, format!("output differs for {args:?}"));
                }
            }
            _ => return outcome(false, format!("could not run {args:?}")),
        }
    }
    outcome(true, format!("{} commands byte-identical", matrix.len()))
}

fn main() {
    let cfg = EvalConfig::default();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(u32, &str, Option<Duration>, Check)> = vec![
        (1, "special values of eta", Some(Duration::from_secs(1)), Box::new(|| special_values(&cfg))),
        (2, "functional equation on 200-point grid", Some(Duration::from_secs(5)), Box::new(|| functional_equation(&cfg))),
        (3, "coefficients at kappa = 2, N = 25", Some(Duration::from_secs(1)), Box::new(coefficients)),
        (4, "shift expansion and inversion", Some(Duration::from_secs(30)), Box::new(|| expansion(&cfg))),
        (5, "large-kappa asymptotics", None, Box::new(|| asymptotics(&cfg))),
        (6, "zeros on t in [10, 30]", Some(Duration::from_secs(60)), Box::new(|| zeros(&cfg))),
        (7, "embedding functional relationship", None, Box::new(|| embed_functional(&cfg))),
        (8, "claim audits complete and deterministic", None, Box::new(claim_audits)),
        (9, "determinism under --threads 1 vs 8", None, Box::new(thread_determinism)),
    ];
    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = limit.map_or(true, |l| elapsed <= l);
        let pass = out.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget = limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        println!(
            "criterion {id}: {} - {name}: {} [{:.3}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
