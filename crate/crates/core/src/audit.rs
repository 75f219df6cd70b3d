//! Numerical audits of the identities and asymptotics relating `eta` and
//! `eta_{kappa,nu}`.
//!
//! Every audit reports a left side, a right side and the residual between
//! them. Proven identities get a pass/fail verdict against a fixed
//! tolerance. The claims behind the critical-line argument (the shifted
//! ratio equalling `lambda` at a zero, and the shift invariance of the
//! perturbed modulus) are measured and reported as informational only.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coefficients::{coeff_sums_from, expansion_eval, inversion_eval, CoeffTable, DEFAULT_ORDER, DEFAULT_SERIES_TOL};
use crate::embedding::{b_ratio, eta_embedding, eta_embedding_many, EmbeddingParams, EXPANSION_KAPPA_MIN};
use crate::error::{EtaError, Result};
use crate::eta::{eta, lambda_factor, EvalConfig};
use crate::numkernel::{c, complex_pow_real_base, re_im, ComplexValue};
use crate::zeros::locate_zeros;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Residuals below this are treated as rounding noise by monotonicity checks.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

pub const FUNCTIONAL_TOL: f64 = 1e-8;
pub const CONVOLUTION_TOL: f64 = 1e-12;
pub const SUM_IDENTITY_TOL: f64 = 1e-9;
pub const EXPANSION_TOL: f64 = 1e-9;
pub const INVERSION_TOL: f64 = 1e-8;
pub const EMBED_FUNCTIONAL_TOL: f64 = 1e-7;
pub const RATIO_LIMIT_TOL: f64 = 1e-4;
pub const MODULUS_TOL: f64 = 1e-10;
pub const RH_ASYMPTOTE_TOL: f64 = 1e-6;
/// The large-shift asymptote is judged only from this shift on.
pub const RH_ASYMPTOTE_MIN_NU: f64 = 5.0;
pub const FIRST_SLOPE_TOL: f64 = 0.1;
pub const CORRECTED_SLOPE_TOL: f64 = 0.3;
pub const LEADING_COEFF_TOL: f64 = 1e-3;
const DIVISION_GUARD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub check_id: String,
    pub paper_anchor: String,
    pub inputs: Value,
    #[serde(with = "re_im")]
    pub lhs: ComplexValue,
    #[serde(with = "re_im")]
    pub rhs: ComplexValue,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl AuditReport {
    fn judged(check_id: String, anchor: &str, inputs: Value, lhs: ComplexValue, rhs: ComplexValue, tolerance: f64) -> Self {
        let residual = (lhs - rhs).norm();
        let verdict = if residual <= tolerance { Verdict::Pass } else { Verdict::Fail };
        Self { check_id, paper_anchor: anchor.to_string(), inputs, lhs, rhs, residual, tolerance, verdict }
    }

    fn informational(check_id: String, anchor: &str, inputs: Value, lhs: ComplexValue, rhs: ComplexValue) -> Self {
        Self {
            check_id,
            paper_anchor: anchor.to_string(),
            inputs,
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
            tolerance: 0.0,
            verdict: Verdict::Informational,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

fn cjson(z: ComplexValue) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn real(x: f64) -> ComplexValue {
    c(x, 0.0)
}

fn embed(s: ComplexValue, kappa: f64, nu: f64, cfg: &EvalConfig) -> Result<ComplexValue> {
    Ok(eta_embedding(s, &EmbeddingParams::new(kappa, nu)?, cfg)?.value)
}

/// Marks each residual of a sequence that should shrink toward a limit.
/// Entry `i` passes when it does not exceed entry `i - 1` (or the rounding
/// floor); the last entry must also beat `final_tol` when given.
fn monotone_reports(
    rows: Vec<(String, Value, ComplexValue, ComplexValue)>,
    anchor: &str,
    final_tol: Option<f64>,
) -> Vec<AuditReport> {
    let count = rows.len();
    let mut prev: Option<f64> = None;
    let mut out = Vec::with_capacity(count);
    for (i, (id, inputs, lhs, rhs)) in rows.into_iter().enumerate() {
        let residual = (lhs - rhs).norm();
        let mut tol = match prev {
            Some(p) => p.max(RESIDUAL_FLOOR),
            None => residual.max(RESIDUAL_FLOOR),
        };
        if i + 1 == count {
            if let Some(f) = final_tol {
                tol = tol.min(f);
            }
        }
        out.push(AuditReport::judged(id, anchor, inputs, lhs, rhs, tol));
        prev = Some(residual);
    }
    out
}

// ---------------------------------------------------------------------------
// limits

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    /// `kappa -> inf` at fixed `nu`: `eta(s)`.
    KappaInfinity,
    /// `kappa -> 0` at fixed `nu`: `eta(s) - 1` when `nu > 1`.
    KappaZero,
    /// `nu -> inf` at fixed `kappa`: `eta(s) + B(1)/B(0) - 1`.
    NuInfinity,
    /// `nu -> 0` at fixed `kappa`: `B(1)/B(0) eta(s)`.
    NuZero,
}

impl LimitKind {
    fn name(self) -> &'static str {
        match self {
            LimitKind::KappaInfinity => "kappa-infinity",
            LimitKind::KappaZero => "kappa-zero",
            LimitKind::NuInfinity => "nu-infinity",
            LimitKind::NuZero => "nu-zero",
        }
    }

    fn anchor(self) -> &'static str {
        match self {
            LimitKind::KappaInfinity => "embedding limit kappa -> infinity",
            LimitKind::KappaZero => "embedding limit kappa -> 0",
            LimitKind::NuInfinity => "embedding limit nu -> infinity",
            LimitKind::NuZero => "embedding limit nu -> 0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSpec {
    pub kind: LimitKind,
    pub s: ComplexValue,
    /// The parameter held fixed (`nu` for kappa limits, `kappa` for nu limits).
    pub fixed: f64,
    /// Values of the moving parameter, ordered toward the limit.
    pub sweep: Vec<f64>,
    pub final_tol: Option<f64>,
}

/// Limit of `eta_{kappa,nu}(s)` as `kappa -> 0`. Summands with
/// `(m+1)^{-nu} > 1/2` lose their weight, those at exactly `1/2` keep half.
/// Only `m = 0` is affected when `nu > 1`.
fn kappa_zero_target(s: ComplexValue, nu: f64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let mut target = eta(s, cfg)?.value;
    let mut m = 0usize;
    loop {
        let x = (-(nu) * ((m + 1) as f64).ln()).exp();
        if x < 0.5 - 1e-15 {
            break;
        }
        let keep = if (x - 0.5).abs() <= 1e-15 { 0.5 } else { 1.0 };
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        target -= complex_pow_real_base((m + 1) as f64, -s)? * (keep * sign);
        m += 1;
    }
    Ok(target)
}

/// Residual of one limit of the embedding along a parameter sweep.
pub fn limit_audit(spec: &LimitSpec, cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    let s = spec.s;
    let mut rows = Vec::with_capacity(spec.sweep.len());
    for (i, &p) in spec.sweep.iter().enumerate() {
        let (kappa, nu) = match spec.kind {
            LimitKind::KappaInfinity | LimitKind::KappaZero => (p, spec.fixed),
            LimitKind::NuInfinity | LimitKind::NuZero => (spec.fixed, p),
        };
        let lhs = embed(s, kappa, nu, cfg)?;
        let rhs = match spec.kind {
            LimitKind::KappaInfinity => eta(s, cfg)?.value,
            LimitKind::KappaZero => kappa_zero_target(s, nu, cfg)?,
            LimitKind::NuInfinity => eta(s, cfg)?.value + (b_ratio(1.0, kappa) - 1.0),
            LimitKind::NuZero => eta(s, cfg)?.value * b_ratio(1.0, kappa),
        };
        let id = format!("limit.{}.{i:02}", spec.kind.name());
        rows.push((id, json!({ "s": cjson(s), "kappa": kappa, "nu": nu }), lhs, rhs));
    }
    Ok(monotone_reports(rows, spec.kind.anchor(), spec.final_tol))
}

// ---------------------------------------------------------------------------
// large-kappa asymptotics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSpec {
    pub s: ComplexValue,
    pub nu: f64,
    pub kappas: Vec<f64>,
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `eta_{kappa,nu}(s) = eta(s) - eta(s + 2 nu)/kappa^2 + O(kappa^-4)`:
/// first-order slope, corrected slope and leading coefficient.
pub fn asymptotic_order(spec: &AsymptoticSpec, cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    if spec.kappas.len() < 3 {
        return Err(EtaError::Usage("asymptotic audit needs at least three kappa values".into()));
    }
    if let Some(k) = spec.kappas.iter().find(|k| !(**k > EXPANSION_KAPPA_MIN)) {
        return Err(EtaError::Domain(format!("asymptotic audit needs kappa > 3/pi, got {k}")));
    }
    let s = spec.s;
    let base = eta(s, cfg)?.value;
    let shifted = eta(s + 2.0 * spec.nu, cfg)?.value;
    let mut ln_k = Vec::new();
    let mut ln_first = Vec::new();
    let mut ln_corrected = Vec::new();
    let mut leading = c(0.0, 0.0);
    for &kappa in &spec.kappas {
        let diff = embed(s, kappa, spec.nu, cfg)? - base;
        ln_k.push(kappa.ln());
        ln_first.push(diff.norm().ln());
        ln_corrected.push((diff + shifted / (kappa * kappa)).norm().ln());
        leading = diff * (kappa * kappa);
    }
    let inputs = json!({ "s": cjson(s), "nu": spec.nu, "kappas": spec.kappas });
    let anchor = "large-kappa asymptotics of the embedding";
    Ok(vec![
        AuditReport::judged(
            "asymptotic.first-order-slope".into(),
            anchor,
            inputs.clone(),
            real(fitted_slope(&ln_k, &ln_first)),
            real(-2.0),
            FIRST_SLOPE_TOL,
        ),
        AuditReport::judged(
            "asymptotic.corrected-slope".into(),
            anchor,
            inputs.clone(),
            real(fitted_slope(&ln_k, &ln_corrected)),
            real(-4.0),
            CORRECTED_SLOPE_TOL,
        ),
        AuditReport::judged("asymptotic.leading-coefficient".into(), anchor, inputs, leading, -shifted, LEADING_COEFF_TOL),
    ])
}

// ---------------------------------------------------------------------------
// functional relationship of the embedding

/// ```text
/// eta_kn(s) - lambda(s) eta_kn(1-s)
///     = sum_{n>=1} b_n [lambda(s) eta_kn(1-s+2 nu n) - eta_kn(s+2 nu n)]
/// ```
///
/// truncated at the table order, the remainder replaced by its plateau
/// value `(lambda - 1) r (1/r - sum_{n<=N} b_n)`, `r = B(1)/B(0)`.
pub fn embed_functional_residual(
    s: ComplexValue,
    p: &EmbeddingParams,
    table: &CoeffTable,
    cfg: &EvalConfig,
) -> Result<AuditReport> {
    if table.kappa != p.kappa() {
        return Err(EtaError::Usage(format!(
            "coefficient table is for kappa = {}, embedding uses {}",
            table.kappa,
            p.kappa()
        )));
    }
    if !table.has_b() {
        return Err(EtaError::Usage("embedding functional audit needs b coefficients".into()));
    }
    let lam = lambda_factor(s)?;
    let one = real(1.0);
    let step = 2.0 * p.nu();
    let mut points = Vec::with_capacity(2 * table.b.len());
    for n in 0..table.b.len() {
        points.push(s + step * n as f64);
        points.push(one - s + step * n as f64);
    }
    let vals: Vec<ComplexValue> = eta_embedding_many(&points, p, cfg)?.into_iter().map(|v| v.value).collect();
    let lhs = vals[0] - lam * vals[1];
    let mut rhs = c(0.0, 0.0);
    for n in 1..table.b.len() {
        rhs += (lam * vals[2 * n + 1] - vals[2 * n]) * table.b[n];
    }
    let r = b_ratio(1.0, p.kappa());
    let b_sum: f64 = table.b.iter().sum();
    rhs += (lam - one) * (r * (1.0 / r - b_sum));
    Ok(AuditReport::judged(
        "embed-functional".into(),
        "functional relationship for the embedding",
        json!({ "s": cjson(s), "kappa": p.kappa(), "nu": p.nu(), "N": table.order }),
        lhs,
        rhs,
        EMBED_FUNCTIONAL_TOL,
    ))
}

// ---------------------------------------------------------------------------
// ratio at a zero

/// `eta_kn(s*)/eta_kn(1-s*)` against `eta(s*+2nu)/eta(1-s*+2nu)` along
/// growing `kappa`.
pub fn ratio_limit_audit(zero: ComplexValue, nu: f64, kappas: &[f64], cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    if !(nu > 0.5) {
        return Err(EtaError::Domain(format!("ratio limit needs nu > 1/2, got {nu}")));
    }
    let one = real(1.0);
    let target = eta(zero + 2.0 * nu, cfg)?.value / eta(one - zero + 2.0 * nu, cfg)?.value;
    let mut rows = Vec::with_capacity(kappas.len());
    for (i, &kappa) in kappas.iter().enumerate() {
        let num = embed(zero, kappa, nu, cfg)?;
        let den = embed(one - zero, kappa, nu, cfg)?;
        if den.norm() < DIVISION_GUARD {
            return Err(EtaError::Domain(format!(
                "|eta_kappa_nu(1 - s*)| = {:e} below division guard at kappa = {kappa}",
                den.norm()
            )));
        }
        let id = format!("ratio-limit.{i:02}");
        rows.push((id, json!({ "zero": cjson(zero), "kappa": kappa, "nu": nu }), num / den, target));
    }
    Ok(monotone_reports(rows, "embedding ratio limit at a zero", Some(RATIO_LIMIT_TOL)))
}

// ---------------------------------------------------------------------------
// contested claims

/// `eta(s+2nu)/eta(1-s+2nu)` against `lambda(s)` for each shift.
///
/// The complex comparison is informational. When `s` is on the critical
/// line the ratio is a value over its own conjugate, so its modulus (and
/// that of `lambda`) is exactly one; that part is judged.
pub fn lambda_ratio_audit(s: ComplexValue, nu_grid: &[f64], cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    let one = real(1.0);
    let lam = lambda_factor(s)?;
    let on_line = (s.re - 0.5).abs() < 1e-9;
    let anchor = "shifted ratio equals lambda at a zero (contested)";
    let mut out = Vec::new();
    for (i, &nu) in nu_grid.iter().enumerate() {
        if !(nu > 0.5) {
            return Err(EtaError::Domain(format!("shifted-ratio audit needs nu > 1/2, got {nu}")));
        }
        let ratio = eta(s + 2.0 * nu, cfg)?.value / eta(one - s + 2.0 * nu, cfg)?.value;
        let inputs = json!({ "s": cjson(s), "nu": nu, "ratio_modulus": ratio.norm(), "lambda_modulus": lam.norm() });
        out.push(AuditReport::informational(format!("lambda-ratio.complex.{i:02}"), anchor, inputs.clone(), ratio, lam));
        let id = format!("lambda-ratio.modulus.{i:02}");
        if on_line {
            out.push(AuditReport::judged(id, anchor, inputs, real(ratio.norm()), one, MODULUS_TOL));
        } else {
            out.push(AuditReport::informational(id, anchor, inputs, real(ratio.norm()), real(lam.norm())));
        }
    }
    if on_line {
        out.push(AuditReport::judged(
            "lambda-ratio.lambda-modulus".into(),
            anchor,
            json!({ "s": cjson(s) }),
            real(lam.norm()),
            one,
            MODULUS_TOL,
        ));
    }
    Ok(out)
}

/// The perturbed-modulus comparison behind the critical-line argument:
///
/// ```text
/// |eta(1/2+2nu+it+e) / eta(1/2+2nu-it-e)|   vs   |lambda(1/2+it+e)|
/// ```
///
/// together with the large-shift asymptote
/// `|1 + 2 e ln2 / (2^{1/2+2nu-e+it} - 1)|` of the left side.
pub fn rh_consistency_audit(t_star: f64, eps_list: &[f64], nu_grid: &[f64], cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    if let Some(e) = eps_list.iter().find(|e| !(e.abs() <= 0.2)) {
        return Err(EtaError::Usage(format!("perturbation must satisfy |eps| <= 0.2, got {e}")));
    }
    let mut out = Vec::new();
    let mut idx = 0usize;
    for &e in eps_list {
        let lam = lambda_factor(c(0.5 + e, t_star))?.norm();
        for &nu in nu_grid {
            let sigma = 0.5 + 2.0 * nu;
            let lhs = (eta(c(sigma + e, t_star), cfg)?.value / eta(c(sigma - e, -t_star), cfg)?.value).norm();
            let asymptote = (real(1.0) + 2.0 * e * LN_2 / (complex_pow_real_base(2.0, c(sigma - e, t_star))? - 1.0)).norm();
            let inputs = json!({ "t_star": t_star, "eps": e, "nu": nu, "lambda_modulus": lam, "asymptote": asymptote });
            out.push(AuditReport::informational(
                format!("rh.shift-invariance.{idx:02}"),
                "shift invariance of the perturbed modulus (contested)",
                inputs.clone(),
                real(lhs),
                real(lam),
            ));
            if e == 0.0 {
                out.push(AuditReport::judged(
                    format!("rh.conjugate-modulus.{idx:02}"),
                    "conjugate ratio has modulus one",
                    inputs.clone(),
                    real(lhs),
                    real(1.0),
                    MODULUS_TOL,
                ));
            }
            if nu >= RH_ASYMPTOTE_MIN_NU {
                out.push(AuditReport::judged(
                    format!("rh.asymptote.{idx:02}"),
                    "large-shift asymptote of the perturbed modulus",
                    inputs,
                    real(lhs),
                    real(asymptote),
                    RH_ASYMPTOTE_TOL,
                ));
            }
            idx += 1;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// grid checks

/// Worst functional-equation residual over a point set; singular points of
/// `lambda` are skipped and counted.
pub fn functional_grid_audit(points: &[ComplexValue], cfg: &EvalConfig) -> Result<AuditReport> {
    let rows = points
        .par_iter()
        .map(|&s| match lambda_factor(s) {
            Err(EtaError::Singularity(_)) => Ok(None),
            Err(e) => Err(e),
            Ok(lam) => {
                let lhs = eta(s, cfg)?.value;
                let rhs = lam * eta(real(1.0) - s, cfg)?.value;
                Ok(Some((s, lhs, rhs)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    let mut worst: Option<(ComplexValue, ComplexValue, ComplexValue)> = None;
    for (s, lhs, rhs) in rows.into_iter().flatten() {
        if worst.map_or(true, |w| (lhs - rhs).norm() > (w.1 - w.2).norm()) {
            worst = Some((s, lhs, rhs));
        }
    }
    let (s, lhs, rhs) = worst.unwrap_or((c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
    Ok(AuditReport::judged(
        "functional-equation".into(),
        "eta functional equation",
        json!({ "points": points.len(), "skipped_singular": skipped, "worst_s": cjson(s) }),
        lhs,
        rhs,
        FUNCTIONAL_TOL,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSpec {
    pub kappa: f64,
    #[serde(rename = "N")]
    pub order: usize,
}

/// Convolution identity and both coefficient-sum identities for a table.
pub fn coefficient_audit(spec: &CoeffSpec) -> Result<Vec<AuditReport>> {
    let table = CoeffTable::build(spec.kappa, spec.order, DEFAULT_SERIES_TOL)?;
    let sums = coeff_sums_from(&table)?;
    let inputs = json!({ "kappa": spec.kappa, "N": spec.order });
    Ok(vec![
        AuditReport::judged(
            "coefficients.a0".into(),
            "leading coefficient a_0 = 1",
            inputs.clone(),
            real(table.a[0]),
            real(1.0),
            1e-13,
        ),
        AuditReport::judged(
            "coefficients.convolution".into(),
            "convolution inverse of the coefficients",
            inputs.clone(),
            real(table.convolution_residual()),
            real(0.0),
            CONVOLUTION_TOL,
        ),
        AuditReport::judged(
            "coefficients.a-sum".into(),
            "closed-form sum of a_n",
            inputs.clone(),
            real(sums.a_sum_lhs),
            real(sums.a_sum_rhs),
            SUM_IDENTITY_TOL,
        ),
        AuditReport::judged(
            "coefficients.b-sum".into(),
            "closed-form sum of b_n",
            inputs,
            real(sums.b_sum_lhs),
            real(sums.b_sum_rhs),
            SUM_IDENTITY_TOL,
        ),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub kappa: f64,
    pub nu: f64,
    pub points: Vec<ComplexValue>,
}

/// Worst shift-expansion and inversion residuals over a point set.
pub fn expansion_audit(spec: &ExpansionSpec, cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
    let table = CoeffTable::build(spec.kappa, DEFAULT_ORDER, DEFAULT_SERIES_TOL)?;
    let params = EmbeddingParams::new(spec.kappa, spec.nu)?;
    let rows = spec
        .points
        .par_iter()
        .map(|&s| {
            let expanded = expansion_eval(s, &table, spec.nu, cfg)?.value;
            let direct = eta_embedding(s, &params, cfg)?.value;
            let inverted = inversion_eval(s, &table, spec.nu, cfg)?.value;
            let plain = eta(s, cfg)?.value;
            Ok((s, expanded, direct, inverted, plain))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_by = |f: &dyn Fn(&(ComplexValue, ComplexValue, ComplexValue, ComplexValue, ComplexValue)) -> (ComplexValue, ComplexValue)| {
        rows.iter()
            .map(|r| (r.0, f(r)))
            .fold(None, |best: Option<(ComplexValue, (ComplexValue, ComplexValue))>, cur| match best {
                Some(b) if (b.1 .0 - b.1 .1).norm() >= (cur.1 .0 - cur.1 .1).norm() => Some(b),
                _ => Some(cur),
            })
            .unwrap_or((c(0.0, 0.0), (c(0.0, 0.0), c(0.0, 0.0))))
    };
    let (s_exp, (lhs_exp, rhs_exp)) = worst_by(&|r| (r.1, r.2));
    let (s_inv, (lhs_inv, rhs_inv)) = worst_by(&|r| (r.3, r.4));
    let base = json!({ "kappa": spec.kappa, "nu": spec.nu, "points": spec.points.len() });
    let with_worst = |s: ComplexValue| {
        let mut v = base.clone();
        v["worst_s"] = cjson(s);
        v
    };
    Ok(vec![
        AuditReport::judged(
            "expansion".into(),
            "shift expansion of the embedding",
            with_worst(s_exp),
            lhs_exp,
            rhs_exp,
            EXPANSION_TOL,
        ),
        AuditReport::judged(
            "inversion".into(),
            "inversion of the shift expansion",
            with_worst(s_inv),
            lhs_inv,
            rhs_inv,
            INVERSION_TOL,
        ),
    ])
}

// ---------------------------------------------------------------------------
// suite

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedFunctionalSpec {
    pub kappa: f64,
    pub nu: f64,
    pub s: ComplexValue,
}

/// Which located zero an audit refers to, or an explicit probe point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Zero(usize),
    Point(ComplexValue),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSpec {
    pub zero: usize,
    pub nu: f64,
    pub kappas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRatioSpec {
    pub target: Target,
    pub nus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhSpec {
    pub t_star: f64,
    pub eps: Vec<f64>,
    pub nus: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Proven identities only.
    Identities,
    /// The contested claims (and the zeros they need).
    Claims,
    All,
}

/// Grids for every audit group. Empty vectors disable a group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub eval: EvalConfig,
    pub functional_points: Vec<ComplexValue>,
    pub limits: Vec<LimitSpec>,
    pub asymptotic: Vec<AsymptoticSpec>,
    pub coefficients: Vec<CoeffSpec>,
    pub expansion: Vec<ExpansionSpec>,
    pub embed_functional: Vec<EmbedFunctionalSpec>,
    /// Critical-line window searched for zeros used by the zero audits.
    pub zero_window: Option<(f64, f64)>,
    pub ratio_limits: Vec<RatioSpec>,
    pub lambda_ratio: Vec<LambdaRatioSpec>,
    pub rh: Vec<RhSpec>,
}

/// `sigma in {-3, ..., 4}` times 25 equally spaced `t in [-30, 30]`.
pub fn functional_grid() -> Vec<ComplexValue> {
    let mut pts = Vec::with_capacity(200);
    for i in 0..8 {
        for j in 0..25 {
            pts.push(c(-3.0 + i as f64, -30.0 + 2.5 * j as f64));
        }
    }
    pts
}

/// Twelve critical-strip points.
pub fn strip_points() -> Vec<ComplexValue> {
    let mut pts = Vec::with_capacity(12);
    for sigma in [0.1, 0.5, 0.9] {
        for t in [1.0, 7.5, 14.134725, 22.0] {
            pts.push(c(sigma, t));
        }
    }
    pts
}

pub fn embed_functional_configs() -> Vec<EmbedFunctionalSpec> {
    [
        (2.0, 1.0, c(0.3, 5.0)),
        (5.0, 0.6, c(0.5, 14.0)),
        (1.5, 1.0, c(0.25, 2.0)),
        (2.0, 2.0, c(0.7, 10.0)),
        (10.0, 0.75, c(0.5, 21.0)),
        (3.0, 1.0, c(0.1, 1.5)),
        (1.5, 0.6, c(0.8, 7.0)),
        (5.0, 1.0, c(0.4, 25.0)),
        (10.0, 2.0, c(0.6, 3.0)),
        (2.0, 0.75, c(0.2, 18.0)),
    ]
    .into_iter()
    .map(|(kappa, nu, s)| EmbedFunctionalSpec { kappa, nu, s })
    .collect()
}

impl SuiteConfig {
    pub fn empty() -> Self {
        Self {
            eval: EvalConfig::default(),
            functional_points: Vec::new(),
            limits: Vec::new(),
            asymptotic: Vec::new(),
            coefficients: Vec::new(),
            expansion: Vec::new(),
            embed_functional: Vec::new(),
            zero_window: None,
            ratio_limits: Vec::new(),
            lambda_ratio: Vec::new(),
            rh: Vec::new(),
        }
    }

    pub fn for_suite(suite: Suite) -> Self {
        let mut cfg = Self::empty();
        let identities = matches!(suite, Suite::Identities | Suite::All);
        let claims = matches!(suite, Suite::Claims | Suite::All);
        if identities {
            cfg.functional_points = functional_grid();
            cfg.limits = vec![
                LimitSpec {
                    kind: LimitKind::KappaInfinity,
                    s: c(2.0, 0.0),
                    fixed: 1.0,
                    sweep: vec![10.0, 100.0, 1000.0],
                    final_tol: Some(1e-5),
                },
                LimitSpec {
                    kind: LimitKind::KappaZero,
                    s: c(2.0, 0.0),
                    fixed: 1.5,
                    sweep: vec![0.1, 0.01, 0.001],
                    final_tol: None,
                },
                LimitSpec {
                    kind: LimitKind::NuInfinity,
                    s: c(2.0, 0.0),
                    fixed: 1.0,
                    sweep: vec![2.0, 4.0, 8.0],
                    final_tol: None,
                },
                LimitSpec {
                    kind: LimitKind::NuZero,
                    s: c(2.0, 0.0),
                    fixed: 1.0,
                    sweep: vec![0.1, 0.01, 0.001],
                    final_tol: None,
                },
            ];
            cfg.asymptotic = vec![AsymptoticSpec { s: c(0.5, 3.0), nu: 1.0, kappas: vec![10.0, 20.0, 40.0] }];
            cfg.coefficients = vec![CoeffSpec { kappa: 2.0, order: 25 }];
            cfg.expansion = [1.5, 2.0, 5.0, 10.0]
                .into_iter()
                .flat_map(|kappa| [0.6, 1.0, 2.0].into_iter().map(move |nu| (kappa, nu)))
                .map(|(kappa, nu)| ExpansionSpec { kappa, nu, points: strip_points() })
                .collect();
            cfg.embed_functional = embed_functional_configs();
            cfg.ratio_limits = vec![
                RatioSpec { zero: 0, nu: 1.0, kappas: vec![10.0, 20.0, 40.0] },
                RatioSpec { zero: 0, nu: 2.0, kappas: vec![10.0, 20.0, 40.0] },
            ];
        }
        if matches!(suite, Suite::All) {
            // misses 1e-4 at kappa = 40 by a few percent; kept visible
            cfg.ratio_limits.push(RatioSpec { zero: 1, nu: 0.75, kappas: vec![10.0, 20.0, 40.0] });
        }
        if claims {
            cfg.lambda_ratio = vec![
                LambdaRatioSpec { target: Target::Zero(0), nus: vec![0.75, 1.0, 2.0] },
                LambdaRatioSpec { target: Target::Point(c(0.4, 14.13)), nus: vec![0.75, 1.0, 2.0] },
            ];
            cfg.rh = vec![RhSpec {
                t_star: 14.134725141734693,
                eps: vec![0.0, 0.1],
                nus: vec![1.0, 2.0, 5.0, 10.0],
            }];
        }
        if !cfg.ratio_limits.is_empty() || !cfg.lambda_ratio.is_empty() {
            cfg.zero_window = Some((10.0, 30.0));
        }
        cfg
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("suite config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self::for_suite(Suite::All)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCheck {
    pub group: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub informational: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSuite {
    pub version: String,
    pub config_digest: String,
    pub summary: Summary,
    pub skipped: Vec<SkippedCheck>,
    pub reports: Vec<AuditReport>,
}

impl AuditSuite {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit suite serializes")
    }
}

enum Task<'a> {
    Functional(&'a [ComplexValue]),
    Limit(&'a LimitSpec),
    Asymptotic(&'a AsymptoticSpec),
    Coefficients(&'a CoeffSpec),
    Expansion(&'a ExpansionSpec),
    EmbedFunctional(&'a EmbedFunctionalSpec),
    Ratio(&'a RatioSpec),
    LambdaRatio(&'a LambdaRatioSpec),
    Rh(&'a RhSpec),
}

impl Task<'_> {
    fn group(&self) -> &'static str {
        match self {
            Task::Functional(_) => "functional-equation",
            Task::Limit(_) => "limit",
            Task::Asymptotic(_) => "asymptotic",
            Task::Coefficients(_) => "coefficients",
            Task::Expansion(_) => "expansion",
            Task::EmbedFunctional(_) => "embed-functional",
            Task::Ratio(_) => "ratio-limit",
            Task::LambdaRatio(_) => "lambda-ratio",
            Task::Rh(_) => "rh",
        }
    }

    fn run(&self, zeros: &std::result::Result<Vec<ComplexValue>, String>, cfg: &EvalConfig) -> Result<Vec<AuditReport>> {
        let zero = |i: usize| -> Result<ComplexValue> {
            match zeros {
                Ok(z) => z
                    .get(i)
                    .copied()
                    .ok_or_else(|| EtaError::Usage(format!("zero #{i} requested but only {} located", z.len()))),
                Err(msg) => Err(EtaError::NonConvergence(format!("zero location failed: {msg}"))),
            }
        };
        match self {
            Task::Functional(pts) => Ok(vec![functional_grid_audit(pts, cfg)?]),
            Task::Limit(spec) => limit_audit(spec, cfg),
            Task::Asymptotic(spec) => asymptotic_order(spec, cfg),
            Task::Coefficients(spec) => coefficient_audit(spec),
            Task::Expansion(spec) => expansion_audit(spec, cfg),
            Task::EmbedFunctional(spec) => {
                let table = CoeffTable::build(spec.kappa, DEFAULT_ORDER, DEFAULT_SERIES_TOL)?;
                let params = EmbeddingParams::new(spec.kappa, spec.nu)?;
                Ok(vec![embed_functional_residual(spec.s, &params, &table, cfg)?])
            }
            Task::Ratio(spec) => ratio_limit_audit(zero(spec.zero)?, spec.nu, &spec.kappas, cfg),
            Task::LambdaRatio(spec) => {
                let s = match &spec.target {
                    Target::Zero(i) => zero(*i)?,
                    Target::Point(p) => *p,
                };
                lambda_ratio_audit(s, &spec.nus, cfg)
            }
            Task::Rh(spec) => rh_consistency_audit(spec.t_star, &spec.eps, &spec.nus, cfg),
        }
    }
}

/// Run every configured audit. Failing groups are recorded as skipped and
/// the rest of the suite still runs. Reports are ordered by `check_id`,
/// which carries the group's position in the configuration.
pub fn run_suite(config: &SuiteConfig) -> Result<AuditSuite> {
    config.eval.validate()?;
    let cfg = &config.eval;
    let zeros: std::result::Result<Vec<ComplexValue>, String> = match config.zero_window {
        Some((lo, hi)) => locate_zeros(lo, hi, 0.05, cfg)
            .map(|zs| zs.iter().map(|z| z.point()).collect())
            .map_err(|e| e.to_string()),
        None => Ok(Vec::new()),
    };

    let mut tasks: Vec<Task> = Vec::new();
    if !config.functional_points.is_empty() {
        tasks.push(Task::Functional(&config.functional_points));
    }
    tasks.extend(config.limits.iter().map(Task::Limit));
    tasks.extend(config.asymptotic.iter().map(Task::Asymptotic));
    tasks.extend(config.coefficients.iter().map(Task::Coefficients));
    tasks.extend(config.expansion.iter().map(Task::Expansion));
    tasks.extend(config.embed_functional.iter().map(Task::EmbedFunctional));
    tasks.extend(config.ratio_limits.iter().map(Task::Ratio));
    tasks.extend(config.lambda_ratio.iter().map(Task::LambdaRatio));
    tasks.extend(config.rh.iter().map(Task::Rh));

    let results: Vec<Result<Vec<AuditReport>>> = tasks.par_iter().map(|t| t.run(&zeros, cfg)).collect();

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (k, (task, result)) in tasks.iter().zip(results).enumerate() {
        let group = format!("{:03}.{}", k, task.group());
        match result {
            Ok(rs) => reports.extend(rs.into_iter().map(|mut r| {
                r.check_id = format!("{:03}.{}", k, r.check_id);
                r
            })),
            Err(e) => skipped.push(SkippedCheck { group, reason: e.to_string() }),
        }
    }
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));

    let mut summary = Summary { skipped: skipped.len(), ..Summary::default() };
    for r in &reports {
        match r.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Informational => summary.informational += 1,
        }
    }
    Ok(AuditSuite {
        version: REPORT_VERSION.to_string(),
        config_digest: config.digest(),
        summary,
        skipped,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    const Z1: f64 = 14.134725141734693;
    const Z2: f64 = 21.022039638771555;

    fn all_pass(rs: &[AuditReport]) -> bool {
        rs.iter().all(|r| r.verdict == Verdict::Pass)
    }

    #[test]
    fn kappa_infinity_limit() {
        let spec = LimitSpec {
            kind: LimitKind::KappaInfinity,
            s: c(2.0, 0.0),
            fixed: 1.0,
            sweep: vec![10.0, 100.0, 1000.0],
            final_tol: Some(1e-5),
        };
        let rs = limit_audit(&spec, &cfg()).unwrap();
        assert!(all_pass(&rs), "{rs:#?}");
        assert!(rs[2].residual < 1e-5);
        assert!(rs[0].residual > rs[1].residual && rs[1].residual > rs[2].residual);
    }

    #[test]
    fn kappa_zero_and_nu_limits() {
        for (kind, fixed, sweep) in [
            (LimitKind::KappaZero, 1.5, vec![0.1, 0.01, 0.001]),
            (LimitKind::NuZero, 1.0, vec![0.1, 0.01, 0.001]),
            (LimitKind::NuInfinity, 1.0, vec![2.0, 4.0, 8.0]),
        ] {
            let spec = LimitSpec { kind, s: c(2.0, 0.0), fixed, sweep, final_tol: None };
            let rs = limit_audit(&spec, &cfg()).unwrap();
            assert!(all_pass(&rs), "{kind:?}: {rs:#?}");
        }
    }

    #[test]
    fn kappa_zero_target_below_nu_one() {
        // nu = 0.7: weights of m = 0 and m = 1 (2^{-0.7} > 1/2) vanish
        let s = c(2.0, 1.0);
        let t = kappa_zero_target(s, 0.7, &cfg()).unwrap();
        let want = eta(s, &cfg()).unwrap().value - 1.0 + complex_pow_real_base(2.0, -s).unwrap();
        assert!((t - want).norm() < 1e-15);
        let near = embed(s, 1e-3, 0.7, &cfg()).unwrap();
        assert!((near - t).norm() < 1e-12);
    }

    #[test]
    fn asymptotics() {
        let spec = AsymptoticSpec { s: c(0.5, 3.0), nu: 1.0, kappas: vec![10.0, 20.0, 40.0] };
        let rs = asymptotic_order(&spec, &cfg()).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(all_pass(&rs), "{rs:#?}");
        let bad = AsymptoticSpec { kappas: vec![10.0, 20.0], ..spec };
        assert!(asymptotic_order(&bad, &cfg()).is_err());
    }

    #[test]
    fn embedding_functional_relationship() {
        for (kappa, nu, s) in [(2.0, 1.0, c(0.3, 5.0)), (5.0, 0.6, c(0.5, 14.0))] {
            let table = CoeffTable::build(kappa, DEFAULT_ORDER, DEFAULT_SERIES_TOL).unwrap();
            let p = EmbeddingParams::new(kappa, nu).unwrap();
            let r = embed_functional_residual(s, &p, &table, &cfg()).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        }
    }

    #[test]
    fn embedding_functional_degenerate_kappa() {
        let table = CoeffTable::build(1e6, 4, DEFAULT_SERIES_TOL).unwrap();
        let p = EmbeddingParams::new(1e6, 1.0).unwrap();
        let r = embed_functional_residual(c(0.3, 5.0), &p, &table, &cfg()).unwrap();
        assert!(r.lhs.norm() < 1e-8 && r.rhs.norm() < 1e-8, "{r:#?}");
    }

    #[test]
    fn embedding_functional_rejects_mismatched_table() {
        let table = CoeffTable::build(2.0, 8, DEFAULT_SERIES_TOL).unwrap();
        let p = EmbeddingParams::new(3.0, 1.0).unwrap();
        assert!(embed_functional_residual(c(0.3, 5.0), &p, &table, &cfg()).is_err());
    }

    #[test]
    fn ratio_limit_first_zero() {
        let z = c(0.5, Z1);
        let rs = ratio_limit_audit(z, 1.0, &[10.0, 20.0, 40.0], &cfg()).unwrap();
        assert!(all_pass(&rs), "{rs:#?}");
        let rs = ratio_limit_audit(z, 2.0, &[40.0], &cfg()).unwrap();
        assert!(rs[0].residual < 1e-4);
        assert!(ratio_limit_audit(z, 0.5, &[10.0], &cfg()).is_err());
    }

    // Convergence is O(kappa^-2) with a larger constant at the second zero;
    // at kappa = 40 the residual lands just above 1e-4 and the audit reports
    // that as a failure.
    #[test]
    fn ratio_limit_second_zero_misses_target_at_forty() {
        for (nu, lo, hi) in [(0.75, 1.1e-4, 1.2e-4), (1.0, 1.0e-4, 1.05e-4)] {
            let rs = ratio_limit_audit(c(0.5, Z2), nu, &[10.0, 20.0, 40.0], &cfg()).unwrap();
            for w in rs.windows(2) {
                let q = w[0].residual / w[1].residual;
                assert!((q - 4.0).abs() < 0.1, "nu {nu}: ratio {q}");
            }
            assert!(rs[2].residual > lo && rs[2].residual < hi, "nu {nu}: {}", rs[2].residual);
            assert_eq!(rs[2].verdict, Verdict::Fail);
        }
        let rs = ratio_limit_audit(c(0.5, Z2), 1.0, &[10.0, 20.0, 40.0, 80.0], &cfg()).unwrap();
        assert!(all_pass(&rs), "{rs:#?}");
    }

    #[test]
    fn lambda_ratio_on_line_modulus() {
        let z = crate::zeros::refine_zero(14.1, &cfg()).unwrap().point();
        let rs = lambda_ratio_audit(z, &[0.75, 1.0, 2.0], &cfg()).unwrap();
        for r in &rs {
            if r.check_id.starts_with("lambda-ratio.complex") {
                assert_eq!(r.verdict, Verdict::Informational);
            } else {
                assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
            }
        }
    }

    #[test]
    fn lambda_ratio_off_line_probe_varies_with_nu() {
        let rs = lambda_ratio_audit(c(0.4, 14.13), &[0.75, 1.0, 2.0], &cfg()).unwrap();
        assert!(rs.iter().all(|r| r.verdict == Verdict::Informational));
        let moduli: Vec<f64> = rs.iter().filter(|r| r.check_id.starts_with("lambda-ratio.modulus")).map(|r| r.lhs.re).collect();
        let lam = rs[0].rhs.norm();
        assert!(moduli.iter().all(|m| (m - lam).abs() > 1e-6));
        assert!((moduli[0] - moduli[2]).abs() > 1e-6);
    }

    #[test]
    fn rh_audit_shapes() {
        let rs = rh_consistency_audit(Z1, &[0.0, 0.1], &[1.0, 2.0, 5.0, 10.0], &cfg()).unwrap();
        for r in rs.iter().filter(|r| r.check_id.starts_with("rh.conjugate-modulus")) {
            assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        }
        let asym: Vec<&AuditReport> = rs.iter().filter(|r| r.check_id.starts_with("rh.asymptote")).collect();
        assert_eq!(asym.len(), 4);
        // at eps = 0.1 the dropped terms are ~1e-5 at nu = 5 and ~1e-8 at nu = 10
        let eps01: Vec<&&AuditReport> = asym.iter().filter(|r| r.inputs["eps"] == 0.1).collect();
        assert_eq!(eps01[0].verdict, Verdict::Fail);
        assert!(eps01[0].residual < 1e-4);
        assert_eq!(eps01[1].verdict, Verdict::Pass);
        assert!(rh_consistency_audit(Z1, &[0.3], &[1.0], &cfg()).unwrap_err().is_usage());
    }

    #[test]
    fn functional_grid_skips_singular_points() {
        let r = functional_grid_audit(&functional_grid(), &cfg()).unwrap();
        assert_eq!(r.inputs["skipped_singular"], 3);
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn empty_suite() {
        let s = run_suite(&SuiteConfig::empty()).unwrap();
        assert!(s.reports.is_empty() && s.skipped.is_empty());
        assert!(!s.failed());
    }

    #[test]
    fn bad_kappa_is_skipped_not_fatal() {
        let mut config = SuiteConfig::empty();
        config.coefficients = vec![CoeffSpec { kappa: 0.5, order: 8 }, CoeffSpec { kappa: 2.0, order: 8 }];
        let s = run_suite(&config).unwrap();
        assert_eq!(s.summary.skipped, 1);
        assert!(s.skipped[0].reason.contains("3/pi"));
        assert_eq!(s.summary.pass, 4);
    }

    #[test]
    fn report_schema() {
        let mut config = SuiteConfig::empty();
        config.coefficients = vec![CoeffSpec { kappa: 2.0, order: 8 }];
        let s = run_suite(&config).unwrap();
        let v: Value = serde_json::from_str(&s.to_json()).unwrap();
        for key in ["version", "config_digest", "summary", "reports"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let r = &v["reports"][0];
        for key in ["check_id", "paper_anchor", "inputs", "lhs", "rhs", "residual", "tolerance", "verdict"] {
            assert!(r.get(key).is_some(), "{key}");
        }
        assert!(r["lhs"].get("re").is_some());
        assert_eq!(s.config_digest.len(), 64);
    }
}
