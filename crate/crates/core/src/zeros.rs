//! Nontrivial zeros of `eta` on the critical line and zero counts in
//! rectangles by the argument principle.

use std::f64::consts::{LN_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EtaError, Result};
use crate::eta::{eta, eta_derivative, lambda_factor, EvalConfig, KMAX_MAX};
use crate::numkernel::{c, format_real, ComplexValue};

pub const SCAN_THRESHOLD: f64 = 0.1;
pub const MAX_SCAN_HEIGHT: f64 = 60.0;
pub const MAX_SCAN_STEP: f64 = 0.1;
pub const MAX_NEWTON_ITERATIONS: usize = 50;
/// Newton target for `|eta|` at an accepted zero.
pub const NEWTON_TARGET: f64 = 1e-10;
/// Smallest `|eta|` allowed on a counting contour.
pub const BOUNDARY_MIN_MODULUS: f64 = 1e-6;
pub const WINDING_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefineMethod {
    Newton,
    Bisect,
}

impl RefineMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RefineMethod::Newton => "newton",
            RefineMethod::Bisect => "bisect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub sigma: f64,
    pub t: f64,
    /// `|eta|` at the reported point.
    pub residual: f64,
    pub method: RefineMethod,
    pub iterations: usize,
}

impl ZeroRecord {
    pub fn point(&self) -> ComplexValue {
        c(self.sigma, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rect {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let all_finite = [sigma_min, sigma_max, t_min, t_max].iter().all(|x| x.is_finite());
        if !all_finite || sigma_min >= sigma_max || t_min >= t_max {
            return Err(EtaError::Usage(format!(
                "rectangle [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}] is empty or not finite"
            )));
        }
        Ok(Self { sigma_min, sigma_max, t_min, t_max })
    }

    /// Corners in counter-clockwise order starting bottom-left.
    fn corners(&self) -> [ComplexValue; 4] {
        [
            c(self.sigma_min, self.t_min),
            c(self.sigma_max, self.t_min),
            c(self.sigma_max, self.t_max),
            c(self.sigma_min, self.t_max),
        ]
    }

    pub fn contains(&self, s: ComplexValue) -> bool {
        s.re > self.sigma_min && s.re < self.sigma_max && s.im > self.t_min && s.im < self.t_max
    }
}

fn check_scan_window(t_min: f64, t_max: f64) -> Result<()> {
    if !(t_min > 0.0 && t_min < t_max && t_max <= MAX_SCAN_HEIGHT) {
        return Err(EtaError::Usage(format!(
            "scan window must satisfy 0 < tmin < tmax <= {MAX_SCAN_HEIGHT}; got [{t_min}, {t_max}]"
        )));
    }
    Ok(())
}

/// Grid minima of `|eta(1/2 + i t)|` below `SCAN_THRESHOLD`.
pub fn scan_critical_line(t_min: f64, t_max: f64, step: f64, cfg: &EvalConfig) -> Result<Vec<f64>> {
    check_scan_window(t_min, t_max)?;
    if !(step > 0.0 && step <= MAX_SCAN_STEP) {
        return Err(EtaError::Usage(format!("scan step must be in (0, {MAX_SCAN_STEP}], got {step}")));
    }
    let count = ((t_max - t_min) / step).floor() as usize + 1;
    let ts: Vec<f64> = (0..count).map(|k| t_min + k as f64 * step).collect();
    let moduli = ts
        .par_iter()
        .map(|&t| eta(c(0.5, t), cfg).map(|v| v.value.norm()))
        .collect::<Result<Vec<f64>>>()?;

    let mut out: Vec<f64> = Vec::new();
    for k in 1..count.saturating_sub(1) {
        let m = moduli[k];
        if m < SCAN_THRESHOLD && m <= moduli[k - 1] && m < moduli[k + 1] {
            match out.last() {
                Some(prev) if ts[k] - prev <= 2.0 * step => {}
                _ => out.push(ts[k]),
            }
        }
    }
    Ok(out)
}

/// Complex Newton iteration from `1/2 + i t0`.
pub fn refine_zero(t0: f64, cfg: &EvalConfig) -> Result<ZeroRecord> {
    let mut s = c(0.5, t0);
    let mut trace = Vec::new();
    for it in 1..=MAX_NEWTON_ITERATIONS {
        let f = eta(s, cfg)?.value;
        let df = eta_derivative(s, cfg)?.value;
        if df.norm() < 1e-300 {
            return Err(EtaError::NonConvergence(format!("eta' underflowed at {s} (start t0 = {t0})")));
        }
        let step = f / df;
        s -= step;
        trace.push(f.norm());
        if step.norm() < 1e-12 || (f.norm() < NEWTON_TARGET && step.norm() < 1e-10) {
            let residual = eta(s, cfg)?.value.norm();
            if residual < NEWTON_TARGET {
                return Ok(ZeroRecord { sigma: s.re, t: s.im, residual, method: RefineMethod::Newton, iterations: it });
            }
        }
        if (s.im - t0).abs() > 2.0 {
            break;
        }
    }
    Err(EtaError::NonConvergence(format!(
        "Newton from t0 = {t0} did not converge; |eta| trace {trace:?}"
    )))
}

/// `eta(1/2 + it)` rotated by a square root of `conj(lambda)`; real on the
/// critical line. `reference` fixes the branch of the square root.
fn rotated_real(t: f64, reference: ComplexValue, cfg: &EvalConfig) -> Result<f64> {
    let s = c(0.5, t);
    let root = lambda_factor(s)?.sqrt();
    let root = if (root - reference).norm() <= (root + reference).norm() { root } else { -root };
    Ok((eta(s, cfg)?.value * root.conj()).re)
}

/// Bisection on the sign of the phase-corrected real trace along the
/// critical line. Independent of Newton; assumes `sigma = 1/2`.
pub fn bisect_zero(t_lo: f64, t_hi: f64, cfg: &EvalConfig) -> Result<ZeroRecord> {
    if !(t_lo < t_hi && t_lo > 0.0) {
        return Err(EtaError::Usage(format!("bisection bracket [{t_lo}, {t_hi}] is invalid")));
    }
    let reference = lambda_factor(c(0.5, 0.5 * (t_lo + t_hi)))?.sqrt();
    let (mut lo, mut hi) = (t_lo, t_hi);
    let mut f_lo = rotated_real(lo, reference, cfg)?;
    let f_hi = rotated_real(hi, reference, cfg)?;
    if f_lo == 0.0 {
        hi = lo;
    } else if f_lo.signum() == f_hi.signum() {
        return Err(EtaError::NonConvergence(format!("no sign change on [{t_lo}, {t_hi}]")));
    }
    let mut iterations = 0;
    while hi - lo > 1e-13 * hi && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = rotated_real(mid, reference, cfg)?;
        iterations += 1;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
        } else if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let residual = eta(c(0.5, t), cfg)?.value.norm();
    Ok(ZeroRecord { sigma: 0.5, t, residual, method: RefineMethod::Bisect, iterations })
}

/// Scan then Newton-refine; results in ascending `t`, duplicates dropped.
pub fn locate_zeros(t_min: f64, t_max: f64, step: f64, cfg: &EvalConfig) -> Result<Vec<ZeroRecord>> {
    let candidates = scan_critical_line(t_min, t_max, step, cfg)?;
    let refined = candidates
        .par_iter()
        .map(|&t0| refine_zero(t0, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<ZeroRecord> = Vec::with_capacity(refined.len());
    for z in refined {
        if z.t < t_min || z.t > t_max {
            continue;
        }
        if out.iter().all(|o| (o.t - z.t).abs() > 1e-6 || (o.sigma - z.sigma).abs() > 1e-6) {
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(out)
}

/// Phase change of `eta` along the segment `a -> b`, stepping adaptively so
/// that no step turns the phase by `pi/2` or more.
fn segment_phase(a: ComplexValue, b: ComplexValue, cfg: &EvalConfig, min_modulus: &mut f64) -> Result<f64> {
    let length = (b - a).norm();
    let dir = (b - a) / length;
    let max_h = (length / 16.0).min(0.05);
    let min_h = 1e-12 * length.max(1.0);
    let mut pos = 0.0;
    let mut h = max_h;
    let mut f = eta(a, cfg)?.value;
    *min_modulus = min_modulus.min(f.norm());
    let mut total = 0.0;
    while pos < length {
        let next = (pos + h).min(length);
        let g = eta(a + dir * next, cfg)?.value;
        let modulus = g.norm();
        *min_modulus = min_modulus.min(modulus);
        if *min_modulus <= BOUNDARY_MIN_MODULUS {
            return Err(EtaError::ZeroOnBoundary { min_modulus: *min_modulus });
        }
        let turn = (g / f).arg();
        if turn.abs() >= PI / 2.0 {
            h *= 0.5;
            if h < min_h {
                return Err(EtaError::ZeroOnBoundary { min_modulus: *min_modulus });
            }
            continue;
        }
        total += turn;
        pos = next;
        f = g;
        h = (h * 1.5).min(max_h);
    }
    Ok(total)
}

/// Settings used on counting contours: only the phase matters, so the
/// series tolerance is relaxed to 1e-10 and the term cap raised, which keeps
/// contours off the critical line evaluable up to the height cap.
pub fn contour_config(cfg: &EvalConfig) -> EvalConfig {
    EvalConfig { kmax: KMAX_MAX, tol: cfg.tol.max(1e-10), mode: cfg.mode }
}

/// Winding number of `eta` around `r` before rounding.
pub fn winding_number(r: &Rect, cfg: &EvalConfig) -> Result<f64> {
    let cfg = &contour_config(cfg);
    let corners = r.corners();
    let mut min_modulus = f64::INFINITY;
    let phases = (0..4)
        .into_par_iter()
        .map(|k| {
            let mut local = f64::INFINITY;
            let phase = segment_phase(corners[k], corners[(k + 1) % 4], cfg, &mut local);
            phase.map(|p| (p, local))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for (p, m) in phases {
        total += p;
        min_modulus = min_modulus.min(m);
    }
    debug_assert!(min_modulus > BOUNDARY_MIN_MODULUS);
    Ok(total / TAU)
}

/// Number of zeros of `eta` inside `r`, counted with multiplicity.
pub fn count_zeros_rect(r: &Rect, cfg: &EvalConfig) -> Result<i64> {
    let w = winding_number(r, cfg)?;
    let rounded = w.round();
    if (w - rounded).abs() > WINDING_SLACK {
        return Err(EtaError::NonIntegerWinding { value: w });
    }
    Ok(rounded as i64)
}

/// Zeros of `1 - 2^{1-s}` (`s = 1 + 2 pi i n / ln 2`, `n != 0`) with
/// `t_min < t < t_max`.
pub fn trivial_line_zeros(t_min: f64, t_max: f64) -> Vec<f64> {
    let period = TAU / LN_2;
    let first = (t_min / period).floor() as i64;
    let last = (t_max / period).ceil() as i64;
    (first..=last)
        .filter(|n| *n != 0)
        .map(|n| n as f64 * period)
        .filter(|t| *t > t_min && *t < t_max)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripCount {
    pub rect: Rect,
    /// All zeros inside the widened rectangle.
    pub total: i64,
    /// Heights of the zeros on `Re s = 1` inside it.
    pub trivial: Vec<f64>,
    pub nontrivial: i64,
}

/// Nontrivial zeros with `t_min < t < t_max` in the critical strip.
///
/// `[0, 1] x [t_min, t_max]` is unusable as a contour because its right
/// edge runs through the zeros at `1 + 2 pi i n / ln 2`. The count uses
/// `[-1/2, 3/2]` instead and subtracts those zeros, which are known in
/// closed form; no other zeros lie in `-1/2 < Re s < 0` or `1 < Re s < 3/2`
/// off the real axis.
pub fn count_strip_zeros(t_min: f64, t_max: f64, cfg: &EvalConfig) -> Result<StripCount> {
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(EtaError::Usage(format!("strip window must satisfy 0 < tmin < tmax; got [{t_min}, {t_max}]")));
    }
    let rect = Rect::new(-0.5, 1.5, t_min, t_max)?;
    let total = count_zeros_rect(&rect, cfg)?;
    let trivial = trivial_line_zeros(t_min, t_max);
    let nontrivial = total - trivial.len() as i64;
    Ok(StripCount { rect, total, trivial, nontrivial })
}

/// `|eta|` at `s`, `1 - s`, `conj s`, `1 - conj s`.
pub fn quartet_check(s: ComplexValue, cfg: &EvalConfig) -> Result<[f64; 4]> {
    let one = c(1.0, 0.0);
    let pts = [s, one - s, s.conj(), one - s.conj()];
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip(pts) {
        *slot = eta(p, cfg)?.value.norm();
    }
    Ok(out)
}

pub const ZERO_CSV_HEADER: &str = "sigma,t,residual,method,iterations";

pub fn zeros_to_csv(zeros: &[ZeroRecord]) -> String {
    let mut out = String::from(ZERO_CSV_HEADER);
    out.push('\n');
    for z in zeros {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_real(z.sigma),
            format_real(z.t),
            format_real(z.residual),
            z.method.as_str(),
            z.iterations
        ));
    }
    out
}

pub fn zeros_to_json(zeros: &[ZeroRecord]) -> String {
    serde_json::to_string_pretty(zeros).expect("zero records serialize")
}
