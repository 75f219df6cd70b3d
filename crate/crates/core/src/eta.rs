//! The Dirichlet eta function through its Euler-accelerated double series
//!
//! ```text
//! eta(s) = sum_{k>=0} 2^{-k-1} sum_{m=0}^{k} C(k,m) (-1)^m (m+1)^{-s}
//! ```
//!
//! which converges on the whole plane, together with its derivative, the
//! functional-equation factor `lambda(s)` and an independent evaluator used
//! to cross-check all of the above.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{EtaError, Result};
use crate::numkernel::{
    c, is_finite, ln_sin, log_gamma, pow_real_base_unchecked, AccumMode, ComplexAccumulator,
    ComplexValue,
};

pub const KMAX_MIN: usize = 8;
pub const KMAX_MAX: usize = 512;
pub const TOL_MIN: f64 = 1e-15;

/// Truncation and accumulation settings for the double series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Cap on the outer index `k` (number of outer terms).
    pub kmax: usize,
    /// Target absolute error.
    pub tol: f64,
    pub mode: AccumMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            kmax: 192,
            tol: 1e-14,
            mode: AccumMode::Compensated,
        }
    }
}

impl EvalConfig {
    pub fn new(kmax: usize, tol: f64, mode: AccumMode) -> Result<Self> {
        let cfg = Self { kmax, tol, mode };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(KMAX_MIN..=KMAX_MAX).contains(&self.kmax) {
            return Err(EtaError::Usage(format!(
                "kmax must be in {KMAX_MIN}..={KMAX_MAX}, got {}",
                self.kmax
            )));
        }
        if !(self.tol >= TOL_MIN) || !self.tol.is_finite() {
            return Err(EtaError::Usage(format!(
                "tol must be finite and >= {TOL_MIN:e}, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// A series value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaValue {
    #[serde(with = "crate::numkernel::re_im")]
    pub value: ComplexValue,
    pub est_error: f64,
    /// Number of outer terms summed.
    pub terms_used: usize,
}

/// Per-summand real weight applied to `(m+1)^{-s}` inside the double series.
pub(crate) trait SummandWeight {
    fn weight(&mut self, m: usize) -> f64;
}

pub(crate) struct Unweighted;

impl SummandWeight for Unweighted {
    #[inline]
    fn weight(&mut self, _m: usize) -> f64 {
        1.0
    }
}

impl SummandWeight for &[f64] {
    #[inline]
    fn weight(&mut self, m: usize) -> f64 {
        self[m]
    }
}

const NOISE_FLOOR_FACTOR: f64 = 16.0;

/// Shared engine behind `eta`, `eta_derivative` and the embedding.
///
/// `log_factor` multiplies each summand by `-ln(m+1)` (term-wise
/// derivative in `s`).
pub(crate) fn euler_series<W: SummandWeight>(
    s: ComplexValue,
    mut weights: W,
    log_factor: bool,
    cfg: &EvalConfig,
) -> Result<EtaValue> {
    if !is_finite(s) {
        return Err(EtaError::Domain("eta evaluated at a non-finite point".into()));
    }
    cfg.validate()?;

    let threshold = cfg.tol / 4.0;
    let mut summands: Vec<ComplexValue> = Vec::with_capacity(cfg.kmax);
    let mut outer = ComplexAccumulator::new(cfg.mode);
    let mut recent = [f64::INFINITY; 3];
    let mut small_run = 0usize;
    let mut abs_mass = 0.0f64;
    let mut last = 0.0f64;

    for k in 0..cfg.kmax {
        // summand for m = k enters the row
        let ln_m1 = ((k + 1) as f64).ln();
        let mut term = pow_real_base_unchecked(ln_m1, -s) * weights.weight(k);
        if log_factor {
            term *= -ln_m1;
        }
        summands.push(term);

        // scaled binomial C(k,m) / 2^{k+1}, updated by ratio
        let mut binom = 0.5f64.powi(k as i32 + 1);
        let mut inner = ComplexAccumulator::new(cfg.mode);
        let mut row_abs = 0.0f64;
        let mut row_mass = 0.0f64;
        for (m, &p) in summands.iter().enumerate() {
            let signed = if m % 2 == 0 { binom } else { -binom };
            let contrib = p * signed;
            inner.add(contrib);
            row_abs += contrib.norm();
            row_mass += (m + 2) as f64 * contrib.norm();
            binom *= (k - m) as f64 / (m + 1) as f64;
        }
        let f_k = inner.value();
        outer.add(f_k);
        abs_mass += row_mass;

        last = f_k.norm();
        recent = [recent[1], recent[2], last];
        // below tol/4, or lost in the rounding floor of this row (large
        // cancellation when Re s < 0)
        if last < threshold.max(NOISE_FLOOR_FACTOR * f64::EPSILON * row_abs) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let est_error = recent.iter().sum::<f64>() + last + f64::EPSILON * abs_mass;
            return Ok(EtaValue {
                value: outer.value(),
                est_error,
                terms_used: k + 1,
            });
        }
    }

    let best = outer.value();
    let est_error = recent.iter().filter(|x| x.is_finite()).sum::<f64>()
        + last
        + f64::EPSILON * abs_mass;
    Err(EtaError::Accuracy {
        best,
        est_error,
        terms_used: cfg.kmax,
    })
}

/// `eta(s)` by the globally convergent double series.
pub fn eta(s: ComplexValue, cfg: &EvalConfig) -> Result<EtaValue> {
    euler_series(s, Unweighted, false, cfg)
}

/// `eta'(s)` by term-wise differentiation of the same series.
pub fn eta_derivative(s: ComplexValue, cfg: &EvalConfig) -> Result<EtaValue> {
    euler_series(s, Unweighted, true, cfg)
}

/// Distance below which `lambda` refuses to evaluate.
pub const LAMBDA_SINGULAR_TOL: f64 = 1e-10;

/// `ln(1 - 2^z)`, any branch; stable when `2^z` is huge or tiny.
fn ln_one_minus_pow2(z: ComplexValue) -> ComplexValue {
    if z.re > 1.0 {
        let inv = pow_real_base_unchecked(LN_2, -z);
        z * LN_2 + (inv - 1.0).ln()
    } else {
        (c(1.0, 0.0) - pow_real_base_unchecked(LN_2, z)).ln()
    }
}

fn check_lambda_domain(s: ComplexValue) -> Result<()> {
    if !is_finite(s) {
        return Err(EtaError::Domain("lambda evaluated at a non-finite point".into()));
    }
    // zeros of 1 - 2^s: s = 2 pi i n / ln 2
    let period = 2.0 * PI / LN_2;
    let n = (s.im / period).round();
    if (s - c(0.0, n * period)).norm() <= LAMBDA_SINGULAR_TOL {
        return Err(EtaError::Singularity(format!(
            "lambda has a pole at 2*pi*i*{n}/ln 2 (1 - 2^s = 0)"
        )));
    }
    if (s - c(1.0, 0.0)).norm() <= LAMBDA_SINGULAR_TOL {
        return Err(EtaError::Singularity("lambda is singular at s = 1".into()));
    }
    // uncancelled poles of Gamma(1 - s): odd integers >= 3
    let r = s.re.round();
    if r >= 3.0 && r % 2.0 == 1.0 && (s - c(r, 0.0)).norm() <= LAMBDA_SINGULAR_TOL {
        return Err(EtaError::Singularity(format!(
            "lambda has a pole at s = {r} (Gamma(1 - s) not cancelled)"
        )));
    }
    Ok(())
}

/// `lambda(s)` with `eta(s) = lambda(s) eta(1 - s)`:
///
/// ```text
/// lambda(s) = (1 - 2^{1-s}) / (1 - 2^s) * 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s)
/// ```
///
/// Every factor is taken as a logarithm and the sum exponentiated once.
/// For `Re s > 1/2`, `sin(pi s/2) Gamma(1-s)` is replaced by
/// `pi / (2 cos(pi s/2) Gamma(s))`.
pub fn lambda_factor(s: ComplexValue) -> Result<ComplexValue> {
    check_lambda_domain(s)?;
    let one = c(1.0, 0.0);
    let numer = c(1.0, 0.0) - pow_real_base_unchecked(LN_2, one - s);
    if numer.norm() == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    let mut log = ln_one_minus_pow2(one - s) - ln_one_minus_pow2(s) + s * LN_2 + (s - one) * PI.ln();
    let half = s * (PI / 2.0);
    if s.re <= 0.5 {
        let sin = half.sin();
        if sin.norm() == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        log += ln_sin(half) + log_gamma(one - s)?;
    } else {
        log += c((PI / 2.0).ln(), 0.0) - ln_sin(half + PI / 2.0) - log_gamma(s)?;
    }
    let value = log.exp();
    if !is_finite(value) {
        return Err(EtaError::Singularity(format!("lambda overflowed at {s}")));
    }
    Ok(value)
}

/// `|eta(s) - lambda(s) eta(1 - s)|`.
pub fn functional_residual(s: ComplexValue, cfg: &EvalConfig) -> Result<f64> {
    let lam = lambda_factor(s)?;
    let lhs = eta(s, cfg)?.value;
    let rhs = eta(c(1.0, 0.0) - s, cfg)?.value;
    Ok((lhs - lam * rhs).norm())
}

/// Independent evaluator for `Re s > 0.05`: the alternating Dirichlet
/// series summed directly up to a cut, then `nterms` rounds of averaging
/// over the following `nterms` partial sums.
pub fn eta_oracle(s: ComplexValue, nterms: usize) -> Result<ComplexValue> {
    if !is_finite(s) || s.re <= 0.05 {
        return Err(EtaError::Domain(format!(
            "oracle requires Re s > 0.05, got {}",
            s.re
        )));
    }
    if nterms == 0 {
        return Err(EtaError::Usage("oracle needs at least one averaging term".into()));
    }
    let cut = 2 * nterms + 4 * s.norm().ceil() as usize;
    let mut acc = ComplexAccumulator::new(AccumMode::DoubleDouble);
    let mut partial = Vec::with_capacity(nterms + 1);
    for m in 1..=cut + nterms {
        let term = pow_real_base_unchecked((m as f64).ln(), -s);
        if m % 2 == 1 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
        if m >= cut {
            partial.push(acc.value());
        }
    }
    // repeated neighbour averaging
    while partial.len() > 1 {
        for i in 0..partial.len() - 1 {
            partial[i] = (partial[i] + partial[i + 1]) * 0.5;
        }
        partial.pop();
    }
    Ok(partial[0])
}
