//! Coefficients linking `eta` and `eta_{kappa,nu}` through horizontal
//! shifts:
//!
//! ```text
//! eta_{kappa,nu}(s) = sum_n a_n(kappa) eta(s + 2 nu n)
//! eta(s)            = sum_n b_n(kappa) eta_{kappa,nu}(s + 2 nu n)
//! ```
//!
//! `a_n` comes from the Bernoulli-number series, `b_n` from the
//! convolution inverse `sum_k b_k a_{n-k} = delta_{n0}`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::embedding::{b_ratio, eta_embedding_many, EmbeddingParams, EXPANSION_KAPPA_MIN};
use crate::error::{EtaError, Result};
use crate::eta::{eta, EvalConfig};
use crate::numkernel::{bernoulli_even, c, Accumulator, AccumMode, BernoulliTable, ComplexAccumulator, ComplexValue, JMAX_LIMIT};

/// Safety margin above `3/pi` required for tables.
pub const KAPPA_MARGIN: f64 = 0.01;
pub const MAX_ORDER: usize = 64;
pub const DEFAULT_ORDER: usize = 32;
pub const DEFAULT_SERIES_TOL: f64 = 1e-16;
const CONVOLUTION_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub kappa: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Largest inner index `j` the a-series needed.
    #[serde(skip)]
    pub jcap: usize,
    /// Estimate of `sum_{n > N} |a_n|`.
    pub tail_bound: f64,
}

impl CoeffTable {
    /// `a_coeffs` followed by `b_coeffs`.
    pub fn build(kappa: f64, order: usize, tol: f64) -> Result<Self> {
        b_coeffs(a_coeffs(kappa, order, tol)?)
    }

    pub fn has_b(&self) -> bool {
        self.b.len() == self.a.len()
    }

    /// Copy restricted to orders `0..=order`.
    pub fn truncated(&self, order: usize) -> Self {
        let keep = order.min(self.order) + 1;
        Self {
            kappa: self.kappa,
            order: keep - 1,
            a: self.a[..keep].to_vec(),
            b: self.b.iter().take(keep).copied().collect(),
            jcap: self.jcap,
            tail_bound: a_tail(keep - 1, self.kappa),
        }
    }

    /// Largest `|sum_{k<=n} b_k a_{n-k} - delta_{n0}|`.
    pub fn convolution_residual(&self) -> f64 {
        (0..self.b.len())
            .map(|n| {
                let mut acc = Accumulator::new(AccumMode::DoubleDouble);
                for k in 0..=n {
                    acc.add(self.b[k] * self.a[n - k]);
                }
                let target = if n == 0 { 1.0 } else { 0.0 };
                (acc.value() - target).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coefficient table serializes")
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    let bound = EXPANSION_KAPPA_MIN + KAPPA_MARGIN;
    if !(kappa.is_finite() && kappa > bound) {
        return Err(EtaError::Domain(format!(
            "coefficient expansion needs kappa > 3/pi + {KAPPA_MARGIN} (= {bound:.6}); got {kappa}"
        )));
    }
    Ok(())
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

// ln(2^{2j} - 1)
fn ln_pow4_minus_one(j: usize) -> f64 {
    2.0 * j as f64 * LN_2 + (-(0.25f64).powi(j as i32)).ln_1p()
}

/// One `a_n`: `(1/tanh(1/2 kappa)) sum_{j>n} 2^{2n} (2^{2j}-1) B_{2j} /
/// (j (2j-2n-1)! (2n)! kappa^{2j-1})`. Returns the value and the last `j`.
fn a_single(n: usize, kappa: f64, tol: f64, bern: &BernoulliTable) -> Result<(f64, usize)> {
    let j0 = n + 1;
    // first term in log space: kappa^{2n+1} and (2n)! overflow for big n
    let ln_first = bern.ln_abs(j0) + ln_pow4_minus_one(j0) + 2.0 * n as f64 * LN_2
        - (j0 as f64).ln()
        - ln_factorial(2 * n)
        - (2 * n + 1) as f64 * kappa.ln();
    let mut term = bern.sign(j0) * ln_first.exp();
    let inv_k2 = 1.0 / (kappa * kappa);

    let mut partial = Accumulator::new(AccumMode::Compensated);
    let mut j = j0;
    loop {
        partial.add(term);
        let sum = partial.value();
        if term == 0.0 || (j >= n + 4 && term.abs() < tol * sum.abs()) {
            return Ok((sum / (0.5 / kappa).tanh(), j));
        }
        if j >= JMAX_LIMIT {
            return Err(EtaError::Accuracy {
                best: c(sum / (0.5 / kappa).tanh(), 0.0),
                est_error: term.abs(),
                terms_used: j,
            });
        }
        // T_{j+1} / T_j
        let jf = j as f64;
        let pow4 = (4.0 - 0.25f64.powi(j as i32)) / (1.0 - 0.25f64.powi(j as i32));
        let d = (2 * (j - n)) as f64;
        term *= bern.ratio(j) * pow4 * (jf / (jf + 1.0)) / ((d + 1.0) * d) * inv_k2;
        j += 1;
    }
}

/// Cauchy estimate of `sum_{n>N} |a_n|`. The a_n are the Taylor
/// coefficients in `w = y^2` of
///
/// ```text
/// A(w) = (1 + cosh(1/kappa)) / (cosh(1/kappa) + cosh(2 sqrt(w)/kappa))
/// ```
///
/// whose nearest singularities sit at `|w| = (1 + pi^2 kappa^2)/4`. On a
/// circle of radius `rho` inside that, `|a_n| <= M(rho) rho^-n`; the best of
/// a few radii is returned. `M` is sampled on 720 points with 1% slack.
fn a_tail(order: usize, kappa: f64) -> f64 {
    let radius = (1.0 + (std::f64::consts::PI * kappa).powi(2)) / 4.0;
    let ch = (1.0 / kappa).cosh();
    let sup = |rho: f64| {
        (0..720)
            .map(|k| {
                let w = num_complex::Complex64::from_polar(rho, k as f64 * std::f64::consts::TAU / 720.0);
                let v = (w.sqrt() * (2.0 / kappa)).cosh() + ch;
                (1.0 + ch) / v.norm()
            })
            .fold(0.0, f64::max)
            * 1.01
    };
    [0.5, 0.7, 0.8, 0.9, 0.95]
        .iter()
        .map(|f| f * radius)
        .filter(|rho| *rho > 1.0)
        .map(|rho| sup(rho) * rho.powi(-(order as i32 + 1)) / (1.0 - 1.0 / rho))
        .fold(f64::INFINITY, f64::min)
}

/// `sum_{n>N} |b_n|` from the closed form
/// `b_n = (2/kappa)^{2n} / ((2n)! (1 + cosh(1/kappa)))`, `n >= 1`.
fn b_tail(order: usize, kappa: f64) -> f64 {
    let x2 = (2.0 / kappa).powi(2);
    // b_1, then ratios up to b_{order+1}
    let mut term = x2 / (2.0 * (1.0 + (1.0 / kappa).cosh()));
    for n in 1..=order {
        term *= x2 / ((2 * n + 1) as f64 * (2 * n + 2) as f64);
    }
    let mut sum = 0.0;
    let mut n = order + 1;
    while term > sum * 1e-17 && term > 0.0 {
        sum += term;
        term *= x2 / ((2 * n + 1) as f64 * (2 * n + 2) as f64);
        n += 1;
    }
    sum
}

/// `a_0 .. a_N` for `kappa > 3/pi + 0.01`, `N <= 64`.
pub fn a_coeffs(kappa: f64, order: usize, tol: f64) -> Result<CoeffTable> {
    check_kappa(kappa)?;
    if order > MAX_ORDER {
        return Err(EtaError::Usage(format!("coefficient order must be <= {MAX_ORDER}, got {order}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(EtaError::Usage(format!("series tolerance must be positive, got {tol}")));
    }
    let bern = bernoulli_even(JMAX_LIMIT)?;
    let mut a = Vec::with_capacity(order + 1);
    let mut jcap = 0;
    for n in 0..=order {
        let (value, j) = a_single(n, kappa, tol, &bern)?;
        a.push(value);
        jcap = jcap.max(j);
    }
    let tail_bound = a_tail(order, kappa);
    Ok(CoeffTable {
        kappa,
        order,
        a,
        b: Vec::new(),
        jcap,
        tail_bound,
    })
}

/// Fill `b_0 = 1`, `b_k = -sum_{j=1}^{k} a_j b_{k-j}`.
pub fn b_coeffs(mut table: CoeffTable) -> Result<CoeffTable> {
    if table.a.is_empty() {
        return Err(EtaError::Usage("b_coeffs needs the a-side of the table".into()));
    }
    let mut b = Vec::with_capacity(table.a.len());
    b.push(1.0);
    for k in 1..table.a.len() {
        let mut acc = Accumulator::new(AccumMode::DoubleDouble);
        for j in 1..=k {
            acc.add(table.a[j] * b[k - j]);
        }
        b.push(-acc.value());
    }
    table.b = b;
    let residual = table.convolution_residual();
    if !(residual <= CONVOLUTION_GUARD) {
        return Err(EtaError::Consistency(format!(
            "convolution residual {residual:e} exceeds {CONVOLUTION_GUARD:e}"
        )));
    }
    Ok(table)
}

/// Value of a shift series with truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftSum {
    #[serde(with = "crate::numkernel::re_im")]
    pub value: ComplexValue,
    /// Highest shift order used.
    pub order_used: usize,
    pub tail_bound: f64,
}

fn shifted(s: ComplexValue, nu: f64, n: usize) -> ComplexValue {
    s + c(2.0 * nu * n as f64, 0.0)
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(EtaError::Domain(format!("nu must be finite and > 0, got {nu}")));
    }
    Ok(())
}

/// `sum_{n<=N'} a_n eta(s + 2 nu n)`, `N'` the first order with
/// `2 |a_N'| < tol` (or the table order).
pub fn expansion_eval(s: ComplexValue, table: &CoeffTable, nu: f64, cfg: &EvalConfig) -> Result<ShiftSum> {
    check_nu(nu)?;
    let mut order_used = table.order;
    for (n, an) in table.a.iter().enumerate() {
        if n > 0 && 2.0 * an.abs() < cfg.tol {
            order_used = n;
            break;
        }
    }
    let mut acc = ComplexAccumulator::new(cfg.mode);
    for n in 0..=order_used {
        let e = eta(shifted(s, nu, n), cfg)?;
        acc.add(e.value * table.a[n]);
    }
    let tail_bound = 2.0 * table.a[order_used + 1..].iter().map(|x| x.abs()).sum::<f64>()
        + if order_used == table.order { 2.0 * table.tail_bound.min(1.0) } else { 0.0 };
    Ok(ShiftSum {
        value: acc.value(),
        order_used,
        tail_bound,
    })
}

/// `sum_{n<=N'} b_n eta_{kappa,nu}(s + 2 nu n)` plus the tail correction
/// `(1/r - sum_{n<=N'} b_n) r`, `r = B_kappa(1)/B_kappa(0)` being the value
/// `eta_{kappa,nu}` settles at far to the right.
pub fn inversion_eval(s: ComplexValue, table: &CoeffTable, nu: f64, cfg: &EvalConfig) -> Result<ShiftSum> {
    check_nu(nu)?;
    if !table.has_b() {
        return Err(EtaError::Usage("inversion needs b coefficients; run b_coeffs first".into()));
    }
    let params = EmbeddingParams::new(table.kappa, nu)?;
    let plateau = b_ratio(1.0, table.kappa);
    let total = 1.0 / plateau;

    // smallest order whose remaining tail correction is below tol
    let mut partial = Accumulator::new(AccumMode::DoubleDouble);
    let mut order_used = table.order;
    let mut correction = 0.0;
    for (n, bn) in table.b.iter().enumerate() {
        partial.add(*bn);
        correction = (total - partial.value()) * plateau;
        if correction.abs() < cfg.tol {
            order_used = n;
            break;
        }
    }
    let points: Vec<ComplexValue> = (0..=order_used).map(|n| shifted(s, nu, n)).collect();
    let values = eta_embedding_many(&points, &params, cfg)?;
    let mut acc = ComplexAccumulator::new(cfg.mode);
    for (bn, v) in table.b.iter().zip(&values) {
        acc.add(v.value * *bn);
    }
    acc.add(c(correction, 0.0));
    Ok(ShiftSum {
        value: acc.value(),
        order_used,
        tail_bound: correction.abs(),
    })
}

/// Partial coefficient sums against their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffSums {
    pub kappa: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub a_sum_lhs: f64,
    pub a_sum_rhs: f64,
    pub b_sum_lhs: f64,
    pub b_sum_rhs: f64,
    pub a_residual: f64,
    pub b_residual: f64,
    pub a_tail_bound: f64,
    pub b_tail_bound: f64,
}

/// `sum_{n=1}^N a_n` vs `r - 1` and `sum_{n=1}^N b_n` vs `1/r - 1`, with
/// `r = (tanh(3/2kappa) - tanh(1/2kappa)) / (2 tanh(1/2kappa))`.
pub fn coeff_sum_identities(kappa: f64, order: usize) -> Result<CoeffSums> {
    let table = CoeffTable::build(kappa, order, DEFAULT_SERIES_TOL)?;
    coeff_sums_from(&table)
}

/// Same as [`coeff_sum_identities`] for an existing table with both sides.
pub fn coeff_sums_from(table: &CoeffTable) -> Result<CoeffSums> {
    if !table.has_b() {
        return Err(EtaError::Usage("coefficient sums need b coefficients; run b_coeffs first".into()));
    }
    let kappa = table.kappa;
    let ratio = ((1.5 / kappa).tanh() - (0.5 / kappa).tanh()) / (2.0 * (0.5 / kappa).tanh());
    let sum_from_one = |v: &[f64]| {
        let mut acc = Accumulator::new(AccumMode::DoubleDouble);
        for x in &v[1..] {
            acc.add(*x);
        }
        acc.value()
    };
    let a_sum_lhs = sum_from_one(&table.a);
    let b_sum_lhs = sum_from_one(&table.b);
    let a_sum_rhs = ratio - 1.0;
    let b_sum_rhs = 1.0 / ratio - 1.0;
    Ok(CoeffSums {
        kappa,
        order: table.order,
        a_sum_lhs,
        a_sum_rhs,
        b_sum_lhs,
        b_sum_rhs,
        a_residual: (a_sum_lhs - a_sum_rhs).abs(),
        b_residual: (b_sum_lhs - b_sum_rhs).abs(),
        a_tail_bound: a_tail(table.order, kappa),
        b_tail_bound: b_tail(table.order, kappa),
    })
}
