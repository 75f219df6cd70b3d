use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
#[cfg(test)]
use num_traits::Signed;

use crate::error::{EtaError, Result};

/// Largest index 2j carried as an exact rational.
pub const EXACT_MAX_INDEX: usize = 60;
pub const JMAX_LIMIT: usize = 200;

/// Even Bernoulli numbers `B_0, B_2, ..., B_{2 jmax}`.
///
/// Entries with `2j <= 60` are exact rationals; beyond that only the float
/// route through `zeta(2j)` is kept. `B_{2j}` overflows `f64` past
/// `2j ~ 260`, so the table also carries `ln |B_{2j}|` and the sign.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    jmax: usize,
    exact: Vec<BigRational>,
    ln_abs: Vec<f64>,
    values: Vec<f64>,
}

impl BernoulliTable {
    pub fn jmax(&self) -> usize {
        self.jmax
    }

    /// Exact `B_{2j}` when `2j <= 60`.
    pub fn exact(&self, j: usize) -> Option<&BigRational> {
        self.exact.get(j)
    }

    /// `B_{2j}` as `f64`; may be infinite for large `j`.
    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn ln_abs(&self, j: usize) -> f64 {
        self.ln_abs[j]
    }

    /// Sign of `B_{2j}`: `+1` for `j = 0` and odd `j`, `-1` for even `j >= 2`.
    pub fn sign(&self, j: usize) -> f64 {
        if j == 0 || j % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// `B_{2j+2} / B_{2j}` without forming either number.
    pub fn ratio(&self, j: usize) -> f64 {
        assert!(j >= 1 && j < self.jmax, "ratio index out of range");
        if 2 * j + 2 <= EXACT_MAX_INDEX {
            let q = &self.exact[j + 1] / &self.exact[j];
            return q.to_f64().unwrap_or(f64::NAN);
        }
        let n = 2.0 * j as f64;
        -(n + 2.0) * (n + 1.0) / (4.0 * PI * PI) * zeta_even(2 * j + 2) / zeta_even(2 * j)
    }
}

/// Build the table up to `B_{2 jmax}`, `1 <= jmax <= 200`.
pub fn bernoulli_even(jmax: usize) -> Result<BernoulliTable> {
    if !(1..=JMAX_LIMIT).contains(&jmax) {
        return Err(EtaError::Usage(format!(
            "bernoulli jmax must be in 1..={JMAX_LIMIT}, got {jmax}"
        )));
    }
    let all = bernoulli_all_exact(EXACT_MAX_INDEX.min(2 * jmax));
    let exact: Vec<BigRational> = all.into_iter().step_by(2).collect();

    let mut ln_abs = Vec::with_capacity(jmax + 1);
    let mut values = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        if let Some(q) = exact.get(j) {
            let v = q.to_f64().unwrap_or(f64::NAN);
            values.push(v);
            ln_abs.push(v.abs().ln());
        } else {
            // |B_2j| = 2 (2j)! zeta(2j) / (2 pi)^{2j}
            let n = 2 * j;
            let ln = std::f64::consts::LN_2 + ln_factorial(n) + zeta_even(n).ln()
                - n as f64 * (2.0 * PI).ln();
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            ln_abs.push(ln);
            values.push(sign * ln.exp());
        }
    }
    Ok(BernoulliTable {
        jmax,
        exact,
        ln_abs,
        values,
    })
}

/// `B_0 .. B_n` (all indices, with `B_1 = -1/2`) from
/// `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
pub(crate) fn bernoulli_all_exact(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m >= 3 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // binomials C(m+1, k) built row-wise
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `zeta(n)` for even `n >= 2` by direct summation. Only called for
/// `n > 60` in the table, where a handful of terms suffice; small `n` fall
/// back to a tail-corrected sum.
pub(crate) fn zeta_even(n: usize) -> f64 {
    let s = n as f64;
    let mut sum = 0.0;
    let mut m = 1.0f64;
    loop {
        let term = m.powf(-s);
        sum += term;
        if term < 1e-18 * sum || m > 5.0e4 {
            break;
        }
        m += 1.0;
    }
    if m > 5.0e4 {
        // integral tail estimate with Euler-Maclaurin first correction
        let tail = m.powf(1.0 - s) / (s - 1.0) - 0.5 * m.powf(-s);
        sum += tail;
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Residual of the defining recurrence at order `m` in exact arithmetic.
#[cfg(test)]
pub(crate) fn recurrence_residual(b: &[BigRational], m: usize) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for (k, bk) in b.iter().take(m + 1).enumerate() {
        acc += bk * BigRational::from_integer(binom.clone());
        binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
    }
    acc.abs()
}
