//! The `B_kappa` bump and the embedding `eta_{kappa,nu}`: the eta double
//! series with each summand `(m+1)^{-s}` weighted by
//! `B_kappa(1/(m+1)^nu) / B_kappa(0)`.

use serde::{Deserialize, Serialize};

use crate::error::{EtaError, Result};
use crate::eta::{euler_series, EtaValue, EvalConfig};
use crate::numkernel::ComplexValue;

/// Lower edge of the region where the shift expansion converges.
pub const EXPANSION_KAPPA_MIN: f64 = 3.0 / std::f64::consts::PI;

// beyond this exponent e^{-2|x|/kappa} contributes nothing
const EXP_GUARD: f64 = 700.0;

/// Scale `kappa` and shift `nu` of the embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    kappa: f64,
    nu: f64,
}

impl EmbeddingParams {
    pub fn new(kappa: f64, nu: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(EtaError::Domain(format!("kappa must be finite and > 0, got {kappa}")));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(EtaError::Domain(format!("nu must be finite and > 0, got {nu}")));
        }
        Ok(Self { kappa, nu })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `kappa > 3/pi`.
    pub fn in_expansion_region(&self) -> bool {
        self.kappa > EXPANSION_KAPPA_MIN
    }
}

/// `B_kappa(x) = (tanh((x + 1/2)/kappa) - tanh((x - 1/2)/kappa)) / 2`, in the
/// exponential form `(e^a - e^-a) / (e^a + e^b + e^-b + e^-a)` with
/// `a = 1/kappa`, `b = 2x/kappa`, scaled by the largest exponential.
pub fn b_kernel(x: f64, kappa: f64) -> f64 {
    let a = 1.0 / kappa;
    let b = 2.0 * x.abs() / kappa;
    let top = a.max(b);
    let numer = (a - top).exp() - (-a - top).exp();
    let denom = (a - top).exp() + (b - top).exp() + (-b - top).exp() + (-a - top).exp();
    // numer can round to a hair below zero only when it is zero
    (numer / denom).clamp(0.0, 1.0)
}

/// `B_kappa(x) / B_kappa(0) = (e^a + 2 + e^-a) / (e^a + e^b + e^-b + e^-a)`.
pub fn b_ratio(x: f64, kappa: f64) -> f64 {
    let a = 1.0 / kappa;
    let b = 2.0 * x.abs() / kappa;
    if b - a > EXP_GUARD {
        return 0.0;
    }
    let top = a.max(b);
    let numer = (a - top).exp() + 2.0 * (-top).exp() + (-a - top).exp();
    let denom = (a - top).exp() + (b - top).exp() + (-b - top).exp() + (-a - top).exp();
    (numer / denom).clamp(0.0, 1.0)
}

/// Weights `B_kappa(1/(m+1)^nu) / B_kappa(0)` for `m < count`.
pub fn summand_weights(p: &EmbeddingParams, count: usize) -> Vec<f64> {
    (0..count)
        .map(|m| {
            let x = (-(p.nu) * ((m + 1) as f64).ln()).exp();
            b_ratio(x, p.kappa)
        })
        .collect()
}

/// `eta_{kappa,nu}(s)`, same truncation policy and error model as
/// [`crate::eta::eta`].
pub fn eta_embedding(s: ComplexValue, p: &EmbeddingParams, cfg: &EvalConfig) -> Result<EtaValue> {
    let weights = summand_weights(p, cfg.kmax);
    euler_series(s, weights.as_slice(), false, cfg)
}

/// Evaluate at many points with a single weight table.
pub fn eta_embedding_many(
    points: &[ComplexValue],
    p: &EmbeddingParams,
    cfg: &EvalConfig,
) -> Result<Vec<EtaValue>> {
    let weights = summand_weights(p, cfg.kmax);
    points
        .iter()
        .map(|&s| euler_series(s, weights.as_slice(), false, cfg))
        .collect()
}
