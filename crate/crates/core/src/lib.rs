//! Dirichlet eta function, its two-parameter embedding `eta_{kappa,nu}`,
//! the shift expansions linking the two, zero location on the critical
//! line, and an audit engine that measures identity residuals.

pub mod error;
pub mod numkernel;

pub mod audit;
pub mod coefficients;
pub mod embedding;
pub mod eta;
pub mod zeros;

pub use error::{EtaError, Result};
pub use eta::{eta, eta_derivative, eta_oracle, functional_residual, lambda_factor, EtaValue, EvalConfig};
pub use embedding::{b_kernel, b_ratio, eta_embedding, EmbeddingParams};
pub use coefficients::{a_coeffs, b_coeffs, coeff_sum_identities, expansion_eval, inversion_eval, CoeffTable};
pub use zeros::{count_strip_zeros, count_zeros_rect, locate_zeros, quartet_check, refine_zero, scan_critical_line, Rect, ZeroRecord};
pub use audit::{run_suite, AuditReport, AuditSuite, Suite, SuiteConfig, Verdict};
