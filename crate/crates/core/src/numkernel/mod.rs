//! Numeric building blocks: complex helpers, log-gamma, exact even
//! Bernoulli numbers and accuracy-controlled summation.

mod accumulate;
mod bernoulli;
mod complex;
mod gamma;

pub use accumulate::{accumulate, AccumMode, Accumulator, ComplexAccumulator};
pub use bernoulli::{bernoulli_even, BernoulliTable, EXACT_MAX_INDEX, JMAX_LIMIT};
pub use complex::{c, complex_pow_real_base, format_complex, format_real, is_finite, parse_complex, re_im, ComplexValue};
pub use gamma::log_gamma;

pub(crate) use complex::{ln_sin, pow_real_base_unchecked};
