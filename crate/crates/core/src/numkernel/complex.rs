use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{EtaError, Result};

/// The scalar every routine in the crate works with.
pub type ComplexValue = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `base^s = exp(s ln base)` for a positive real base.
///
/// Negative exponents are obtained by negating `s` at the call site.
pub fn complex_pow_real_base(base: f64, s: ComplexValue) -> Result<ComplexValue> {
    if !(base > 0.0) || !base.is_finite() {
        return Err(EtaError::Domain(format!(
            "power base must be finite and positive, got {base}"
        )));
    }
    if !is_finite(s) {
        return Err(EtaError::Domain("non-finite exponent".into()));
    }
    Ok(pow_real_base_unchecked(base.ln(), s))
}

/// Same as [`complex_pow_real_base`] with a precomputed `ln base`.
#[inline]
pub(crate) fn pow_real_base_unchecked(ln_base: f64, s: ComplexValue) -> ComplexValue {
    let modulus = (s.re * ln_base).exp();
    let (sin, cos) = (s.im * ln_base).sin_cos();
    c(modulus * cos, modulus * sin)
}

/// Principal-branch `ln sin(z)` that stays finite when `|Im z|` is large
/// enough for `sin z` itself to overflow.
pub(crate) fn ln_sin(z: ComplexValue) -> ComplexValue {
    if z.im.abs() < 20.0 {
        return z.sin().ln();
    }
    // sin z = (e^{iz} - e^{-iz}) / 2i; keep only the dominant exponential
    // and a log1p-sized correction.
    let i = c(0.0, 1.0);
    if z.im > 0.0 {
        // dominant: -e^{-iz} / 2i = (i/2) e^{-iz}
        let small = (2.0 * i * z).exp(); // |.| = e^{-2 Im z}
        -i * z + (c(0.5, 0.0) * i).ln() + (c(1.0, 0.0) - small).ln()
    } else {
        let small = (-2.0 * i * z).exp();
        i * z + (c(0.0, -0.5)).ln() + (c(1.0, 0.0) - small).ln()
    }
}

/// Canonical text form used by the CLI: `a+bi` / `a-bi`, shortest
/// round-trip decimals.
pub fn format_complex(z: ComplexValue) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -im)
    } else {
        format!("{:?}+{:?}i", z.re, im)
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (no whitespace, decimal or exponent
/// floats).
pub fn parse_complex(text: &str) -> Result<ComplexValue> {
    let bad = || EtaError::Usage(format!("invalid complex literal '{text}'"));
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = text.strip_suffix('i') else {
        let re: f64 = text.parse().map_err(|_| bad())?;
        return finite(c(re, 0.0)).ok_or_else(bad);
    };
    // find the sign separating re and im: last +/- not at position 0 and
    // not directly after an exponent marker
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let ch = bytes[idx];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let z = match split {
        Some(idx) => {
            let re: f64 = body[..idx].parse().map_err(|_| bad())?;
            let im_txt = &body[idx..];
            let im: f64 = match im_txt {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_txt.parse().map_err(|_| bad())?,
            };
            c(re, im)
        }
        None => {
            let im: f64 = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => body.parse().map_err(|_| bad())?,
            };
            c(0.0, im)
        }
    };
    finite(z).ok_or_else(bad)
}

fn finite(z: ComplexValue) -> Option<ComplexValue> {
    is_finite(z).then_some(z)
}

/// Serde adapter writing a complex number as `{"re": .., "im": ..}`.
pub mod re_im {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &ComplexValue, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<ComplexValue, D::Error> {
        let v = ReIm::deserialize(de)?;
        Ok(c(v.re, v.im))
    }
}

/// Seventeen significant digits in scientific notation, for CSV output.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}
