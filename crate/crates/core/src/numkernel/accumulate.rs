use serde::{Deserialize, Serialize};

use super::complex::{c, ComplexValue};

/// Summation strategy for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccumMode {
    Plain,
    /// Kahan-Babuska (Neumaier) compensation.
    #[default]
    Compensated,
    /// Running double-double sum built from error-free TwoSum steps.
    DoubleDouble,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Real accumulator for one [`AccumMode`].
#[derive(Debug, Clone, Copy)]
pub struct Accumulator {
    mode: AccumMode,
    hi: f64,
    lo: f64,
}

impl Accumulator {
    pub fn new(mode: AccumMode) -> Self {
        Self { mode, hi: 0.0, lo: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        match self.mode {
            AccumMode::Plain => self.hi += x,
            AccumMode::Compensated => {
                let t = self.hi + x;
                if self.hi.abs() >= x.abs() {
                    self.lo += (self.hi - t) + x;
                } else {
                    self.lo += (x - t) + self.hi;
                }
                self.hi = t;
            }
            AccumMode::DoubleDouble => {
                let (s, e) = two_sum(self.hi, x);
                let (hi, lo) = fast_two_sum(s, e + self.lo);
                self.hi = hi;
                self.lo = lo;
            }
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex accumulator: one [`Accumulator`] per component.
#[derive(Debug, Clone, Copy)]
pub struct ComplexAccumulator {
    re: Accumulator,
    im: Accumulator,
}

impl ComplexAccumulator {
    pub fn new(mode: AccumMode) -> Self {
        Self {
            re: Accumulator::new(mode),
            im: Accumulator::new(mode),
        }
    }

    #[inline]
    pub fn add(&mut self, z: ComplexValue) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> ComplexValue {
        c(self.re.value(), self.im.value())
    }
}

/// Sum `terms` in order under `mode`.
pub fn accumulate<I>(terms: I, mode: AccumMode) -> ComplexValue
where
    I: IntoIterator<Item = ComplexValue>,
{
    let mut acc = ComplexAccumulator::new(mode);
    for z in terms {
        acc.add(z);
    }
    acc.value()
}
