//! Sampled waveforms and the handful of statistics the rest of the crate
//! needs from them.

use crate::error::{Error, Result};

/// A uniformly sampled single-lead waveform, amplitudes in millivolts.
///
/// Construction checks that the rate is positive and every sample is finite.
/// An empty signal is a valid value; operations that need samples reject it.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// Builds a signal from samples already known to be finite.
    pub(crate) fn from_parts(samples: Vec<f64>, sample_rate_hz: f64) -> Self {
        debug_assert!(sample_rate_hz > 0.0);
        debug_assert!(samples.iter().all(|s| s.is_finite()));
        Self {
            samples,
            sample_rate_hz,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Returns a new signal with `f` applied to every sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Signal> {
        Signal::new(
            self.samples.iter().map(|&s| f(s)).collect(),
            self.sample_rate_hz,
        )
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.samples.is_empty() {
            Err(Error::EmptySignal)
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_same_shape(&self, other: &Signal) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        if self.sample_rate_hz != other.sample_rate_hz {
            return Err(Error::RateMismatch {
                left: self.sample_rate_hz,
                right: other.sample_rate_hz,
            });
        }
        Ok(())
    }
}

/// Target signal-to-interference ratio in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SirLevelDb(f64);

impl SirLevelDb {
    /// The six contamination levels of the reference benchmark.
    pub const BENCHMARK: [f64; 6] = [15.0, 10.0, 5.0, 0.0, -5.0, -10.0];

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::invalid(format!("SIR must be finite, got {value}")))
        }
    }

    pub fn db(self) -> f64 {
        self.0
    }

    /// Power ratio `10^(sir/10)`.
    pub fn linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

/// Mean squared amplitude, `(1/L) Σ s(k)²`.
pub fn signal_power(s: &Signal) -> Result<f64> {
    s.require_non_empty()?;
    Ok(power_of(s.samples()))
}

/// Standard deviation with the population convention (divide by `L`).
pub fn population_std(s: &Signal) -> Result<f64> {
    s.require_non_empty()?;
    Ok(std_of(s.samples()))
}

pub(crate) fn power_of(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

pub(crate) fn mean_of(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub(crate) fn std_of(x: &[f64]) -> f64 {
    let mean = mean_of(x);
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64;
    var.sqrt()
}
