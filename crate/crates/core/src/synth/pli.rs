//! Mains interference with EN 50160-style frequency drift and harmonic
//! content.
//!
//! The fundamental frequency follows a slow random walk: white noise through
//! a second-order low-pass at `drift_bandwidth_hz`, squashed into the
//! tolerance band by `tanh(u/2)` (two standard deviations reach 76% of the
//! tolerance, and the edge itself is never touched).
//! The harmonics ride on the same phase track, so the whole interference
//! stays phase-continuous. Each harmonic's power ratio is drawn uniformly
//! below its cap, and one slow envelope modulates every tone.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iir::Cascade;
use crate::signal::Signal;

/// Harmonic power limits for 100, 150, 200 and 250 Hz, as fractions of the
/// fundamental's power.
pub const EN50160_HARMONIC_CAPS: [f64; 4] = [0.02, 0.05, 0.01, 0.06];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PliConfig {
    pub fundamental_hz: f64,
    pub freq_tolerance_fraction: f64,
    pub harmonic_power_caps: [f64; 4],
    pub amplitude_mod_depth: f64,
    pub drift_bandwidth_hz: f64,
    pub seed: u64,
}

impl Default for PliConfig {
    fn default() -> Self {
        Self {
            fundamental_hz: 50.0,
            freq_tolerance_fraction: 0.01,
            harmonic_power_caps: EN50160_HARMONIC_CAPS,
            amplitude_mod_depth: 0.05,
            drift_bandwidth_hz: 0.1,
            seed: 0,
        }
    }
}

impl PliConfig {
    /// A stationary, harmonic-free tone at the fundamental.
    pub fn pure_tone(fundamental_hz: f64) -> Self {
        Self {
            fundamental_hz,
            freq_tolerance_fraction: 0.0,
            harmonic_power_caps: [0.0; 4],
            amplitude_mod_depth: 0.0,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Highest frequency any tone can reach.
    pub fn max_frequency_hz(&self) -> f64 {
        5.0 * self.fundamental_hz * (1.0 + self.freq_tolerance_fraction)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fundamental_hz.is_finite() && self.fundamental_hz > 0.0) {
            return Err(Error::invalid("fundamental frequency must be positive"));
        }
        if !(self.freq_tolerance_fraction >= 0.0 && self.freq_tolerance_fraction < 1.0) {
            return Err(Error::invalid("frequency tolerance must lie in [0, 1)"));
        }
        if self
            .harmonic_power_caps
            .iter()
            .any(|c| !(0.0..=1.0).contains(c))
        {
            return Err(Error::invalid("harmonic caps must lie in [0, 1]"));
        }
        if !(self.amplitude_mod_depth >= 0.0 && self.amplitude_mod_depth < 1.0) {
            return Err(Error::invalid(
                "amplitude modulation depth must lie in [0, 1)",
            ));
        }
        if !(self.drift_bandwidth_hz.is_finite() && self.drift_bandwidth_hz > 0.0) {
            return Err(Error::invalid("drift bandwidth must be positive"));
        }
        Ok(())
    }
}

/// One synthesized interference record plus the hidden parameters that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PliRealization {
    pub signal: Signal,
    /// Fundamental frequency at every sample, Hz.
    pub fundamental_track_hz: Vec<f64>,
    /// Drawn power ratios of harmonics 2..=5 relative to the fundamental.
    pub harmonic_power_ratios: [f64; 4],
}

pub fn synthesize_pli(duration_s: f64, sample_rate_hz: f64, config: &PliConfig) -> Result<Signal> {
    realize_pli(duration_s, sample_rate_hz, config).map(|r| r.signal)
}

pub fn realize_pli(
    duration_s: f64,
    sample_rate_hz: f64,
    config: &PliConfig,
) -> Result<PliRealization> {
    config.validate()?;
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::invalid("duration must be positive"));
    }
    if !(sample_rate_hz > 2.0 * config.max_frequency_hz()) {
        return Err(Error::invalid(format!(
            "{sample_rate_hz} Hz cannot represent the fifth harmonic at {:.2} Hz",
            config.max_frequency_hz()
        )));
    }
    let fs = sample_rate_hz;
    let n = ((duration_s * fs).round() as usize).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut ratios = [0.0; 4];
    for (r, cap) in ratios.iter_mut().zip(config.harmonic_power_caps) {
        *r = cap * rng.random::<f64>();
    }
    let phases: [f64; 5] = std::array::from_fn(|_| 2.0 * PI * rng.random::<f64>());

    let drift = slow_process(&mut rng, n, fs, config.drift_bandwidth_hz);
    let envelope = slow_process(&mut rng, n, fs, config.drift_bandwidth_hz);

    let f0 = config.fundamental_hz;
    let tol = config.freq_tolerance_fraction;
    let track: Vec<f64> = drift
        .iter()
        .map(|u| f0 * (1.0 + tol * (0.5 * u).tanh()))
        .collect();

    let amplitudes: [f64; 5] = [
        1.0,
        ratios[0].sqrt(),
        ratios[1].sqrt(),
        ratios[2].sqrt(),
        ratios[3].sqrt(),
    ];
    let depth = config.amplitude_mod_depth;
    let mut phase = 0.0f64;
    let mut samples = Vec::with_capacity(n);
    for (f, e) in track.iter().zip(&envelope) {
        let gain = 1.0 + depth * (0.5 * e).tanh();
        let tones: f64 = amplitudes
            .iter()
            .zip(&phases)
            .enumerate()
            .map(|(m, (a, p))| a * ((m + 1) as f64 * phase + p).sin())
            .sum();
        samples.push(gain * tones);
        phase = (phase + 2.0 * PI * f / fs) % (2.0 * PI);
    }

    Ok(PliRealization {
        signal: Signal::from_parts(samples, fs),
        fundamental_track_hz: track,
        harmonic_power_ratios: ratios,
    })
}

/// Unit-variance low-pass Gaussian process, warmed up so the start is
/// already stationary.
fn slow_process(rng: &mut ChaCha8Rng, n: usize, fs: f64, bandwidth_hz: f64) -> Vec<f64> {
    let warmup = ((4.0 / bandwidth_hz) * fs).ceil() as usize;
    let mut lowpass = Cascade::butter_lowpass(2, bandwidth_hz, fs);

    // Output variance for unit white input is the impulse-response energy.
    let mut impulse = vec![0.0; warmup * 4];
    impulse[0] = 1.0;
    let gain = lowpass
        .filter(&impulse)
        .iter()
        .map(|h| h * h)
        .sum::<f64>()
        .sqrt();

    lowpass.reset();
    let mut out = Vec::with_capacity(n);
    for i in 0..warmup + n {
        let w: f64 = rng.sample(StandardNormal);
        let y = lowpass.process(w) / gain;
        if i >= warmup {
            out.push(y);
        }
    }
    out
}
