//! Harmonically locked adaptive IIR notch cascade, the comparison baseline.
//!
//! One second-order notch per harmonic `m·f̂`, each with zeros on the unit
//! circle and poles at a fixed radius `r` along the same angle. Only the
//! shared fundamental estimate `f̂` adapts: a normalized simplified-gradient
//! step that minimizes the output power of a twin notch, in the style of
//! constrained pole-zero adaptive notch filters. The twin sees the input
//! band-limited to `f0 ± reference_halfwidth_hz`, which keeps the broadband
//! ECG from dragging the estimate toward wherever its own spectrum is
//! strongest. Every section is scaled to unit gain at DC so the baseline
//! leaves low-frequency ECG content alone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iir::Cascade;
use crate::signal::Signal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NotchConfig {
    pub fundamental_hz: f64,
    pub num_harmonics: usize,
    pub adaptation_rate: f64,
    pub notch_pole_radius: f64,
    /// The estimate is confined to `fundamental_hz · (1 ± tracking_range)`.
    pub tracking_range: f64,
    /// Half-width of the band around the fundamental that drives adaptation.
    pub reference_halfwidth_hz: f64,
}

impl Default for NotchConfig {
    fn default() -> Self {
        Self {
            fundamental_hz: 50.0,
            num_harmonics: 5,
            adaptation_rate: 1e-4,
            notch_pole_radius: 0.985,
            tracking_range: 0.05,
            reference_halfwidth_hz: 10.0,
        }
    }
}

impl NotchConfig {
    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        if !(self.fundamental_hz.is_finite() && self.fundamental_hz > 0.0) {
            return Err(Error::invalid("notch fundamental must be positive"));
        }
        if self.num_harmonics == 0 {
            return Err(Error::invalid("at least one harmonic must be tracked"));
        }
        if !(self.adaptation_rate.is_finite() && self.adaptation_rate > 0.0) {
            return Err(Error::invalid("adaptation rate must be positive"));
        }
        if !(self.notch_pole_radius > 0.0 && self.notch_pole_radius < 1.0) {
            return Err(Error::invalid("pole radius must lie in (0, 1)"));
        }
        if !(self.tracking_range >= 0.0 && self.tracking_range < 1.0) {
            return Err(Error::invalid("tracking range must lie in [0, 1)"));
        }
        if !(self.reference_halfwidth_hz > 0.0 && self.reference_halfwidth_hz < self.fundamental_hz)
        {
            return Err(Error::invalid(
                "reference half-width must be positive and below the fundamental",
            ));
        }
        let top = self.num_harmonics as f64 * self.fundamental_hz * (1.0 + self.tracking_range);
        if !(sample_rate_hz > 2.0 * top) {
            return Err(Error::invalid(format!(
                "{sample_rate_hz} Hz cannot host a notch at {top:.2} Hz"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
struct Section {
    // all-pole state, direct form II
    s1: f64,
    s2: f64,
}

impl Section {
    /// `a = −2 cos θ`; returns the section output.
    #[inline]
    fn step(&mut self, x: f64, a: f64, r: f64) -> f64 {
        let gain = (1.0 + r * a + r * r) / (2.0 + a);
        let s = x - r * a * self.s1 - r * r * self.s2;
        let y = gain * (s + a * self.s1 + self.s2);
        self.s2 = self.s1;
        self.s1 = s;
        y
    }
}

/// Streaming filter state; one instance per signal.
#[derive(Debug, Clone)]
pub struct AdaptiveNotch {
    config: NotchConfig,
    sample_rate_hz: f64,
    sections: Vec<Section>,
    reference: Cascade,
    twin: Section,
    /// fundamental estimate, radians per sample
    omega: f64,
    omega_lo: f64,
    omega_hi: f64,
    power: f64,
    power_decay: f64,
}

impl AdaptiveNotch {
    pub fn new(config: NotchConfig, sample_rate_hz: f64) -> Result<Self> {
        config.validate(sample_rate_hz)?;
        let to_omega = |f: f64| 2.0 * PI * f / sample_rate_hz;
        let f0 = config.fundamental_hz;
        let half = config.reference_halfwidth_hz;
        let reference = Cascade::butter_highpass(2, f0 - half, sample_rate_hz)
            .then(Cascade::butter_lowpass(2, f0 + half, sample_rate_hz));
        Ok(Self {
            sections: vec![Section::default(); config.num_harmonics],
            reference,
            twin: Section::default(),
            omega: to_omega(f0),
            omega_lo: to_omega(f0 * (1.0 - config.tracking_range)),
            omega_hi: to_omega(f0 * (1.0 + config.tracking_range)),
            power: 0.0,
            // reference power is tracked over roughly 100 ms
            power_decay: 1.0 / (0.1 * sample_rate_hz).max(1.0),
            config,
            sample_rate_hz,
        })
    }

    /// Current fundamental estimate in Hz.
    pub fn frequency_hz(&self) -> f64 {
        self.omega * self.sample_rate_hz / (2.0 * PI)
    }

    pub fn process(&mut self, x: f64) -> f64 {
        let r = self.config.notch_pole_radius;
        let (sin_w, cos_w) = self.omega.sin_cos();

        // Harmonic angles by the Chebyshev recurrence cos((m+1)w) = 2cos(w)cos(mw) − cos((m−1)w).
        let mut prev = 1.0;
        let mut cur = cos_w;
        let mut out = x;
        for section in self.sections.iter_mut() {
            out = section.step(out, -2.0 * cur, r);
            let next = 2.0 * cos_w * cur - prev;
            prev = cur;
            cur = next;
        }

        let reference = self.reference.process(x);
        let regressor = self.twin.s1;
        let error = self.twin.step(reference, -2.0 * cos_w, r);
        self.power += self.power_decay * (reference * reference - self.power);
        if self.power > 0.0 {
            // dy/da ≈ s[n−1] with a = −2cos(w), so dy/dw ≈ 2 sin(w) s[n−1]
            let grad = error * regressor * 2.0 * sin_w;
            let step = self.config.adaptation_rate * grad / self.power;
            self.omega = (self.omega - step).clamp(self.omega_lo, self.omega_hi);
        }
        out
    }
}

/// Runs the baseline over a whole record from a zero initial state.
pub fn adaptive_notch(s: &Signal, config: &NotchConfig) -> Result<Signal> {
    adaptive_notch_tracked(s, config).map(|(y, _)| y)
}

/// As [`adaptive_notch`], also returning the fundamental estimate after each
/// sample.
pub fn adaptive_notch_tracked(s: &Signal, config: &NotchConfig) -> Result<(Signal, Vec<f64>)> {
    s.require_non_empty()?;
    let mut filter = AdaptiveNotch::new(config.clone(), s.sample_rate_hz())?;
    let mut track = Vec::with_capacity(s.len());
    let y = s
        .samples()
        .iter()
        .map(|&x| {
            let y = filter.process(x);
            track.push(filter.frequency_hz());
            y
        })
        .collect();
    Ok((Signal::new(y, s.sample_rate_hz())?, track))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_in_zero_out() {
        let s = Signal::new(vec![0.0; 2000], 1000.0).unwrap();
        let y = adaptive_notch(&s, &NotchConfig::default()).unwrap();
        assert!(y.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn nyquist_is_enforced() {
        let s = Signal::new(vec![0.0; 100], 500.0).unwrap();
        assert!(adaptive_notch(&s, &NotchConfig::default()).is_err());
        let s = Signal::new(vec![0.0; 100], 1000.0).unwrap();
        assert!(adaptive_notch(&s, &NotchConfig::default()).is_ok());
    }

    #[test]
    fn invalid_settings_are_rejected() {
        for cfg in [
            NotchConfig {
                notch_pole_radius: 1.0,
                ..Default::default()
            },
            NotchConfig {
                adaptation_rate: 0.0,
                ..Default::default()
            },
            NotchConfig {
                num_harmonics: 0,
                ..Default::default()
            },
        ] {
            assert!(cfg.validate(1000.0).is_err());
        }
    }

    #[test]
    fn dc_passes_with_unit_gain() {
        let s = Signal::new(vec![0.8; 5000], 1000.0).unwrap();
        let y = adaptive_notch(&s, &NotchConfig::default()).unwrap();
        for v in &y.samples()[3000..] {
            assert!((v - 0.8).abs() <= 0.8 * 0.005, "{v}");
        }
    }

    fn tone(freqs: impl Fn(usize) -> f64, n: usize, fs: f64) -> Vec<f64> {
        let mut phase = 0.0f64;
        (0..n)
            .map(|i| {
                let v = phase.sin();
                phase = (phase + 2.0 * PI * freqs(i) / fs) % (2.0 * PI);
                v
            })
            .collect()
    }

    #[test]
    fn settles_on_a_mains_tone() {
        let fs = 1000.0;
        let x = tone(|_| 50.0, 10_000, fs);
        let y = adaptive_notch(
            &Signal::new(x.clone(), fs).unwrap(),
            &NotchConfig::default(),
        )
        .unwrap();
        let tail = |v: &[f64]| v[8000..].iter().map(|s| s * s).sum::<f64>();
        let db = 10.0 * (tail(y.samples()) / tail(&x)).log10();
        assert!(db <= -30.0, "{db} dB");
    }

    #[test]
    fn follows_a_frequency_step() {
        let fs = 1000.0;
        let x = tone(|i| if i < 10_000 { 49.5 } else { 50.5 }, 20_000, fs);
        let (_, track) =
            adaptive_notch_tracked(&Signal::new(x, fs).unwrap(), &NotchConfig::default()).unwrap();
        assert!((track[9_999] - 49.5).abs() < 0.05, "{}", track[9_999]);
        // one second after the step the estimate stays within 0.05 Hz
        for f in &track[11_000..] {
            assert!((f - 50.5).abs() < 0.05, "{f}");
        }
    }

    #[test]
    fn dc_gain_of_each_section_is_one() {
        for m in 1..=5 {
            let w = 2.0 * PI * 50.0 * m as f64 / 1000.0;
            let a = -2.0 * w.cos();
            let r = 0.985;
            let gain = (1.0 + r * a + r * r) / (2.0 + a);
            // H(1) = g (1 + a + 1) / (1 + r a + r²)
            let h1 = gain * (2.0 + a) / (1.0 + r * a + r * r);
            assert!((h1 - 1.0).abs() < 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn estimate_stays_in_range_and_output_bounded(
            seed in 0u64..1000,
            amp in 0.01f64..100.0,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..3000).map(|_| amp * rng.random_range(-1.0..1.0)).collect();
            let cfg = NotchConfig::default();
            let (y, track) = adaptive_notch_tracked(&Signal::new(x, 1000.0).unwrap(), &cfg).unwrap();
            for f in track {
                proptest::prop_assert!((47.5 - 1e-9..=52.5 + 1e-9).contains(&f));
            }
            for v in y.samples() {
                proptest::prop_assert!(v.is_finite() && v.abs() < 100.0 * amp);
            }
        }
    }
}
