//! Energy-based R-peak detector and the QRS region mask built from it.
//!
//! The chain is the familiar one: band-pass (zero phase), five-point
//! derivative, squaring, moving-window integration, then peak picking with
//! running signal/noise level estimates and a refractory period. Every
//! stage is either linear or squares its input, and all thresholds are
//! derived from the integrated signal itself, so the detections do not
//! depend on the amplitude scale of the input.

use crate::error::{Error, Result};
use crate::iir::Cascade;
use crate::shrinkage::RegionMask;
use crate::signal::Signal;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub band_low_hz: f64,
    pub band_high_hz: f64,
    pub integration_ms: f64,
    pub refractory_ms: f64,
    /// Initial signal/noise levels are learned over this leading span.
    pub learning_s: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            band_low_hz: 5.0,
            band_high_hz: 15.0,
            integration_ms: 150.0,
            refractory_ms: 250.0,
            learning_s: 2.0,
        }
    }
}

impl DetectorConfig {
    fn validate(&self, fs: f64) -> Result<()> {
        let positive = [
            self.band_low_hz,
            self.band_high_hz,
            self.integration_ms,
            self.refractory_ms,
            self.learning_s,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("detector settings must be positive"));
        }
        if self.band_low_hz >= self.band_high_hz || 2.0 * self.band_high_hz >= fs {
            return Err(Error::invalid(format!(
                "detector band {}-{} Hz does not fit a {fs} Hz sample rate",
                self.band_low_hz, self.band_high_hz
            )));
        }
        Ok(())
    }
}

fn ms_to_samples(ms: f64, fs: f64) -> usize {
    ((ms * fs / 1000.0).round() as usize).max(1)
}

/// Sample indices of detected R peaks, ascending.
pub fn detect_r_peaks(s: &Signal, config: &DetectorConfig) -> Result<Vec<usize>> {
    s.require_non_empty()?;
    let fs = s.sample_rate_hz();
    config.validate(fs)?;
    let integration = ms_to_samples(config.integration_ms, fs) | 1;
    if s.len() < integration {
        return Err(Error::invalid(format!(
            "signal of {} samples is shorter than the {integration}-sample detector window",
            s.len()
        )));
    }

    let x = s.samples();
    let pad = (fs as usize).min(x.len() - 1);
    let mut band = Cascade::butter_highpass(2, config.band_low_hz, fs)
        .then(Cascade::butter_lowpass(4, config.band_high_hz, fs));
    let filtered = band.filtfilt(x, pad);

    let energy: Vec<f64> = derivative(&filtered).into_iter().map(|d| d * d).collect();
    let mwi = centred_moving_average(&energy, integration / 2);

    let refractory = ms_to_samples(config.refractory_ms, fs);
    let learn = ms_to_samples(config.learning_s * 1000.0, fs).min(mwi.len());
    let head = &mwi[..learn];
    let mut signal_level = head.iter().cloned().fold(0.0, f64::max) / 3.0;
    let mut noise_level = 0.5 * head.iter().sum::<f64>() / learn as f64;
    let mut threshold = noise_level + 0.25 * (signal_level - noise_level);

    let mut peaks: Vec<usize> = Vec::new();
    for i in 1..mwi.len().saturating_sub(1) {
        let v = mwi[i];
        if !(v > mwi[i - 1] && v >= mwi[i + 1]) {
            continue;
        }
        if v > threshold && v > 0.0 {
            match peaks.last_mut() {
                Some(last) if i - *last < refractory => {
                    if v > mwi[*last] {
                        *last = i;
                    }
                }
                _ => peaks.push(i),
            }
            signal_level = 0.125 * v + 0.875 * signal_level;
        } else {
            noise_level = 0.125 * v + 0.875 * noise_level;
        }
        threshold = noise_level + 0.25 * (signal_level - noise_level);
    }

    // Snap each energy peak to the largest band-passed deflection nearby.
    let reach = integration / 2;
    let mut fiducials: Vec<usize> = peaks
        .into_iter()
        .map(|p| {
            let lo = p.saturating_sub(reach);
            let hi = (p + reach + 1).min(filtered.len());
            (lo..hi)
                .max_by(|&a, &b| filtered[a].abs().total_cmp(&filtered[b].abs()))
                .unwrap_or(p)
        })
        .collect();
    fiducials.dedup_by(|later, earlier| {
        if *later - *earlier < refractory {
            if filtered[*later].abs() > filtered[*earlier].abs() {
                *earlier = *later;
            }
            true
        } else {
            false
        }
    });
    Ok(fiducials)
}

/// Mask of `qrs_window_ms` centred on every detected R peak.
pub fn detect_qrs_regions(
    s: &Signal,
    config: &DetectorConfig,
    qrs_window_ms: f64,
) -> Result<RegionMask> {
    if !(qrs_window_ms.is_finite() && qrs_window_ms > 0.0) {
        return Err(Error::invalid("QRS window must be positive"));
    }
    let peaks = detect_r_peaks(s, config)?;
    let half = (qrs_window_ms * s.sample_rate_hz() / 2000.0).round() as usize;
    Ok(RegionMask::around(s.len(), &peaks, half))
}

/// Five-point central derivative (sample units).
fn derivative(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let at = |i: isize| x[i.clamp(0, n as isize - 1) as usize];
    (0..n as isize)
        .map(|i| (2.0 * at(i + 2) + at(i + 1) - at(i - 1) - 2.0 * at(i - 2)) / 8.0)
        .collect()
}

fn centred_moving_average(x: &[f64], half: usize) -> Vec<f64> {
    let n = x.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in x {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}
