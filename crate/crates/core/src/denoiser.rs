//! Decompose, threshold each detail scale, reconstruct.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qrs::{detect_qrs_regions, DetectorConfig};
use crate::shrinkage::{
    hybrid_shrink_band, median_window_samples, moving_median_threshold, RegionMask,
};
use crate::signal::Signal;
use crate::swt::{daubechies_filters, swt_forward, swt_inverse};

/// How the moving median of `|d_j|` becomes the shrinkage threshold `λ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdRule {
    /// `λ_j` is the moving median itself.
    Median,
    /// The median is read as a robust noise scale (`median / 0.6745`) and
    /// multiplied by the universal factor `sqrt(2 ln W)` for a window of `W`
    /// samples.
    Universal,
    /// Fixed multiple of the moving median.
    Gain(f64),
}

impl ThresholdRule {
    /// Multiplier applied to the moving median for a window of `window` samples.
    pub fn gain(self, window: usize) -> f64 {
        match self {
            ThresholdRule::Median => 1.0,
            ThresholdRule::Universal => (2.0 * (window.max(2) as f64).ln()).sqrt() / 0.6745,
            ThresholdRule::Gain(g) => g,
        }
    }
}

impl std::str::FromStr for ThresholdRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Self::Median),
            "universal" => Ok(Self::Universal),
            other => other
                .parse::<f64>()
                .map(Self::Gain)
                .map_err(|_| Error::invalid(format!("unknown threshold rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenoiseConfig {
    pub levels: usize,
    pub wavelet_order: usize,
    pub median_window_ms: f64,
    pub qrs_window_ms: f64,
    pub threshold_rule: ThresholdRule,
    pub detector: DetectorConfig,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            levels: 4,
            wavelet_order: 6,
            median_window_ms: 200.0,
            qrs_window_ms: 120.0,
            threshold_rule: ThresholdRule::Universal,
            detector: DetectorConfig::default(),
        }
    }
}

impl DenoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::invalid("levels must be at least 1"));
        }
        if !(self.median_window_ms.is_finite() && self.median_window_ms > 0.0) {
            return Err(Error::invalid("median window must be positive"));
        }
        if !(self.qrs_window_ms.is_finite() && self.qrs_window_ms > 0.0) {
            return Err(Error::invalid("QRS window must be positive"));
        }
        if let ThresholdRule::Gain(g) = self.threshold_rule {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::invalid("threshold gain must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Removes powerline interference from `s`.
///
/// QRS regions are detected on `s` itself and shared by every scale: inside
/// them coefficients are hard-thresholded, elsewhere soft-thresholded. The
/// approximation band passes through untouched.
pub fn denoise(s: &Signal, config: &DenoiseConfig) -> Result<Signal> {
    config.validate()?;
    s.require_non_empty()?;
    let mask = detect_qrs_regions(s, &config.detector, config.qrs_window_ms)?;
    denoise_with_mask(s, config, &mask)
}

/// [`denoise`] with a caller-supplied QRS mask.
pub fn denoise_with_mask(s: &Signal, config: &DenoiseConfig, qrs: &RegionMask) -> Result<Signal> {
    config.validate()?;
    s.require_non_empty()?;
    if qrs.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            actual: qrs.len(),
        });
    }
    let fs = s.sample_rate_hz();
    let filter = daubechies_filters(config.wavelet_order)?;
    let gain = config
        .threshold_rule
        .gain(median_window_samples(config.median_window_ms, fs)?);

    let shrunk = swt_forward(s, config.levels, &filter)?.map_details(|scale, band| {
        let lambda = moving_median_threshold(band, config.median_window_ms, fs)?
            .with_scale(scale)
            .scaled(gain)?;
        hybrid_shrink_band(band, &lambda, qrs)
    })?;
    swt_inverse(&shrunk)
}
