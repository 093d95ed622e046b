//! Per-scale adaptive thresholds and QRS-gated hybrid shrinkage.

use crate::error::{Error, Result};

/// Adaptive threshold `λ_j[n]` for one detail scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSeries {
    values: Vec<f64>,
    scale: usize,
    window_ms: f64,
    window_samples: usize,
}

impl ThresholdSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn window_ms(&self) -> f64 {
        self.window_ms
    }

    /// Odd window length actually used by the median filter.
    pub fn window_samples(&self) -> usize {
        self.window_samples
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Tags the series with the detail scale it belongs to.
    pub fn with_scale(mut self, scale: usize) -> Self {
        self.scale = scale;
        self
    }

    /// Multiplies every threshold by a non-negative gain.
    pub fn scaled(mut self, gain: f64) -> Result<Self> {
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(Error::invalid(format!(
                "threshold gain must be finite and non-negative, got {gain}"
            )));
        }
        self.values.iter_mut().for_each(|v| *v *= gain);
        Ok(self)
    }
}

/// Window length in samples for a duration: rounded, then bumped to the next
/// odd number so the window is symmetric about its centre.
pub fn median_window_samples(window_ms: f64, sample_rate_hz: f64) -> Result<usize> {
    if !(window_ms.is_finite() && window_ms > 0.0) {
        return Err(Error::invalid(format!(
            "median window must be positive, got {window_ms} ms"
        )));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::invalid("sample rate must be positive"));
    }
    let w = (window_ms * sample_rate_hz / 1000.0).round() as usize;
    if w == 0 {
        return Err(Error::invalid(format!(
            "a {window_ms} ms window is shorter than one sample at {sample_rate_hz} Hz"
        )));
    }
    Ok(if w % 2 == 0 { w + 1 } else { w })
}

/// Moving median of `|band|` over a centred window of `window_ms`.
///
/// Near the ends the window is clipped to the samples that exist; when the
/// clipped window holds an even count the lower of the two middle values is
/// taken, so every threshold is one of the band magnitudes.
pub fn moving_median_threshold(
    band: &[f64],
    window_ms: f64,
    sample_rate_hz: f64,
) -> Result<ThresholdSeries> {
    if band.is_empty() {
        return Err(Error::EmptySignal);
    }
    if let Some(index) = band.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let window_samples = median_window_samples(window_ms, sample_rate_hz)?;
    Ok(ThresholdSeries {
        values: moving_median_abs(band, window_samples / 2),
        scale: 0,
        window_ms,
        window_samples,
    })
}

fn moving_median_abs(band: &[f64], half: usize) -> Vec<f64> {
    let n = band.len();
    let mut window: Vec<f64> = Vec::with_capacity(2 * half + 1);
    let insert = |w: &mut Vec<f64>, v: f64| {
        let at = w.partition_point(|x| *x < v);
        w.insert(at, v);
    };

    for v in band.iter().take(half.min(n - 1) + 1) {
        insert(&mut window, v.abs());
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(window[(window.len() - 1) / 2]);
        // slide to i + 1
        if i + 1 + half < n {
            insert(&mut window, band[i + 1 + half].abs());
        }
        if i >= half {
            let v = band[i - half].abs();
            let at = window.partition_point(|x| *x < v);
            window.remove(at);
        }
    }
    out
}

/// Boolean mask in signal time; `true` marks samples inside a QRS region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    flags: Vec<bool>,
}

impl RegionMask {
    pub fn new(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    pub fn all(len: usize, value: bool) -> Self {
        Self {
            flags: vec![value; len],
        }
    }

    /// Marks `centre ± half_width` around every centre, clipped to the signal.
    pub fn around(len: usize, centres: &[usize], half_width: usize) -> Self {
        let mut flags = vec![false; len];
        for &c in centres {
            let lo = c.saturating_sub(half_width);
            let hi = (c + half_width + 1).min(len);
            if lo < hi {
                flags[lo..hi].iter_mut().for_each(|f| *f = true);
            }
        }
        Self { flags }
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }

    /// Contiguous `true` runs as half-open `(start, end)` index pairs.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &f) in self.flags.iter().enumerate() {
            match (f, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push((s, i));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.flags.len()));
        }
        runs
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "threshold must be finite and non-negative, got {lambda}"
        )))
    }
}

#[inline]
fn soft(c: f64, lambda: f64) -> f64 {
    let m = c.abs() - lambda;
    if m > 0.0 {
        m.copysign(c)
    } else {
        0.0
    }
}

#[inline]
fn hard(c: f64, lambda: f64) -> f64 {
    if c.abs() > lambda {
        c
    } else {
        0.0
    }
}

/// `sign(c) · max(|c| − λ, 0)`
pub fn soft_shrink(c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(soft(c, lambda))
}

/// `c` if `|c| > λ`, else zero.
pub fn hard_shrink(c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(hard(c, lambda))
}

/// Hard shrinkage inside QRS regions, soft shrinkage everywhere else.
pub fn hybrid_shrink_band(
    band: &[f64],
    thresholds: &ThresholdSeries,
    qrs: &RegionMask,
) -> Result<Vec<f64>> {
    for len in [thresholds.len(), qrs.len()] {
        if len != band.len() {
            return Err(Error::LengthMismatch {
                expected: band.len(),
                actual: len,
            });
        }
    }
    Ok(band
        .iter()
        .zip(thresholds.values())
        .zip(qrs.flags())
        .map(|((&c, &lambda), &in_qrs)| {
            if in_qrs {
                hard(c, lambda)
            } else {
                soft(c, lambda)
            }
        })
        .collect())
}
