//! Independent reference computations for the integration tests. Nothing in
//! here calls into the crate's signal processing.

#![allow(dead_code)]

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    buf
}

pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    let n = buf.len() as f64;
    buf.iter_mut().for_each(|v| *v /= n);
    buf
}

/// One-sided power per bin of a Hann-windowed record, with bin frequencies.
pub fn power_spectrum(x: &[f64], fs: f64) -> Vec<(f64, f64)> {
    let n = x.len();
    let windowed: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Complex64::new(
                v * (0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()),
                0.0,
            )
        })
        .collect();
    let spec = fft(&windowed);
    (0..=n / 2)
        .map(|k| (k as f64 * fs / n as f64, spec[k].norm_sqr()))
        .collect()
}

/// Summed spectral power with `lo ≤ f ≤ hi`.
pub fn band_power(spectrum: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    spectrum
        .iter()
        .filter(|(f, _)| *f >= lo && *f <= hi)
        .map(|(_, p)| p)
        .sum()
}

pub fn total_power(spectrum: &[(f64, f64)]) -> f64 {
    spectrum.iter().map(|(_, p)| p).sum()
}

/// Analytic signal of the `lo..hi` band. The spectral mask rolls off with a
/// raised cosine over `ROLLOFF_HZ` outside each edge, which keeps the
/// ringing from the record ends short.
pub fn analytic_band(x: &[f64], fs: f64, lo: f64, hi: f64) -> Vec<Complex64> {
    const ROLLOFF_HZ: f64 = 10.0;
    let taper = |d: f64| {
        if d <= 0.0 {
            1.0
        } else if d >= ROLLOFF_HZ {
            0.0
        } else {
            0.5 + 0.5 * (PI * d / ROLLOFF_HZ).cos()
        }
    };
    let n = x.len();
    let mut spec = fft(&x
        .iter()
        .map(|v| Complex64::new(*v, 0.0))
        .collect::<Vec<_>>());
    for (k, v) in spec.iter_mut().enumerate() {
        let f = k as f64 * fs / n as f64;
        // positive frequencies doubled, negative ones dropped
        *v = if k > 0 && k < n.div_ceil(2) {
            *v * 2.0 * taper(lo - f) * taper(f - hi)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    ifft(&spec)
}

/// Instantaneous frequency in Hz of the `lo..hi` band, one value per sample
/// step (length `n − 1`).
pub fn instantaneous_frequency(x: &[f64], fs: f64, lo: f64, hi: f64) -> Vec<f64> {
    let z = analytic_band(x, fs, lo, hi);
    z.windows(2)
        .map(|w| (w[1] * w[0].conj()).arg() * fs / (2.0 * PI))
        .collect()
}

/// Per-sample score straight from the definition.
pub fn naive_asci(x: &[f64], y: &[f64], xi: Option<f64>, prefix: usize) -> f64 {
    let xi = xi.unwrap_or_else(|| {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        0.05 * var.sqrt()
    });
    let mut total = 0i64;
    for i in prefix..x.len() {
        total += if (x[i] - y[i]).abs() <= xi { 1 } else { -1 };
    }
    total as f64 / (x.len() - prefix) as f64
}

pub fn mean_square(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

pub fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}
