//! Rational-rate resampling with a polyphase Kaiser-windowed sinc.
//!
//! The prototype lowpass is symmetric and centred on each output instant, so
//! the output is time-aligned with the input (no group delay to undo). Each
//! polyphase branch is normalized to unit DC gain. Edges are handled by
//! mirroring the input about its first and last samples.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Largest numerator or denominator accepted after reduction.
pub const MAX_RATIO_TERM: u64 = 10_000;

/// Stopband attenuation the Kaiser window is designed for, in dB.
const STOPBAND_DB: f64 = 80.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleSpec {
    source_hz: f64,
    target_hz: f64,
    up: u64,
    down: u64,
    filter_half_taps: usize,
}

impl ResampleSpec {
    pub const DEFAULT_HALF_TAPS: usize = 64;

    pub fn new(source_hz: f64, target_hz: f64) -> Result<Self> {
        Self::with_half_taps(source_hz, target_hz, Self::DEFAULT_HALF_TAPS)
    }

    /// `filter_half_taps` counts sinc zero crossings on each side of the
    /// centre, measured at the lower of the two rates.
    pub fn with_half_taps(source_hz: f64, target_hz: f64, filter_half_taps: usize) -> Result<Self> {
        for (name, v) in [("source", source_hz), ("target", target_hz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "{name} rate must be positive, got {v}"
                )));
            }
        }
        if filter_half_taps == 0 {
            return Err(Error::invalid("filter needs at least one tap per side"));
        }
        let (up, down) = reduce_ratio(target_hz, source_hz).ok_or_else(|| {
            Error::invalid(format!(
                "{source_hz} Hz → {target_hz} Hz is not a ratio with terms up to {MAX_RATIO_TERM}"
            ))
        })?;
        Ok(Self {
            source_hz,
            target_hz,
            up,
            down,
            filter_half_taps,
        })
    }

    pub fn source_hz(&self) -> f64 {
        self.source_hz
    }

    pub fn target_hz(&self) -> f64 {
        self.target_hz
    }

    pub fn up(&self) -> u64 {
        self.up
    }

    pub fn down(&self) -> u64 {
        self.down
    }

    pub fn filter_half_taps(&self) -> usize {
        self.filter_half_taps
    }

    /// `ceil(len · up / down)`.
    pub fn output_len(&self, len: usize) -> usize {
        (len as u64 * self.up).div_ceil(self.down) as usize
    }

    /// Half-length of the prototype filter at the upsampled rate.
    fn prototype_half_len(&self) -> usize {
        self.filter_half_taps * self.up.max(self.down) as usize
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced `num/den` as a ratio of small integers, if one exists.
fn reduce_ratio(num: f64, den: f64) -> Option<(u64, u64)> {
    let exact_int = |v: f64| v.fract() == 0.0 && v < u64::MAX as f64;
    if exact_int(num) && exact_int(den) {
        let (n, d) = (num as u64, den as u64);
        let g = gcd(n, d);
        let (n, d) = (n / g, d / g);
        return (n <= MAX_RATIO_TERM && d <= MAX_RATIO_TERM).then_some((n, d));
    }
    // continued-fraction convergents of num/den
    let target = num / den;
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut rest = target;
    loop {
        let a = rest.floor();
        if a > MAX_RATIO_TERM as f64 {
            return None;
        }
        let a = a as u64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if h2 > MAX_RATIO_TERM || k2 > MAX_RATIO_TERM {
            return None;
        }
        if ((h2 as f64 / k2 as f64) - target).abs() <= 1e-12 * target {
            return Some((h2, k2));
        }
        let frac = rest - a as f64;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}

/// Zeroth-order modified Bessel function of the first kind, by its power series.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn kaiser_beta(attenuation_db: f64) -> f64 {
    if attenuation_db > 50.0 {
        0.1102 * (attenuation_db - 8.7)
    } else if attenuation_db >= 21.0 {
        0.5842 * (attenuation_db - 21.0).powf(0.4) + 0.07886 * (attenuation_db - 21.0)
    } else {
        0.0
    }
}

/// Polyphase branches of the prototype. Branch `p` holds the taps applied
/// to input samples `n0 + first[p] ..` for an output whose upsampled index
/// is `n0·up + p`.
struct Polyphase {
    first: Vec<i64>,
    taps: Vec<Vec<f64>>,
}

impl Polyphase {
    fn design(spec: &ResampleSpec) -> Self {
        let up = spec.up as i64;
        let half = spec.prototype_half_len() as i64;
        // cutoff in cycles per upsampled sample
        let fc = 0.5 / spec.up.max(spec.down) as f64;
        let beta = kaiser_beta(STOPBAND_DB);
        let norm = bessel_i0(beta);
        let h = |n: i64| {
            let t = n as f64 / half as f64;
            let window = bessel_i0(beta * (1.0 - t * t).max(0.0).sqrt()) / norm;
            let arg = 2.0 * fc * n as f64;
            let sinc = if n == 0 {
                1.0
            } else {
                (PI * arg).sin() / (PI * arg)
            };
            window * sinc
        };

        let mut first = Vec::with_capacity(up as usize);
        let mut taps = Vec::with_capacity(up as usize);
        for p in 0..up {
            // input k = n0 − j contributes h(p + j·up) for |p + j·up| ≤ half
            let j_max = (half - p).div_euclid(up);
            let j_min = (-half - p + up - 1).div_euclid(up);
            let mut branch: Vec<f64> = (j_min..=j_max).rev().map(|j| h(p + j * up)).collect();
            let dc: f64 = branch.iter().sum();
            branch.iter_mut().for_each(|c| *c /= dc);
            first.push(-j_max);
            taps.push(branch);
        }
        Self { first, taps }
    }
}

/// Mirror index into `0..len` with whole-sample symmetry (…, x1, x0, x1, …).
fn fold(i: i64, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as i64 - 1);
    let m = i.rem_euclid(period);
    (if m < len as i64 { m } else { period - m }) as usize
}

/// Resamples to `target_hz` with the default filter.
pub fn resample(s: &Signal, target_hz: f64) -> Result<Signal> {
    resample_with(s, &ResampleSpec::new(s.sample_rate_hz(), target_hz)?)
}

pub fn resample_with(s: &Signal, spec: &ResampleSpec) -> Result<Signal> {
    s.require_non_empty()?;
    if s.sample_rate_hz() != spec.source_hz {
        return Err(Error::RateMismatch {
            left: s.sample_rate_hz(),
            right: spec.source_hz,
        });
    }
    if spec.up == spec.down {
        return Signal::new(s.samples().to_vec(), spec.target_hz);
    }

    let x = s.samples();
    let bank = Polyphase::design(spec);
    let pad = (spec.prototype_half_len() as u64).div_ceil(spec.up) as usize + 1;
    let padded: Vec<f64> = (-(pad as i64)..(x.len() + pad) as i64)
        .map(|i| x[fold(i, x.len())])
        .collect();

    let (up, down) = (spec.up, spec.down);
    let out = (0..spec.output_len(x.len()) as u64)
        .map(|m| {
            let t = m * down;
            let (n0, p) = ((t / up) as i64, (t % up) as usize);
            let start = (n0 + bank.first[p] + pad as i64) as usize;
            let taps = &bank.taps[p];
            padded[start..start + taps.len()]
                .iter()
                .zip(taps)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Signal::new(out, spec.target_hz)
}
