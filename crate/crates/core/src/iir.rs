//! Butterworth biquad sections and forward-backward (zero-phase) filtering.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
    s1: f64,
    s2: f64,
}

impl Biquad {
    fn normalized(b: [f64; 3], a0: f64, a1: f64, a2: f64) -> Self {
        Self {
            b: [b[0] / a0, b[1] / a0, b[2] / a0],
            a: [a1 / a0, a2 / a0],
            s1: 0.0,
            s2: 0.0,
        }
    }

    fn lowpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let b1 = 1.0 - cos;
        Self::normalized(
            [b1 / 2.0, b1, b1 / 2.0],
            1.0 + alpha,
            -2.0 * cos,
            1.0 - alpha,
        )
    }

    fn highpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let b1 = 1.0 + cos;
        Self::normalized(
            [b1 / 2.0, -b1, b1 / 2.0],
            1.0 + alpha,
            -2.0 * cos,
            1.0 - alpha,
        )
    }

    #[inline]
    pub(crate) fn process(&mut self, x: f64) -> f64 {
        let y = self.b[0] * x + self.s1;
        self.s1 = self.b[1] * x - self.a[0] * y + self.s2;
        self.s2 = self.b[2] * x - self.a[1] * y;
        y
    }

    pub(crate) fn reset(&mut self) {
        self.s1 = 0.0;
        self.s2 = 0.0;
    }
}

/// Cascade of biquads.
#[derive(Debug, Clone, Default)]
pub(crate) struct Cascade {
    sections: Vec<Biquad>,
}

fn butterworth_qs(order: usize) -> impl Iterator<Item = f64> {
    assert!(order >= 2 && order % 2 == 0, "even Butterworth orders only");
    (0..order / 2).map(move |k| 1.0 / (2.0 * ((2 * k + 1) as f64 * PI / (2 * order) as f64).sin()))
}

impl Cascade {
    pub(crate) fn butter_lowpass(order: usize, fc: f64, fs: f64) -> Self {
        Self {
            sections: butterworth_qs(order)
                .map(|q| Biquad::lowpass(fc, fs, q))
                .collect(),
        }
    }

    pub(crate) fn butter_highpass(order: usize, fc: f64, fs: f64) -> Self {
        Self {
            sections: butterworth_qs(order)
                .map(|q| Biquad::highpass(fc, fs, q))
                .collect(),
        }
    }

    pub(crate) fn then(mut self, other: Cascade) -> Self {
        self.sections.extend(other.sections);
        self
    }

    #[inline]
    pub(crate) fn process(&mut self, x: f64) -> f64 {
        self.sections.iter_mut().fold(x, |acc, s| s.process(acc))
    }

    pub(crate) fn reset(&mut self) {
        self.sections.iter_mut().for_each(Biquad::reset);
    }

    pub(crate) fn filter(&mut self, x: &[f64]) -> Vec<f64> {
        self.reset();
        x.iter().map(|&v| self.process(v)).collect()
    }

    /// Zero-phase filtering: forward pass, reverse pass, with odd reflection
    /// padding at both ends to tame start-up transients.
    pub(crate) fn filtfilt(&mut self, x: &[f64], pad: usize) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let pad = pad.min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let mut y = self.filter(&ext);
        y.reverse();
        let mut y = self.filter(&y);
        y.reverse();
        y.drain(..pad);
        y.truncate(n);
        y
    }
}
