mod common;

use std::f64::consts::PI;

use ecg_pli::{resample, Signal};

fn tone(f: f64, fs: f64, seconds: f64) -> Signal {
    let n = (seconds * fs) as usize;
    Signal::new(
        (0..n)
            .map(|i| (2.0 * PI * f * i as f64 / fs).sin())
            .collect(),
        fs,
    )
    .unwrap()
}

/// Least-squares amplitude of a sinusoid at `f` in `x`.
fn fitted_amplitude(x: &[f64], f: f64, fs: f64) -> f64 {
    let (mut ss, mut cc, mut sc, mut xs, mut xc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, v) in x.iter().enumerate() {
        let (s, c) = (2.0 * PI * f * i as f64 / fs).sin_cos();
        ss += s * s;
        cc += c * c;
        sc += s * c;
        xs += v * s;
        xc += v * c;
    }
    let det = ss * cc - sc * sc;
    let a = (xs * cc - xc * sc) / det;
    let b = (xc * ss - xs * sc) / det;
    a.hypot(b)
}

#[test]
fn passband_is_flat_upsampling() {
    let (src, dst) = (128.0, 1000.0);
    for f in [1.0, 5.0, 12.5, 25.0, 40.0, 0.4 * src] {
        let y = resample(&tone(f, src, 20.0), dst).unwrap();
        let edge = 2 * 64 * 8;
        let amp = fitted_amplitude(&y.samples()[edge..y.len() - edge], f, dst);
        let db = 20.0 * amp.log10();
        assert!(db.abs() <= 0.1, "{f} Hz: {db} dB");
    }
}

#[test]
fn passband_is_flat_downsampling() {
    let (src, dst) = (1000.0, 250.0);
    for f in [2.0, 30.0, 70.0, 0.4 * dst] {
        let y = resample(&tone(f, src, 20.0), dst).unwrap();
        let edge = 2 * 64;
        let amp = fitted_amplitude(&y.samples()[edge..y.len() - edge], f, dst);
        assert!((20.0 * amp.log10()).abs() <= 0.1, "{f} Hz");
    }
}

#[test]
fn images_are_suppressed() {
    let (src, dst) = (128.0, 1000.0);
    for f in [5.0, 20.0, 0.4 * src] {
        let y = resample(&tone(f, src, 20.0), dst).unwrap();
        let edge = 2 * 64 * 8;
        let spec = common::power_spectrum(&y.samples()[edge..y.len() - edge], dst);
        let images = common::band_power(&spec, src / 2.0, dst / 2.0);
        let wanted = common::band_power(&spec, 0.0, src / 2.0);
        let db = 10.0 * (images / wanted).log10();
        assert!(db <= -60.0, "{f} Hz: images at {db} dB");
    }
}

#[test]
fn aliasing_is_suppressed_when_downsampling() {
    // 400 Hz at 1000 Hz would fold to 100 Hz at 250 Hz
    let y = resample(&tone(400.0, 1000.0, 20.0), 250.0).unwrap();
    let edge = 2 * 64;
    let rms = common::mean_square(&y.samples()[edge..y.len() - edge]).sqrt();
    assert!(20.0 * (rms * 2f64.sqrt()).log10() <= -60.0, "rms {rms}");
}
