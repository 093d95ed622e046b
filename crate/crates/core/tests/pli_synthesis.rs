mod common;

use std::f64::consts::PI;

use ecg_pli::synth::{realize_pli, EN50160_HARMONIC_CAPS};
use ecg_pli::{synth_ecg, synthesize_pli, PliConfig};

const FS: f64 = 1000.0;

#[test]
fn pure_tone_has_no_spurious_content() {
    let s = synthesize_pli(8.0, FS, &PliConfig::pure_tone(50.0).with_seed(9)).unwrap();
    let spec = common::power_spectrum(s.samples(), FS);
    let peak = spec
        .iter()
        .cloned()
        .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    assert!((peak.0 - 50.0).abs() <= FS / 8000.0, "peak at {}", peak.0);
    // everything outside the Hann main lobe around 50 Hz
    let tone = common::band_power(&spec, 49.0, 51.0);
    let rest = common::total_power(&spec) - tone;
    let db = 10.0 * (rest / tone).log10();
    assert!(db < -80.0, "spurious content {db} dB");
}

#[test]
fn instantaneous_frequency_follows_the_drawn_track() {
    for seed in [1, 2, 3] {
        let r = realize_pli(60.0, FS, &PliConfig::default().with_seed(seed)).unwrap();
        let inst = common::instantaneous_frequency(r.signal.samples(), FS, 25.0, 75.0);
        // the circular analytic signal is unreliable near the record ends
        let edge = FS as usize;
        for (i, (&f, &truth)) in inst
            .iter()
            .zip(&r.fundamental_track_hz)
            .enumerate()
            .take(inst.len() - edge)
            .skip(edge)
        {
            assert!((49.5..=50.5).contains(&f), "seed {seed} sample {i}: {f} Hz");
            assert!(
                (f - truth).abs() < 1e-3,
                "seed {seed} sample {i}: {f} vs {truth}"
            );
        }
        for f in &r.fundamental_track_hz {
            assert!((49.5..=50.5).contains(f));
        }
    }
}

#[test]
fn harmonic_powers_respect_their_caps() {
    for seed in 10..15 {
        let r = realize_pli(60.0, FS, &PliConfig::default().with_seed(seed)).unwrap();
        let spec = common::power_spectrum(r.signal.samples(), FS);
        let band = |m: f64| common::band_power(&spec, m * 50.0 * 0.98 - 1.0, m * 50.0 * 1.02 + 1.0);
        let fundamental = band(1.0);
        for m in 2..=5 {
            let ratio = band(m as f64) / fundamental;
            let cap = EN50160_HARMONIC_CAPS[m - 2];
            assert!(
                ratio <= cap + 1e-6,
                "seed {seed} harmonic {m}: {ratio} > {cap}"
            );
            let drawn = r.harmonic_power_ratios[m - 2];
            assert!(
                (ratio - drawn).abs() <= 1e-4 * cap,
                "seed {seed} harmonic {m}: {ratio} vs {drawn}"
            );
        }
    }
}

#[test]
fn phase_increments_stay_bounded() {
    let r = realize_pli(20.0, FS, &PliConfig::default().with_seed(4)).unwrap();
    let limit = 2.0 * PI * 5.0 * 50.5 / FS;
    let z = common::analytic_band(r.signal.samples(), FS, 25.0, 75.0);
    let edge = FS as usize;
    for w in z[edge..z.len() - edge].windows(2) {
        let step = (w[1] * w[0].conj()).arg();
        assert!(step > 0.0 && step <= limit);
    }
}

fn peak_normalized_xcorr(a: &[f64], b: &[f64]) -> f64 {
    use rustfft::num_complex::Complex64;
    let n = (a.len() + b.len()).next_power_of_two();
    let pad = |v: &[f64]| {
        let mut out: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        out.resize(n, Complex64::new(0.0, 0.0));
        common::fft(&out)
    };
    let (fa, fb) = (pad(a), pad(b));
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y.conj()).collect();
    let xc = common::ifft(&prod);
    let norm = (a.iter().map(|x| x * x).sum::<f64>() * b.iter().map(|x| x * x).sum::<f64>()).sqrt();
    xc.iter().map(|c| c.re.abs()).fold(0.0, f64::max) / norm
}

#[test]
fn different_seeds_decorrelate() {
    let a = synthesize_pli(20.0, FS, &PliConfig::default().with_seed(100)).unwrap();
    let b = synthesize_pli(20.0, FS, &PliConfig::default().with_seed(101)).unwrap();
    let peak = peak_normalized_xcorr(a.samples(), b.samples());
    assert!(peak < 0.9, "peak correlation {peak}");
}

#[test]
fn synthetic_ecg_is_quiet_at_mains_frequency() {
    for (hr, seed) in [(60.0, 0), (75.0, 1), (100.0, 2)] {
        let ecg = synth_ecg(60.0, FS, hr, seed).unwrap();
        let spec = common::power_spectrum(ecg.signal.samples(), FS);
        let share = common::band_power(&spec, 49.0, 51.0) / common::total_power(&spec);
        assert!(share < 0.01, "{hr} bpm: {share}");
    }
}

#[test]
fn synthetic_ecg_is_bit_reproducible() {
    let a = synth_ecg(10.0, FS, 72.0, 5).unwrap();
    let b = synth_ecg(10.0, FS, 72.0, 5).unwrap();
    let bits = |s: &ecg_pli::Signal| s.samples().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.signal), bits(&b.signal));
    assert_eq!(a.beat_times, b.beat_times);
}
