//! Test-signal generation: synthetic ECG, mains interference, and mixing at
//! a prescribed signal-to-interference ratio.

mod ecg;
mod pli;

pub use ecg::{synth_ecg, EcgModel, SyntheticEcg};
pub use pli::{realize_pli, synthesize_pli, PliConfig, PliRealization, EN50160_HARMONIC_CAPS};

use crate::error::{Error, Result};
use crate::signal::{power_of, Signal, SirLevelDb};

/// A contaminated record and the gain that was applied to the interference.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    pub noisy: Signal,
    pub scale: f64,
}

/// `clean + scale · interference`, with `scale` chosen so the result has the
/// requested signal-to-interference ratio.
pub fn mix_at_sir(clean: &Signal, interference: &Signal, sir: SirLevelDb) -> Result<Mixture> {
    clean.require_non_empty()?;
    clean.require_same_shape(interference)?;
    let pc = power_of(clean.samples());
    let pi = power_of(interference.samples());
    if pc == 0.0 {
        return Err(Error::invalid("clean signal has zero power"));
    }
    if pi == 0.0 {
        return Err(Error::invalid("interference has zero power"));
    }
    let scale = (pc / (pi * sir.linear())).sqrt();
    let noisy = clean
        .samples()
        .iter()
        .zip(interference.samples())
        .map(|(c, i)| c + scale * i)
        .collect();
    Ok(Mixture {
        noisy: Signal::new(noisy, clean.sample_rate_hz())?,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: Vec<f64>) -> Signal {
        Signal::new(v, 100.0).unwrap()
    }

    #[test]
    fn equal_power_at_zero_db_is_unit_scale() {
        let m = mix_at_sir(
            &sig(vec![1.0, -1.0]),
            &sig(vec![-1.0, 1.0]),
            SirLevelDb::new(0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(m.scale, 1.0);
        assert_eq!(m.noisy.samples(), &[0.0, 0.0]);
    }

    #[test]
    fn ten_db_scale() {
        let m = mix_at_sir(
            &sig(vec![1.0, -1.0]),
            &sig(vec![1.0, 1.0]),
            SirLevelDb::new(10.0).unwrap(),
        )
        .unwrap();
        assert!((m.scale - 0.31622776601683794).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let sir = SirLevelDb::new(0.0).unwrap();
        assert!(mix_at_sir(&sig(vec![0.0; 3]), &sig(vec![1.0; 3]), sir).is_err());
        assert!(mix_at_sir(&sig(vec![1.0; 3]), &sig(vec![0.0; 3]), sir).is_err());
        assert!(matches!(
            mix_at_sir(&sig(vec![1.0; 3]), &sig(vec![1.0; 4]), sir),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(mix_at_sir(&sig(vec![]), &sig(vec![]), sir).is_err());
    }
}
