//! Adaptive signed correlation index.
//!
//! Each scored sample contributes `+1` when the denoised value lies within
//! `ξ` of the reference and `−1` otherwise; the index is the mean of those
//! votes. By default `ξ` is 5% of the reference's population standard
//! deviation.

use crate::error::{Error, Result};
use crate::signal::{std_of, Signal};

/// Fraction of the reference standard deviation used as the tolerance `ξ`.
pub const DEFAULT_XI_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct AsciReport {
    pub value: f64,
    pub xi: f64,
    /// Per-sample agreement over the whole record, excluded prefix included.
    pub agreement: Vec<bool>,
    pub excluded_prefix_samples: usize,
}

impl AsciReport {
    pub fn scored(&self) -> &[bool] {
        &self.agreement[self.excluded_prefix_samples..]
    }

    pub fn matches(&self) -> usize {
        self.scored().iter().filter(|a| **a).count()
    }

    pub fn mismatches(&self) -> usize {
        self.scored().len() - self.matches()
    }

    /// Index recomputed from the agreement mask alone.
    pub fn recompute(&self) -> f64 {
        signed_mean(self.matches(), self.scored().len())
    }
}

fn signed_mean(matches: usize, scored: usize) -> f64 {
    (2.0 * matches as f64 - scored as f64) / scored as f64
}

/// Scores `x_hat` against the clean reference `x`.
///
/// `xi_override` replaces the default tolerance; `excluded_prefix_samples`
/// leaves the leading samples out of the score (they still appear in the
/// agreement mask). A difference exactly equal to `ξ` counts as agreement.
pub fn asci(
    x: &Signal,
    x_hat: &Signal,
    xi_override: Option<f64>,
    excluded_prefix_samples: usize,
) -> Result<AsciReport> {
    x.require_non_empty()?;
    x.require_same_shape(x_hat)?;
    if excluded_prefix_samples >= x.len() {
        return Err(Error::invalid(format!(
            "excluding {excluded_prefix_samples} of {} samples leaves nothing to score",
            x.len()
        )));
    }
    let xi = match xi_override {
        Some(xi) if xi.is_finite() && xi >= 0.0 => xi,
        Some(xi) => return Err(Error::invalid(format!("xi must be non-negative, got {xi}"))),
        None => DEFAULT_XI_FRACTION * std_of(x.samples()),
    };
    let agreement: Vec<bool> = x
        .samples()
        .iter()
        .zip(x_hat.samples())
        .map(|(a, b)| (a - b).abs() <= xi)
        .collect();
    let scored = &agreement[excluded_prefix_samples..];
    let matches = scored.iter().filter(|a| **a).count();
    Ok(AsciReport {
        value: signed_mean(matches, scored.len()),
        xi,
        agreement,
        excluded_prefix_samples,
    })
}

/// Index over consecutive windows of `window` samples (the last one may be
/// shorter), all sharing the whole-record `ξ`.
pub fn asci_windows(x: &Signal, x_hat: &Signal, window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::invalid("window must be at least one sample"));
    }
    let report = asci(x, x_hat, None, 0)?;
    Ok(report
        .agreement
        .chunks(window)
        .map(|c| signed_mean(c.iter().filter(|a| **a).count(), c.len()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec(), 1000.0).unwrap()
    }

    #[test]
    fn identical_signals_score_one() {
        let x = sig(&[0.3, -2.0, 5.0, 1.0]);
        let r = asci(&x, &x, None, 0).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn constant_offset_beyond_xi_scores_minus_one() {
        let x = sig(&[1.0, -1.0, 1.0, -1.0]);
        let y = x.map(|v| v + 0.2).unwrap();
        assert_eq!(asci(&x, &y, None, 0).unwrap().value, -1.0);
    }

    #[test]
    fn worked_example() {
        let x = sig(&[1.0, -1.0, 1.0, -1.0]);
        let y = sig(&[1.0, -1.0, 1.0, -0.9]);
        let r = asci(&x, &y, None, 0).unwrap();
        assert_eq!(r.xi, 0.05);
        assert_eq!(r.value, 0.5);
        assert_eq!(r.matches(), 3);
        assert_eq!(r.recompute(), r.value);
    }

    #[test]
    fn tie_counts_as_agreement() {
        let x = sig(&[0.0, 0.0]);
        let y = sig(&[0.25, -0.25]);
        assert_eq!(asci(&x, &y, Some(0.25), 0).unwrap().value, 1.0);
        // zero tolerance demands exact equality
        let r = asci(&x, &sig(&[0.0, 1e-300]), None, 0).unwrap();
        assert_eq!(r.xi, 0.0);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn prefix_is_not_scored() {
        let x = sig(&[0.0, 0.0, 0.0, 0.0]);
        let y = sig(&[9.0, 9.0, 0.0, 0.0]);
        let r = asci(&x, &y, Some(0.1), 2).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.agreement.len(), 4);
        assert!(asci(&x, &y, Some(0.1), 4).is_err());
    }

    #[test]
    fn input_errors() {
        assert!(asci(&sig(&[1.0]), &sig(&[1.0, 2.0]), None, 0).is_err());
        assert!(asci(&sig(&[]), &sig(&[]), None, 0).is_err());
        assert!(asci(&sig(&[1.0]), &sig(&[1.0]), Some(-0.1), 0).is_err());
        let other_rate = Signal::new(vec![1.0], 500.0).unwrap();
        assert!(asci(&sig(&[1.0]), &other_rate, None, 0).is_err());
    }

    #[test]
    fn windows_cover_the_record() {
        let x = sig(&[1.0, -1.0, 1.0, -1.0, 1.0]);
        let y = sig(&[1.0, -1.0, 3.0, -1.0, 1.0]);
        assert_eq!(asci_windows(&x, &y, 2).unwrap(), vec![1.0, 0.0, 1.0]);
    }
}
