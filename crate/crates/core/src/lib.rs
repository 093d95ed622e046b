//! Removal of powerline interference from ECG with the stationary wavelet
//! transform, plus the tools to benchmark it.
//!
//! The denoiser decomposes a record into wavelet detail bands, shrinks each
//! band against a moving-median threshold (hard inside QRS complexes, soft
//! elsewhere) and rebuilds it. Around it sit a seeded interference generator,
//! an adaptive notch baseline, the ASCI score and a manifest-driven harness.
//!
//! ```
//! use ecg_pli::{asci, denoise, mix_at_sir, synth_ecg, synthesize_pli, DenoiseConfig, PliConfig, SirLevelDb};
//!
//! let clean = synth_ecg(8.0, 1000.0, 70.0, 1)?.signal;
//! let pli = synthesize_pli(8.0, 1000.0, &PliConfig::default().with_seed(2))?;
//! let noisy = mix_at_sir(&clean, &pli, SirLevelDb::new(0.0)?)?.noisy;
//! let restored = denoise(&noisy, &DenoiseConfig::default())?;
//! assert!(asci(&clean, &restored, None, 1000)?.value > 0.9);
//! # Ok::<(), ecg_pli::Error>(())
//! ```

// `!(x > y)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod denoiser;
pub mod error;
pub mod harness;
mod iir;
pub mod io;
pub mod metrics;
pub mod notch;
pub mod qrs;
pub mod resample;
pub mod shrinkage;
pub mod signal;
pub mod swt;
pub mod synth;

pub use denoiser::{denoise, denoise_with_mask, DenoiseConfig, ThresholdRule};
pub use error::{Error, Result};
pub use metrics::{asci, AsciReport};
pub use notch::{adaptive_notch, NotchConfig};
pub use resample::{resample, ResampleSpec};
pub use signal::{population_std, signal_power, Signal, SirLevelDb};
pub use synth::{mix_at_sir, synth_ecg, synthesize_pli, PliConfig};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/signals.md")]
    mod signals {}
    #[doc = include_str!("../../../book/src/swt.md")]
    mod swt {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/denoiser.md")]
    mod denoiser {}
    #[doc = include_str!("../../../book/src/interference.md")]
    mod interference {}
    #[doc = include_str!("../../../book/src/notch.md")]
    mod notch {}
    #[doc = include_str!("../../../book/src/asci.md")]
    mod asci {}
    #[doc = include_str!("../../../book/src/resampling.md")]
    mod resampling {}
    #[doc = include_str!("../../../book/src/benchmark.md")]
    mod benchmark {}
}
