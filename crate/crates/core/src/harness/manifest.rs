use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::denoiser::DenoiseConfig;
use crate::error::{Error, Result};
use crate::notch::NotchConfig;
use crate::signal::SirLevelDb;
use crate::synth::PliConfig;

/// File name the resolved manifest is echoed under.
pub const RESOLVED_MANIFEST: &str = "manifest.resolved.toml";

/// Where a record's clean ECG comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum RecordSource {
    Synthetic {
        duration_s: f64,
        heart_rate_bpm: f64,
        /// Jitter seed; derived from the base seed when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// A single-column CSV (see [`crate::io`]). Resampled to the working rate
    /// when its own rate differs.
    File {
        path: PathBuf,
        /// Needed only when the file header does not declare a rate.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sample_rate_hz: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start_s: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration_s: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordSpec {
    pub id: String,
    #[serde(flatten)]
    pub source: RecordSource,
    /// One interference seed per trial; derived when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_seeds: Option<Vec<u64>>,
}

impl RecordSpec {
    pub fn synthetic(id: impl Into<String>, duration_s: f64, heart_rate_bpm: f64) -> Self {
        Self {
            id: id.into(),
            source: RecordSource::Synthetic {
                duration_s,
                heart_rate_bpm,
                seed: None,
            },
            trial_seeds: None,
        }
    }

    pub fn file(id: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        Self {
            id: id.into(),
            source: RecordSource::File {
                path: path.into(),
                sample_rate_hz: None,
                start_s: None,
                duration_s: None,
            },
            trial_seeds: None,
        }
    }

    /// Trial seeds; empty until the manifest is resolved.
    pub fn seeds(&self) -> &[u64] {
        self.trial_seeds.as_deref().unwrap_or(&[])
    }
}

/// Which denoisers a run compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Swt,
    Notch,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Swt => "swt",
            MethodKind::Notch => "notch",
        }
    }
}

impl std::fmt::Display for MethodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything a benchmark run needs. Absent keys take the defaults below;
/// [`ExperimentManifest::resolve`] fills in derived seeds so the echoed copy
/// replays the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentManifest {
    pub output_dir: PathBuf,
    /// Rate every record is brought to before mixing.
    pub sample_rate_hz: f64,
    pub sir_levels_db: Vec<f64>,
    pub trials: usize,
    /// Root of every derived seed.
    pub base_seed: u64,
    pub methods: Vec<MethodKind>,
    /// Leading stretch left out of every score.
    pub excluded_prefix_s: f64,
    /// Length of the windows in the per-window diagnostic table; zero turns
    /// it off.
    pub diagnostic_window_s: f64,
    /// Record wall-clock runtimes. Off by default so outputs are reproducible
    /// byte for byte; `runtime_ms` is then written as 0.
    pub timing: bool,
    /// Interference model; its `seed` is replaced by each trial's seed.
    pub pli: PliConfig,
    pub denoise: DenoiseConfig,
    pub notch: NotchConfig,
    pub records: Vec<RecordSpec>,
}

impl Default for ExperimentManifest {
    /// Ten one-minute synthetic records, six SIR levels, three trials.
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("results"),
            sample_rate_hz: 1000.0,
            sir_levels_db: SirLevelDb::BENCHMARK.to_vec(),
            trials: 3,
            base_seed: 20_140_901,
            methods: vec![MethodKind::Swt, MethodKind::Notch],
            excluded_prefix_s: 1.0,
            diagnostic_window_s: 60.0,
            timing: false,
            pli: PliConfig::default(),
            denoise: DenoiseConfig::default(),
            notch: NotchConfig::default(),
            records: synthetic_corpus(10, 60.0),
        }
    }
}

/// `n` synthetic records with heart rates spread over 55 to 100 bpm.
pub fn synthetic_corpus(n: usize, duration_s: f64) -> Vec<RecordSpec> {
    (0..n)
        .map(|i| {
            let hr = if n > 1 {
                55.0 + 45.0 * i as f64 / (n - 1) as f64
            } else {
                70.0
            };
            RecordSpec::synthetic(format!("syn{i:02}"), duration_s, (hr * 10.0).round() / 10.0)
        })
        .collect()
}

/// SplitMix64 finalizer; spreads structured inputs over the seed space.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn derive_seed(base: u64, record: usize, slot: u64) -> u64 {
    mix64(mix64(base ^ mix64(record as u64 + 1)).wrapping_add(slot))
}

impl ExperimentManifest {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    /// Reads a manifest; relative record paths are taken relative to the
    /// manifest's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m = Self::from_toml_str(&text)?;
        if let Some(dir) = path.parent() {
            for r in &mut m.records {
                if let RecordSource::File { path, .. } = &mut r.source {
                    if path.is_relative() {
                        *path = dir.join(&*path);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Manifest(m));
        if self.records.is_empty() {
            return bad("at least one record is required".into());
        }
        if self.sir_levels_db.is_empty() {
            return bad("at least one SIR level is required".into());
        }
        for sir in &self.sir_levels_db {
            SirLevelDb::new(*sir).map_err(|e| Error::Manifest(e.to_string()))?;
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        if self.methods.iter().collect::<HashSet<_>>().len() != self.methods.len() {
            return bad("methods are listed more than once".into());
        }
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return bad(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            ));
        }
        if !(self.excluded_prefix_s.is_finite() && self.excluded_prefix_s >= 0.0) {
            return bad("excluded prefix must be non-negative".into());
        }
        if !(self.diagnostic_window_s.is_finite() && self.diagnostic_window_s >= 0.0) {
            return bad("diagnostic window must be non-negative".into());
        }
        let wrap = |e: Error| Error::Manifest(e.to_string());
        self.pli.validate().map_err(wrap)?;
        if self.pli.max_frequency_hz() * 2.0 >= self.sample_rate_hz {
            return bad("interference harmonics exceed the working Nyquist rate".into());
        }
        self.denoise.validate().map_err(wrap)?;
        self.notch.validate(self.sample_rate_hz).map_err(wrap)?;

        let mut ids = HashSet::new();
        for r in &self.records {
            if r.id.is_empty() || r.id.contains([',', '"', '\n', '\r']) {
                return bad(format!(
                    "record id {:?} must be non-empty and CSV-safe",
                    r.id
                ));
            }
            if !ids.insert(&r.id) {
                return bad(format!("duplicate record id {:?}", r.id));
            }
            if let Some(seeds) = &r.trial_seeds {
                if seeds.len() != self.trials {
                    return bad(format!(
                        "record {:?} lists {} trial seeds for {} trials",
                        r.id,
                        seeds.len(),
                        self.trials
                    ));
                }
                if seeds.iter().collect::<HashSet<_>>().len() != seeds.len() {
                    return bad(format!("record {:?} repeats a trial seed", r.id));
                }
            }
            if let RecordSource::Synthetic { duration_s, .. } = r.source {
                if !(duration_s > self.excluded_prefix_s) {
                    return bad(format!(
                        "record {:?} is no longer than the excluded prefix",
                        r.id
                    ));
                }
            }
        }
        Ok(())
    }

    /// Validates and materializes every derived seed.
    pub fn resolve(mut self) -> Result<Self> {
        self.validate()?;
        let base = self.base_seed;
        for (i, r) in self.records.iter_mut().enumerate() {
            if let RecordSource::Synthetic { seed, .. } = &mut r.source {
                seed.get_or_insert_with(|| derive_seed(base, i, u64::MAX));
            }
            r.trial_seeds.get_or_insert_with(|| {
                (0..self.trials as u64)
                    .map(|t| derive_seed(base, i, t))
                    .collect()
            });
        }
        Ok(self)
    }

    pub fn excluded_prefix_samples(&self) -> usize {
        (self.excluded_prefix_s * self.sample_rate_hz).round() as usize
    }

    pub fn diagnostic_window_samples(&self) -> usize {
        (self.diagnostic_window_s * self.sample_rate_hz).round() as usize
    }
}
