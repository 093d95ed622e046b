use std::time::Instant;

use rayon::prelude::*;

use super::manifest::{ExperimentManifest, MethodKind, RecordSource, RecordSpec};
use crate::denoiser::{denoise, DenoiseConfig};
use crate::error::{Error, Result};
use crate::io::load_signal_csv_auto;
use crate::metrics::{asci, asci_windows};
use crate::notch::{adaptive_notch, NotchConfig};
use crate::resample::resample;
use crate::signal::{mean_of, std_of, Signal, SirLevelDb};
use crate::synth::{mix_at_sir, synth_ecg, synthesize_pli, Mixture};

/// A denoiser under comparison. It is handed the noisy mixture and nothing
/// else.
pub trait Method: Send + Sync {
    fn name(&self) -> &str;
    fn apply(&self, noisy: &Signal) -> Result<Signal>;
}

#[derive(Debug, Clone)]
pub struct SwtMethod(pub DenoiseConfig);

impl Method for SwtMethod {
    fn name(&self) -> &str {
        MethodKind::Swt.as_str()
    }

    fn apply(&self, noisy: &Signal) -> Result<Signal> {
        denoise(noisy, &self.0)
    }
}

#[derive(Debug, Clone)]
pub struct NotchMethod(pub NotchConfig);

impl Method for NotchMethod {
    fn name(&self) -> &str {
        MethodKind::Notch.as_str()
    }

    fn apply(&self, noisy: &Signal) -> Result<Signal> {
        adaptive_notch(noisy, &self.0)
    }
}

/// The methods a manifest asks for, in manifest order.
pub fn methods_for(manifest: &ExperimentManifest) -> Vec<Box<dyn Method>> {
    manifest
        .methods
        .iter()
        .map(|k| -> Box<dyn Method> {
            match k {
                MethodKind::Swt => Box::new(SwtMethod(manifest.denoise.clone())),
                MethodKind::Notch => Box::new(NotchMethod(manifest.notch.clone())),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub record: String,
    pub method: String,
    pub sir_db: f64,
    pub seed: u64,
    pub asci: f64,
    pub runtime_ms: f64,
}

/// A (record, method, SIR, seed) cell that produced no score.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub record: String,
    pub method: String,
    pub sir_db: f64,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub sir_db: f64,
    pub mean_asci: f64,
    /// Population standard deviation.
    pub std_asci: f64,
    pub n: usize,
}

/// Per-window score of one trial, for diagnostics only.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowRow {
    pub record: String,
    pub method: String,
    pub sir_db: f64,
    pub seed: u64,
    pub window: usize,
    pub asci: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOutcome {
    pub rows: Vec<ResultRow>,
    pub errors: Vec<ErrorRow>,
    pub summary: Vec<SummaryRow>,
    pub windows: Vec<WindowRow>,
}

/// Clean ECG for a record at `sample_rate_hz`.
pub fn load_record(spec: &RecordSpec, sample_rate_hz: f64) -> Result<Signal> {
    match &spec.source {
        RecordSource::Synthetic {
            duration_s,
            heart_rate_bpm,
            seed,
        } => {
            let seed =
                seed.ok_or_else(|| Error::Manifest(format!("record {:?} has no seed", spec.id)))?;
            Ok(synth_ecg(*duration_s, sample_rate_hz, *heart_rate_bpm, seed)?.signal)
        }
        RecordSource::File {
            path,
            sample_rate_hz: declared,
            start_s,
            duration_s,
        } => {
            let s = load_signal_csv_auto(path, *declared)?;
            let fs = s.sample_rate_hz();
            let start = (start_s.unwrap_or(0.0) * fs).round() as usize;
            let end = match duration_s {
                Some(d) => start + (d * fs).round() as usize,
                None => s.len(),
            };
            if start >= end || end > s.len() {
                return Err(Error::invalid(format!(
                    "{}: segment {start}..{end} lies outside {} samples",
                    path.display(),
                    s.len()
                )));
            }
            let segment = Signal::new(s.samples()[start..end].to_vec(), fs)?;
            if fs == sample_rate_hz {
                Ok(segment)
            } else {
                resample(&segment, sample_rate_hz)
            }
        }
    }
}

/// Interference for one trial, mixed into `clean` at `sir_db`.
pub fn make_mixture(
    manifest: &ExperimentManifest,
    clean: &Signal,
    seed: u64,
    sir_db: f64,
) -> Result<(Mixture, Signal)> {
    let pli = synthesize_pli(
        clean.duration_s(),
        clean.sample_rate_hz(),
        &manifest.pli.clone().with_seed(seed),
    )?;
    // guard against off-by-one lengths from the duration round trip
    let pli = Signal::new(
        pli.samples()[..clean.len().min(pli.len())].to_vec(),
        pli.sample_rate_hz(),
    )?;
    let mix = mix_at_sir(clean, &pli, SirLevelDb::new(sir_db)?)?;
    Ok((mix, pli))
}

struct Cell {
    key: (usize, usize, usize, usize),
    outcome: std::result::Result<(ResultRow, Vec<WindowRow>), ErrorRow>,
}

fn score_trial(
    manifest: &ExperimentManifest,
    methods: &[Box<dyn Method>],
    ri: usize,
    ti: usize,
    clean: &std::result::Result<Signal, String>,
) -> Vec<Cell> {
    let record = &manifest.records[ri];
    let seed = record.seeds()[ti];
    let prefix = manifest.excluded_prefix_samples();
    let window = manifest.diagnostic_window_samples();
    let mut cells = Vec::new();
    for (si, &sir_db) in manifest.sir_levels_db.iter().enumerate() {
        let fail = |mi: usize, message: String| Cell {
            key: (ri, mi, si, ti),
            outcome: Err(ErrorRow {
                record: record.id.clone(),
                method: methods[mi].name().to_string(),
                sir_db,
                seed,
                message,
            }),
        };
        let clean = match clean {
            Ok(c) => c,
            Err(e) => {
                cells.extend((0..methods.len()).map(|mi| fail(mi, e.clone())));
                continue;
            }
        };
        let noisy = match make_mixture(manifest, clean, seed, sir_db) {
            Ok((m, _)) => m.noisy,
            Err(e) => {
                cells.extend((0..methods.len()).map(|mi| fail(mi, e.to_string())));
                continue;
            }
        };
        for (mi, method) in methods.iter().enumerate() {
            let started = Instant::now();
            let result = method.apply(&noisy).and_then(|out| {
                let elapsed = started.elapsed();
                let report = asci(clean, &out, None, prefix)?;
                let windows = if window > 0 {
                    asci_windows(clean, &out, window)?
                } else {
                    Vec::new()
                };
                Ok((report.value, windows, elapsed))
            });
            cells.push(match result {
                Ok((value, windows, elapsed)) => Cell {
                    key: (ri, mi, si, ti),
                    outcome: Ok((
                        ResultRow {
                            record: record.id.clone(),
                            method: method.name().to_string(),
                            sir_db,
                            seed,
                            asci: value,
                            runtime_ms: if manifest.timing {
                                elapsed.as_secs_f64() * 1e3
                            } else {
                                0.0
                            },
                        },
                        windows
                            .into_iter()
                            .enumerate()
                            .map(|(w, asci)| WindowRow {
                                record: record.id.clone(),
                                method: method.name().to_string(),
                                sir_db,
                                seed,
                                window: w,
                                asci,
                            })
                            .collect(),
                    )),
                },
                Err(e) => fail(mi, e.to_string()),
            });
        }
    }
    cells
}

/// Runs every (record, trial, SIR) cell with the manifest's methods.
pub fn run_experiment(manifest: &ExperimentManifest) -> Result<ExperimentOutcome> {
    run_experiment_with(manifest, &methods_for(manifest))
}

/// As [`run_experiment`] with caller-supplied methods. Cells run in parallel;
/// rows come back sorted by record, method, SIR and trial in manifest order.
pub fn run_experiment_with(
    manifest: &ExperimentManifest,
    methods: &[Box<dyn Method>],
) -> Result<ExperimentOutcome> {
    let manifest = manifest.clone().resolve()?;
    if methods.is_empty() {
        return Err(Error::Manifest("at least one method is required".into()));
    }
    let fs = manifest.sample_rate_hz;
    let cleans: Vec<std::result::Result<Signal, String>> = manifest
        .records
        .par_iter()
        .map(|r| {
            load_record(r, fs).map_err(|e| e.to_string()).and_then(|s| {
                if s.len() <= manifest.excluded_prefix_samples() {
                    Err(format!(
                        "{} samples do not outlast the excluded prefix",
                        s.len()
                    ))
                } else {
                    Ok(s)
                }
            })
        })
        .collect();

    let jobs: Vec<(usize, usize)> = (0..manifest.records.len())
        .flat_map(|ri| (0..manifest.trials).map(move |ti| (ri, ti)))
        .collect();
    let mut cells: Vec<Cell> = jobs
        .par_iter()
        .flat_map_iter(|&(ri, ti)| score_trial(&manifest, methods, ri, ti, &cleans[ri]))
        .collect();
    cells.sort_by_key(|c| c.key);

    let mut outcome = ExperimentOutcome::default();
    for cell in cells {
        match cell.outcome {
            Ok((row, windows)) => {
                outcome.rows.push(row);
                outcome.windows.extend(windows);
            }
            Err(e) => outcome.errors.push(e),
        }
    }
    outcome.summary = summarize(
        &outcome.rows,
        methods.iter().map(|m| m.name()),
        &manifest.sir_levels_db,
    );
    Ok(outcome)
}

/// Mean and population standard deviation per (method, SIR), in the order
/// given. Cells with no rows are left out.
pub fn summarize<'a>(
    rows: &[ResultRow],
    methods: impl IntoIterator<Item = &'a str>,
    sir_levels_db: &[f64],
) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for method in methods {
        for &sir_db in sir_levels_db {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.method == method && r.sir_db == sir_db)
                .map(|r| r.asci)
                .collect();
            if values.is_empty() {
                continue;
            }
            out.push(SummaryRow {
                method: method.to_string(),
                sir_db,
                mean_asci: mean_of(&values),
                std_asci: std_of(&values),
                n: values.len(),
            });
        }
    }
    out
}
