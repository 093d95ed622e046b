//! CSV reports and waveform traces.
//!
//! Floats are written in Rust's shortest round-trip form, so parsing a
//! report gives back the exact values it was written from.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::manifest::{ExperimentManifest, RESOLVED_MANIFEST};
use super::run::{load_record, make_mixture, run_experiment, ExperimentOutcome, Method};
use crate::error::{Error, Result};

pub const ROWS_HEADER: &str = "record,method,sir_db,seed,asci,runtime_ms";
pub const SUMMARY_HEADER: &str = "method,sir_db,mean_asci,std_asci,n";
pub const ERRORS_HEADER: &str = "record,method,sir_db,seed,message";
pub const WINDOWS_HEADER: &str = "record,method,sir_db,seed,window,asci";

fn write_lines(path: &Path, header: &str, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let wrap = |e| Error::io(path, e);
    let mut out = BufWriter::new(fs::File::create(path).map_err(wrap)?);
    writeln!(out, "{header}").map_err(wrap)?;
    for line in lines {
        writeln!(out, "{line}").map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Paths of everything [`write_outcome`] produced.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub rows: PathBuf,
    pub summary: PathBuf,
    pub errors: PathBuf,
    pub windows: Option<PathBuf>,
    pub manifest: PathBuf,
}

/// Writes `rows.csv`, `summary.csv`, `errors.csv`, the per-window table
/// when it has rows, and the resolved manifest into `dir`.
pub fn write_outcome(
    outcome: &ExperimentOutcome,
    resolved: &ExperimentManifest,
    dir: &Path,
) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = OutputFiles {
        rows: dir.join("rows.csv"),
        summary: dir.join("summary.csv"),
        errors: dir.join("errors.csv"),
        windows: (!outcome.windows.is_empty()).then(|| dir.join("windows.csv")),
        manifest: dir.join(RESOLVED_MANIFEST),
    };
    write_lines(
        &files.rows,
        ROWS_HEADER,
        outcome.rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                quote(&r.record),
                quote(&r.method),
                r.sir_db,
                r.seed,
                r.asci,
                r.runtime_ms
            )
        }),
    )?;
    write_lines(
        &files.summary,
        SUMMARY_HEADER,
        outcome.summary.iter().map(|s| {
            format!(
                "{},{},{},{},{}",
                quote(&s.method),
                s.sir_db,
                s.mean_asci,
                s.std_asci,
                s.n
            )
        }),
    )?;
    write_lines(
        &files.errors,
        ERRORS_HEADER,
        outcome.errors.iter().map(|e| {
            format!(
                "{},{},{},{},{}",
                quote(&e.record),
                quote(&e.method),
                e.sir_db,
                e.seed,
                quote(&e.message)
            )
        }),
    )?;
    if let Some(path) = &files.windows {
        write_lines(
            path,
            WINDOWS_HEADER,
            outcome.windows.iter().map(|w| {
                format!(
                    "{},{},{},{},{},{}",
                    quote(&w.record),
                    quote(&w.method),
                    w.sir_db,
                    w.seed,
                    w.window,
                    w.asci
                )
            }),
        )?;
    }
    let text = resolved.to_toml_string()?;
    fs::write(&files.manifest, text).map_err(|e| Error::io(&files.manifest, e))?;
    Ok(files)
}

/// Resolves the manifest, runs it, and writes every report into
/// `manifest.output_dir`.
pub fn run_bench(manifest: &ExperimentManifest) -> Result<(ExperimentOutcome, OutputFiles)> {
    let resolved = manifest.clone().resolve()?;
    let outcome = run_experiment(&resolved)?;
    let files = write_outcome(&outcome, &resolved, &resolved.output_dir)?;
    Ok((outcome, files))
}

/// Writes aligned `time_s, clean, noisy, pli, <method>...` columns for one
/// record, SIR level and trial. `pli` is the interference as scaled into the
/// mixture.
pub fn emit_traces(
    manifest: &ExperimentManifest,
    record_id: &str,
    sir_db: f64,
    trial: usize,
    methods: &[Box<dyn Method>],
    path: &Path,
) -> Result<()> {
    let manifest = manifest.clone().resolve()?;
    let record = manifest
        .records
        .iter()
        .find(|r| r.id == record_id)
        .ok_or_else(|| Error::Manifest(format!("no record named {record_id:?}")))?;
    let seed = *record.seeds().get(trial).ok_or_else(|| {
        Error::Manifest(format!(
            "trial {trial} is out of range for {} trials",
            manifest.trials
        ))
    })?;
    let clean = load_record(record, manifest.sample_rate_hz)?;
    let (mix, pli) = make_mixture(&manifest, &clean, seed, sir_db)?;
    let outputs = methods
        .iter()
        .map(|m| m.apply(&mix.noisy))
        .collect::<Result<Vec<_>>>()?;

    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut header = String::from("time_s,clean,noisy,pli");
    for m in methods {
        header.push(',');
        header.push_str(&quote(m.name()));
    }
    let fs_hz = clean.sample_rate_hz();
    write_lines(
        path,
        &header,
        (0..clean.len()).map(|i| {
            let mut line = format!(
                "{},{},{},{}",
                i as f64 / fs_hz,
                clean.samples()[i],
                mix.noisy.samples()[i],
                mix.scale * pli.samples()[i]
            );
            for out in &outputs {
                line.push(',');
                line.push_str(&out.samples()[i].to_string());
            }
            line
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote("plain"), "plain");
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
