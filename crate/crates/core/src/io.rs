//! Single-column decimal CSV, one sample per line.
//!
//! Lines starting with `#` are comments. A comment of the form
//! `# sample_rate_hz=<value>` declares the rate the samples were taken at;
//! [`save_signal_csv`] always writes one. Values are written with 17
//! significant digits so a save/load round trip is bit-exact.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::Signal;

const RATE_KEY: &str = "sample_rate_hz";

/// Contents of a signal file before a rate is settled.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFile {
    pub samples: Vec<f64>,
    /// Rate declared in the header, if any.
    pub sample_rate_hz: Option<f64>,
}

pub fn read_signal_csv(path: impl AsRef<Path>) -> Result<SampleFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut samples = Vec::new();
    let mut sample_rate_hz = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == RATE_KEY {
                    let rate: f64 = value.trim().parse().map_err(|_| {
                        parse_err(line_no, format!("bad sample rate {:?}", value.trim()))
                    })?;
                    sample_rate_hz = Some(rate);
                }
            }
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| parse_err(line_no, format!("not a number: {line:?}")))?;
        if !v.is_finite() {
            return Err(parse_err(line_no, format!("non-finite sample {line:?}")));
        }
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok(SampleFile {
        samples,
        sample_rate_hz,
    })
}

/// Loads a signal at `sample_rate_hz`. A rate declared in the file header
/// must agree with it.
pub fn load_signal_csv(path: impl AsRef<Path>, sample_rate_hz: f64) -> Result<Signal> {
    let file = read_signal_csv(path)?;
    if let Some(declared) = file.sample_rate_hz {
        if declared != sample_rate_hz {
            return Err(Error::RateMismatch {
                left: declared,
                right: sample_rate_hz,
            });
        }
    }
    Signal::new(file.samples, sample_rate_hz)
}

/// Loads a signal whose rate comes from the header, or `fallback_hz` when
/// the file does not declare one.
pub fn load_signal_csv_auto(path: impl AsRef<Path>, fallback_hz: Option<f64>) -> Result<Signal> {
    let path = path.as_ref();
    let file = read_signal_csv(path)?;
    let rate = file.sample_rate_hz.or(fallback_hz).ok_or_else(|| {
        Error::invalid(format!(
            "{}: no sample rate in header and none given",
            path.display()
        ))
    })?;
    Signal::new(file.samples, rate)
}

pub fn save_signal_csv(path: impl AsRef<Path>, s: &Signal) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e| Error::io(path, e);
    let mut out = BufWriter::new(fs::File::create(path).map_err(wrap)?);
    writeln!(out, "# {RATE_KEY}={}", s.sample_rate_hz()).map_err(wrap)?;
    for v in s.samples() {
        writeln!(out, "{v:.16e}").map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn plain_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "0.0\n1.5\n-0.25\n");
        let s = load_signal_csv(&p, 1000.0).unwrap();
        assert_eq!(s.samples(), &[0.0, 1.5, -0.25]);
        assert_eq!(s.sample_rate_hz(), 1000.0);
    }

    #[test]
    fn empty_file() {
        let dir = tempfile::tempdir().unwrap();
        for body in ["", "# sample_rate_hz=1000\n", "\n\n"] {
            let p = write(&dir, "e.csv", body);
            let err = load_signal_csv(&p, 1000.0).unwrap_err();
            assert_eq!(err.to_string(), "empty signal");
        }
    }

    #[test]
    fn missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_signal_csv(dir.path().join("nope.csv"), 1000.0).unwrap_err();
        assert!(matches!(err, Error::Io { .. }), "{err}");
        assert!(err.to_string().contains("nope.csv"));
    }

    #[test]
    fn malformed_row_is_numbered() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "m.csv", "# header\n1.0\n2.0\nabc\n");
        match load_signal_csv(&p, 1000.0).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("{other}"),
        }
        let p = write(&dir, "m2.csv", "1.0,2.0\n");
        assert!(matches!(
            load_signal_csv(&p, 1000.0),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn non_finite_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        for (body, line) in [("1\nNaN\n", 2), ("inf\n", 1), ("0\n0\n-infinity\n", 3)] {
            let p = write(&dir, "n.csv", body);
            match load_signal_csv(&p, 1000.0).unwrap_err() {
                Error::Parse {
                    line: l, message, ..
                } => {
                    assert_eq!(l, line);
                    assert!(message.contains("non-finite"), "{message}");
                }
                other => panic!("{other}"),
            }
        }
    }

    #[test]
    fn header_rate() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "h.csv", "# sample_rate_hz=128\n1\n2\n");
        assert_eq!(
            load_signal_csv_auto(&p, None).unwrap().sample_rate_hz(),
            128.0
        );
        assert!(matches!(
            load_signal_csv(&p, 1000.0),
            Err(Error::RateMismatch { .. })
        ));
        let p = write(&dir, "bare.csv", "1\n2\n");
        assert!(load_signal_csv_auto(&p, None).is_err());
        assert_eq!(
            load_signal_csv_auto(&p, Some(360.0))
                .unwrap()
                .sample_rate_hz(),
            360.0
        );
    }

    proptest::proptest! {
        #[test]
        fn round_trip_is_bit_exact(v in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 1..200)) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("r.csv");
            let s = Signal::new(v, 1000.0).unwrap();
            save_signal_csv(&p, &s).unwrap();
            let back = load_signal_csv(&p, 1000.0).unwrap();
            for (a, b) in s.samples().iter().zip(back.samples()) {
                proptest::prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
