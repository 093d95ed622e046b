//! Benchmark orchestration: manifests, runs, CSV reports and traces.

pub mod manifest;
pub mod output;
pub mod run;

pub use manifest::{synthetic_corpus, ExperimentManifest, MethodKind, RecordSource, RecordSpec};
pub use output::{emit_traces, run_bench, write_outcome, OutputFiles};
pub use run::{
    load_record, methods_for, run_experiment, run_experiment_with, summarize, ErrorRow,
    ExperimentOutcome, Method, NotchMethod, ResultRow, SummaryRow, SwtMethod, WindowRow,
};
