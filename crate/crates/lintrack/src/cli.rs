//! Command drivers behind the binary: load a job, run it, render a report,
//! pick an exit code. Exit codes: 0 for a linearizable verdict (or a clean
//! witness/replay), 1 for a counterexample (or a trace with no
//! linearization), 2 for configuration, parse, and replay errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::checker::{
    check, extract_witness, ExploreParams, Mode, Verdict, WitnessError,
};
use crate::lang::{parse_implementation, Implementation};
use crate::report::{check_report, render_json, render_text};
use crate::runtime::{behavior, Line};
use crate::trace::{replay, tracker_snapshot, AtomicSnapshot, AtomicTrace, ImplTrace};
use crate::tracker::{evolve, MetaConfiguration};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Everything a run of the tool needs.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub implementation_path: PathBuf,
    pub process_count: usize,
    pub max_events: usize,
    pub mode: Mode,
    pub output: OutputFormat,
    pub record_provenance: bool,
    pub dedup: bool,
    pub jobs: usize,
    pub minimize: bool,
    pub state_budget: Option<u64>,
}

impl JobConfig {
    pub fn new(path: impl Into<PathBuf>, process_count: usize, max_events: usize) -> JobConfig {
        JobConfig {
            implementation_path: path.into(),
            process_count,
            max_events,
            mode: Mode::Exhaustive,
            output: OutputFormat::Text,
            record_provenance: false,
            dedup: true,
            jobs: 1,
            minimize: false,
            state_budget: None,
        }
    }

    fn explore_params(&self) -> ExploreParams {
        ExploreParams {
            max_events: self.max_events,
            process_count: self.process_count,
            dedup: self.dedup,
            mode: self.mode,
            record_provenance: self.record_provenance,
            state_budget: self.state_budget,
            jobs: self.jobs,
            minimize: self.minimize,
        }
    }
}

/// What a command produced: text to print and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct CmdOutcome {
    pub exit_code: i32,
    pub rendered: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
}

fn fail(output: OutputFormat, message: &str) -> CmdOutcome {
    let rendered = match output {
        OutputFormat::Text => format!("error: {message}\n"),
        OutputFormat::Json => render_json(&ErrorReport { error: message }),
    };
    CmdOutcome {
        exit_code: EXIT_ERROR,
        rendered,
    }
}

fn validate(cfg: &JobConfig) -> Result<(), String> {
    if cfg.process_count < 1 {
        return Err("--procs must be at least 1".into());
    }
    if cfg.max_events < 1 {
        return Err("--depth must be at least 1".into());
    }
    if cfg.jobs < 1 {
        return Err("--jobs must be at least 1".into());
    }
    if let Mode::Random { trials, .. } = cfg.mode {
        if trials < 1 {
            return Err("--trials must be at least 1".into());
        }
    }
    Ok(())
}

fn load_implementation(path: &Path) -> Result<Implementation, String> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_implementation(&source).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_trace(path: &Path) -> Result<ImplTrace, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Run the bounded check (or fuzzer, in random mode) on a job.
pub fn cmd_check(cfg: &JobConfig) -> CmdOutcome {
    if let Err(message) = validate(cfg) {
        return fail(cfg.output, &message);
    }
    let implementation = match load_implementation(&cfg.implementation_path) {
        Ok(i) => i,
        Err(message) => return fail(cfg.output, &message),
    };
    let params = cfg.explore_params();
    let verdict = match check(&implementation, &params) {
        Ok(v) => v,
        Err(e) => return fail(cfg.output, &e.to_string()),
    };
    let report = check_report(&implementation, &params, &verdict);
    let rendered = match cfg.output {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Text => render_text(&report, verdict.stats()),
    };
    let exit_code = match &verdict {
        Verdict::LinearizableUpToBound(_) => EXIT_OK,
        Verdict::Counterexample { .. } => EXIT_COUNTEREXAMPLE,
        Verdict::Stuck { .. } => EXIT_ERROR,
    };
    CmdOutcome {
        exit_code,
        rendered,
    }
}

/// Extract and verify a linearization of a recorded run.
pub fn cmd_witness(cfg: &JobConfig, trace_path: &Path) -> CmdOutcome {
    let implementation = match load_implementation(&cfg.implementation_path) {
        Ok(i) => i,
        Err(message) => return fail(cfg.output, &message),
    };
    let trace = match load_trace(trace_path) {
        Ok(t) => t,
        Err(message) => return fail(cfg.output, &message),
    };
    let process_count = cfg.process_count.max(trace.min_process_count());
    let run = match replay(&implementation, &trace) {
        Ok(r) => r,
        Err(e) => return fail(cfg.output, &e.to_string()),
    };
    let witness = match extract_witness(&implementation, process_count, &run) {
        Ok(w) => w,
        Err(WitnessError::EmptyTracker { failing_index }) => {
            let message = format!(
                "no linearization: tracker is empty after event {failing_index}"
            );
            let rendered = match cfg.output {
                OutputFormat::Text => format!("error: {message}\n"),
                OutputFormat::Json => render_json(&ErrorReport { error: &message }),
            };
            return CmdOutcome {
                exit_code: EXIT_COUNTEREXAMPLE,
                rendered,
            };
        }
        Err(e) => return fail(cfg.output, &e.to_string()),
    };
    // Verify before emitting.
    if let Err(e) = crate::atomic::wf_atomic(
        &implementation.object_type,
        &implementation.initial_state,
        &witness,
    ) {
        return fail(cfg.output, &format!("internal: witness is not well-formed: {e}"));
    }
    if behavior(&witness) != behavior(&run) {
        return fail(cfg.output, "internal: witness behavior differs from the run's");
    }
    let atomic_trace = AtomicTrace::of_run(&implementation.object_name, &witness);
    let rendered = match cfg.output {
        OutputFormat::Json => render_json(&atomic_trace),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "witness for {} ({} events, {} linearization points)",
                implementation.object_name,
                witness.len(),
                witness
                    .events()
                    .filter(|e| matches!(e.line, Line::Intermediate))
                    .count()
            );
            for (event, config) in witness.steps() {
                let _ = writeln!(out, "  {event}   [{config}]");
            }
            out
        }
    };
    CmdOutcome {
        exit_code: EXIT_OK,
        rendered,
    }
}

#[derive(Serialize)]
struct TraceStepReport {
    index: usize,
    event: crate::runtime::Event,
    tracker_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tracker: Option<Vec<AtomicSnapshot>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<std::collections::BTreeMap<String, crate::value::Val>>,
}

#[derive(Serialize)]
struct TraceReport {
    object: String,
    steps: Vec<TraceStepReport>,
    tracker_empty_at: Option<usize>,
}

/// Replay a schedule deterministically, dumping configuration and tracker
/// per step. Exit code 1 when the tracker empties during replay.
pub fn cmd_trace(cfg: &JobConfig, schedule_path: &Path, verbose: bool) -> CmdOutcome {
    let implementation = match load_implementation(&cfg.implementation_path) {
        Ok(i) => i,
        Err(message) => return fail(cfg.output, &message),
    };
    let trace = match load_trace(schedule_path) {
        Ok(t) => t,
        Err(message) => return fail(cfg.output, &message),
    };
    let process_count = cfg.process_count.max(trace.min_process_count());
    let run = match replay(&implementation, &trace) {
        Ok(r) => r,
        Err(e) => return fail(cfg.output, &e.to_string()),
    };
    let mut tracker = MetaConfiguration::initial(
        implementation.initial_state.clone(),
        process_count,
        cfg.record_provenance,
    );
    let mut steps = Vec::new();
    let mut tracker_empty_at = None;
    for (index, (event, config)) in run.steps().enumerate() {
        tracker = evolve(&implementation.object_type, event.proc, &event.line, &tracker);
        if tracker.is_empty() && tracker_empty_at.is_none() {
            tracker_empty_at = Some(index);
        }
        steps.push(TraceStepReport {
            index,
            event: event.clone(),
            tracker_size: tracker.len(),
            tracker: verbose.then(|| tracker_snapshot(&tracker)),
            base: verbose.then(|| config.eps.clone()),
        });
    }
    let report = TraceReport {
        object: implementation.object_name.clone(),
        steps,
        tracker_empty_at,
    };
    let rendered = match cfg.output {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "replay of {} events against {}",
                run.len(),
                implementation.object_name
            );
            let _ = writeln!(out, "  [-] initial tracker size 1");
            for step in &report.steps {
                let _ = writeln!(
                    out,
                    "  [{}] {}   tracker size {}",
                    step.index, step.event, step.tracker_size
                );
                if let Some(snapshots) = &step.tracker {
                    for snap in snapshots {
                        let _ = writeln!(out, "        sigma={}", snap.sigma);
                    }
                }
            }
            match report.tracker_empty_at {
                Some(index) => {
                    let _ = writeln!(out, "tracker empties at event {index}: no linearization");
                }
                None => {
                    let _ = writeln!(out, "tracker inhabited throughout: prefix is linearizable");
                }
            }
            out
        }
    };
    let exit_code = if tracker_empty_at.is_some() {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    };
    CmdOutcome {
        exit_code,
        rendered,
    }
}
