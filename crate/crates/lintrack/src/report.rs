//! One report model, two renderers. JSON is the machine-readable source of
//! truth: field order is fixed and wall-clock time is excluded, so a fixed
//! input renders byte-identically. The text renderer is for eyeballs and
//! may include timing.

use serde::Serialize;

use crate::checker::{Mode, Stats, Verdict};
use crate::lang::Implementation;
use crate::trace::{tracker_snapshot, AtomicSnapshot, ImplTrace};
use crate::tracker::project;

#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub explored_states: u64,
    pub explored_runs: u64,
    pub max_tracker_size: usize,
}

impl From<&Stats> for StatsReport {
    fn from(stats: &Stats) -> StatsReport {
        StatsReport {
            explored_states: stats.explored_states,
            explored_runs: stats.explored_runs,
            max_tracker_size: stats.max_tracker_size,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsReport {
    pub object: String,
    pub processes: usize,
    pub max_events: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub dedup: bool,
    pub jobs: usize,
    pub minimize: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    /// Index of the event whose tracker evolution is empty.
    pub failing_index: usize,
    pub trace: ImplTrace,
    /// Tracker after the event preceding the failure.
    pub tracker_before_failure: Vec<AtomicSnapshot>,
    /// Tracker at the failing index; empty by definition.
    pub tracker_at_failure: Vec<AtomicSnapshot>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub verdict: &'static str,
    pub params: ParamsReport,
    pub stats: StatsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub diagnostics: Vec<String>,
}

pub fn params_report(
    implementation: &Implementation,
    params: &crate::checker::ExploreParams,
) -> ParamsReport {
    let (mode, seed, trials) = match params.mode {
        Mode::Exhaustive => ("exhaustive", None, None),
        Mode::Random { seed, trials } => ("random", Some(seed), Some(trials)),
    };
    ParamsReport {
        object: implementation.object_name.clone(),
        processes: params.process_count,
        max_events: params.max_events,
        mode: mode.to_string(),
        seed,
        trials,
        dedup: params.dedup,
        jobs: params.jobs,
        minimize: params.minimize,
    }
}

/// Build the report for a check verdict.
pub fn check_report(
    implementation: &Implementation,
    params: &crate::checker::ExploreParams,
    verdict: &Verdict,
) -> CheckReport {
    let base = CheckReport {
        verdict: "",
        params: params_report(implementation, params),
        stats: verdict.stats().into(),
        counterexample: None,
        diagnostics: Vec::new(),
    };
    match verdict {
        Verdict::LinearizableUpToBound(_) => CheckReport {
            verdict: "linearizable_up_to_bound",
            ..base
        },
        Verdict::Stuck { diagnostics, .. } => CheckReport {
            verdict: "stuck",
            diagnostics: diagnostics.iter().map(|d| d.to_string()).collect(),
            ..base
        },
        Verdict::Counterexample {
            run,
            failing_index,
            ..
        } => {
            let projected = project(run);
            let tracker_before = &run.config_at(*failing_index).tracker;
            let tracker_at = &run.config_at(*failing_index + 1).tracker;
            CheckReport {
                verdict: "counterexample",
                counterexample: Some(CounterexampleReport {
                    failing_index: *failing_index,
                    trace: ImplTrace::of_run(implementation, &projected),
                    tracker_before_failure: tracker_snapshot(tracker_before),
                    tracker_at_failure: tracker_snapshot(tracker_at),
                }),
                ..base
            }
        }
    }
}

/// Deterministic machine rendering.
pub fn render_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

/// Human rendering of a check report; includes elapsed time.
pub fn render_text(report: &CheckReport, stats: &Stats) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "check {}: procs={} depth={} mode={}{}",
        report.params.object,
        report.params.processes,
        report.params.max_events,
        report.params.mode,
        match (report.params.seed, report.params.trials) {
            (Some(seed), Some(trials)) => format!(" seed={seed} trials={trials}"),
            _ => String::new(),
        }
    );
    let _ = writeln!(
        out,
        "explored {} states, {} runs; max tracker size {}; {:.3}s",
        report.stats.explored_states,
        report.stats.explored_runs,
        report.stats.max_tracker_size,
        stats.elapsed.as_secs_f64()
    );
    match report.verdict {
        "linearizable_up_to_bound" => {
            let _ = writeln!(out, "verdict: linearizable up to the bound");
        }
        "stuck" => {
            let _ = writeln!(out, "verdict: stuck (program bug, not a linearizability verdict)");
            for d in &report.diagnostics {
                let _ = writeln!(out, "  {d}");
            }
        }
        _ => {
            let cx = report.counterexample.as_ref().expect("counterexample report");
            let _ = writeln!(
                out,
                "verdict: counterexample, tracker empties at event {}",
                cx.failing_index
            );
            for (i, event) in cx.trace.events.iter().enumerate() {
                let marker = if i == cx.failing_index { " <- tracker empties here" } else { "" };
                let _ = writeln!(out, "  [{i}] {event}{marker}");
            }
            let _ = writeln!(
                out,
                "tracker before failure ({} configurations):",
                cx.tracker_before_failure.len()
            );
            for snap in &cx.tracker_before_failure {
                let statuses: Vec<String> = snap.statuses.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "  sigma={} [{}]", snap.sigma, statuses.join(", "));
            }
        }
    }
    out
}
