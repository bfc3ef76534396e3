//! On-disk trace formats.
//!
//! An implementation run serializes to the initial base-object states plus
//! its event list; configurations are reconstructed by replay. An atomic
//! run additionally carries a `(sigma, statuses)` snapshot per step.
//! Tracker snapshots are sorted lists of atomic-configuration snapshots.
//!
//! ```json
//! {
//!   "object": "reg",
//!   "initial": { "cell": {"int": 0} },
//!   "events": [
//!     { "proc": 0, "line": {"kind": "invoke", "op": "Write", "arg": {"int": 1}} },
//!     { "proc": 0, "line": {"kind": "intermediate"} },
//!     { "proc": 0, "line": {"kind": "response", "resp": "unit"} }
//!   ]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atomic::{AtomicConfiguration, Status};
use crate::lang::Implementation;
use crate::runtime::{global_step, Configuration, Event, Line, Run};
use crate::tracker::MetaConfiguration;
use crate::value::Val;

/// Serialized implementation run: initial base states and events.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplTrace {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub object: Option<String>,
    /// Base-object states at the start; optional on input (the declared
    /// initial states are used) and always present on output.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub initial: Option<BTreeMap<String, Val>>,
    pub events: Vec<Event>,
}

impl ImplTrace {
    pub fn of_run(implementation: &Implementation, run: &Run<Configuration>) -> ImplTrace {
        ImplTrace {
            object: Some(implementation.object_name.clone()),
            initial: Some(run.initial().eps.clone()),
            events: run.events().cloned().collect(),
        }
    }

    /// The highest process index mentioned, plus one.
    pub fn min_process_count(&self) -> usize {
        self.events.iter().map(|e| e.proc.0 + 1).max().unwrap_or(1)
    }
}

/// A `(sigma, statuses)` snapshot of an atomic configuration.
#[derive(Clone, Debug, Serialize)]
pub struct AtomicSnapshot {
    pub sigma: Val,
    pub statuses: Vec<Status>,
}

impl From<&AtomicConfiguration> for AtomicSnapshot {
    fn from(ac: &AtomicConfiguration) -> AtomicSnapshot {
        AtomicSnapshot {
            sigma: ac.sigma.clone(),
            statuses: ac.statuses.clone(),
        }
    }
}

/// A tracker serialized as its members in canonical order.
pub fn tracker_snapshot(tracker: &MetaConfiguration) -> Vec<AtomicSnapshot> {
    tracker.iter().map(AtomicSnapshot::from).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomicTraceEvent {
    pub proc: crate::value::ProcessId,
    pub line: Line,
    pub sigma: Val,
    pub statuses: Vec<Status>,
}

/// Serialized atomic run: the implementation-run schema plus per-step
/// snapshots.
#[derive(Clone, Debug, Serialize)]
pub struct AtomicTrace {
    pub object: String,
    pub initial: AtomicSnapshot,
    pub events: Vec<AtomicTraceEvent>,
}

impl AtomicTrace {
    pub fn of_run(object: impl Into<String>, run: &Run<AtomicConfiguration>) -> AtomicTrace {
        AtomicTrace {
            object: object.into(),
            initial: run.initial().into(),
            events: run
                .steps()
                .map(|(event, config)| AtomicTraceEvent {
                    proc: event.proc,
                    line: event.line.clone(),
                    sigma: config.sigma.clone(),
                    statuses: config.statuses.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum ReplayError {
    #[error("trace declares initial state for unknown base object `{0}`")]
    UnknownBase(String),
    #[error("trace initial state of `{name}` is outside its state domain")]
    BadInitialState { name: String },
    #[error("event {index} ({event}) is not applicable")]
    Inapplicable { index: usize, event: Event },
    #[error("event {index} ({event}) got stuck: {message}")]
    Stuck {
        index: usize,
        event: Event,
        message: String,
    },
    #[error("event {index} invokes `{op}` outside its declared argument domain")]
    ArgOutsideDomain { index: usize, op: String },
}

/// Rebuild a run from a trace by replaying its events through the global
/// dynamics. With nondeterministic base objects the canonically smallest
/// successor is taken at each step.
pub fn replay(
    implementation: &Implementation,
    trace: &ImplTrace,
) -> Result<Run<Configuration>, ReplayError> {
    let mut initial = Configuration::initial(implementation);
    if let Some(declared) = &trace.initial {
        for (name, state) in declared {
            let base = implementation
                .bases
                .get(name)
                .ok_or_else(|| ReplayError::UnknownBase(name.clone()))?;
            if !base.ty.state_domain().contains(state) {
                return Err(ReplayError::BadInitialState { name: name.clone() });
            }
            initial.eps.insert(name.clone(), state.clone());
        }
    }
    let mut run = Run::new(initial);
    for (index, event) in trace.events.iter().enumerate() {
        if let Line::Invoke { op, arg } = &event.line {
            if !implementation.object_type.arg_domain(op).contains(arg) {
                return Err(ReplayError::ArgOutsideDomain {
                    index,
                    op: op.clone(),
                });
            }
        }
        let mut successors = global_step(implementation, run.final_config(), event.proc, &event.line)
            .map_err(|diag| ReplayError::Stuck {
                index,
                event: event.clone(),
                message: diag.to_string(),
            })?;
        if successors.is_empty() {
            return Err(ReplayError::Inapplicable {
                index,
                event: event.clone(),
            });
        }
        successors.sort();
        run.push(event.clone(), successors.remove(0));
    }
    Ok(run)
}
