//! Concrete configurations, the global small-step dynamics, runs,
//! well-formedness, and behavior extraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lang::{step_frame, Eps, EvalError, Frame, Implementation, ProcedureSignal};
use crate::value::{processes, ProcessId, Val};

/// A snapshot of system state: the frames of processes with outstanding
/// operations (absence means idle) and the state of every base object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub outstanding: BTreeMap<ProcessId, Frame>,
    pub eps: BTreeMap<String, Val>,
}

impl Configuration {
    /// The initial configuration: no outstanding operations, every base
    /// object at its declared initial state.
    pub fn initial(implementation: &Implementation) -> Configuration {
        Configuration {
            outstanding: BTreeMap::new(),
            eps: implementation.bases.initial_states(),
        }
    }

    pub fn is_idle(&self, proc: ProcessId) -> bool {
        !self.outstanding.contains_key(&proc)
    }
}

/// One line of execution: an invocation, an internal step, or a response.
///
/// The derived order (`Invoke < Intermediate < Response`, payloads
/// lexicographic) is the canonical event order used for deterministic
/// exploration and counterexample selection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Line {
    Invoke { op: String, arg: Val },
    Intermediate,
    Response { resp: Val },
}

impl Line {
    pub fn invoke(op: impl Into<String>, arg: Val) -> Line {
        Line::Invoke { op: op.into(), arg }
    }

    pub fn response(resp: Val) -> Line {
        Line::Response { resp }
    }
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Line::Invoke { op, arg } => write!(f, "invoke {op}({arg})"),
            Line::Intermediate => write!(f, "intermediate"),
            Line::Response { resp } => write!(f, "response {resp}"),
        }
    }
}

/// The execution of a line by a process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Event {
    pub proc: ProcessId,
    pub line: Line,
}

impl std::fmt::Display for Event {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.proc, self.line)
    }
}

/// An alternating sequence of configurations and events, starting from an
/// initial configuration. Stored append-only so replay and the oracle can
/// index it freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run<C> {
    initial: C,
    steps: Vec<(Event, C)>,
}

impl<C> Run<C> {
    pub fn new(initial: C) -> Run<C> {
        Run {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, event: Event, config: C) {
        self.steps.push((event, config));
    }

    pub fn initial(&self) -> &C {
        &self.initial
    }

    /// Number of events.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_config(&self) -> &C {
        self.steps.last().map(|(_, c)| c).unwrap_or(&self.initial)
    }

    /// The configuration after `index` events.
    pub fn config_at(&self, index: usize) -> &C {
        if index == 0 {
            &self.initial
        } else {
            &self.steps[index - 1].1
        }
    }

    pub fn event(&self, index: usize) -> &Event {
        &self.steps[index].0
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.steps.iter().map(|(e, _)| e)
    }

    pub fn steps(&self) -> impl Iterator<Item = &(Event, C)> {
        self.steps.iter()
    }

    /// The run truncated to its first `events` events.
    pub fn prefix(&self, events: usize) -> Run<C>
    where
        C: Clone,
    {
        Run {
            initial: self.initial.clone(),
            steps: self.steps[..events].to_vec(),
        }
    }

    pub fn map<D>(self, f: impl Fn(C) -> D) -> Run<D> {
        Run {
            initial: f(self.initial),
            steps: self.steps.into_iter().map(|(e, c)| (e, f(c))).collect(),
        }
    }
}

/// A process that cannot take its next step: an evaluation error rather
/// than an inapplicable rule. Reported separately from the linearizability
/// verdict so a buggy program is not mistaken for a non-linearizable one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StuckDiagnostic {
    pub proc: ProcessId,
    pub op: String,
    pub pc: usize,
    pub error: EvalError,
}

impl std::fmt::Display for StuckDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} stuck in {} at line {}: {}",
            self.proc, self.op, self.pc, self.error
        )
    }
}

/// All successor configurations of `proc` executing `line` in `c`.
///
/// Invocations require the process to be idle and install a fresh frame;
/// intermediate lines step the frame and keep it; a response retires the
/// frame when the step returns exactly the response value. Inapplicable
/// rules yield the empty set; evaluation errors surface as diagnostics.
pub fn global_step(
    implementation: &Implementation,
    c: &Configuration,
    proc: ProcessId,
    line: &Line,
) -> Result<Vec<Configuration>, StuckDiagnostic> {
    match line {
        Line::Invoke { op, arg } => {
            if !c.is_idle(proc) || !implementation.object_type.has_op(op) {
                return Ok(vec![]);
            }
            let mut next = c.clone();
            next.outstanding.insert(proc, Frame::initial(op.clone(), arg.clone()));
            Ok(vec![next])
        }
        Line::Intermediate => {
            let Some(frame) = c.outstanding.get(&proc) else {
                return Ok(vec![]);
            };
            let outcomes = step_with_diagnostic(implementation, c, proc, frame)?;
            let mut next = Vec::new();
            for (eps, sig) in outcomes {
                if let ProcedureSignal::Next(f) = sig {
                    let mut succ = c.clone();
                    succ.eps = eps;
                    succ.outstanding.insert(proc, f);
                    next.push(succ);
                }
            }
            Ok(next)
        }
        Line::Response { resp } => {
            let Some(frame) = c.outstanding.get(&proc) else {
                return Ok(vec![]);
            };
            let outcomes = step_with_diagnostic(implementation, c, proc, frame)?;
            let mut next = Vec::new();
            for (eps, sig) in outcomes {
                if let ProcedureSignal::Return(v) = sig {
                    if v == *resp {
                        let mut succ = c.clone();
                        succ.eps = eps;
                        succ.outstanding.remove(&proc);
                        next.push(succ);
                    }
                }
            }
            Ok(next)
        }
    }
}

fn step_with_diagnostic(
    implementation: &Implementation,
    c: &Configuration,
    proc: ProcessId,
    frame: &Frame,
) -> Result<Vec<(Eps, ProcedureSignal)>, StuckDiagnostic> {
    step_frame(implementation, proc, &c.eps, frame).map_err(|error| StuckDiagnostic {
        proc,
        op: frame.op.clone(),
        pc: frame.pc,
        error,
    })
}

/// Everything that can happen next: each enabled event paired with one of
/// its successor configurations, in canonical order, plus diagnostics for
/// stuck processes (which contribute no events).
pub fn enabled_events(
    implementation: &Implementation,
    process_count: usize,
    c: &Configuration,
) -> (Vec<(Event, Configuration)>, Vec<StuckDiagnostic>) {
    let mut out = Vec::new();
    let mut diagnostics = Vec::new();
    for proc in processes(process_count) {
        match c.outstanding.get(&proc) {
            None => {
                for op in implementation.object_type.ops() {
                    for arg in implementation.object_type.arg_domain(op) {
                        let line = Line::invoke(op.clone(), arg.clone());
                        let mut next = c.clone();
                        next.outstanding
                            .insert(proc, Frame::initial(op.clone(), arg.clone()));
                        out.push((Event { proc, line }, next));
                    }
                }
            }
            Some(frame) => match step_with_diagnostic(implementation, c, proc, frame) {
                Err(diag) => diagnostics.push(diag),
                Ok(outcomes) => {
                    let mut intermediates = Vec::new();
                    let mut responses = Vec::new();
                    for (eps, sig) in outcomes {
                        match sig {
                            ProcedureSignal::Next(f) => {
                                let mut succ = c.clone();
                                succ.eps = eps;
                                succ.outstanding.insert(proc, f);
                                intermediates.push((
                                    Event {
                                        proc,
                                        line: Line::Intermediate,
                                    },
                                    succ,
                                ));
                            }
                            ProcedureSignal::Return(v) => {
                                let mut succ = c.clone();
                                succ.eps = eps;
                                succ.outstanding.remove(&proc);
                                responses.push((
                                    Event {
                                        proc,
                                        line: Line::response(v),
                                    },
                                    succ,
                                ));
                            }
                        }
                    }
                    responses.sort_by(|(a, _), (b, _)| a.cmp(b));
                    out.extend(intermediates);
                    out.extend(responses);
                }
            },
        }
    }
    (out, diagnostics)
}

/// Where a run fails to be well-formed.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum WfViolation {
    #[error("initial configuration is not the implementation's initial configuration")]
    BadInitial,
    #[error("step {index} ({event}) does not follow from the global dynamics")]
    BadStep { index: usize, event: Event },
    #[error("step {index} is stuck: {diagnostic}")]
    StuckStep {
        index: usize,
        diagnostic: StuckDiagnostic,
    },
}

/// Check well-formedness: the run starts at the initial configuration and
/// every step is one of `global_step`'s successors.
pub fn wf_run(implementation: &Implementation, run: &Run<Configuration>) -> Result<(), WfViolation> {
    if *run.initial() != Configuration::initial(implementation) {
        return Err(WfViolation::BadInitial);
    }
    let mut current = run.initial();
    for (index, (event, config)) in run.steps().enumerate() {
        let successors = global_step(implementation, current, event.proc, &event.line)
            .map_err(|diagnostic| WfViolation::StuckStep { index, diagnostic })?;
        if !successors.contains(config) {
            return Err(WfViolation::BadStep {
                index,
                event: event.clone(),
            });
        }
        current = config;
    }
    Ok(())
}

/// The behavior of a run: its invocation and response events, in order,
/// with all intermediate lines filtered out.
pub fn behavior<C>(run: &Run<C>) -> Vec<Event> {
    run.events()
        .filter(|e| !matches!(e.line, Line::Intermediate))
        .cloned()
        .collect()
}
