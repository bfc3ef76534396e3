//! The atomic reference semantics: per-process statuses, atomic
//! configurations, the step relation for atomic runs, and the canonical
//! two-line atomic implementation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::lang::{Implementation, Procedure, Statement, Term};
use crate::object::{ObjectRegistry, ObjectType};
use crate::runtime::{Event, Line, Run};
use crate::value::{ProcessId, Val, DEFAULT_INT_BITS};

/// Where a process stands in an atomic run: no outstanding operation, an
/// operation that has not yet taken effect, or one that has taken effect
/// with a result and awaits its response.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Status {
    Idle,
    Pending { op: String, arg: Val },
    Linearized { res: Val },
}

impl Status {
    pub fn pending(op: impl Into<String>, arg: Val) -> Status {
        Status::Pending { op: op.into(), arg }
    }

    pub fn linearized(res: Val) -> Status {
        Status::Linearized { res }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Idle => write!(f, "idle"),
            Status::Pending { op, arg } => write!(f, "pending {op}({arg})"),
            Status::Linearized { res } => write!(f, "linearized {res}"),
        }
    }
}

/// An abstract state of the implemented object together with every
/// process's status.
///
/// The derived order (canonical state encoding first, then the status
/// vector in process order) is what meta-configuration sets deduplicate
/// and iterate by.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicConfiguration {
    pub sigma: Val,
    pub statuses: Vec<Status>,
}

impl AtomicConfiguration {
    /// The initial atomic configuration: `sigma0` with every process idle.
    pub fn initial(sigma0: Val, process_count: usize) -> AtomicConfiguration {
        AtomicConfiguration {
            sigma: sigma0,
            statuses: vec![Status::Idle; process_count],
        }
    }

    pub fn process_count(&self) -> usize {
        self.statuses.len()
    }

    pub fn status(&self, proc: ProcessId) -> &Status {
        &self.statuses[proc.0]
    }

    pub fn with_status(&self, proc: ProcessId, status: Status) -> AtomicConfiguration {
        let mut next = self.clone();
        next.statuses[proc.0] = status;
        next
    }
}

impl std::fmt::Display for AtomicConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sigma={}", self.sigma)?;
        for (i, s) in self.statuses.iter().enumerate() {
            write!(f, ", p{i}: {s}")?;
        }
        Ok(())
    }
}

/// All atomic configurations reachable by `proc` executing `line` in `ac`.
///
/// Invoke requires an idle process and marks it pending; Intermediate
/// requires a pending process and linearizes it through the type's delta
/// (branching over nondeterminism); Response requires the process to have
/// linearized with exactly the response value and returns it to idle.
/// Inapplicable lines yield the empty set.
pub fn atomic_step(
    ty: &ObjectType,
    ac: &AtomicConfiguration,
    proc: ProcessId,
    line: &Line,
) -> Vec<AtomicConfiguration> {
    match line {
        Line::Invoke { op, arg } => match ac.status(proc) {
            Status::Idle => vec![ac.with_status(proc, Status::pending(op.clone(), arg.clone()))],
            _ => vec![],
        },
        Line::Intermediate => match ac.status(proc) {
            Status::Pending { op, arg } => ty
                .delta(&ac.sigma, proc, op, arg)
                .into_iter()
                .map(|(sigma, res)| {
                    let mut next = ac.with_status(proc, Status::linearized(res));
                    next.sigma = sigma;
                    next
                })
                .collect(),
            _ => vec![],
        },
        Line::Response { resp } => match ac.status(proc) {
            Status::Linearized { res } if res == resp => {
                vec![ac.with_status(proc, Status::Idle)]
            }
            _ => vec![],
        },
    }
}

/// Where an atomic run fails to be well-formed.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum AtomicWfViolation {
    #[error("initial atomic configuration is not (sigma0, all idle)")]
    BadInitial,
    #[error("step {index} ({event}) does not follow from the atomic dynamics")]
    BadStep { index: usize, event: Event },
}

/// Check an atomic run: it must start at `(sigma0, all idle)` and every
/// step must be one of `atomic_step`'s successors.
pub fn wf_atomic(
    ty: &ObjectType,
    sigma0: &Val,
    run: &Run<AtomicConfiguration>,
) -> Result<(), AtomicWfViolation> {
    let process_count = run.initial().process_count();
    if *run.initial() != AtomicConfiguration::initial(sigma0.clone(), process_count) {
        return Err(AtomicWfViolation::BadInitial);
    }
    let mut current = run.initial();
    for (index, (event, config)) in run.steps().enumerate() {
        let successors = atomic_step(ty, current, event.proc, &event.line);
        if !successors.contains(config) {
            return Err(AtomicWfViolation::BadStep {
                index,
                event: event.clone(),
            });
        }
        current = config;
    }
    Ok(())
}

/// The trivial implementation of a type in terms of itself: every operation
/// is `r := invoke self.op(Arg); return r`. Runs of this implementation are
/// atomic runs with the linearization point at the single invoke line.
pub fn atomic_implementation(ty: &ObjectType, name: &str, init: &Val) -> Implementation {
    let mut bases = ObjectRegistry::new();
    bases
        .register(name, ty.clone(), init.clone())
        .expect("atomic implementation initial state must be in the state domain");
    let mut procedures = BTreeMap::new();
    for op in ty.ops() {
        let body = vec![
            Statement::Assign("r".into(), Term::invoke(name, op.clone(), Term::Arg)),
            Statement::Return(Term::Var("r".into())),
        ];
        procedures.insert(op.clone(), Procedure::new(body).expect("two-line procedure"));
    }
    Implementation {
        object_name: name.to_string(),
        object_type: ty.clone(),
        initial_state: init.clone(),
        bases,
        procedures,
        variables: ["r".to_string()].into_iter().collect(),
        int_bits: DEFAULT_INT_BITS,
    }
}
