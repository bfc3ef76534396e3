//! Witness extraction: turn an inhabited tracker into a concrete
//! linearization by replaying the tracker evolution with provenance and
//! walking the recorded parents back from a final member.

use crate::atomic::{AtomicConfiguration, Status};
use crate::lang::Implementation;
use crate::object::ObjectType;
use crate::runtime::{Configuration, Event, Line, Run, WfViolation};
use crate::tracker::embed;
use crate::value::{ProcessId, Val};

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("input run is not well-formed: {0}")]
    NotWellFormed(#[from] WfViolation),
    #[error("tracker is empty after event {failing_index}: the run has no linearization")]
    EmptyTracker { failing_index: usize },
    #[error("target configuration is not in the final tracker")]
    TargetNotInTracker,
}

/// Extract a linearization of `run` ending in the canonical (greatest)
/// member of its final tracker.
///
/// The output is a well-formed atomic run whose behavior equals the run's
/// behavior; invocations and responses appear at their original positions
/// and one intermediate step per operation marks its linearization point.
pub fn extract_witness(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<Configuration>,
) -> Result<Run<AtomicConfiguration>, WitnessError> {
    extract(implementation, process_count, run, None)
}

/// Like [`extract_witness`], but ending in a caller-chosen member of the
/// final tracker.
pub fn extract_witness_for(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<Configuration>,
    target: &AtomicConfiguration,
) -> Result<Run<AtomicConfiguration>, WitnessError> {
    extract(implementation, process_count, run, Some(target))
}

fn extract(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<Configuration>,
    target: Option<&AtomicConfiguration>,
) -> Result<Run<AtomicConfiguration>, WitnessError> {
    let augmented = embed(implementation, process_count, run, true)?;
    for index in 0..augmented.len() {
        if augmented.config_at(index + 1).tracker.is_empty() {
            return Err(WitnessError::EmptyTracker {
                failing_index: index,
            });
        }
    }
    let final_tracker = &augmented.final_config().tracker;
    let chosen = match target {
        Some(t) => {
            if !final_tracker.contains(t) {
                return Err(WitnessError::TargetNotInTracker);
            }
            t.clone()
        }
        None => final_tracker
            .max()
            .ok_or(WitnessError::EmptyTracker { failing_index: 0 })?
            .clone(),
    };

    // Walk provenance back from the chosen member: at each step record the
    // member reached and the linearizations that produced it, then descend
    // to its parent in the previous tracker.
    let n = augmented.len();
    let mut chain: Vec<(AtomicConfiguration, Vec<(ProcessId, Val)>)> = Vec::with_capacity(n);
    let mut member = chosen;
    for index in (1..=n).rev() {
        let tracker = &augmented.config_at(index).tracker;
        let prov = tracker
            .provenance_of(&member)
            .expect("every tracker member records provenance during replay")
            .clone();
        chain.push((member, prov.linearized));
        member = prov.parent;
    }
    chain.reverse();

    // Forward reconstruction.
    let ty = &implementation.object_type;
    let initial = AtomicConfiguration::initial(implementation.initial_state.clone(), process_count);
    debug_assert_eq!(member, initial, "provenance chain must start at the initial configuration");
    let mut witness = Run::new(initial.clone());
    let mut current = initial;
    for (index, (step_member, linearized)) in chain.iter().enumerate() {
        let event = run.event(index);
        if !matches!(event.line, Line::Intermediate) {
            // Invoke and Response are deterministic atomic steps.
            let mut succs = crate::atomic::atomic_step(ty, &current, event.proc, &event.line);
            debug_assert_eq!(succs.len(), 1);
            current = succs.remove(0);
            witness.push(event.clone(), current.clone());
        }
        let steps = replay_linearizations(ty, &current, linearized, step_member)
            .expect("recorded linearization sequence must replay");
        for (proc, config) in steps {
            witness.push(
                Event {
                    proc,
                    line: Line::Intermediate,
                },
                config.clone(),
            );
            current = config;
        }
        debug_assert_eq!(current, *step_member);
    }
    Ok(witness)
}

/// Replay `(process, value)` linearizations from `start`, choosing delta
/// branches so the final configuration matches `target`. Values pin the
/// return of each step; a depth-first match resolves any remaining state
/// nondeterminism.
fn replay_linearizations(
    ty: &ObjectType,
    start: &AtomicConfiguration,
    lins: &[(ProcessId, Val)],
    target: &AtomicConfiguration,
) -> Option<Vec<(ProcessId, AtomicConfiguration)>> {
    match lins.split_first() {
        None => (start == target).then(Vec::new),
        Some((&(proc, ref val), rest)) => {
            let Status::Pending { op, arg } = start.status(proc) else {
                return None;
            };
            for (sigma, res) in ty.delta(&start.sigma, proc, op, arg) {
                if res != *val {
                    continue;
                }
                let mut next = start.with_status(proc, Status::linearized(res));
                next.sigma = sigma;
                if let Some(mut tail) = replay_linearizations(ty, &next, rest, target) {
                    tail.insert(0, (proc, next));
                    return Some(tail);
                }
            }
            None
        }
    }
}
