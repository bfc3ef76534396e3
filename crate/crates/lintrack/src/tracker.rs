//! Meta-configurations and their evolution.
//!
//! A meta-configuration is the set of atomic configurations reachable as
//! final configurations of linearizations of the run so far: every forward
//! simulation that is still alive. Each event filters the set (invocations
//! need an idle process, responses need a matching linearized value) and
//! then closes it under linearizing any sequence of pending processes. The
//! run is linearizable up to this point exactly when the set is inhabited.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::hash::{Hash, Hasher};

use crate::atomic::{AtomicConfiguration, Status};
use crate::lang::Implementation;
use crate::object::ObjectType;
use crate::runtime::{
    global_step, wf_run, Configuration, Line, Run, StuckDiagnostic, WfViolation,
};
use crate::value::{processes, ProcessId, Val};

/// How a tracker member arose during one evolve step: from which member of
/// the previous tracker, and which processes linearized with which values
/// after the event's own filter was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub parent: AtomicConfiguration,
    pub linearized: Vec<(ProcessId, Val)>,
}

/// A finite deduplicated set of atomic configurations, optionally annotated
/// with per-member provenance.
///
/// Provenance never influences membership: equality, ordering, and hashing
/// all ignore it.
#[derive(Clone, Debug)]
pub struct MetaConfiguration {
    configs: BTreeSet<AtomicConfiguration>,
    provenance: Option<BTreeMap<AtomicConfiguration, Provenance>>,
}

impl PartialEq for MetaConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.configs == other.configs
    }
}

impl Eq for MetaConfiguration {}

impl PartialOrd for MetaConfiguration {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MetaConfiguration {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.configs.cmp(&other.configs)
    }
}

impl Hash for MetaConfiguration {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.configs.hash(state);
    }
}

impl MetaConfiguration {
    pub fn empty(record_provenance: bool) -> MetaConfiguration {
        MetaConfiguration {
            configs: BTreeSet::new(),
            provenance: record_provenance.then(BTreeMap::new),
        }
    }

    /// The tracker of an initial augmented configuration: exactly
    /// `(sigma0, all idle)`.
    pub fn initial(sigma0: Val, process_count: usize, record_provenance: bool) -> MetaConfiguration {
        let mut meta = MetaConfiguration::empty(record_provenance);
        meta.configs
            .insert(AtomicConfiguration::initial(sigma0, process_count));
        meta
    }

    pub fn from_configs(configs: impl IntoIterator<Item = AtomicConfiguration>) -> MetaConfiguration {
        MetaConfiguration {
            configs: configs.into_iter().collect(),
            provenance: None,
        }
    }

    pub fn records_provenance(&self) -> bool {
        self.provenance.is_some()
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, ac: &AtomicConfiguration) -> bool {
        self.configs.contains(ac)
    }

    pub fn is_subset(&self, other: &MetaConfiguration) -> bool {
        self.configs.is_subset(&other.configs)
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &AtomicConfiguration> {
        self.configs.iter()
    }

    pub fn configs(&self) -> &BTreeSet<AtomicConfiguration> {
        &self.configs
    }

    /// The greatest member in canonical order, if any.
    pub fn max(&self) -> Option<&AtomicConfiguration> {
        self.configs.iter().next_back()
    }

    pub fn provenance_of(&self, ac: &AtomicConfiguration) -> Option<&Provenance> {
        self.provenance.as_ref()?.get(ac)
    }

    /// The recorded provenance of a member, defaulting to the member itself
    /// with no linearizations.
    fn seed_of(&self, ac: &AtomicConfiguration) -> Provenance {
        self.provenance_of(ac).cloned().unwrap_or_else(|| Provenance {
            parent: ac.clone(),
            linearized: Vec::new(),
        })
    }

    fn insert(&mut self, ac: AtomicConfiguration, prov: Option<Provenance>) -> bool {
        let fresh = self.configs.insert(ac.clone());
        if fresh {
            if let (Some(map), Some(prov)) = (self.provenance.as_mut(), prov) {
                map.insert(ac, prov);
            }
        }
        fresh
    }
}

impl std::fmt::Display for MetaConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, ac) in self.configs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{ac}")?;
        }
        write!(f, "}}")
    }
}

/// All atomic configurations reachable from `ac` by linearizing exactly the
/// sequence `pis`: the empty sequence reaches `ac` itself, and each step
/// requires the next process to be pending and applies the type's delta.
pub fn multistep(
    ty: &ObjectType,
    ac: &AtomicConfiguration,
    pis: &[ProcessId],
) -> BTreeSet<AtomicConfiguration> {
    let mut current: BTreeSet<AtomicConfiguration> = [ac.clone()].into_iter().collect();
    for &pi in pis {
        let mut next = BTreeSet::new();
        for c in &current {
            next.extend(linearize_one(ty, c, pi).map(|(succ, _)| succ));
        }
        current = next;
        if current.is_empty() {
            break;
        }
    }
    current
}

fn linearize_one<'a>(
    ty: &'a ObjectType,
    ac: &'a AtomicConfiguration,
    pi: ProcessId,
) -> impl Iterator<Item = (AtomicConfiguration, Val)> + 'a {
    let successors = match ac.status(pi) {
        Status::Pending { op, arg } => ty.delta(&ac.sigma, pi, op, arg),
        _ => Vec::new(),
    };
    successors.into_iter().map(move |(sigma, res)| {
        let mut succ = ac.with_status(pi, Status::linearized(res.clone()));
        succ.sigma = sigma;
        (succ, res)
    })
}

/// Close a meta-configuration under linearizing any sequence of pending
/// processes.
///
/// Computed as a breadth-first closure with deduplication rather than by
/// enumerating process sequences: every single linearization strictly
/// decreases the pending count, so the closure is finite, and exploring one
/// step at a time still reaches every outcome of every sequence order.
pub fn linearize_pending(ty: &ObjectType, c: &MetaConfiguration) -> MetaConfiguration {
    let mut out = MetaConfiguration::empty(c.records_provenance());
    let mut queue: VecDeque<AtomicConfiguration> = VecDeque::new();
    for m in c.iter() {
        out.insert(m.clone(), Some(c.seed_of(m)));
        queue.push_back(m.clone());
    }
    while let Some(m) = queue.pop_front() {
        let seed = out.seed_of(&m);
        for pi in processes(m.process_count()) {
            for (child, res) in linearize_one(ty, &m, pi) {
                if out.contains(&child) {
                    continue;
                }
                let mut prov = seed.clone();
                prov.linearized.push((pi, res));
                out.insert(child.clone(), Some(prov));
                queue.push_back(child);
            }
        }
    }
    out
}

/// Filter for an invocation: members where `proc` is idle become pending on
/// `op(arg)`; everything else is dropped. The abstract state is untouched;
/// it only changes when operations linearize.
pub fn evolve_inv(c: &MetaConfiguration, proc: ProcessId, op: &str, arg: &Val) -> MetaConfiguration {
    let mut out = MetaConfiguration::empty(c.records_provenance());
    for m in c.iter() {
        if matches!(m.status(proc), Status::Idle) {
            let mapped = m.with_status(proc, Status::pending(op.to_string(), arg.clone()));
            out.insert(
                mapped,
                Some(Provenance {
                    parent: m.clone(),
                    linearized: Vec::new(),
                }),
            );
        }
    }
    out
}

/// Filter for a response: members where `proc` linearized with exactly `v`
/// return to idle; members that linearized with a different value, or have
/// not linearized at all, are discarded.
pub fn evolve_ret(c: &MetaConfiguration, proc: ProcessId, v: &Val) -> MetaConfiguration {
    let mut out = MetaConfiguration::empty(c.records_provenance());
    for m in c.iter() {
        if matches!(m.status(proc), Status::Linearized { res } if res == v) {
            out.insert(
                m.with_status(proc, Status::Idle),
                Some(Provenance {
                    parent: m.clone(),
                    linearized: Vec::new(),
                }),
            );
        }
    }
    out
}

/// The tracker update for one event: filter by the line kind, then close
/// under pending linearizations. A deterministic function of the inputs.
pub fn evolve(
    ty: &ObjectType,
    proc: ProcessId,
    line: &Line,
    c: &MetaConfiguration,
) -> MetaConfiguration {
    match line {
        Line::Invoke { op, arg } => linearize_pending(ty, &evolve_inv(c, proc, op, arg)),
        Line::Intermediate => {
            // The line itself does not change the set of possible
            // linearizations; re-seed so provenance reflects this step only.
            let mut reseeded = MetaConfiguration::empty(c.records_provenance());
            for m in c.iter() {
                reseeded.insert(
                    m.clone(),
                    Some(Provenance {
                        parent: m.clone(),
                        linearized: Vec::new(),
                    }),
                );
            }
            linearize_pending(ty, &reseeded)
        }
        Line::Response { resp } => linearize_pending(ty, &evolve_ret(c, proc, resp)),
    }
}

/// A concrete configuration carrying the tracker as ghost state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AugmentedConfiguration {
    pub base: Configuration,
    pub tracker: MetaConfiguration,
}

impl AugmentedConfiguration {
    pub fn initial(
        implementation: &Implementation,
        process_count: usize,
        record_provenance: bool,
    ) -> AugmentedConfiguration {
        AugmentedConfiguration {
            base: Configuration::initial(implementation),
            tracker: MetaConfiguration::initial(
                implementation.initial_state.clone(),
                process_count,
                record_provenance,
            ),
        }
    }
}

/// Step an augmented configuration: base successors come from the global
/// dynamics, each paired with the single evolved tracker.
pub fn augmented_step(
    implementation: &Implementation,
    c: &AugmentedConfiguration,
    proc: ProcessId,
    line: &Line,
) -> Result<Vec<AugmentedConfiguration>, StuckDiagnostic> {
    let bases = global_step(implementation, &c.base, proc, line)?;
    if bases.is_empty() {
        return Ok(vec![]);
    }
    let tracker = evolve(&implementation.object_type, proc, line, &c.tracker);
    Ok(bases
        .into_iter()
        .map(|base| AugmentedConfiguration {
            base,
            tracker: tracker.clone(),
        })
        .collect())
}

/// Lift a well-formed implementation run to an augmented run by replaying
/// the tracker evolution from the initial tracker.
pub fn embed(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<Configuration>,
    record_provenance: bool,
) -> Result<Run<AugmentedConfiguration>, WfViolation> {
    wf_run(implementation, run)?;
    let initial = AugmentedConfiguration {
        base: run.initial().clone(),
        tracker: MetaConfiguration::initial(
            implementation.initial_state.clone(),
            process_count,
            record_provenance,
        ),
    };
    let mut tracker = initial.tracker.clone();
    let mut out = Run::new(initial);
    for (event, config) in run.steps() {
        tracker = evolve(&implementation.object_type, event.proc, &event.line, &tracker);
        out.push(
            event.clone(),
            AugmentedConfiguration {
                base: config.clone(),
                tracker: tracker.clone(),
            },
        );
    }
    Ok(out)
}

/// Drop the ghost state, recovering the underlying implementation run.
pub fn project(run: &Run<AugmentedConfiguration>) -> Run<Configuration> {
    run.clone().map(|a| a.base)
}

/// Where an augmented run fails to be well-formed.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum AugmentedWfViolation {
    #[error("underlying run is not well-formed: {0}")]
    Base(#[from] WfViolation),
    #[error("initial tracker is not {{(sigma0, all idle)}}")]
    BadInitialTracker,
    #[error("tracker at step {index} is not the evolution of its predecessor")]
    BadTracker { index: usize },
}

/// Check an augmented run: its projection must be well-formed, its initial
/// tracker must be exactly `{(sigma0, all idle)}`, and every step's tracker
/// must equal the evolution of its predecessor.
pub fn wf_augmented(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<AugmentedConfiguration>,
) -> Result<(), AugmentedWfViolation> {
    wf_run(implementation, &project(run))?;
    let expected0 = MetaConfiguration::initial(
        implementation.initial_state.clone(),
        process_count,
        false,
    );
    if run.initial().tracker != expected0 {
        return Err(AugmentedWfViolation::BadInitialTracker);
    }
    let mut tracker = run.initial().tracker.clone();
    for (index, (event, config)) in run.steps().enumerate() {
        tracker = evolve(&implementation.object_type, event.proc, &event.line, &tracker);
        if config.tracker != tracker {
            return Err(AugmentedWfViolation::BadTracker { index });
        }
    }
    Ok(())
}
