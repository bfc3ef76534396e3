//! Brute-force linearization oracle: direct search for well-formed atomic
//! runs whose behavior equals a given run's behavior, independent of the
//! tracker. The adequacy crosscheck compares the tracker against this
//! oracle on every explored run prefix.

use std::collections::BTreeSet;

use crate::atomic::{AtomicConfiguration, Status};
use crate::checker::explore::{CheckError, ExploreParams};
use crate::lang::Implementation;
use crate::object::ObjectType;
use crate::runtime::{behavior, enabled_events, wf_run, Event, Line, Run, WfViolation};
use crate::tracker::{evolve, MetaConfiguration};
use crate::value::{processes, Val};

/// Enumerate every well-formed atomic run whose behavior equals `skeleton`.
///
/// The invocation/response skeleton is fixed; the search interleaves exactly
/// one intermediate (linearization) step per operation between its
/// invocation and response, branching over delta nondeterminism. Operations
/// still pending when the skeleton ends may linearize or not; both
/// completions are enumerated. Returns each run with its final
/// configuration.
pub fn oracle_linearizations_of_behavior(
    ty: &ObjectType,
    sigma0: &Val,
    process_count: usize,
    skeleton: &[Event],
) -> Vec<(Run<AtomicConfiguration>, AtomicConfiguration)> {
    struct Search<'a> {
        ty: &'a ObjectType,
        skeleton: &'a [Event],
        process_count: usize,
        steps: Vec<(Event, AtomicConfiguration)>,
        results: Vec<(Run<AtomicConfiguration>, AtomicConfiguration)>,
        initial: AtomicConfiguration,
    }

    impl Search<'_> {
        fn current(&self) -> &AtomicConfiguration {
            self.steps.last().map(|(_, c)| c).unwrap_or(&self.initial)
        }

        fn emit(&mut self) {
            let mut run = Run::new(self.initial.clone());
            for (event, config) in &self.steps {
                run.push(event.clone(), config.clone());
            }
            let final_config = self.current().clone();
            self.results.push((run, final_config));
        }

        fn explore(&mut self, index: usize) {
            if index == self.skeleton.len() {
                self.emit();
            }
            // Linearize any currently pending process.
            for proc in processes(self.process_count) {
                if matches!(self.current().status(proc), Status::Pending { .. }) {
                    let succs = crate::atomic::atomic_step(
                        self.ty,
                        self.current(),
                        proc,
                        &Line::Intermediate,
                    );
                    for succ in succs {
                        self.steps.push((
                            Event {
                                proc,
                                line: Line::Intermediate,
                            },
                            succ,
                        ));
                        self.explore(index);
                        self.steps.pop();
                    }
                }
            }
            // Or take the next skeleton event, when applicable.
            if let Some(event) = self.skeleton.get(index) {
                let succs =
                    crate::atomic::atomic_step(self.ty, self.current(), event.proc, &event.line);
                for succ in succs {
                    self.steps.push((event.clone(), succ));
                    self.explore(index + 1);
                    self.steps.pop();
                }
            }
        }
    }

    let mut search = Search {
        ty,
        skeleton,
        process_count,
        steps: Vec::new(),
        results: Vec::new(),
        initial: AtomicConfiguration::initial(sigma0.clone(), process_count),
    };
    search.explore(0);
    search.results
}

/// All linearizations of a well-formed implementation run.
pub fn oracle_linearizations(
    implementation: &Implementation,
    process_count: usize,
    run: &Run<crate::runtime::Configuration>,
) -> Result<Vec<(Run<AtomicConfiguration>, AtomicConfiguration)>, WfViolation> {
    wf_run(implementation, run)?;
    Ok(oracle_linearizations_of_behavior(
        &implementation.object_type,
        &implementation.initial_state,
        process_count,
        &behavior(run),
    ))
}

/// A run prefix where the tracker and the oracle disagree.
#[derive(Clone, Debug)]
pub struct AdequacyDiscrepancy {
    pub events: Vec<Event>,
    pub tracker: BTreeSet<AtomicConfiguration>,
    pub oracle: BTreeSet<AtomicConfiguration>,
}

/// Result of the tracker-vs-oracle crosscheck.
#[derive(Clone, Debug, Default)]
pub struct AdequacyReport {
    pub prefixes_checked: u64,
    pub discrepancies: Vec<AdequacyDiscrepancy>,
}

impl AdequacyReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// For every well-formed run prefix within the bound, assert that the
/// tracker of its embedding equals the set of final configurations of its
/// oracle linearizations.
///
/// The run tree is walked without deduplication: the comparison is per run,
/// not per configuration. A discrepancy-free report shows the tracker is
/// sound and complete at this bound.
pub fn adequacy_crosscheck(
    implementation: &Implementation,
    params: &ExploreParams,
) -> Result<AdequacyReport, CheckError> {
    struct Walk<'a> {
        implementation: &'a Implementation,
        process_count: usize,
        max_events: usize,
        skeleton: Vec<Event>,
        report: AdequacyReport,
    }

    impl Walk<'_> {
        fn visit(
            &mut self,
            base: &crate::runtime::Configuration,
            tracker: &MetaConfiguration,
            depth: usize,
        ) {
            self.report.prefixes_checked += 1;
            let oracle: BTreeSet<AtomicConfiguration> = oracle_linearizations_of_behavior(
                &self.implementation.object_type,
                &self.implementation.initial_state,
                self.process_count,
                &self.skeleton,
            )
            .into_iter()
            .map(|(_, final_config)| final_config)
            .collect();
            if oracle != *tracker.configs() {
                self.report.discrepancies.push(AdequacyDiscrepancy {
                    events: self.skeleton.clone(),
                    tracker: tracker.configs().clone(),
                    oracle,
                });
            }
            if depth == self.max_events {
                return;
            }
            let (pairs, _diags) = enabled_events(self.implementation, self.process_count, base);
            for (event, succ) in pairs {
                let evolved = evolve(
                    &self.implementation.object_type,
                    event.proc,
                    &event.line,
                    tracker,
                );
                let keep_skeleton = !matches!(event.line, Line::Intermediate);
                if keep_skeleton {
                    self.skeleton.push(event.clone());
                }
                self.visit(&succ, &evolved, depth + 1);
                if keep_skeleton {
                    self.skeleton.pop();
                }
            }
        }
    }

    if params.process_count < 1 {
        return Err(CheckError::InvalidParams(
            "process count must be at least 1".into(),
        ));
    }
    let mut walk = Walk {
        implementation,
        process_count: params.process_count,
        max_events: params.max_events,
        skeleton: Vec::new(),
        report: AdequacyReport::default(),
    };
    let base = crate::runtime::Configuration::initial(implementation);
    let tracker = MetaConfiguration::initial(
        implementation.initial_state.clone(),
        params.process_count,
        false,
    );
    walk.visit(&base, &tracker, 0);
    Ok(walk.report)
}
