//! Exploration engines: depth-first exhaustive search, a layered
//! breadth-first engine (used for minimization and parallel runs), and
//! random schedule sampling.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::Implementation;
use crate::runtime::{enabled_events, Configuration, Event, Run, StuckDiagnostic};
use crate::tracker::{evolve, AugmentedConfiguration, MetaConfiguration};

/// Schedule selection: visit everything within the bound, or sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

/// Exploration parameters.
#[derive(Clone, Copy, Debug)]
pub struct ExploreParams {
    /// Schedule depth bound: runs with up to this many events are visited.
    pub max_events: usize,
    pub process_count: usize,
    /// Visited-set pruning over augmented configurations. Sound because
    /// successor sets depend only on the configuration.
    pub dedup: bool,
    pub mode: Mode,
    pub record_provenance: bool,
    /// Abort with an error when the explored-state count passes this.
    pub state_budget: Option<u64>,
    /// Worker count; more than one selects the layered parallel engine.
    pub jobs: usize,
    /// Re-search breadth-first so the reported counterexample is globally
    /// shortest (and canonically smallest among shortest).
    pub minimize: bool,
}

impl ExploreParams {
    pub fn exhaustive(process_count: usize, max_events: usize) -> ExploreParams {
        ExploreParams {
            max_events,
            process_count,
            dedup: true,
            mode: Mode::Exhaustive,
            record_provenance: false,
            state_budget: None,
            jobs: 1,
            minimize: false,
        }
    }

    pub fn random(process_count: usize, max_events: usize, seed: u64, trials: u64) -> ExploreParams {
        ExploreParams {
            mode: Mode::Random { seed, trials },
            ..ExploreParams::exhaustive(process_count, max_events)
        }
    }
}

/// Exploration counters. `elapsed` is wall-clock time and is kept out of
/// machine-readable reports so they stay byte-deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub explored_states: u64,
    pub explored_runs: u64,
    pub max_tracker_size: usize,
    pub elapsed: Duration,
}

/// The outcome of a bounded check.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// Every explored run keeps an inhabited tracker.
    LinearizableUpToBound(Stats),
    /// A well-formed run whose final event empties the tracker: no
    /// linearization of that run exists. The tracker is empty exactly at
    /// `failing_index` and nonempty at every earlier index.
    Counterexample {
        run: Run<AugmentedConfiguration>,
        failing_index: usize,
        stats: Stats,
    },
    /// No counterexample, but some process hit an evaluation error; the
    /// program is buggy rather than proven linearizable.
    Stuck {
        diagnostics: Vec<StuckDiagnostic>,
        stats: Stats,
    },
}

impl Verdict {
    pub fn stats(&self) -> &Stats {
        match self {
            Verdict::LinearizableUpToBound(stats) => stats,
            Verdict::Counterexample { stats, .. } => stats,
            Verdict::Stuck { stats, .. } => stats,
        }
    }

    pub fn is_linearizable(&self) -> bool {
        matches!(self, Verdict::LinearizableUpToBound(_))
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("state budget of {budget} states exceeded")]
    StateBudgetExceeded { budget: u64 },
    #[error("invalid exploration parameters: {0}")]
    InvalidParams(String),
    #[error("fuzzing requires random mode")]
    WrongMode,
}

/// One candidate empty-tracker edge found during exploration, identified by
/// its event sequence (the tracker evolution depends only on events).
struct Hit {
    events: Vec<Event>,
}

/// Expansion of one augmented configuration: live successors, empty-tracker
/// events, and stuck diagnostics.
struct Expansion {
    successors: Vec<(Event, AugmentedConfiguration)>,
    hits: Vec<Event>,
    diagnostics: Vec<StuckDiagnostic>,
}

fn expand(
    implementation: &Implementation,
    params: &ExploreParams,
    config: &AugmentedConfiguration,
) -> Expansion {
    let (pairs, diagnostics) = enabled_events(implementation, params.process_count, &config.base);
    let mut successors = Vec::with_capacity(pairs.len());
    let mut hits = Vec::new();
    // Pairs with the same event are adjacent, so one evolve per event.
    let mut cached: Option<(Event, MetaConfiguration)> = None;
    for (event, base) in pairs {
        let tracker = match &cached {
            Some((e, t)) if *e == event => t.clone(),
            _ => {
                let t = evolve(
                    &implementation.object_type,
                    event.proc,
                    &event.line,
                    &config.tracker,
                );
                cached = Some((event.clone(), t.clone()));
                t
            }
        };
        // One hit per (event, base successor) pair, so random sampling
        // weighs failing choices exactly like live ones.
        if tracker.is_empty() {
            hits.push(event);
        } else {
            successors.push((event, AugmentedConfiguration { base, tracker }));
        }
    }
    Expansion {
        successors,
        hits,
        diagnostics,
    }
}

/// Materialize a counterexample run by replaying its event sequence. The
/// tracker chain is a function of the events alone, but a nondeterministic
/// base object can allow several successors for one event, and later events
/// may be applicable on only some branches; the replay backtracks over
/// branch choices in canonical base order, so the reported run is both
/// well-formed and deterministic.
fn materialize(
    implementation: &Implementation,
    params: &ExploreParams,
    events: &[Event],
) -> Run<AugmentedConfiguration> {
    fn replay(
        implementation: &Implementation,
        current: &AugmentedConfiguration,
        events: &[Event],
        out: &mut Vec<AugmentedConfiguration>,
    ) -> bool {
        let Some((event, rest)) = events.split_first() else {
            return true;
        };
        let Ok(mut succs) =
            crate::tracker::augmented_step(implementation, current, event.proc, &event.line)
        else {
            return false;
        };
        succs.sort_by(|a, b| a.base.cmp(&b.base));
        for succ in succs {
            out.push(succ.clone());
            if replay(implementation, &succ, rest, out) {
                return true;
            }
            out.pop();
        }
        false
    }

    let initial =
        AugmentedConfiguration::initial(implementation, params.process_count, params.record_provenance);
    let mut configs = Vec::with_capacity(events.len());
    let ok = replay(implementation, &initial, events, &mut configs);
    assert!(ok, "explored event sequence must replay on some branch");
    let mut run = Run::new(initial);
    for (event, config) in events.iter().zip(configs) {
        run.push(event.clone(), config);
    }
    debug_assert!(run.final_config().tracker.is_empty());
    run
}

/// Depth-first exhaustive engine.
struct Dfs<'a> {
    implementation: &'a Implementation,
    params: ExploreParams,
    visited: HashMap<AugmentedConfiguration, usize>,
    path_events: Vec<Event>,
    diagnostics: BTreeSet<StuckDiagnostic>,
    stats: Stats,
    hit: Option<Hit>,
}

impl<'a> Dfs<'a> {
    fn explore(&mut self, config: &AugmentedConfiguration, depth: usize) -> Result<(), CheckError> {
        self.stats.explored_runs += 1;
        self.stats.max_tracker_size = self.stats.max_tracker_size.max(config.tracker.len());
        if self.params.dedup {
            match self.visited.get(config) {
                Some(&seen) if seen <= depth => return Ok(()),
                _ => {
                    self.visited.insert(config.clone(), depth);
                }
            }
            self.stats.explored_states = self.visited.len() as u64;
        } else {
            self.stats.explored_states += 1;
        }
        if let Some(budget) = self.params.state_budget {
            if self.stats.explored_states > budget {
                return Err(CheckError::StateBudgetExceeded { budget });
            }
        }
        if depth == self.params.max_events {
            return Ok(());
        }
        let expansion = expand(self.implementation, &self.params, config);
        self.diagnostics.extend(expansion.diagnostics);
        if let Some(event) = expansion.hits.into_iter().next() {
            let mut events = self.path_events.clone();
            events.push(event);
            self.hit = Some(Hit { events });
            return Ok(());
        }
        for (event, succ) in expansion.successors {
            self.path_events.push(event);
            self.explore(&succ, depth + 1)?;
            self.path_events.pop();
            if self.hit.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Layered breadth-first engine. Counterexamples are found layer by layer,
/// so the first hit layer holds the globally shortest ones; the canonically
/// smallest event sequence among them is reported, which makes the result
/// independent of worker count.
fn bfs(implementation: &Implementation, params: &ExploreParams) -> Result<Verdict, CheckError> {
    struct Node {
        config: AugmentedConfiguration,
        event: Option<Event>,
        parent: Option<Arc<Node>>,
    }

    fn events_of(node: &Arc<Node>) -> Vec<Event> {
        let mut out = Vec::new();
        let mut cur = Some(node);
        while let Some(n) = cur {
            if let Some(e) = &n.event {
                out.push(e.clone());
            }
            cur = n.parent.as_ref();
        }
        out.reverse();
        out
    }

    let started = Instant::now();
    let mut stats = Stats::default();
    let mut diagnostics: BTreeSet<StuckDiagnostic> = BTreeSet::new();
    let initial =
        AugmentedConfiguration::initial(implementation, params.process_count, params.record_provenance);
    let mut visited: HashSet<AugmentedConfiguration> = HashSet::new();
    if params.dedup {
        visited.insert(initial.clone());
    }
    stats.explored_runs = 1;
    stats.explored_states = 1;
    stats.max_tracker_size = initial.tracker.len();

    let pool = (params.jobs > 1)
        .then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(params.jobs)
                .build()
                .map_err(|e| CheckError::InvalidParams(e.to_string()))
        })
        .transpose()?;

    let mut layer: Vec<Arc<Node>> = vec![Arc::new(Node {
        config: initial,
        event: None,
        parent: None,
    })];

    for _depth in 0..params.max_events {
        if layer.is_empty() {
            break;
        }
        let expansions: Vec<Expansion> = match &pool {
            Some(pool) => pool.install(|| {
                use rayon::prelude::*;
                layer
                    .par_iter()
                    .map(|node| expand(implementation, params, &node.config))
                    .collect()
            }),
            None => layer
                .iter()
                .map(|node| expand(implementation, params, &node.config))
                .collect(),
        };

        // Deterministic sequential merge, in layer order.
        let mut best_hit: Option<Hit> = None;
        let mut next_layer: Vec<Arc<Node>> = Vec::new();
        for (node, expansion) in layer.iter().zip(expansions) {
            diagnostics.extend(expansion.diagnostics);
            for event in expansion.hits {
                let mut events = events_of(node);
                events.push(event);
                if best_hit.as_ref().is_none_or(|h| events < h.events) {
                    best_hit = Some(Hit { events });
                }
            }
            if best_hit.is_some() {
                continue; // keep scanning the layer for the canonical minimum
            }
            for (event, succ) in expansion.successors {
                stats.explored_runs += 1;
                stats.max_tracker_size = stats.max_tracker_size.max(succ.tracker.len());
                if params.dedup {
                    if !visited.insert(succ.clone()) {
                        continue;
                    }
                    stats.explored_states = visited.len() as u64;
                } else {
                    stats.explored_states += 1;
                }
                next_layer.push(Arc::new(Node {
                    config: succ,
                    event: Some(event),
                    parent: Some(Arc::clone(node)),
                }));
            }
            if let Some(budget) = params.state_budget {
                if stats.explored_states > budget {
                    return Err(CheckError::StateBudgetExceeded { budget });
                }
            }
        }
        if let Some(hit) = best_hit {
            let failing_index = hit.events.len() - 1;
            let run = materialize(implementation, params, &hit.events);
            stats.elapsed = started.elapsed();
            return Ok(Verdict::Counterexample {
                run,
                failing_index,
                stats,
            });
        }
        layer = next_layer;
    }

    stats.elapsed = started.elapsed();
    if diagnostics.is_empty() {
        Ok(Verdict::LinearizableUpToBound(stats))
    } else {
        Ok(Verdict::Stuck {
            diagnostics: diagnostics.into_iter().collect(),
            stats,
        })
    }
}

fn validate(params: &ExploreParams) -> Result<(), CheckError> {
    if params.process_count < 1 {
        return Err(CheckError::InvalidParams(
            "process count must be at least 1".into(),
        ));
    }
    if params.jobs < 1 {
        return Err(CheckError::InvalidParams("jobs must be at least 1".into()));
    }
    Ok(())
}

/// Bounded check: explores every well-formed augmented run with at most
/// `max_events` events (modulo visited-set pruning when `dedup` is on) and
/// reports a counterexample at the first event whose tracker evolution is
/// empty, a stuck diagnosis, or linearizability up to the bound.
///
/// In random mode this delegates to [`fuzz`]. With `minimize` set or more
/// than one job, the layered breadth-first engine runs instead of the
/// depth-first one and the reported counterexample is the globally shortest
/// (ties broken by canonical event order).
pub fn check(implementation: &Implementation, params: &ExploreParams) -> Result<Verdict, CheckError> {
    validate(params)?;
    if let Mode::Random { .. } = params.mode {
        return fuzz(implementation, params);
    }
    if params.minimize || params.jobs > 1 {
        return bfs(implementation, params);
    }
    let started = Instant::now();
    let initial =
        AugmentedConfiguration::initial(implementation, params.process_count, params.record_provenance);
    let mut dfs = Dfs {
        implementation,
        params: *params,
        visited: HashMap::new(),
        path_events: Vec::new(),
        diagnostics: BTreeSet::new(),
        stats: Stats::default(),
        hit: None,
    };
    dfs.explore(&initial, 0)?;
    let mut stats = dfs.stats;
    stats.elapsed = started.elapsed();
    if let Some(hit) = dfs.hit {
        let failing_index = hit.events.len() - 1;
        let run = materialize(implementation, params, &hit.events);
        return Ok(Verdict::Counterexample {
            run,
            failing_index,
            stats,
        });
    }
    if dfs.diagnostics.is_empty() {
        Ok(Verdict::LinearizableUpToBound(stats))
    } else {
        Ok(Verdict::Stuck {
            diagnostics: dfs.diagnostics.into_iter().collect(),
            stats,
        })
    }
}

/// Sample `trials` schedules uniformly over enabled events with a seeded
/// generator. Same verdict semantics as [`check`] without the completeness
/// claim; a fixed seed reproduces the verdict and stats exactly.
pub fn fuzz(implementation: &Implementation, params: &ExploreParams) -> Result<Verdict, CheckError> {
    validate(params)?;
    let Mode::Random { seed, trials } = params.mode else {
        return Err(CheckError::WrongMode);
    };
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = Stats::default();
    let mut diagnostics: BTreeSet<StuckDiagnostic> = BTreeSet::new();
    for _ in 0..trials {
        stats.explored_runs += 1;
        let mut current = AugmentedConfiguration::initial(
            implementation,
            params.process_count,
            params.record_provenance,
        );
        stats.max_tracker_size = stats.max_tracker_size.max(current.tracker.len());
        let mut events: Vec<Event> = Vec::new();
        for _ in 0..params.max_events {
            let expansion = expand(implementation, params, &current);
            diagnostics.extend(expansion.diagnostics);
            let hits = expansion.hits.len();
            let total = expansion.successors.len() + hits;
            if total == 0 {
                break;
            }
            let pick = rng.gen_range(0..total);
            if pick >= expansion.successors.len() {
                let event = expansion.hits.into_iter().nth(pick - expansion.successors.len())
                    .expect("index in range");
                events.push(event);
                let failing_index = events.len() - 1;
                let run = materialize(implementation, params, &events);
                stats.elapsed = started.elapsed();
                return Ok(Verdict::Counterexample {
                    run,
                    failing_index,
                    stats,
                });
            }
            let (event, succ) = expansion.successors.into_iter().nth(pick).expect("index in range");
            events.push(event);
            stats.explored_states += 1;
            stats.max_tracker_size = stats.max_tracker_size.max(succ.tracker.len());
            current = succ;
        }
    }
    stats.elapsed = started.elapsed();
    if diagnostics.is_empty() {
        Ok(Verdict::LinearizableUpToBound(stats))
    } else {
        Ok(Verdict::Stuck {
            diagnostics: diagnostics.into_iter().collect(),
            stats,
        })
    }
}

/// A random well-formed run of up to `max_events` events: a uniform walk
/// over the enabled events of the global dynamics.
pub fn sample_run(
    implementation: &Implementation,
    process_count: usize,
    max_events: usize,
    rng: &mut impl Rng,
) -> Run<Configuration> {
    let mut run = Run::new(Configuration::initial(implementation));
    for _ in 0..max_events {
        let (pairs, _diags) = enabled_events(implementation, process_count, run.final_config());
        if pairs.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..pairs.len());
        let (event, succ) = pairs.into_iter().nth(pick).expect("index in range");
        run.push(event, succ);
    }
    run
}
