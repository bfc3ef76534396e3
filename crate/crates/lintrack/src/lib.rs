//! Bounded linearizability verification for concurrent object
//! implementations.
//!
//! An implementation, written in a small imperative language, runs
//! operations on an abstract object by manipulating base objects
//! (registers, read/CAS cells, queues). The verifier interprets the
//! implementation, enumerates schedules, and maintains alongside each run
//! the set of *all* atomic reference configurations that could be the final
//! state of a linearization of that run: one live forward simulation per
//! member. An event that empties the set is a proof that the run has no
//! linearization; a set that stays inhabited on every run within the bound
//! means the implementation is linearizable up to that bound. A brute-force
//! linearization search cross-validates the tracked sets run by run.
//!
//! Start with [`lang::parse_implementation`] and [`checker::check`], or run
//! the `lintrack` binary. The `examples/` directory has one runnable
//! example per capability.
//!
//! ```
//! use lintrack::{check, parse_implementation, ExploreParams, Verdict};
//!
//! // A register whose Write never takes effect.
//! let implementation = parse_implementation(r#"
//!     object reg : register({0, 1}, 0) uses {
//!       cell : rcas({0, 1}, 0);
//!     }
//!     proc Read(unit) {
//!       x := invoke cell.Read(unit);
//!       return x;
//!     }
//!     proc Write({0, 1}) {
//!       return unit;
//!     }
//! "#)?;
//!
//! let verdict = check(&implementation, &ExploreParams::exhaustive(2, 8))?;
//! let Verdict::Counterexample { run, failing_index, .. } = verdict else {
//!     panic!("a completed Write(1) followed by Read -> 0 has no linearization");
//! };
//! assert!(run.config_at(failing_index + 1).tracker.is_empty());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod atomic;
pub mod checker;
pub mod cli;
pub mod lang;
pub mod object;
pub mod report;
pub mod runtime;
pub mod trace;
pub mod tracker;
pub mod value;

pub use atomic::{atomic_implementation, atomic_step, wf_atomic, AtomicConfiguration, Status};
pub use checker::{
    adequacy_crosscheck, check, extract_witness, fuzz, oracle_linearizations, CheckError,
    ExploreParams, Mode, Stats, Verdict,
};
pub use lang::{parse_implementation, pretty_print, Implementation};
pub use object::{builtin_queue, builtin_rcas, builtin_register, ObjectRegistry, ObjectType};
pub use runtime::{
    behavior, enabled_events, global_step, wf_run, Configuration, Event, Line, Run,
};
pub use tracker::{
    augmented_step, embed, evolve, evolve_inv, evolve_ret, linearize_pending, multistep, project,
    AugmentedConfiguration, MetaConfiguration,
};
pub use value::{ProcessId, Val};
