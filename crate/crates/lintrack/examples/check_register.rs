//! Exhaustively check the read/CAS register case study: every schedule of
//! two processes with up to ten events keeps at least one linearization
//! alive, so the implementation is linearizable up to that bound.

use lintrack::checker::{check, ExploreParams, Verdict};
use lintrack::lang::parse_implementation;

fn main() {
    let source = include_str!("../objects/rwcas.obj");
    let implementation = parse_implementation(source).expect("case study parses");

    let params = ExploreParams::exhaustive(2, 10);
    match check(&implementation, &params).expect("check runs") {
        Verdict::LinearizableUpToBound(stats) => {
            println!(
                "linearizable up to {} events: {} states, {} runs, max tracker {} ({:?})",
                params.max_events,
                stats.explored_states,
                stats.explored_runs,
                stats.max_tracker_size,
                stats.elapsed
            );
        }
        Verdict::Counterexample { failing_index, .. } => {
            println!("unexpected counterexample at event {failing_index}");
        }
        Verdict::Stuck { diagnostics, .. } => {
            println!("unexpected stuck processes: {diagnostics:?}");
        }
    }
}
