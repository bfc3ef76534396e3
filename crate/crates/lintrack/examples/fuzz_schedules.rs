//! Random schedule sampling: cheaper than exhaustive search, no
//! completeness claim, reproducible for a fixed seed. The broken register
//! falls quickly; the correct one survives every trial.

use lintrack::checker::{fuzz, ExploreParams, Verdict};
use lintrack::lang::parse_implementation;

fn main() {
    let good = parse_implementation(include_str!("../objects/rwcas.obj")).unwrap();
    let bad = parse_implementation(include_str!("../objects/broken_write.obj")).unwrap();

    let params = ExploreParams::random(2, 8, 42, 1000);

    match fuzz(&good, &params).expect("fuzz runs") {
        Verdict::LinearizableUpToBound(stats) => println!(
            "rwcas: no counterexample in {} sampled schedules ({} events total)",
            stats.explored_runs, stats.explored_states
        ),
        other => panic!("unexpected verdict for the correct register: {other:?}"),
    }

    match fuzz(&bad, &params).expect("fuzz runs") {
        Verdict::Counterexample {
            run,
            failing_index,
            stats,
        } => println!(
            "broken_write: counterexample after {} schedules, {} events, fails at {}",
            stats.explored_runs,
            run.len(),
            failing_index
        ),
        other => panic!("expected the broken register to fall: {other:?}"),
    }
}
