//! Find and minimize a counterexample for a broken register whose Write
//! never performs its CAS, then confirm with the brute-force oracle that
//! the failing run really has no linearization.

use lintrack::checker::{check, oracle_linearizations, ExploreParams, Verdict};
use lintrack::lang::parse_implementation;
use lintrack::tracker::project;

fn main() {
    let source = include_str!("../objects/broken_write.obj");
    let implementation = parse_implementation(source).expect("case study parses");

    let mut params = ExploreParams::exhaustive(2, 8);
    params.minimize = true;
    let verdict = check(&implementation, &params).expect("check runs");

    let Verdict::Counterexample {
        run,
        failing_index,
        stats,
    } = verdict
    else {
        panic!("expected a counterexample");
    };
    println!(
        "counterexample with {} events (tracker empties at {failing_index}); explored {} states",
        run.len(),
        stats.explored_states
    );
    for (index, event) in run.events().enumerate() {
        let tracker = run.config_at(index + 1).tracker.len();
        println!("  [{index}] {event}   tracker size {tracker}");
    }

    let projected = project(&run);
    let linearizations =
        oracle_linearizations(&implementation, params.process_count, &projected)
            .expect("counterexample run is well-formed");
    println!(
        "oracle agrees: {} linearizations of the failing run",
        linearizations.len()
    );
    assert!(linearizations.is_empty());
}
