//! Cross-validate the tracker against the brute-force linearization oracle:
//! on every run prefix within the bound, the tracker must equal the set of
//! final configurations of the prefix's linearizations. This is the
//! executable, bounded reading of the technique's soundness and
//! completeness.

use lintrack::checker::{adequacy_crosscheck, ExploreParams};
use lintrack::lang::parse_implementation;

fn main() {
    let source = include_str!("../objects/rwcas.obj");
    let implementation = parse_implementation(source).expect("case study parses");

    let params = ExploreParams::exhaustive(2, 6);
    let report = adequacy_crosscheck(&implementation, &params).expect("crosscheck runs");
    println!(
        "checked {} run prefixes: {} discrepancies",
        report.prefixes_checked,
        report.discrepancies.len()
    );
    for d in report.discrepancies.iter().take(3) {
        println!("  disagreement after {:?}", d.events);
        println!("    tracker: {} configs, oracle: {} configs", d.tracker.len(), d.oracle.len());
    }
    assert!(report.is_clean());
}
