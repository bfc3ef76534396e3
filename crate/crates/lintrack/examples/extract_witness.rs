//! Extract a linearization witness for the interfering-write scenario: p0's
//! Write(1) reads the cell, p1's Write(2) completes in between, p0's CAS
//! fails, and p0 still responds. The write that never physically landed can
//! linearize immediately before the one that did; the witness makes that
//! order concrete.

use lintrack::checker::extract_witness;
use lintrack::lang::parse_implementation;
use lintrack::runtime::{Event, Line, Run};
use lintrack::trace::replay;
use lintrack::trace::ImplTrace;
use lintrack::value::{ProcessId, Val};

fn main() {
    let implementation = parse_implementation(
        r#"
object reg : register({0, 1, 2}, 0) uses {
  cell : rcas({0, 1, 2}, 0);
}
proc Read(unit) {
  x := invoke cell.Read(unit);
  return x;
}
proc Write({0, 1, 2}) {
  x := invoke cell.Read(unit);
  invoke cell.CAS(pair(x, Arg));
  return unit;
}
"#,
    )
    .expect("register over a wider domain parses");

    let p0 = ProcessId(0);
    let p1 = ProcessId(1);
    let schedule = vec![
        (p0, Line::invoke("Write", Val::Int(1))),
        (p0, Line::Intermediate), // p0 reads 0
        (p1, Line::invoke("Write", Val::Int(2))),
        (p1, Line::Intermediate), // p1 reads 0
        (p1, Line::Intermediate), // p1's CAS(0, 2) succeeds
        (p1, Line::response(Val::Unit)),
        (p0, Line::Intermediate), // p0's CAS(0, 1) fails
        (p0, Line::response(Val::Unit)),
    ];
    let trace = ImplTrace {
        object: None,
        initial: None,
        events: schedule
            .into_iter()
            .map(|(proc, line)| Event { proc, line })
            .collect(),
    };
    let run: Run<_> = replay(&implementation, &trace).expect("schedule replays");

    let witness = extract_witness(&implementation, 2, &run).expect("run is linearizable");
    println!("witness ({} events):", witness.len());
    let mut order = Vec::new();
    for (index, (event, config)) in witness.steps().enumerate() {
        println!("  [{index}] {event}   sigma={}", config.sigma);
        if event.line == Line::Intermediate {
            order.push(event.proc);
        }
    }
    println!("linearization order of the writes: {order:?}");
    assert_eq!(
        order,
        vec![p0, p1],
        "Write(1) linearizes immediately before Write(2)"
    );
}
