//! Replay a hand-written schedule and watch the tracker: each event filters
//! the set of live linearizations and closes it under pending
//! linearization steps.

use lintrack::lang::parse_implementation;
use lintrack::runtime::{Event, Line};
use lintrack::trace::{replay, ImplTrace};
use lintrack::tracker::{evolve, MetaConfiguration};
use lintrack::value::{ProcessId, Val};

fn main() {
    let implementation =
        parse_implementation(include_str!("../objects/rwcas.obj")).expect("case study parses");

    // Two overlapping writes, then a read by a third process.
    let p = |n| ProcessId(n);
    let events = vec![
        Event { proc: p(0), line: Line::invoke("Write", Val::Int(1)) },
        Event { proc: p(1), line: Line::invoke("Write", Val::Int(0)) },
        Event { proc: p(0), line: Line::Intermediate },
        Event { proc: p(1), line: Line::Intermediate },
        Event { proc: p(0), line: Line::Intermediate },
        Event { proc: p(0), line: Line::response(Val::Unit) },
        Event { proc: p(2), line: Line::invoke("Read", Val::Unit) },
        Event { proc: p(2), line: Line::Intermediate },
        Event { proc: p(2), line: Line::response(Val::Int(1)) },
    ];
    let trace = ImplTrace { object: None, initial: None, events };
    let run = replay(&implementation, &trace).expect("schedule replays");

    let mut tracker = MetaConfiguration::initial(implementation.initial_state.clone(), 3, false);
    println!("initial tracker: {tracker}");
    for (index, (event, _)) in run.steps().enumerate() {
        tracker = evolve(&implementation.object_type, event.proc, &event.line, &tracker);
        println!("[{index}] {event}");
        println!("    tracker ({} configs): {tracker}", tracker.len());
    }
    assert!(!tracker.is_empty(), "this schedule is linearizable");
}
