//! Golden semantics checks: one assertion per documented rule instance of
//! the statement dynamics, global dynamics, atomic dynamics, and the
//! multistep/evolve relations, plus the builtin transition tables and the
//! operations built on top of them. Everything is checked exactly.

use std::collections::{BTreeSet, HashSet};

use lintrack::atomic::{
    atomic_implementation, atomic_step, wf_atomic, AtomicConfiguration, Status,
};
use lintrack::checker::{
    check, extract_witness, extract_witness_for, fuzz, oracle_linearizations,
    oracle_linearizations_of_behavior, ExploreParams, Verdict,
};
use lintrack::lang::{
    eval_statement, eval_term, parse_implementation, step_frame, Env, Eps, Frame,
    Implementation, ProcedureSignal, Regs, Signal, Statement, Term,
};
use lintrack::object::{builtin_queue, builtin_rcas, builtin_register, encode_seq, ObjectRegistry};
use lintrack::runtime::{
    behavior, enabled_events, global_step, wf_run, Configuration, Event, Line, Run,
};
use lintrack::tracker::{
    augmented_step, embed, evolve, evolve_inv, evolve_ret, linearize_pending, multistep, project,
    AugmentedConfiguration, MetaConfiguration,
};
use lintrack::value::{ProcessId, Val};

use crate::support::*;

const P0: ProcessId = ProcessId(0);
const P1: ProcessId = ProcessId(1);

fn ints(ns: &[i64]) -> Vec<Val> {
    ns.iter().copied().map(Val::Int).collect()
}

fn ac(sigma: Val, statuses: Vec<Status>) -> AtomicConfiguration {
    AtomicConfiguration { sigma, statuses }
}

// Builtin transition tables.

fn builtin_rows() {
    let reg = builtin_register(&ints(&[0, 3, 5]), &Val::Int(0));
    assert_eq!(
        reg.delta(&Val::Int(0), P0, "Read", &Val::Unit),
        vec![(Val::Int(0), Val::Int(0))]
    );
    assert_eq!(
        reg.delta(&Val::Int(0), P0, "Write", &Val::Int(5)),
        vec![(Val::Int(5), Val::Unit)]
    );
    assert_eq!(
        reg.delta(&Val::Int(3), P0, "Write", &Val::Int(3)),
        vec![(Val::Int(3), Val::Unit)]
    );

    let cell = builtin_rcas(&ints(&[0, 1, 2]), &Val::Int(0));
    assert_eq!(
        cell.delta(&Val::Int(0), P0, "CAS", &Val::pair(Val::Int(0), Val::Int(1))),
        vec![(Val::Int(1), Val::Bool(true))]
    );
    assert_eq!(
        cell.delta(&Val::Int(2), P0, "CAS", &Val::pair(Val::Int(0), Val::Int(1))),
        vec![(Val::Int(2), Val::Bool(false))]
    );
    for v in ints(&[0, 1, 2]) {
        assert_eq!(cell.delta(&v, P0, "Read", &Val::Unit), vec![(v.clone(), v)]);
    }

    let q = builtin_queue(&ints(&[5, 10]), 4);
    assert_eq!(
        q.delta(&encode_seq(&[]), P0, "Enq", &Val::Int(5)),
        vec![(encode_seq(&ints(&[5])), Val::Unit)]
    );
    assert_eq!(
        q.delta(&encode_seq(&ints(&[5, 10])), P0, "Deq", &Val::Unit),
        vec![(encode_seq(&ints(&[10])), Val::Int(5))]
    );
    assert_eq!(q.delta(&encode_seq(&[]), P0, "Deq", &Val::Unit), vec![]);
}

// Parser rows.

fn parse_rows() {
    let implementation = rwcas();
    let write = implementation.procedure("Write").unwrap();
    assert_eq!(
        write.statements(),
        &[
            Statement::Assign("x".into(), Term::invoke("cell", "Read", Term::Unit)),
            Statement::invoke(
                "cell",
                "CAS",
                Term::Pair(Box::new(Term::Var("x".into())), Box::new(Term::Arg)),
            ),
            Statement::Return(Term::Unit),
        ]
    );

    let minimal = parse_implementation(
        r#"
object reg : register({0}, 0) uses { cell : register({0}, 0); }
proc Read(unit) { return 0; }
proc Write({0}) { return Arg; }
"#,
    )
    .unwrap();
    assert_eq!(
        minimal.procedure("Write").unwrap().statements(),
        &[Statement::Return(Term::Arg)]
    );

    let out_of_range = parse_implementation(
        r#"
object reg : register({0}, 0) uses { cell : register({0}, 0); }
proc Read(unit) { return 0; }
proc Write({0}) { goto 5; return unit; }
"#,
    );
    assert!(out_of_range.is_err());
}

// Term evaluation rows.

fn eval_term_rows() {
    let empty = ObjectRegistry::new();
    let env = Env::new(&empty);
    let no_regs = Regs::new();
    let no_eps = Eps::new();

    assert_eq!(
        eval_term(env, P0, &Val::Int(5), &no_regs, &no_eps, &Term::Arg).unwrap(),
        vec![(no_eps.clone(), Val::Int(5))]
    );

    let mut regs = Regs::new();
    regs.insert("x".into(), Val::pair(Val::Int(1), Val::Int(2)));
    assert_eq!(
        eval_term(
            env,
            P0,
            &Val::Unit,
            &regs,
            &no_eps,
            &Term::Fst(Box::new(Term::Var("x".into())))
        )
        .unwrap(),
        vec![(no_eps.clone(), Val::Int(1))]
    );

    let mut bases = ObjectRegistry::new();
    bases
        .register("cell", builtin_rcas(&ints(&[0, 1]), &Val::Int(0)), Val::Int(0))
        .unwrap();
    let env = Env::new(&bases);
    let eps = bases.initial_states();
    assert_eq!(
        eval_term(
            env,
            P0,
            &Val::Unit,
            &no_regs,
            &eps,
            &Term::invoke("cell", "Read", Term::Unit)
        )
        .unwrap(),
        vec![(eps.clone(), Val::Int(0))]
    );
}

// Statement evaluation rows (Assign, Seq-Ret, If-True).

fn eval_statement_rows() {
    let empty = ObjectRegistry::new();
    let env = Env::new(&empty);
    let no_regs = Regs::new();
    let no_eps = Eps::new();

    let mut after_assign = Regs::new();
    after_assign.insert("x".into(), Val::Int(5));
    assert_eq!(
        eval_statement(
            env,
            P0,
            &Val::Unit,
            &no_regs,
            &no_eps,
            &Statement::Assign("x".into(), Term::Int(5))
        )
        .unwrap(),
        vec![(after_assign, no_eps.clone(), Signal::Continue)]
    );

    assert_eq!(
        eval_statement(
            env,
            P0,
            &Val::Unit,
            &no_regs,
            &no_eps,
            &Statement::seq(
                Statement::Return(Term::Int(1)),
                Statement::Assign("x".into(), Term::Int(2)),
            )
        )
        .unwrap(),
        vec![(no_regs.clone(), no_eps.clone(), Signal::Return(Val::Int(1)))]
    );

    assert_eq!(
        eval_statement(
            env,
            P0,
            &Val::Unit,
            &no_regs,
            &no_eps,
            &Statement::if_(
                Term::Bool(true),
                Statement::Return(Term::Int(1)),
                Statement::Return(Term::Int(2)),
            )
        )
        .unwrap(),
        vec![(no_regs.clone(), no_eps.clone(), Signal::Return(Val::Int(1)))]
    );
    // Symmetric false case.
    assert_eq!(
        eval_statement(
            env,
            P0,
            &Val::Unit,
            &no_regs,
            &no_eps,
            &Statement::if_(
                Term::Bool(false),
                Statement::Return(Term::Int(1)),
                Statement::Return(Term::Int(2)),
            )
        )
        .unwrap(),
        vec![(no_regs.clone(), no_eps.clone(), Signal::Return(Val::Int(2)))]
    );
}

// Frame stepping rows over the case-study Write procedure.

fn step_frame_rows() {
    let implementation = rwcas();
    let eps = implementation.bases.initial_states();

    let frame = Frame::initial("Write", Val::Int(1));
    let out = step_frame(&implementation, P0, &eps, &frame).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].0, eps);
    match &out[0].1 {
        ProcedureSignal::Next(f) => {
            assert_eq!(f.pc, 1);
            assert_eq!(f.registers.get("x"), Some(&Val::Int(0)));
        }
        other => panic!("expected Next, got {other:?}"),
    }

    // A frame parked at a return statement propagates the signal.
    let frame = Frame {
        pc: 2,
        ..Frame::initial("Write", Val::Int(1))
    };
    let out = step_frame(&implementation, P0, &eps, &frame).unwrap();
    assert_eq!(out[0].1, ProcedureSignal::Return(Val::Unit));

    // Goto moves the counter and leaves registers alone.
    let goto_impl = parse_implementation(
        r#"
object reg : register({0}, 0) uses { cell : register({0}, 0); }
proc Read(unit) { return 0; }
proc Write({0}) {
  goto 0;
  return unit;
}
"#,
    )
    .unwrap();
    let eps = goto_impl.bases.initial_states();
    let frame = Frame::initial("Write", Val::Int(0));
    let out = step_frame(&goto_impl, P0, &eps, &frame).unwrap();
    match &out[0].1 {
        ProcedureSignal::Next(f) => {
            assert_eq!(f.pc, 0);
            assert!(f.registers.is_empty());
        }
        other => panic!("expected Next, got {other:?}"),
    }
}

// Global dynamics rows.

fn global_step_rows() {
    let implementation = rwcas();
    let c0 = Configuration::initial(&implementation);

    let succ = global_step(&implementation, &c0, P0, &Line::invoke("Write", Val::Int(1))).unwrap();
    assert_eq!(succ.len(), 1);
    assert_eq!(
        succ[0].outstanding.get(&P0),
        Some(&Frame::initial("Write", Val::Int(1)))
    );

    // Drive Write to its return line, then respond.
    let c = succ.into_iter().next().unwrap();
    let c = global_step(&implementation, &c, P0, &Line::Intermediate).unwrap().remove(0);
    let c = global_step(&implementation, &c, P0, &Line::Intermediate).unwrap().remove(0);
    assert_eq!(c.outstanding[&P0].pc, 2);
    let done = global_step(&implementation, &c, P0, &Line::response(Val::Unit)).unwrap();
    assert_eq!(done.len(), 1);
    assert!(done[0].is_idle(P0));

    assert_eq!(
        global_step(&implementation, &c0, P0, &Line::Intermediate).unwrap(),
        vec![]
    );
}

fn enabled_events_rows() {
    let implementation = rwcas();
    let c0 = Configuration::initial(&implementation);
    let (events, diags) = enabled_events(&implementation, 2, &c0);
    assert_eq!(events.len(), 6, "2 procs x (Read(unit), Write(0), Write(1))");
    assert!(diags.is_empty());

    let c = global_step(&implementation, &c0, P1, &Line::invoke("Read", Val::Unit))
        .unwrap()
        .remove(0);
    let (events, _) = enabled_events(&implementation, 2, &c);
    let p1_lines: Vec<_> = events
        .iter()
        .filter(|(e, _)| e.proc == P1)
        .map(|(e, _)| e.line.clone())
        .collect();
    assert!(
        p1_lines.iter().all(|l| matches!(l, Line::Intermediate | Line::Response { .. })),
        "a busy process only steps its frame"
    );

    // All processes stuck: every proc mid-procedure with an unassignable read.
    let stuck_impl = parse_implementation(
        r#"
object reg : register({0}, 0) uses { cell : register({0}, 0); }
proc Read(unit) { x := y + 1; y := 0; return 0; }
proc Write({0}) { return unit; }
"#,
    )
    .unwrap();
    let c0 = Configuration::initial(&stuck_impl);
    let c = global_step(&stuck_impl, &c0, P0, &Line::invoke("Read", Val::Unit))
        .unwrap()
        .remove(0);
    let (events, diags) = enabled_events(&stuck_impl, 1, &c);
    assert!(events.is_empty());
    assert_eq!(diags.len(), 1);
}

fn wf_run_rows() {
    let implementation = rwcas();
    let c0 = Configuration::initial(&implementation);
    assert_eq!(wf_run(&implementation, &Run::new(c0.clone())), Ok(()));

    // A step that skips a line is rejected at its index.
    let c1 = global_step(&implementation, &c0, P0, &Line::invoke("Write", Val::Int(1)))
        .unwrap()
        .remove(0);
    let mut run = Run::new(c0);
    run.push(event(0, Line::invoke("Write", Val::Int(1))), c1.clone());
    let mut forged = c1;
    forged.outstanding.get_mut(&P0).unwrap().pc = 2;
    run.push(event(0, Line::Intermediate), forged);
    assert!(matches!(
        wf_run(&implementation, &run),
        Err(lintrack::runtime::WfViolation::BadStep { index: 1, .. })
    ));

    // Every run the explorer produces is well-formed.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let sampled = lintrack::checker::sample_run(&implementation, 2, 10, &mut rng);
        assert_eq!(wf_run(&implementation, &sampled), Ok(()));
    }
}

fn behavior_rows() {
    let implementation = rwcas();
    assert_eq!(behavior(&Run::new(Configuration::initial(&implementation))), vec![]);

    let run = run_of_events(
        &implementation,
        vec![
            event(0, Line::invoke("Write", Val::Int(1))),
            event(0, Line::Intermediate),
            event(0, Line::Intermediate),
            event(0, Line::response(Val::Unit)),
        ],
    );
    assert_eq!(
        behavior(&run),
        vec![
            event(0, Line::invoke("Write", Val::Int(1))),
            event(0, Line::response(Val::Unit)),
        ]
    );
}

/// The three-process queue execution: behavior write-out and oracle rows.
fn queue_execution_rows() {
    let queue_behavior = vec![
        event(0, Line::invoke("Enq", Val::Int(5))),
        event(1, Line::invoke("Enq", Val::Int(10))),
        event(1, Line::response(Val::Unit)),
        event(2, Line::invoke("Deq", Val::Unit)),
        event(0, Line::response(Val::Unit)),
        event(1, Line::invoke("Deq", Val::Unit)),
        event(2, Line::response(Val::Int(10))),
        event(1, Line::response(Val::Int(5))),
    ];
    let ty = builtin_queue(&ints(&[5, 10]), 3);
    let sigma0 = encode_seq(&[]);
    let witnesses = oracle_linearizations_of_behavior(&ty, &sigma0, 3, &queue_behavior);
    assert!(!witnesses.is_empty());

    // The linearization order Enq(5), Enq(10), Deq->5, Deq->10 is among them.
    let expected = vec![
        (P0, "Enq".to_string(), Val::Int(5)),
        (P1, "Enq".to_string(), Val::Int(10)),
        (P1, "Deq".to_string(), Val::Unit),
        (ProcessId(2), "Deq".to_string(), Val::Unit),
    ];
    let order_of = |run: &Run<AtomicConfiguration>| {
        let mut order = Vec::new();
        let mut current = run.initial().clone();
        for (e, config) in run.steps() {
            if e.line == Line::Intermediate {
                if let Status::Pending { op, arg } = current.status(e.proc) {
                    order.push((e.proc, op.clone(), arg.clone()));
                }
            }
            current = config.clone();
        }
        order
    };
    assert!(witnesses.iter().any(|(run, _)| order_of(run) == expected));
    for (run, _) in &witnesses {
        assert_eq!(wf_atomic(&ty, &sigma0, run), Ok(()));
        assert_eq!(behavior(run), queue_behavior);
    }
}

// Atomic dynamics rows.

fn atomic_step_rows() {
    let ty = builtin_register(&ints(&[0, 5]), &Val::Int(0));
    let idle = ac(Val::Int(0), vec![Status::Idle]);
    assert_eq!(
        atomic_step(&ty, &idle, P0, &Line::invoke("Write", Val::Int(5))),
        vec![ac(Val::Int(0), vec![Status::pending("Write", Val::Int(5))])]
    );
    assert_eq!(
        atomic_step(
            &ty,
            &ac(Val::Int(0), vec![Status::pending("Write", Val::Int(5))]),
            P0,
            &Line::Intermediate
        ),
        vec![ac(Val::Int(5), vec![Status::linearized(Val::Unit)])]
    );
    assert_eq!(
        atomic_step(
            &ty,
            &ac(Val::Int(5), vec![Status::linearized(Val::Unit)]),
            P0,
            &Line::response(Val::Bool(false))
        ),
        vec![]
    );
}

fn wf_atomic_rows() {
    let ty = builtin_register(&ints(&[0, 5]), &Val::Int(0));
    let init = AtomicConfiguration::initial(Val::Int(0), 1);
    assert_eq!(wf_atomic(&ty, &Val::Int(0), &Run::new(init.clone())), Ok(()));

    // Linearizing twice without a response is rejected.
    let mut run = Run::new(init.clone());
    run.push(
        event(0, Line::invoke("Write", Val::Int(5))),
        init.with_status(P0, Status::pending("Write", Val::Int(5))),
    );
    let linearized = ac(Val::Int(5), vec![Status::linearized(Val::Unit)]);
    run.push(event(0, Line::Intermediate), linearized.clone());
    run.push(event(0, Line::Intermediate), linearized);
    assert!(wf_atomic(&ty, &Val::Int(0), &run).is_err());

    // Every witness the checker emits is well-formed.
    let implementation = rwcas();
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let run = lintrack::checker::sample_run(&implementation, 2, 8, &mut rng);
        let witness = extract_witness(&implementation, 2, &run).expect("register is linearizable");
        assert_eq!(
            wf_atomic(&implementation.object_type, &implementation.initial_state, &witness),
            Ok(())
        );
    }
}

fn atomic_implementation_rows() {
    let ty = builtin_register(&ints(&[0, 1]), &Val::Int(0));
    let implementation = atomic_implementation(&ty, "reg", &Val::Int(0));
    for op in ty.ops() {
        assert_eq!(implementation.procedure(op).unwrap().len(), 2);
    }

    // Behavior sets of the two-line implementation and of direct atomic
    // runs coincide at depth 8 for two processes.
    let impl_behaviors = enumerate_impl_behaviors(&implementation, 2, 8);
    let atomic_behaviors = enumerate_atomic_behaviors(&ty, &Val::Int(0), 2, 8);
    assert_eq!(impl_behaviors, atomic_behaviors);
}

fn enumerate_impl_behaviors(
    implementation: &Implementation,
    procs: usize,
    depth: usize,
) -> HashSet<Vec<Event>> {
    fn walk(
        implementation: &Implementation,
        procs: usize,
        config: &Configuration,
        skeleton: &mut Vec<Event>,
        left: usize,
        out: &mut HashSet<Vec<Event>>,
    ) {
        out.insert(skeleton.clone());
        if left == 0 {
            return;
        }
        let (pairs, _) = enabled_events(implementation, procs, config);
        for (e, succ) in pairs {
            let keep = !matches!(e.line, Line::Intermediate);
            if keep {
                skeleton.push(e.clone());
            }
            walk(implementation, procs, &succ, skeleton, left - 1, out);
            if keep {
                skeleton.pop();
            }
        }
    }
    let mut out = HashSet::new();
    let mut skeleton = Vec::new();
    walk(
        implementation,
        procs,
        &Configuration::initial(implementation),
        &mut skeleton,
        depth,
        &mut out,
    );
    out
}

/// Direct enumeration of atomic-run behaviors straight off the status
/// machine, independent of the implementation-side dynamics.
fn enumerate_atomic_behaviors(
    ty: &lintrack::object::ObjectType,
    sigma0: &Val,
    procs: usize,
    depth: usize,
) -> HashSet<Vec<Event>> {
    fn walk(
        ty: &lintrack::object::ObjectType,
        config: &AtomicConfiguration,
        skeleton: &mut Vec<Event>,
        left: usize,
        out: &mut HashSet<Vec<Event>>,
    ) {
        out.insert(skeleton.clone());
        if left == 0 {
            return;
        }
        for proc in (0..config.process_count()).map(ProcessId) {
            let lines: Vec<Line> = match config.status(proc) {
                Status::Idle => ty
                    .ops()
                    .iter()
                    .flat_map(|op| {
                        ty.arg_domain(op)
                            .iter()
                            .map(move |arg| Line::invoke(op.clone(), arg.clone()))
                    })
                    .collect(),
                Status::Pending { .. } => vec![Line::Intermediate],
                Status::Linearized { res } => vec![Line::response(res.clone())],
            };
            for line in lines {
                for succ in atomic_step(ty, config, proc, &line) {
                    let keep = !matches!(line, Line::Intermediate);
                    if keep {
                        skeleton.push(Event { proc, line: line.clone() });
                    }
                    walk(ty, &succ, skeleton, left - 1, out);
                    if keep {
                        skeleton.pop();
                    }
                }
            }
        }
    }
    let mut out = HashSet::new();
    let mut skeleton = Vec::new();
    walk(
        ty,
        &AtomicConfiguration::initial(sigma0.clone(), procs),
        &mut skeleton,
        depth,
        &mut out,
    );
    out
}

// Multistep and evolve rows.

fn tracker_rows() {
    let ty = builtin_register(&ints(&[0, 1, 2, 5]), &Val::Int(0));

    let start = ac(Val::Int(0), vec![Status::pending("Write", Val::Int(5))]);
    assert_eq!(
        multistep(&ty, &start, &[]),
        [start.clone()].into_iter().collect::<BTreeSet<_>>()
    );
    assert_eq!(
        multistep(&ty, &start, &[P0]),
        [ac(Val::Int(5), vec![Status::linearized(Val::Unit)])]
            .into_iter()
            .collect::<BTreeSet<_>>()
    );
    assert!(multistep(&ty, &ac(Val::Int(0), vec![Status::Idle]), &[P0]).is_empty());

    assert!(linearize_pending(&ty, &MetaConfiguration::empty(false)).is_empty());
    let idle = MetaConfiguration::initial(Val::Int(0), 2, false);
    assert_eq!(linearize_pending(&ty, &idle), idle);

    let two_writes = MetaConfiguration::from_configs([ac(
        Val::Int(0),
        vec![
            Status::pending("Write", Val::Int(1)),
            Status::pending("Write", Val::Int(2)),
        ],
    )]);
    assert_eq!(linearize_pending(&ty, &two_writes).len(), 5);

    // evolve_inv / evolve_ret set-builders.
    let c0 = MetaConfiguration::initial(Val::Int(0), 1, false);
    assert_eq!(
        evolve_inv(&c0, P0, "Write", &Val::Int(5)),
        MetaConfiguration::from_configs([ac(
            Val::Int(0),
            vec![Status::pending("Write", Val::Int(5))]
        )])
    );
    let busy = MetaConfiguration::from_configs([ac(
        Val::Int(0),
        vec![Status::pending("Read", Val::Unit)],
    )]);
    assert!(evolve_inv(&busy, P0, "Write", &Val::Int(5)).is_empty());
    assert!(evolve_inv(&MetaConfiguration::empty(false), P0, "Write", &Val::Int(5)).is_empty());

    let mixed = MetaConfiguration::from_configs([
        ac(Val::Int(5), vec![Status::linearized(Val::Unit)]),
        ac(Val::Int(0), vec![Status::pending("Write", Val::Int(5))]),
    ]);
    assert_eq!(
        evolve_ret(&mixed, P0, &Val::Unit),
        MetaConfiguration::from_configs([ac(Val::Int(5), vec![Status::Idle])])
    );
    let mismatch = MetaConfiguration::from_configs([
        ac(Val::Int(0), vec![Status::linearized(Val::Int(0))]),
        ac(Val::Int(1), vec![Status::linearized(Val::Int(1))]),
    ]);
    assert!(evolve_ret(&mismatch, P0, &Val::Int(2)).is_empty());
    assert!(evolve_ret(&MetaConfiguration::empty(false), P0, &Val::Unit).is_empty());

    // evolve case split.
    assert_eq!(evolve(&ty, P0, &Line::Intermediate, &idle), idle);
    let after_inv = evolve(&ty, P0, &Line::invoke("Write", Val::Int(5)), &c0);
    assert_eq!(
        after_inv,
        MetaConfiguration::from_configs([
            ac(Val::Int(0), vec![Status::pending("Write", Val::Int(5))]),
            ac(Val::Int(5), vec![Status::linearized(Val::Unit)]),
        ])
    );
    assert_eq!(
        evolve(&ty, P0, &Line::response(Val::Unit), &after_inv),
        MetaConfiguration::from_configs([ac(Val::Int(5), vec![Status::Idle])])
    );
}

fn augmented_rows() {
    let implementation = rwcas();

    // Successor count equals the base successor count.
    let initial = AugmentedConfiguration::initial(&implementation, 2, false);
    for line in [
        Line::invoke("Write", Val::Int(1)),
        Line::invoke("Read", Val::Unit),
        Line::Intermediate,
    ] {
        let base = global_step(&implementation, &initial.base, P0, &line).unwrap();
        let augmented = augmented_step(&implementation, &initial, P0, &line).unwrap();
        assert_eq!(augmented.len(), base.len());
    }

    // The initial tracker is exactly {(sigma0, all idle)}.
    assert_eq!(
        initial.tracker,
        MetaConfiguration::initial(Val::Int(0), 2, false)
    );

    // The interfering-write run keeps a nonempty tracker throughout.
    let wide = rwcas_three_values();
    let run = run_of_events(&wide, interfering_write_events());
    let augmented = embed(&wide, 2, &run, false).unwrap();
    for index in 0..=augmented.len() {
        assert!(!augmented.config_at(index).tracker.is_empty());
    }
}

fn embed_project_rows() {
    let implementation = rwcas();
    let c0 = Configuration::initial(&implementation);
    let embedded = embed(&implementation, 2, &Run::new(c0), false).unwrap();
    assert_eq!(
        embedded.initial().tracker,
        MetaConfiguration::initial(Val::Int(0), 2, false)
    );

    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let run = lintrack::checker::sample_run(&implementation, 2, 10, &mut rng);
        let augmented = embed(&implementation, 2, &run, false).unwrap();
        assert_eq!(project(&augmented), run);
        assert_eq!(behavior(&augmented), behavior(&run));
    }
}

// Checker rows.

fn check_rows() {
    // Depth-0 edge: only the initial run exists.
    let implementation = rwcas();
    let params = ExploreParams {
        max_events: 0,
        ..ExploreParams::exhaustive(2, 0)
    };
    match check(&implementation, &params).unwrap() {
        Verdict::LinearizableUpToBound(stats) => {
            assert_eq!(stats.explored_runs, 1);
        }
        other => panic!("expected linearizable at depth 0, got {other:?}"),
    }

    // The broken register falls on the documented schedule.
    let broken = broken_write();
    let run = run_of_events(
        &broken,
        vec![
            event(0, Line::invoke("Write", Val::Int(1))),
            event(0, Line::Intermediate),
            event(0, Line::response(Val::Unit)),
            event(0, Line::invoke("Read", Val::Unit)),
            event(0, Line::Intermediate),
        ],
    );
    let augmented = embed(&broken, 2, &run, false).unwrap();
    let final_tracker = &augmented.final_config().tracker;
    let emptied = evolve(
        &broken.object_type,
        P0,
        &Line::response(Val::Int(0)),
        final_tracker,
    );
    assert!(emptied.is_empty(), "Response(0) empties the tracker");
}

fn oracle_rows() {
    let implementation = rwcas();

    // The empty run has exactly the initial atomic run as linearization.
    let empty_run = Run::new(Configuration::initial(&implementation));
    let witnesses = oracle_linearizations(&implementation, 2, &empty_run).unwrap();
    assert_eq!(witnesses.len(), 1);
    assert!(witnesses[0].0.is_empty());

    // A counterexample's projected run has zero linearizations.
    let broken = broken_write();
    let mut params = ExploreParams::exhaustive(2, 8);
    params.minimize = true;
    let Verdict::Counterexample { run, .. } = check(&broken, &params).unwrap() else {
        panic!("broken register must fall");
    };
    let projected = project(&run);
    assert!(oracle_linearizations(&broken, 2, &projected).unwrap().is_empty());
}

fn witness_rows() {
    // Interfering-write scenario: a witness linearizing Write(1) before
    // Write(2) exists, and the default extraction returns it.
    let wide = rwcas_three_values();
    let run = run_of_events(&wide, interfering_write_events());
    let augmented = embed(&wide, 2, &run, false).unwrap();
    let tracker = &augmented.final_config().tracker;
    let both_idle = |sigma: i64| ac(Val::Int(sigma), vec![Status::Idle, Status::Idle]);
    assert!(tracker.contains(&both_idle(2)), "Write(1) then Write(2) is live");
    assert!(tracker.contains(&both_idle(1)), "Write(2) then Write(1) is live");

    let witness = extract_witness_for(&wide, 2, &run, &both_idle(2)).unwrap();
    let order: Vec<ProcessId> = witness
        .events()
        .filter(|e| e.line == Line::Intermediate)
        .map(|e| e.proc)
        .collect();
    assert_eq!(order, vec![P0, P1], "Write(1) linearizes before Write(2)");
    assert_eq!(extract_witness(&wide, 2, &run).unwrap(), witness);
    assert_eq!(
        wf_atomic(&wide.object_type, &wide.initial_state, &witness),
        Ok(())
    );
    assert_eq!(behavior(&witness), behavior(&run));

    // A single completed operation has the unique three-event witness.
    let implementation = rwcas();
    let run = run_of_events(
        &implementation,
        vec![
            event(0, Line::invoke("Write", Val::Int(1))),
            event(0, Line::Intermediate),
            event(0, Line::Intermediate),
            event(0, Line::response(Val::Unit)),
        ],
    );
    let witness = extract_witness(&implementation, 1, &run).unwrap();
    assert_eq!(witness.len(), 3);
    assert_eq!(
        witness.events().cloned().collect::<Vec<_>>(),
        vec![
            event(0, Line::invoke("Write", Val::Int(1))),
            event(0, Line::Intermediate),
            event(0, Line::response(Val::Unit)),
        ]
    );
}

fn fuzz_rows() {
    let implementation = rwcas();
    let params = ExploreParams::random(2, 8, 42, 200);
    let a = fuzz(&implementation, &params).unwrap();
    let b = fuzz(&implementation, &params).unwrap();
    match (&a, &b) {
        (Verdict::LinearizableUpToBound(sa), Verdict::LinearizableUpToBound(sb)) => {
            assert_eq!(sa.explored_states, sb.explored_states);
            assert_eq!(sa.explored_runs, sb.explored_runs);
            assert_eq!(sa.max_tracker_size, sb.max_tracker_size);
        }
        other => panic!("fixed seed must reproduce the verdict, got {other:?}"),
    }

    // The broken register falls within 1000 trials at depth 8.
    let broken = broken_write();
    let params = ExploreParams::random(2, 8, 42, 1000);
    assert!(matches!(
        fuzz(&broken, &params).unwrap(),
        Verdict::Counterexample { .. }
    ));

    // The correct register never falls, whatever the seed.
    for seed in [0, 1, 2, 99] {
        let params = ExploreParams::random(2, 8, seed, 250);
        assert!(fuzz(&implementation, &params).unwrap().is_linearizable());
    }
}

/// Run every golden row; panics identify the failing group.
pub fn all() {
    builtin_rows();
    parse_rows();
    eval_term_rows();
    eval_statement_rows();
    step_frame_rows();
    global_step_rows();
    enabled_events_rows();
    wf_run_rows();
    behavior_rows();
    queue_execution_rows();
    atomic_step_rows();
    wf_atomic_rows();
    atomic_implementation_rows();
    tracker_rows();
    augmented_rows();
    embed_project_rows();
    check_rows();
    oracle_rows();
    witness_rows();
    fuzz_rows();
}
