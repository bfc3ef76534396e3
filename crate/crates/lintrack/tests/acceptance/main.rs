//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

mod golden;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lintrack::atomic::{atomic_implementation, wf_atomic, AtomicConfiguration, Status};
use lintrack::checker::{
    adequacy_crosscheck, check, extract_witness, oracle_linearizations, sample_run,
    ExploreParams, Verdict,
};
use lintrack::cli::{cmd_check, JobConfig, OutputFormat};
use lintrack::object::builtin_register;
use lintrack::runtime::{behavior, Line};
use lintrack::tracker::{
    embed, evolve, evolve_ret, linearize_pending, project, wf_augmented, MetaConfiguration,
};
use lintrack::value::{ProcessId, Val};

use support::*;

fn pass(n: u32, what: &str) {
    println!("criterion {n} ({what}): PASS");
}

#[test]
fn criterion_1_end_to_end_case_study() {
    let implementation = rwcas();
    let verdict = check(&implementation, &ExploreParams::exhaustive(2, 10)).unwrap();
    assert!(
        verdict.is_linearizable(),
        "2 processes, depth 10: {verdict:?}"
    );
    let verdict = check(&implementation, &ExploreParams::exhaustive(3, 8)).unwrap();
    assert!(
        verdict.is_linearizable(),
        "3 processes, depth 8: {verdict:?}"
    );
    pass(1, "read/CAS register linearizable at depth 10 and 3-proc depth 8");
}

#[test]
fn criterion_2_adequacy_at_desk_scale() {
    let implementation = rwcas();
    let report = adequacy_crosscheck(&implementation, &ExploreParams::exhaustive(2, 8)).unwrap();
    assert!(
        report.is_clean(),
        "register: {} discrepancies in {} prefixes",
        report.discrepancies.len(),
        report.prefixes_checked
    );
    assert!(report.prefixes_checked > 1);

    let ty = builtin_register(&[Val::Int(0), Val::Int(1)], &Val::Int(0));
    let atomic = atomic_implementation(&ty, "reg", &Val::Int(0));
    let report = adequacy_crosscheck(&atomic, &ExploreParams::exhaustive(2, 8)).unwrap();
    assert!(
        report.is_clean(),
        "atomic register: {} discrepancies in {} prefixes",
        report.discrepancies.len(),
        report.prefixes_checked
    );
    pass(2, "tracker equals oracle on every prefix, both case studies, depth 8");
}

#[test]
fn criterion_3_negative_cases() {
    for (name, implementation) in [("broken_write", broken_write()), ("stale_read", stale_read())] {
        let mut params = ExploreParams::exhaustive(2, 8);
        params.minimize = true;
        let Verdict::Counterexample {
            run,
            failing_index,
            ..
        } = check(&implementation, &params).unwrap()
        else {
            panic!("{name}: expected a counterexample at depth 8");
        };
        assert_eq!(failing_index, run.len() - 1);

        // The oracle confirms the failing prefix has no linearization.
        let projected = project(&run);
        let witnesses = oracle_linearizations(&implementation, 2, &projected).unwrap();
        assert!(witnesses.is_empty(), "{name}: oracle found a linearization");

        // Prefix minimality: every strict prefix keeps an inhabited tracker.
        for cut in 0..run.len() {
            let prefix = projected.prefix(cut);
            let augmented = embed(&implementation, 2, &prefix, false).unwrap();
            assert!(
                !augmented.final_config().tracker.is_empty(),
                "{name}: prefix of length {cut} already has an empty tracker"
            );
        }
    }
    pass(3, "both broken registers fall with oracle-confirmed minimal counterexamples");
}

#[test]
fn criterion_4_tracker_algebra() {
    let ty = builtin_register(&[Val::Int(0), Val::Int(1)], &Val::Int(0));
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let statuses = |rng: &mut ChaCha8Rng| -> Status {
        use rand::Rng;
        match rng.gen_range(0..5) {
            0 => Status::Idle,
            1 => Status::pending("Read", Val::Unit),
            2 => Status::pending("Write", Val::Int(rng.gen_range(0..2))),
            3 => Status::linearized(Val::Unit),
            _ => Status::linearized(Val::Int(rng.gen_range(0..2))),
        }
    };
    let random_meta = |rng: &mut ChaCha8Rng, procs: usize| -> MetaConfiguration {
        use rand::Rng;
        let members = rng.gen_range(0..5);
        MetaConfiguration::from_configs((0..members).map(|_| AtomicConfiguration {
            sigma: Val::Int(rng.gen_range(0..2)),
            statuses: (0..procs).map(|_| statuses(rng)).collect(),
        }))
    };

    for trial in 0..1000 {
        use rand::Rng;
        let procs = rng.gen_range(1..=3);
        let c = random_meta(&mut rng, procs);
        let closed = linearize_pending(&ty, &c);

        // Extensivity and idempotence.
        assert!(c.is_subset(&closed), "trial {trial}: not extensive");
        assert_eq!(
            linearize_pending(&ty, &closed),
            closed,
            "trial {trial}: not idempotent"
        );

        // Monotonicity of evolve for every line kind.
        let mut bigger: Vec<AtomicConfiguration> = c.iter().cloned().collect();
        let extra = random_meta(&mut rng, procs);
        bigger.extend(extra.iter().cloned());
        let d = MetaConfiguration::from_configs(bigger);
        let proc = ProcessId(rng.gen_range(0..procs));
        let lines = [
            Line::invoke("Write", Val::Int(rng.gen_range(0..2))),
            Line::invoke("Read", Val::Unit),
            Line::Intermediate,
            Line::response(Val::Unit),
            Line::response(Val::Int(rng.gen_range(0..2))),
        ];
        for line in &lines {
            let small = evolve(&ty, proc, line, &c);
            let large = evolve(&ty, proc, line, &d);
            assert!(
                small.is_subset(&large),
                "trial {trial}: evolve not monotone on {line}"
            );
        }

        // Post-response shape: every member of evolve_ret is idle at proc.
        let v = [Val::Unit, Val::Int(0), Val::Int(1)]
            [rng.gen_range(0..3)]
        .clone();
        for member in evolve_ret(&c, proc, &v).iter() {
            assert_eq!(
                member.status(proc),
                &Status::Idle,
                "trial {trial}: evolve_ret left a non-idle status"
            );
        }
    }
    pass(4, "extensivity, idempotence, monotonicity, response shape over 1000 trials");
}

#[test]
fn criterion_5_witness_validity() {
    let implementation = rwcas();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A11);
    for trial in 0..500 {
        let run = sample_run(&implementation, 2, 10, &mut rng);
        let witness = extract_witness(&implementation, 2, &run)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        assert_eq!(
            wf_atomic(&implementation.object_type, &implementation.initial_state, &witness),
            Ok(()),
            "trial {trial}: witness not well-formed"
        );
        assert_eq!(
            behavior(&witness),
            behavior(&run),
            "trial {trial}: behavior mismatch"
        );
    }
    pass(5, "500 fuzzed runs all yield well-formed behavior-equal witnesses");
}

#[test]
fn criterion_6_embed_project_isomorphism() {
    let implementation = rwcas();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for trial in 0..1000 {
        let run = sample_run(&implementation, 2, 8, &mut rng);
        let augmented = embed(&implementation, 2, &run, false)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        // Both directions are identities and preserve well-formedness.
        assert_eq!(project(&augmented), run, "trial {trial}: project . embed");
        let re_embedded = embed(&implementation, 2, &project(&augmented), false).unwrap();
        assert_eq!(re_embedded, augmented, "trial {trial}: embed . project");
        assert_eq!(
            wf_augmented(&implementation, 2, &augmented),
            Ok(()),
            "trial {trial}: embedding not well-formed"
        );
    }
    pass(6, "project/embed are mutually inverse on 1000 fuzzed runs");
}

#[test]
fn criterion_7_semantics_conformance() {
    golden::all();
    pass(7, "every documented rule instance checks exactly");
}

#[test]
fn criterion_8_determinism() {
    let objects = format!("{}/objects", env!("CARGO_MANIFEST_DIR"));

    // Single-threaded checks render byte-identical JSON across runs.
    for object in ["rwcas.obj", "broken_write.obj"] {
        let mut cfg = JobConfig::new(format!("{objects}/{object}"), 2, 8);
        cfg.output = OutputFormat::Json;
        let a = cmd_check(&cfg);
        let b = cmd_check(&cfg);
        assert_eq!(a, b, "{object}: repeated runs differ");
    }

    // Multi-threaded exploration agrees with single-threaded on the verdict
    // and reports the same minimal counterexample.
    let rw = rwcas();
    let single = check(&rw, &ExploreParams::exhaustive(2, 8)).unwrap();
    let parallel = check(
        &rw,
        &ExploreParams {
            jobs: 4,
            ..ExploreParams::exhaustive(2, 8)
        },
    )
    .unwrap();
    assert!(single.is_linearizable() && parallel.is_linearizable());

    let broken = broken_write();
    let minimized = ExploreParams {
        minimize: true,
        ..ExploreParams::exhaustive(2, 8)
    };
    let expected = match check(&broken, &minimized).unwrap() {
        Verdict::Counterexample { run, failing_index, .. } => (run, failing_index),
        other => panic!("expected counterexample, got {other:?}"),
    };
    for jobs in [2, 4] {
        let parallel = ExploreParams {
            jobs,
            ..ExploreParams::exhaustive(2, 8)
        };
        match check(&broken, &parallel).unwrap() {
            Verdict::Counterexample { run, failing_index, .. } => {
                assert_eq!(run, expected.0, "jobs={jobs}: different counterexample");
                assert_eq!(failing_index, expected.1);
            }
            other => panic!("jobs={jobs}: expected counterexample, got {other:?}"),
        }
    }

    // Repeated parallel runs agree with each other byte for byte.
    let mut cfg = JobConfig::new(format!("{objects}/broken_write.obj"), 2, 8);
    cfg.output = OutputFormat::Json;
    cfg.jobs = 4;
    let a = cmd_check(&cfg);
    let b = cmd_check(&cfg);
    assert_eq!(a, b);
    pass(8, "byte-identical reports single-threaded; same minimal counterexample at --jobs 4");
}

/// Visited-set pruning does not change verdicts (the augmented state is
/// Markovian), checked on all four bundled case studies.
#[test]
fn dedup_soundness_on_bundled_case_studies() {
    for (name, implementation) in [
        ("rwcas", rwcas()),
        ("atomic_register", atomic_register_obj()),
        ("broken_write", broken_write()),
        ("stale_read", stale_read()),
    ] {
        let with = check(&implementation, &ExploreParams::exhaustive(2, 8)).unwrap();
        let without = check(
            &implementation,
            &ExploreParams {
                dedup: false,
                ..ExploreParams::exhaustive(2, 8)
            },
        )
        .unwrap();
        match (&with, &without) {
            (Verdict::LinearizableUpToBound(_), Verdict::LinearizableUpToBound(_)) => {}
            (Verdict::Counterexample { .. }, Verdict::Counterexample { .. }) => {}
            other => panic!("{name}: dedup changed the verdict: {other:?}"),
        }
    }
}

/// The atomic register case study is also verified end to end.
#[test]
fn atomic_register_is_linearizable() {
    let implementation = atomic_register_obj();
    let verdict = check(&implementation, &ExploreParams::exhaustive(2, 10)).unwrap();
    assert!(verdict.is_linearizable());
}
