//! Property tests for the engine-level contracts: closure behavior on
//! arbitrary reports, machine-pane round-trips, and pipeline determinism.

use proptest::prelude::*;
use semidyn::action::StructuralFlags;
use semidyn::estimators::{check_tt, find_transitive_from, Budget};
use semidyn::pipeline::{analyze, AnalysisConfig};
use semidyn::registry::{self, SystemKind};
use semidyn::report::{emit_machine_all, parse_machine, MachineReport, Report};
use semidyn::rules::{
    check_consistency, derive_closure, ClassificationReport, PointProbe, Violation, ALL_PROPERTIES,
};
use semidyn::space::Point;
use semidyn::verdict::{
    HorizonMeta, Origin, SensitivityEstimate, SensitivityWitness, Status, SyndeticCertificate,
    Verdict,
};

fn arb_status() -> impl Strategy<Value = Status> {
    prop_oneof![
        Just(Status::Refuted),
        Just(Status::Unknown),
        Just(Status::Witnessed),
        Just(Status::Proven),
    ]
}

fn arb_origin() -> impl Strategy<Value = Origin> {
    prop_oneof![
        Just(Origin::Exact),
        Just(Origin::Structural),
        Just(Origin::Estimated),
        Just(Origin::Derived),
    ]
}

// witness text: printable, no tabs or newlines, as the pane format needs
fn arb_witness() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 .,:;=()/_-]{0,40}"
}

fn arb_meta() -> impl Strategy<Value = HorizonMeta> {
    (
        proptest::option::of(0.0001f64..10.0),
        proptest::option::of(0.0001f64..10.0),
        proptest::option::of(1u64..100_000),
        proptest::option::of(1usize..1000),
        proptest::option::of(any::<u64>()),
    )
        .prop_map(|(eps, delta, horizon, samples, seed)| HorizonMeta {
            eps,
            delta,
            horizon,
            samples,
            seed,
        })
}

fn arb_verdict() -> impl Strategy<Value = Verdict> {
    (arb_status(), arb_origin(), arb_witness(), arb_meta()).prop_map(|(s, o, w, m)| {
        Verdict::new(s, w).with_origin(o).with_meta(m)
    })
}

fn arb_flags() -> impl Strategy<Value = StructuralFlags> {
    (
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(f, c, group, isometric, polish)| StructuralFlags {
            f_semigroup: f,
            c_semigroup: c,
            group,
            isometric,
            polish,
        })
}

fn arb_point_probe() -> impl Strategy<Value = PointProbe> {
    ("[a-z0-9.]{1,12}", arb_status(), arb_status()).prop_map(|(point, eq, tr)| PointProbe {
        point,
        equicontinuity: eq,
        transitive: tr,
    })
}

fn arb_syndetic() -> impl Strategy<Value = SyndeticCertificate> {
    (
        "[a-z0-9.]{1,12}",
        "[a-z0-9.]{1,12}",
        0.001f64..1.0,
        0.0f64..1000.0,
        1.0f64..10000.0,
        proptest::collection::vec(0.0f64..1000.0, 0..5),
    )
        .prop_map(|(base, center, radius, max_gap, span, returns)| SyndeticCertificate {
            base,
            center,
            radius,
            returns,
            max_gap,
            horizon_span: span,
        })
}

fn arb_sensitivity() -> impl Strategy<Value = SensitivityEstimate> {
    (
        arb_verdict(),
        proptest::option::of(0.001f64..1.0),
        0.0f64..=1.0,
        proptest::collection::vec(
            ("[a-z0-9.]{1,10}", "[a-z0-9.]{1,10}", 0.0001f64..0.1, 0.1f64..1.0)
                .prop_map(|(base, probe, d, sep)| SensitivityWitness {
                    base,
                    probe,
                    start_distance: d,
                    index: "n=3".to_string(),
                    separation: sep,
                }),
            0..3,
        ),
    )
        .prop_map(|(verdict, constant, coverage, witnesses)| SensitivityEstimate {
            verdict,
            constant,
            coverage,
            witnesses,
            runner_up: None,
        })
}

fn arb_report() -> impl Strategy<Value = ClassificationReport> {
    (
        "[a-z_]{1,16}",
        arb_flags(),
        proptest::collection::vec(arb_verdict(), ALL_PROPERTIES.len()),
        proptest::collection::vec(arb_point_probe(), 0..4),
        proptest::collection::vec(arb_syndetic(), 0..3),
        proptest::option::of(arb_sensitivity()),
        any::<u64>(),
    )
        .prop_map(|(name, flags, verdicts, points, syndetic, sensitivity, seed)| {
            let mut r = ClassificationReport::new(&name, flags, seed);
            for (p, v) in ALL_PROPERTIES.iter().zip(verdicts) {
                r.set(*p, v);
            }
            r.points = points;
            r.syndetic = syndetic;
            r.sensitivity = sensitivity;
            r
        })
}

fn arb_violations() -> impl Strategy<Value = Vec<Violation>> {
    proptest::collection::vec(
        (
            prop_oneof![Just("R1"), Just("R8"), Just("R10"), Just("D2")],
            arb_witness(),
        )
            .prop_map(|(rule, detail)| Violation {
                rule,
                anchor: "closure check",
                detail,
            }),
        0..3,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_idempotent(r in arb_report()) {
        let once = derive_closure(&r);
        let twice = derive_closure(&once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn closure_keeps_established_verdicts(r in arb_report()) {
        let closed = derive_closure(&r);
        for p in ALL_PROPERTIES {
            let before = r.verdict(p);
            let after = closed.verdict(p);
            match before.status {
                // refuted entries are never touched at all
                Status::Refuted => prop_assert_eq!(before, after),
                // positive evidence is never weakened, and never flipped
                Status::Witnessed | Status::Proven => {
                    prop_assert!(after.status.strength() >= before.status.strength(),
                        "{} went {} -> {}", p.name(), before.status, after.status);
                }
                Status::Unknown => {}
            }
        }
    }

    #[test]
    fn added_evidence_never_erases_conclusions(
        r in arb_report(),
        pick in 0..ALL_PROPERTIES.len(),
        stronger in prop_oneof![Just(Status::Witnessed), Just(Status::Proven)],
    ) {
        let p = ALL_PROPERTIES[pick];
        prop_assume!(r.verdict(p).status == Status::Unknown);
        let c1 = derive_closure(&r);
        let mut r2 = r.clone();
        r2.set(p, Verdict::new(stronger, "extra evidence").with_origin(Origin::Exact));
        let c2 = derive_closure(&r2);
        // contradictory evidence lands in the violation list instead of
        // silently rewriting conclusions, so only clean closures compare
        if check_consistency(&c2).is_empty() {
            for q in ALL_PROPERTIES {
                let s1 = c1.status(q);
                if s1 >= Status::Witnessed {
                    prop_assert!(
                        c2.status(q) >= s1,
                        "{} fell from {} to {}", q.name(), s1, c2.status(q)
                    );
                }
            }
        }
    }

    #[test]
    fn machine_pane_round_trips(r in arb_report(), v in arb_violations()) {
        let report = Report::new(r, v);
        let pane = emit_machine_all(std::slice::from_ref(&report));
        let parsed = parse_machine(&pane).expect("own pane parses");
        prop_assert_eq!(parsed.len(), 1);
        prop_assert_eq!(&parsed[0], &MachineReport::from_report(&report));
    }

    #[test]
    fn machine_pane_round_trips_in_bulk(
        rs in proptest::collection::vec((arb_report(), arb_violations()), 1..4)
    ) {
        let reports: Vec<Report> = rs.into_iter().map(|(r, v)| Report::new(r, v)).collect();
        let pane = emit_machine_all(&reports);
        let parsed = parse_machine(&pane).expect("own pane parses");
        let expected: Vec<MachineReport> =
            reports.iter().map(MachineReport::from_report).collect();
        prop_assert_eq!(parsed, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rotation_analysis_is_a_function_of_the_seed(seed in any::<u64>()) {
        let cfg = AnalysisConfig { seed, ..AnalysisConfig::default() };
        let sys = registry::builtin("rotation").unwrap();
        let a = analyze(&sys, &cfg).unwrap();
        let b = analyze(&sys, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn linked_ball_pairs_stay_linked_at_longer_horizons(horizon in 30u64..200) {
        let (action, space) = match registry::builtin("doubling").unwrap().kind {
            SystemKind::Metric { action, space } => (action, space),
            _ => unreachable!(),
        };
        let mut budget = Budget::new(100_000_000);
        let short = check_tt(&action, &space, 0.125, horizon, &mut budget).unwrap();
        if short.status == Status::Witnessed {
            let long = check_tt(&action, &space, 0.125, horizon * 2, &mut budget).unwrap();
            prop_assert_eq!(long.status, Status::Witnessed);
        }
    }

    #[test]
    fn dense_orbits_stay_found_at_longer_horizons(
        eps in 0.05f64..0.2,
        horizon in 50u64..400,
    ) {
        let (action, space) = match registry::builtin("rotation").unwrap().kind {
            SystemKind::Metric { action, space } => (action, space),
            _ => unreachable!(),
        };
        let x = Point::Circle(0.3);
        let mut budget = Budget::new(10_000_000);
        let short = find_transitive_from(&action, &space, &x, eps, horizon, &mut budget).unwrap();
        if short.status == Status::Witnessed {
            let long =
                find_transitive_from(&action, &space, &x, eps, horizon * 2, &mut budget).unwrap();
            prop_assert_eq!(long.status, Status::Witnessed);
        }
    }
}
