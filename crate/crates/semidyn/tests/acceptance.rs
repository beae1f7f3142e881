//! Acceptance gate: one test per criterion, each printing a PASS line
//! with its elapsed time and asserting the stated wall-clock budget.
//!
//! Every expected value here is either exact combinatorics checked
//! against an independently coded oracle (closed-walk enumeration,
//! brute-force reachability, a direct return-gap loop) or a pinned
//! default-resolution outcome of the seeded pipeline.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semidyn::estimators::{periodic_point_search, return_times, Budget};
use semidyn::pipeline::{analyze, run_analysis, AnalysisConfig};
use semidyn::registry::{self, default_registry, SystemKind};
use semidyn::report::{emit_machine_all, Report};
use semidyn::rules::{check_consistency, ClassificationReport, Property};
use semidyn::sft::{count_periodic, essentialize, sft_is_transitive, sft_shape, Sft};
use semidyn::space::{circle_dist, wrap, MetricSystem, Point};
use semidyn::action::SemigroupAction;
use semidyn::verdict::{Origin, Status, SyndeticCertificate, Verdict};
use std::time::Instant;

fn finish(criterion: &str, started: Instant, budget_s: f64, details: &str) {
    let dt = started.elapsed().as_secs_f64();
    assert!(
        dt < budget_s,
        "{criterion} exceeded its {budget_s}s budget: {dt:.2}s"
    );
    println!("{criterion} PASS in {dt:.2}s: {details}");
}

fn default_report(builtin: &str) -> Report {
    analyze(
        &registry::builtin(builtin).unwrap_or_else(|| panic!("no builtin {builtin}")),
        &AnalysisConfig::default(),
    )
    .expect("analysis completes")
}

fn metric_parts(builtin: &str) -> (SemigroupAction, MetricSystem) {
    match registry::builtin(builtin).expect("builtin exists").kind {
        SystemKind::Metric { action, space } => (action, space),
        _ => panic!("{builtin} is not a metric system"),
    }
}

#[test]
fn criterion_01_golden_mean_exact_classification() {
    let t = Instant::now();
    let report = default_report("golden_mean_shift");
    let c = &report.classification;

    for (p, want) in [
        (Property::TT, Status::Proven),
        (Property::PeriodicDense, Status::Proven),
        (Property::PSystem, Status::Proven),
        (Property::Minimal, Status::Refuted),
        (Property::Infinite, Status::Proven),
    ] {
        assert_eq!(c.status(p), want, "{}", p.name());
    }
    let est = c.sensitivity.as_ref().expect("sensitivity block");
    assert_eq!(est.constant, Some(0.5));
    assert_eq!(est.verdict.status, Status::Proven);
    assert!(report.violations.is_empty(), "{:?}", report.violations);

    finish(
        "criterion 01",
        t,
        1.0,
        "golden mean shift: TT/PD/PSystem Proven, Minimal Refuted, Infinite Proven, c=1/2, no violations",
    );
}

/// Closed walks of length `p`, counted by brute enumeration of state
/// sequences. Independent of the matrix-power trace in the library.
fn oracle_count_periodic(sft: &Sft, p: usize) -> u64 {
    let k = sft.states();
    let mut seq = vec![0usize; p];
    let mut count = 0u64;
    loop {
        if (0..p).all(|i| sft.edge(seq[i], seq[(i + 1) % p])) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == p {
                return count;
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_02_periodic_counts_match_cycle_enumeration() {
    let t = Instant::now();
    let mut matrices = vec![
        Sft::golden_mean(),
        Sft::full_shift(2),
        Sft::full_shift(3),
        Sft::two_cycle(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    while matrices.len() < 20 {
        let rows: Vec<u64> = (0..4).map(|_| rng.gen::<u64>() & 0xF).collect();
        matrices.push(Sft::new(4, rows).expect("4-state matrix"));
    }

    let mut checked = 0usize;
    for m in &matrices {
        for p in 1..=8usize {
            let exact = count_periodic(m, p as u64).expect("period in range");
            let brute = oracle_count_periodic(m, p);
            assert_eq!(exact, BigUint::from(brute), "matrix {} period {p}", m.render());
            checked += 1;
        }
    }

    finish(
        "criterion 02",
        t,
        5.0,
        &format!("{checked} (matrix, period) trace counts match brute cycle enumeration"),
    );
}

/// Pairwise reachability through at least one step, by plain BFS.
fn oracle_transitive(sft: &Sft) -> bool {
    let k = sft.states();
    (0..k).all(|i| {
        let mut seen = vec![false; k];
        let mut stack: Vec<usize> = sft.successors(i).collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(u) = stack.pop() {
            for v in sft.successors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

#[test]
fn criterion_03_exhaustive_four_state_transitivity_sweep() {
    let t = Instant::now();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for m in 0u32..1 << 16 {
        let rows: Vec<u64> = (0..4).map(|i| ((m >> (4 * i)) & 0xF) as u64).collect();
        let sft = Sft::new(4, rows).expect("4-state matrix");
        let Some(ess) = essentialize(&sft) else {
            skipped += 1;
            continue;
        };
        let verdict = sft_is_transitive(&ess.sft).expect("essential input");
        let got = match verdict.status {
            Status::Proven => true,
            Status::Refuted => false,
            other => panic!("inexact transitivity verdict {other:?}"),
        };
        assert_eq!(
            got,
            oracle_transitive(&ess.sft),
            "matrix {:#06x} -> {}",
            m,
            ess.sft.render()
        );
        checked += 1;
    }
    assert_eq!(checked + skipped, 1 << 16);
    assert!(checked > 10_000, "sweep degenerated: {checked} checked");

    finish(
        "criterion 03",
        t,
        60.0,
        &format!("{checked} essential matrices agree with brute reachability ({skipped} empty skipped)"),
    );
}

#[test]
fn criterion_04_doubling_map_default_analysis() {
    let t = Instant::now();
    let report = default_report("doubling");
    let c = &report.classification;

    assert_eq!(c.status(Property::TT), Status::Witnessed);
    assert_eq!(c.status(Property::PeriodicDense), Status::Witnessed);

    // the found periodic points really are periodic, against raw doubling
    let (action, space) = metric_parts("doubling");
    let mut budget = Budget::new(10_000_000);
    let found = periodic_point_search(&action, &space, 8, 1e-9, &mut budget).unwrap();
    assert!(found.len() >= 3, "only {} periodic points", found.len());
    for pp in &found {
        assert!(pp.residual <= 1e-9, "{:?}", pp);
        let Point::Circle(x0) = pp.point else {
            panic!("doubling lives on the circle")
        };
        let steps = pp.period.position() as u64;
        let mut y = x0;
        for _ in 0..steps {
            y = wrap(2.0 * y);
        }
        assert!(
            circle_dist(y, x0) <= 1e-9,
            "reported orbit fails direct iteration: {:?}",
            pp
        );
    }

    let minimal = c.verdict(Property::Minimal);
    assert_eq!(minimal.status, Status::Refuted);
    assert!(
        minimal.witness.contains("periodic orbit at 0"),
        "{}",
        minimal.witness
    );

    let est = c.sensitivity.as_ref().expect("sensitivity block");
    assert_eq!(est.verdict.status, Status::Witnessed);
    assert!(est.constant.unwrap_or(0.0) >= 0.25);
    assert_eq!(est.coverage, 1.0);
    assert_eq!(est.verdict.meta.samples, Some(50));
    assert!(est.verdict.meta.delta.unwrap_or(1.0) <= 1e-6);
    assert!(!est.witnesses.is_empty());

    assert!(report.violations.is_empty(), "{:?}", report.violations);

    finish(
        "criterion 04",
        t,
        30.0,
        "doubling: TT+PD Witnessed, Minimal Refuted via fixed point 0, c>=1/4 at full coverage",
    );
}

#[test]
fn criterion_05_rotation_defaults_and_return_gap_oracle() {
    let t = Instant::now();
    let report = default_report("rotation");
    let c = &report.classification;

    assert_eq!(c.status(Property::Equicontinuous), Status::Proven);
    assert_eq!(c.status(Property::Sensitive), Status::Refuted);
    assert_eq!(c.status(Property::Minimal), Status::Witnessed);

    // almost periodic at every sampled point: each certificate keeps its
    // gap within a tenth of the span
    assert!(!c.syndetic.is_empty());
    for cert in &c.syndetic {
        assert!(
            cert.max_gap <= cert.horizon_span / 10.0,
            "gap {} over span {} at radius {}",
            cert.max_gap,
            cert.horizon_span,
            cert.radius
        );
    }
    assert_eq!(c.status(Property::BronsteinDense), Status::Witnessed);

    // direct return-gap oracle at radius 0.1, horizon 500
    let (action, space) = metric_parts("rotation");
    let base = Point::Circle(0.2);
    let mut budget = Budget::new(10_000_000);
    let cert = return_times(&action, &space, &base, &base, 0.1, 500, &mut budget).unwrap();

    let alpha = registry::golden_alpha();
    let mut x = 0.2f64;
    let mut returns = Vec::new();
    for n in 1..=500u64 {
        x = wrap(x + alpha);
        if circle_dist(x, 0.2) < 0.1 {
            returns.push(n as f64);
        }
    }
    let oracle_gap = SyndeticCertificate::gap_of(&returns, 500.0);
    assert_eq!(cert.returns, returns);
    assert_eq!(cert.max_gap, oracle_gap);
    assert!(cert.max_gap <= 13.0, "gap {}", cert.max_gap);

    finish(
        "criterion 05",
        t,
        10.0,
        &format!(
            "rotation: Eq Proven, Sensitive Refuted, Minimal Witnessed; return gap {} == direct oracle",
            cert.max_gap
        ),
    );
}

#[test]
fn criterion_06_linear_flow_defaults() {
    let t = Instant::now();
    let report = default_report("torus_linear_flow");
    let c = &report.classification;

    assert_eq!(c.status(Property::Equicontinuous), Status::Proven);
    assert_eq!(c.status(Property::Sensitive), Status::Refuted);

    let pt = c.verdict(Property::PT);
    assert_eq!(pt.status, Status::Witnessed);
    assert_eq!(pt.meta.eps, Some(0.1));
    assert!(pt.meta.horizon.unwrap_or(u64::MAX) <= 10_000);
    assert!(report.violations.is_empty(), "{:?}", report.violations);

    finish(
        "criterion 06",
        t,
        30.0,
        "flow (1, sqrt 2): Eq Proven, Sensitive Refuted, dense orbit found at eps 0.1 within 1e4 steps",
    );
}

#[test]
fn criterion_07_equicontinuity_points_are_transitive_points() {
    let t = Instant::now();
    let reports = run_analysis(&default_registry(), &AnalysisConfig::default()).unwrap();
    assert_eq!(reports.len(), 10);

    let mut eq_points = 0usize;
    let mut witnessed_pairs = 0usize;
    for report in &reports {
        let c = &report.classification;
        let transitive_system = c.status(Property::TT).at_least_witnessed()
            || c.status(Property::PT).at_least_witnessed();
        if !transitive_system {
            continue;
        }
        for probe in &c.points {
            if probe.equicontinuity.at_least_witnessed() {
                eq_points += 1;
                assert_ne!(
                    probe.transitive,
                    Status::Refuted,
                    "{}: equicontinuity point {} excluded from transitive points",
                    c.system,
                    probe.point
                );
                if probe.transitive.at_least_witnessed() {
                    witnessed_pairs += 1;
                }
            }
        }
    }
    assert!(eq_points >= 6, "inclusion never exercised: {eq_points}");
    assert!(
        witnessed_pairs >= 6,
        "inclusion only vacuously satisfied: {witnessed_pairs}"
    );

    finish(
        "criterion 07",
        t,
        60.0,
        &format!(
            "{eq_points} equicontinuity points on transitive systems, {witnessed_pairs} with a verified dense orbit"
        ),
    );
}

fn assert_mutation(
    base: &ClassificationReport,
    prop: Property,
    to: Status,
    expected_rules: &[&str],
    label: &str,
) {
    let mut mutated = base.clone();
    mutated.set(
        prop,
        Verdict::new(to, "single-verdict mutation").with_origin(Origin::Exact),
    );
    let violations = check_consistency(&mutated);
    assert!(!violations.is_empty(), "{label}: no violation raised");
    let cited: Vec<&str> = violations.iter().map(|v| v.rule).collect();
    assert!(
        cited.iter().any(|r| expected_rules.contains(r)),
        "{label}: cited {cited:?}, expected one of {expected_rules:?}"
    );
}

#[test]
fn criterion_08_mutations_raise_correctly_cited_violations() {
    let t = Instant::now();
    let rotation = default_report("rotation").classification;
    let golden = default_report("golden_mean_shift").classification;
    assert!(check_consistency(&rotation).is_empty());
    assert!(check_consistency(&golden).is_empty());

    let mutations: [(&ClassificationReport, Property, Status, &[&str], &str); 10] = [
        (&rotation, Property::Sensitive, Status::Proven, &["R8"],
         "rotation: Sensitive Refuted -> Proven"),
        (&rotation, Property::Minimal, Status::Refuted, &["R9", "R10"],
         "rotation: Minimal Witnessed -> Refuted"),
        (&rotation, Property::Equicontinuous, Status::Refuted, &["R6", "R9"],
         "rotation: Equicontinuous Proven -> Refuted"),
        (&rotation, Property::TT, Status::Refuted, &["R1", "R3", "D2"],
         "rotation: TT Witnessed -> Refuted"),
        (&rotation, Property::EqNonempty, Status::Refuted, &["D5", "R7"],
         "rotation: EqNonempty Proven -> Refuted"),
        (&golden, Property::Sensitive, Status::Refuted, &["R8", "R10"],
         "golden mean: Sensitive Proven -> Refuted"),
        (&golden, Property::TT, Status::Refuted, &["R1", "R3", "D1", "D2"],
         "golden mean: TT Proven -> Refuted"),
        (&golden, Property::BronsteinDense, Status::Refuted, &["D2", "R12"],
         "golden mean: BronsteinDense Proven -> Refuted"),
        (&golden, Property::MSystem, Status::Refuted, &["R11", "D2"],
         "golden mean: MSystem Proven -> Refuted"),
        (&golden, Property::DPT, Status::Refuted, &["R2"],
         "golden mean: DPT Proven -> Refuted"),
    ];

    for (base, prop, to, rules, label) in mutations {
        assert_mutation(base, prop, to, rules, label);
    }

    finish(
        "criterion 08",
        t,
        30.0,
        "10/10 single-verdict mutations raise violations citing an implicated rule",
    );
}

#[test]
fn criterion_09_registry_runs_are_byte_identical() {
    let t = Instant::now();
    let cfg = AnalysisConfig::default();
    let a = run_analysis(&default_registry(), &cfg).unwrap();
    let b = run_analysis(&default_registry(), &cfg).unwrap();
    assert_eq!(a.len(), 10);
    assert_eq!(a, b);
    let pane_a = emit_machine_all(&a);
    let pane_b = emit_machine_all(&b);
    assert_eq!(pane_a.as_bytes(), pane_b.as_bytes());

    finish(
        "criterion 09",
        t,
        180.0,
        &format!(
            "two seed-42 registry runs emit identical machine panes ({} bytes)",
            pane_a.len()
        ),
    );
}

fn random_irreducible_branching(rng: &mut ChaCha8Rng) -> Sft {
    loop {
        let k = rng.gen_range(2..=6usize);
        let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & ((1u64 << k) - 1)).collect();
        let Ok(sft) = Sft::new(k, rows) else { continue };
        let Some(ess) = essentialize(&sft) else {
            continue;
        };
        let Ok(shape) = sft_shape(&ess.sft) else {
            continue;
        };
        if shape.irreducible && shape.infinite {
            return ess.sft;
        }
    }
}

#[test]
fn criterion_10_random_irreducible_shifts_are_sensitive_m_systems() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..500 {
        let sft = random_irreducible_branching(&mut rng);
        let report = analyze(
            &registry::System {
                name: format!("random_{i}"),
                kind: SystemKind::Shift {
                    sft: sft.clone(),
                    space: MetricSystem::symbol_seq("random", sft.states().min(64) as u8, 32),
                },
            },
            &AnalysisConfig::default(),
        )
        .unwrap();
        let c = &report.classification;
        assert_eq!(c.status(Property::MSystem), Status::Proven, "{}", sft.render());
        assert_eq!(c.status(Property::Minimal), Status::Refuted, "{}", sft.render());
        assert_eq!(c.status(Property::Sensitive), Status::Proven, "{}", sft.render());
        assert!(
            report.violations.is_empty(),
            "{}: {:?}",
            sft.render(),
            report.violations
        );
    }

    finish(
        "criterion 10",
        t,
        30.0,
        "500 random irreducible branching shifts: MSystem Proven, Minimal Refuted, Sensitive Proven, no violations",
    );
}
