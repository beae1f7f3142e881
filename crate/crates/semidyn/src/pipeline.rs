//! Analysis orchestration.
//!
//! One call per system: shifts of finite type go through the exact
//! symbolic classifier, metric systems through the orbit-sampling
//! estimators, and both finish with the rule closure and the consistency
//! scan. Resolutions derive from the space diameter and a handful of
//! defaults; the seed fixes every sampled point, so a report is a pure
//! function of (system, config).

use crate::action::{ActionKind, SemigroupAction};
use crate::error::Result;
use crate::estimators::{
    almost_periodic_at, check_tt, equicontinuity_at, find_transitive_from, find_transitive_point,
    periodic_point_search, sensitivity_estimate, Budget, PeriodicPoint,
};
use crate::registry::{System, SystemKind};
use crate::report::Report;
use crate::rules::{check_consistency, derive_closure, ClassificationReport, PointProbe, Property};
use crate::sft::sft_classify;
use crate::space::{Geometry, MetricSystem};
use crate::verdict::{HorizonMeta, Status, Verdict};
use std::thread;

/// Knobs shared by a whole run. Per-kind scales (horizons for flows, word
/// depth for generated semigroups, every epsilon ladder) derive from these
/// and the space diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub seed: u64,
    pub horizon: u64,
    pub eps_levels: usize,
    pub max_evals: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            seed: 42,
            horizon: 1000,
            eps_levels: 12,
            max_evals: 10_000_000,
        }
    }
}

fn scale_ladder(top: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| top / (1u64 << k) as f64).collect()
}

/// Analyze one system: classify, close under the rules, scan for
/// violations.
pub fn analyze(system: &System, cfg: &AnalysisConfig) -> Result<Report> {
    let classification = match &system.kind {
        SystemKind::Shift { sft, .. } => sft_classify(sft, &system.name, cfg.seed)?,
        SystemKind::Metric { action, space } => {
            numeric_classify(action, space, &system.name, cfg)?
        }
    };
    let closed = derive_closure(&classification);
    let violations = check_consistency(&closed);
    Ok(Report::new(closed, violations))
}

/// Analyze several systems concurrently. Reports come back sorted by
/// system name, so the output order does not depend on scheduling.
pub fn run_analysis(systems: &[System], cfg: &AnalysisConfig) -> Result<Vec<Report>> {
    let jobs: Vec<(System, AnalysisConfig)> = systems
        .iter()
        .map(|s| (s.clone(), cfg.clone()))
        .collect();
    run_configured(&jobs)
}

/// Like [`run_analysis`] but with one config per system, as resolved
/// specs carry their own overrides.
pub fn run_configured(jobs: &[(System, AnalysisConfig)]) -> Result<Vec<Report>> {
    let mut named: Vec<(String, Result<Report>)> = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(sys, cfg)| s.spawn(move || (sys.name.clone(), analyze(sys, cfg))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis threads do not panic"))
            .collect()
    });
    named.sort_by(|a, b| a.0.cmp(&b.0));
    named.into_iter().map(|(_, r)| r).collect()
}

fn periodic_is_dense(
    space: &MetricSystem,
    points: &[PeriodicPoint],
    eps: f64,
) -> Result<bool> {
    let net = space.epsilon_net(eps)?;
    Ok(net.iter().all(|center| {
        points
            .iter()
            .any(|p| space.distance(&p.point, center) <= eps)
    }))
}

fn numeric_classify(
    action: &SemigroupAction,
    space: &MetricSystem,
    name: &str,
    cfg: &AnalysisConfig,
) -> Result<ClassificationReport> {
    let seed = cfg.seed;
    let mut budget = Budget::new(cfg.max_evals);
    let mut r = ClassificationReport::new(name, action.flags, seed);
    let diam = space.diameter_hint;
    let is_flow = matches!(action.kind, ActionKind::SampledFlow { .. });
    let horizon = match action.kind {
        ActionKind::Cascade { .. } => cfg.horizon,
        // flows advance by dt per step, so they get ten times the steps
        ActionKind::SampledFlow { .. } => cfg.horizon.saturating_mul(10),
        // word counts grow geometrically with the layer depth
        ActionKind::FinitelyGenerated { .. } => cfg.horizon.min(12),
    };
    let ft_horizon = if is_flow {
        horizon
    } else {
        horizon.saturating_mul(2)
    };
    let eps_tt = if is_flow { 0.1 } else { diam / 8.0 };

    if space.perfect {
        r.set(
            Property::Perfect,
            Verdict::structural(Status::Proven, "the state space has no isolated points"),
        );
    }
    if !matches!(space.geometry, Geometry::SymbolSeq { .. }) {
        r.set(
            Property::Infinite,
            Verdict::structural(Status::Proven, "continuum state space"),
        );
    }

    if is_flow {
        r.set(
            Property::TT,
            Verdict::unknown("ball-pair linking is not sampled for flows; see PT"),
        );
    } else {
        r.set(
            Property::TT,
            check_tt(action, space, eps_tt, horizon, &mut budget)?,
        );
    }

    let ft = find_transitive_point(action, space, eps_tt, ft_horizon, 5, seed, &mut budget)?;
    r.set(Property::PT, ft.clone());

    let period_max = 8u64;
    let tol = 1e-9;
    let periodic = periodic_point_search(action, space, period_max, tol, &mut budget)?;
    let eps_dense = diam / 4.0;
    if periodic.len() >= 3 && periodic_is_dense(space, &periodic, eps_dense)? {
        r.set(
            Property::PeriodicDense,
            Verdict::witnessed(format!(
                "{} periodic orbits of period at most {period_max} form an eps={eps_dense} dense set",
                periodic.len()
            ))
            .with_meta(HorizonMeta {
                eps: Some(eps_dense),
                ..HorizonMeta::default()
            }),
        );
    } else if periodic.is_empty() {
        r.set(
            Property::PeriodicDense,
            Verdict::unknown(format!(
                "no periodic points found up to period {period_max} at tol={tol}"
            )),
        );
    } else {
        r.set(
            Property::PeriodicDense,
            Verdict::unknown(format!(
                "{} periodic points found, too few or too sparse to witness density",
                periodic.len()
            )),
        );
    }

    // a finite periodic orbit plus observed transitivity rules out
    // minimality at estimation grade
    let partner = if ft.status.at_least_witnessed() {
        Some("a sampled orbit is eps-dense")
    } else if r.status(Property::TT).at_least_witnessed() {
        Some("sampled orbits link every ball pair")
    } else {
        None
    };
    if let (Some(fp), Some(partner)) = (periodic.first(), partner) {
        r.set(
            Property::Minimal,
            Verdict::new(
                Status::Refuted,
                format!(
                    "the periodic orbit at {} ({}) persists while {partner}",
                    fp.point.render(),
                    fp.period
                ),
            ),
        );
    }

    let sens_cands = [diam / 2.0, diam / 4.0, diam / 8.0, diam / 16.0];
    let mut sens_deltas = vec![diam / 2.0];
    while *sens_deltas.last().expect("nonempty ladder") > 1e-6 {
        let next = sens_deltas.last().unwrap() / 2.0;
        sens_deltas.push(next);
    }
    let est = sensitivity_estimate(
        action,
        space,
        &sens_cands,
        &sens_deltas,
        horizon,
        50,
        seed.wrapping_add(1),
        &mut budget,
    )?;
    r.set(Property::Sensitive, est.verdict.clone());
    r.sensitivity = Some(est);

    let eq_ladder = scale_ladder(diam / 2.0, cfg.eps_levels.max(1));
    let ap_eps = [0.4 * diam, 0.2 * diam, 0.1 * diam];
    let mut probe_pts = space.sample(seed.wrapping_add(2), 6);
    if let Some(fp) = periodic.first() {
        probe_pts.push(fp.point.clone());
    }
    let mut ap_all = !probe_pts.is_empty();
    let mut eq_witness = None;
    let mut eq_failure: Option<Verdict> = None;
    for pt in &probe_pts {
        let eq = equicontinuity_at(
            action,
            space,
            pt,
            &eq_ladder,
            &eq_ladder,
            horizon,
            4,
            &mut budget,
        )?;
        let tv = find_transitive_from(action, space, pt, eps_tt, ft_horizon, &mut budget)?;
        let (ap, certs) = almost_periodic_at(action, space, pt, &ap_eps, horizon, &mut budget)?;
        ap_all &= ap.status.at_least_witnessed();
        r.syndetic.extend(certs);
        if eq.status.at_least_witnessed() && eq_witness.is_none() {
            eq_witness = Some(pt.clone());
        }
        if eq.status == Status::Refuted && eq_failure.is_none() {
            eq_failure = Some(eq.clone());
        }
        r.points.push(PointProbe {
            point: pt.render(),
            equicontinuity: eq.status,
            transitive: tv.status,
        });
    }

    if action.flags.isometric {
        r.set(
            Property::Equicontinuous,
            Verdict::structural(
                Status::Proven,
                "every acting map is an isometry, so any delta equal to eps works uniformly",
            ),
        );
    } else if let Some(eq) = eq_failure {
        let meta = eq.meta.clone();
        r.set(
            Property::Equicontinuous,
            Verdict::new(
                Status::Refuted,
                format!("a sampled point fails the ladder: {}", eq.witness),
            )
            .with_meta(meta),
        );
    }
    if let Some(pt) = eq_witness {
        if !action.flags.isometric {
            r.upgrade(
                Property::EqNonempty,
                Verdict::witnessed(format!(
                    "the sampled point {} passed every ladder rung",
                    pt.render()
                )),
            );
        }
    }

    if ap_all {
        r.upgrade(
            Property::BronsteinDense,
            Verdict::witnessed(format!(
                "all {} sampled points return syndetically to every tested ball",
                probe_pts.len()
            )),
        );
        if ft.status.at_least_witnessed() || r.status(Property::TT).at_least_witnessed() {
            r.upgrade(
                Property::Minimal,
                Verdict::witnessed(format!(
                    "almost periodic at all {} sampled points while a sampled orbit is eps-dense",
                    probe_pts.len()
                )),
            );
        }
    }

    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;

    fn status_of(report: &Report, p: Property) -> Status {
        report.classification.status(p)
    }

    #[test]
    fn rotation_is_the_equicontinuous_minimal_example() {
        let report = analyze(&registry::builtin("rotation").unwrap(), &AnalysisConfig::default())
            .unwrap();
        assert_eq!(status_of(&report, Property::Equicontinuous), Status::Proven);
        assert_eq!(status_of(&report, Property::Sensitive), Status::Refuted);
        assert_eq!(status_of(&report, Property::Minimal), Status::Witnessed);
        assert_eq!(status_of(&report, Property::TT), Status::Witnessed);
        assert_eq!(
            status_of(&report, Property::PeriodicDense),
            Status::Unknown
        );
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn doubling_is_the_sensitive_m_system_example() {
        let report = analyze(&registry::builtin("doubling").unwrap(), &AnalysisConfig::default())
            .unwrap();
        assert_eq!(status_of(&report, Property::TT), Status::Witnessed);
        assert_eq!(
            status_of(&report, Property::PeriodicDense),
            Status::Witnessed
        );
        assert_eq!(status_of(&report, Property::Minimal), Status::Refuted);
        assert_eq!(status_of(&report, Property::Sensitive), Status::Witnessed);
        assert_eq!(status_of(&report, Property::MSystem), Status::Witnessed);
        assert_eq!(status_of(&report, Property::PSystem), Status::Witnessed);
        let est = report.classification.sensitivity.as_ref().unwrap();
        assert_eq!(est.constant, Some(0.25));
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn identity_stays_mostly_unknown() {
        let report = analyze(&registry::builtin("identity").unwrap(), &AnalysisConfig::default())
            .unwrap();
        for p in [
            Property::TT,
            Property::PT,
            Property::DPT,
            Property::Minimal,
            Property::MSystem,
            Property::PSystem,
        ] {
            assert_eq!(status_of(&report, p), Status::Unknown, "{}", p.name());
        }
        assert_eq!(status_of(&report, Property::Equicontinuous), Status::Proven);
        assert_eq!(status_of(&report, Property::Sensitive), Status::Refuted);
        assert_eq!(
            status_of(&report, Property::PeriodicDense),
            Status::Witnessed
        );
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn golden_mean_shift_goes_through_the_exact_path() {
        let report = analyze(
            &registry::builtin("golden_mean_shift").unwrap(),
            &AnalysisConfig::default(),
        )
        .unwrap();
        assert_eq!(status_of(&report, Property::TT), Status::Proven);
        assert_eq!(status_of(&report, Property::MSystem), Status::Proven);
        assert_eq!(status_of(&report, Property::Minimal), Status::Refuted);
        assert_eq!(status_of(&report, Property::Sensitive), Status::Proven);
        let est = report.classification.sensitivity.as_ref().unwrap();
        assert_eq!(est.constant, Some(0.5));
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn flow_keeps_its_isometric_face() {
        let report = analyze(
            &registry::builtin("torus_linear_flow").unwrap(),
            &AnalysisConfig::default(),
        )
        .unwrap();
        assert_eq!(status_of(&report, Property::Equicontinuous), Status::Proven);
        assert_eq!(status_of(&report, Property::Sensitive), Status::Refuted);
        assert_eq!(status_of(&report, Property::PT), Status::Witnessed);
        assert_eq!(status_of(&report, Property::TT), Status::Unknown);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn run_analysis_sorts_by_name_and_repeats_exactly() {
        let systems = vec![
            registry::builtin("rotation").unwrap(),
            registry::builtin("doubling").unwrap(),
            registry::builtin("golden_mean_shift").unwrap(),
        ];
        let cfg = AnalysisConfig::default();
        let a = run_analysis(&systems, &cfg).unwrap();
        let b = run_analysis(&systems, &cfg).unwrap();
        let names: Vec<&str> = a.iter().map(|r| r.classification.system.as_str()).collect();
        assert_eq!(names, vec!["doubling", "golden_mean_shift", "rotation"]);
        assert_eq!(a, b);
    }
}
