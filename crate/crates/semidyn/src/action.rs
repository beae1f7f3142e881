//! Semigroup actions on metric systems.
//!
//! Three index shapes cover the toolkit: `Cascade` (iterates of one map,
//! indexed 1, 2, ..), `FinitelyGenerated` (nonempty composition words over
//! a finite generator list), and `SampledFlow` (a one-parameter flow
//! observed on a uniform time grid). Element indices are data, so orbits
//! and certificates can name the exact element that produced a state.
//!
//! Structural flags ride along with the action. They assert facts about
//! the *acting semigroup* rather than any single map: whether the
//! complement of a principal left ideal is finite (`f_semigroup`) or at
//! least relatively compact (`c_semigroup`), whether the semigroup is a
//! group, and whether every element acts isometrically. The classifiers
//! trust these flags, so constructors only set what the shape guarantees.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::space::{wrap, MetricSystem, Point};
use std::fmt;

/// Hard default cap on act evaluations for one orbit or estimator call.
pub const EVAL_CAP: u64 = 10_000_000;

/// A single self-map of a state space.
#[derive(Debug, Clone, PartialEq)]
pub enum MapFn {
    /// x -> 1 - |1 - 2x| on [0, 1].
    Tent,
    /// x -> 2x on the circle.
    Doubling,
    /// x -> 4x(1 - x) on [0, 1].
    Logistic4,
    /// x -> x + alpha on the circle.
    Rotation(f64),
    /// (x, y) -> (2x + y, x + y) on the torus.
    CatMap,
    Identity,
    /// One expression per coordinate, evaluated simultaneously.
    Exprs(Vec<Expr>),
}

impl MapFn {
    pub fn apply(&self, p: &Point) -> Point {
        match (self, p) {
            (MapFn::Tent, Point::Interval(x)) => Point::Interval(1.0 - (1.0 - 2.0 * x).abs()),
            (MapFn::Doubling, Point::Circle(x)) => Point::Circle(wrap(2.0 * x)),
            (MapFn::Logistic4, Point::Interval(x)) => {
                Point::Interval((4.0 * x * (1.0 - x)).clamp(0.0, 1.0))
            }
            (MapFn::Rotation(a), Point::Circle(x)) => Point::Circle(wrap(x + a)),
            (MapFn::CatMap, Point::Torus(x, y)) => Point::Torus(wrap(2.0 * x + y), wrap(x + y)),
            (MapFn::Identity, p) => p.clone(),
            (MapFn::Exprs(es), Point::Interval(x)) if es.len() == 1 => {
                Point::Interval(es[0].eval(&[*x]).clamp(0.0, 1.0))
            }
            (MapFn::Exprs(es), Point::Circle(x)) if es.len() == 1 => {
                Point::Circle(wrap(es[0].eval(&[*x])))
            }
            (MapFn::Exprs(es), Point::Torus(x, y)) if es.len() == 2 => {
                let c = [*x, *y];
                Point::Torus(wrap(es[0].eval(&c)), wrap(es[1].eval(&c)))
            }
            _ => panic!("map/point geometry mismatch"),
        }
    }

    /// Whether the map is known to preserve the metric exactly.
    pub fn is_isometry(&self) -> bool {
        matches!(self, MapFn::Rotation(_) | MapFn::Identity)
    }
}

/// Flow maps evaluated at arbitrary nonnegative times.
#[derive(Debug, Clone, PartialEq)]
pub enum FlowMap {
    /// (x, y) -> (x + t w1, y + t w2) on the torus.
    TorusLinear { omega1: f64, omega2: f64 },
}

impl FlowMap {
    pub fn at(&self, t: f64, p: &Point) -> Point {
        match (self, p) {
            (FlowMap::TorusLinear { omega1, omega2 }, Point::Torus(x, y)) => {
                Point::Torus(wrap(x + t * omega1), wrap(y + t * omega2))
            }
            _ => panic!("flow/point geometry mismatch"),
        }
    }
}

/// Index of one semigroup element.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementIndex {
    /// n-fold iterate of a cascade's map, n >= 1.
    Iterate(u64),
    /// Flow time, a positive multiple region of the sampling step.
    Time(f64),
    /// Nonempty composition word; the last generator acts first.
    Word(Vec<u8>),
}

impl ElementIndex {
    /// Semigroup operation on indices: composition of the elements.
    pub fn compose(&self, rhs: &ElementIndex) -> ElementIndex {
        match (self, rhs) {
            (ElementIndex::Iterate(a), ElementIndex::Iterate(b)) => ElementIndex::Iterate(a + b),
            (ElementIndex::Time(a), ElementIndex::Time(b)) => ElementIndex::Time(a + b),
            (ElementIndex::Word(a), ElementIndex::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                ElementIndex::Word(w)
            }
            _ => panic!("composing indices of different action shapes"),
        }
    }

    /// Scalar position of the index on its one-dimensional scale, used for
    /// gap statistics. Words are measured by length.
    pub fn position(&self) -> f64 {
        match self {
            ElementIndex::Iterate(n) => *n as f64,
            ElementIndex::Time(t) => *t,
            ElementIndex::Word(w) => w.len() as f64,
        }
    }
}

impl fmt::Display for ElementIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementIndex::Iterate(n) => write!(f, "n={n}"),
            ElementIndex::Time(t) => write!(f, "t={t}"),
            ElementIndex::Word(w) => {
                write!(f, "w=")?;
                for (i, g) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

/// Structural facts about the acting semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralFlags {
    /// Complement of every principal left ideal is finite.
    pub f_semigroup: bool,
    /// Complement of every principal left ideal has compact closure.
    pub c_semigroup: bool,
    pub group: bool,
    /// Every element preserves the metric exactly.
    pub isometric: bool,
    /// The phase space is completely metrizable and separable.
    pub polish: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionKind {
    Cascade { map: MapFn },
    FinitelyGenerated { generators: Vec<MapFn> },
    SampledFlow { flow: FlowMap, dt: f64 },
}

/// A semigroup action: an index shape, the maps, and structural flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupAction {
    pub kind: ActionKind,
    pub flags: StructuralFlags,
}

impl SemigroupAction {
    /// Iterates of a single map. The cyclic semigroup generated by one
    /// element leaves a finite complement behind every principal ideal, so
    /// the F flag (and with it the C flag) always holds here.
    pub fn cascade(map: MapFn) -> Self {
        let isometric = map.is_isometry();
        SemigroupAction {
            kind: ActionKind::Cascade { map },
            flags: StructuralFlags {
                f_semigroup: true,
                c_semigroup: true,
                group: false,
                isometric,
                polish: true,
            },
        }
    }

    /// Free composition words over finitely many generators; also an
    /// F-semigroup since only the finitely many short words escape a
    /// principal ideal's tail.
    pub fn finitely_generated(generators: Vec<MapFn>) -> Self {
        assert!(!generators.is_empty() && generators.len() <= 36);
        let isometric = generators.iter().all(MapFn::is_isometry);
        SemigroupAction {
            kind: ActionKind::FinitelyGenerated { generators },
            flags: StructuralFlags {
                f_semigroup: true,
                c_semigroup: true,
                group: false,
                isometric,
                polish: true,
            },
        }
    }

    /// A one-parameter flow sampled on the grid dt, 2dt, ... The escaping
    /// set [0, s0) of a principal ideal is infinite but bounded, so only
    /// the C flag holds. The compact tail is observed on the same grid as
    /// everything else; the reference tail length is one time unit.
    pub fn sampled_flow(flow: FlowMap, dt: f64) -> Self {
        assert!(dt > 0.0 && dt.is_finite());
        let isometric = matches!(flow, FlowMap::TorusLinear { .. });
        SemigroupAction {
            kind: ActionKind::SampledFlow { flow, dt },
            flags: StructuralFlags {
                f_semigroup: false,
                c_semigroup: true,
                group: false,
                isometric,
                polish: true,
            },
        }
    }

    /// Apply the element at `index` to `p`. Cost is linear in the iterate
    /// count or word length; flows evaluate in constant time.
    pub fn act(&self, index: &ElementIndex, p: &Point) -> Result<Point> {
        match (&self.kind, index) {
            (ActionKind::Cascade { map }, ElementIndex::Iterate(n)) => {
                if *n == 0 {
                    return Err(Error::InvalidIndex("cascade iterates start at 1".into()));
                }
                let mut q = p.clone();
                for _ in 0..*n {
                    q = map.apply(&q);
                }
                Ok(q)
            }
            (ActionKind::FinitelyGenerated { generators }, ElementIndex::Word(w)) => {
                if w.is_empty() {
                    return Err(Error::InvalidIndex("empty composition word".into()));
                }
                let mut q = p.clone();
                // rightmost generator acts first
                for g in w.iter().rev() {
                    let g = generators
                        .get(*g as usize)
                        .ok_or_else(|| Error::InvalidIndex(format!("no generator {g}")))?;
                    q = g.apply(&q);
                }
                Ok(q)
            }
            (ActionKind::SampledFlow { flow, dt }, ElementIndex::Time(t)) => {
                if !t.is_finite() || *t < *dt {
                    return Err(Error::InvalidIndex(format!(
                        "flow time {t} below sampling step {dt}"
                    )));
                }
                Ok(flow.at(*t, p))
            }
            _ => Err(Error::InvalidIndex(
                "index shape does not match action shape".into(),
            )),
        }
    }

    /// The finite, deterministically ordered element sample used by every
    /// estimator: iterates `1..=horizon`, times `dt..=horizon*dt`, or all
    /// nonempty words of length at most `horizon` ordered by length then
    /// lexicographically.
    pub fn sample_elements(&self, horizon: u64) -> Vec<ElementIndex> {
        match &self.kind {
            ActionKind::Cascade { .. } => {
                (1..=horizon).map(ElementIndex::Iterate).collect()
            }
            ActionKind::SampledFlow { dt, .. } => (1..=horizon)
                .map(|k| ElementIndex::Time(k as f64 * dt))
                .collect(),
            ActionKind::FinitelyGenerated { generators } => {
                let k = generators.len() as u64;
                let mut out = Vec::new();
                let mut layer: Vec<Vec<u8>> = vec![vec![]];
                for _ in 0..horizon {
                    let mut next = Vec::with_capacity(layer.len() * k as usize);
                    for w in &layer {
                        for g in 0..k as u8 {
                            let mut v = w.clone();
                            v.push(g);
                            next.push(v);
                        }
                    }
                    out.extend(next.iter().cloned().map(ElementIndex::Word));
                    layer = next;
                    if out.len() as u64 > EVAL_CAP {
                        break;
                    }
                }
                out
            }
        }
    }

    /// Orbit of `p` over `sample_elements(horizon)`.
    ///
    /// Cascades and flows are advanced incrementally, one map application
    /// per element, so the total cost is `horizon` evaluations. The strict
    /// cap `max_evals` turns runaway requests into an error instead of a
    /// hang. Extending the horizon extends the orbit without changing the
    /// shared prefix.
    pub fn orbit(&self, p: &Point, horizon: u64, max_evals: u64) -> Result<OrbitSegment> {
        let indices = self.sample_elements(horizon);
        if indices.len() as u64 > max_evals {
            return Err(Error::ResourceCap {
                op: "orbit",
                cap: max_evals,
                detail: format!("{} elements requested", indices.len()),
            });
        }
        let mut states = Vec::with_capacity(indices.len());
        match &self.kind {
            ActionKind::Cascade { map } => {
                let mut q = p.clone();
                for _ in 0..horizon {
                    q = map.apply(&q);
                    states.push(q.clone());
                }
            }
            ActionKind::SampledFlow { .. } => {
                for idx in &indices {
                    states.push(self.act(idx, p)?);
                }
            }
            ActionKind::FinitelyGenerated { .. } => {
                for idx in &indices {
                    states.push(self.act(idx, p)?);
                }
            }
        }
        Ok(OrbitSegment {
            base: p.clone(),
            indices,
            states,
        })
    }

    /// Space geometry check helper for constructors in the registry.
    pub fn admits(&self, space: &MetricSystem, p: &Point) -> bool {
        space.contains(p)
    }
}

/// A computed orbit: the base point, the element indices in sample order,
/// and the corresponding states.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSegment {
    pub base: Point,
    pub indices: Vec<ElementIndex>,
    pub states: Vec<Point>,
}

impl OrbitSegment {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    fn interval_val(p: &Point) -> f64 {
        match p {
            Point::Interval(x) => *x,
            _ => panic!("not interval"),
        }
    }

    fn circle_val(p: &Point) -> f64 {
        match p {
            Point::Circle(x) => *x,
            _ => panic!("not circle"),
        }
    }

    #[test]
    fn tent_iterates() {
        let a = SemigroupAction::cascade(MapFn::Tent);
        let x = Point::Interval(0.25);
        let y = a.act(&ElementIndex::Iterate(1), &x).unwrap();
        assert!(close(interval_val(&y), 0.5));
        let z = a.act(&ElementIndex::Iterate(2), &x).unwrap();
        assert!(close(interval_val(&z), 1.0));
        let w = a.act(&ElementIndex::Iterate(3), &x).unwrap();
        assert!(close(interval_val(&w), 0.0));
    }

    #[test]
    fn cat_map_single_step() {
        let a = SemigroupAction::cascade(MapFn::CatMap);
        let p = Point::Torus(0.5, 0.5);
        let q = a.act(&ElementIndex::Iterate(1), &p).unwrap();
        match q {
            Point::Torus(x, y) => {
                assert!(close(x, 0.5));
                assert!(close(y, 0.0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rotation_three_steps() {
        let alpha = 0.137;
        let a = SemigroupAction::cascade(MapFn::Rotation(alpha));
        let y = a
            .act(&ElementIndex::Iterate(3), &Point::Circle(0.1))
            .unwrap();
        assert!(close(circle_val(&y), wrap(0.1 + 3.0 * alpha)));
    }

    #[test]
    fn zero_iterate_is_rejected() {
        let a = SemigroupAction::cascade(MapFn::Tent);
        let err = a.act(&ElementIndex::Iterate(0), &Point::Interval(0.2));
        assert!(matches!(err, Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn flow_time_below_step_is_rejected() {
        let a = SemigroupAction::sampled_flow(
            FlowMap::TorusLinear {
                omega1: 1.0,
                omega2: 2.0f64.sqrt(),
            },
            0.01,
        );
        let err = a.act(&ElementIndex::Time(0.005), &Point::Torus(0.0, 0.0));
        assert!(matches!(err, Err(Error::InvalidIndex(_))));
        assert!(a.act(&ElementIndex::Time(0.01), &Point::Torus(0.0, 0.0)).is_ok());
    }

    #[test]
    fn doubling_orbit_values() {
        let a = SemigroupAction::cascade(MapFn::Doubling);
        let o = a.orbit(&Point::Circle(0.3), 3, EVAL_CAP).unwrap();
        let got: Vec<f64> = o.states.iter().map(circle_val).collect();
        assert!(close(got[0], 0.6));
        assert!(close(got[1], 0.2));
        assert!(close(got[2], 0.4));
        assert_eq!(
            o.indices,
            vec![
                ElementIndex::Iterate(1),
                ElementIndex::Iterate(2),
                ElementIndex::Iterate(3)
            ]
        );
    }

    #[test]
    fn cat_orbit_period_three() {
        let a = SemigroupAction::cascade(MapFn::CatMap);
        let o = a.orbit(&Point::Torus(0.5, 0.5), 3, EVAL_CAP).unwrap();
        let vals: Vec<(f64, f64)> = o
            .states
            .iter()
            .map(|p| match p {
                Point::Torus(x, y) => (*x, *y),
                _ => panic!(),
            })
            .collect();
        assert!(close(vals[0].0, 0.5) && close(vals[0].1, 0.0));
        assert!(close(vals[1].0, 0.0) && close(vals[1].1, 0.5));
        assert!(close(vals[2].0, 0.5) && close(vals[2].1, 0.5));
    }

    #[test]
    fn quarter_rotation_orbit() {
        let a = SemigroupAction::cascade(MapFn::Rotation(0.25));
        let o = a.orbit(&Point::Circle(0.0), 4, EVAL_CAP).unwrap();
        let got: Vec<f64> = o.states.iter().map(circle_val).collect();
        for (g, want) in got.iter().zip([0.25, 0.5, 0.75, 0.0]) {
            assert!(close(*g, want));
        }
    }

    #[test]
    fn orbit_prefix_consistency() {
        let a = SemigroupAction::cascade(MapFn::Logistic4);
        let p = Point::Interval(0.37);
        let short = a.orbit(&p, 50, EVAL_CAP).unwrap();
        let long = a.orbit(&p, 120, EVAL_CAP).unwrap();
        assert_eq!(&long.states[..50], &short.states[..]);
        assert_eq!(&long.indices[..50], &short.indices[..]);

        let f = SemigroupAction::sampled_flow(
            FlowMap::TorusLinear {
                omega1: 1.0,
                omega2: 2.0f64.sqrt(),
            },
            0.01,
        );
        let p = Point::Torus(0.2, 0.7);
        let short = f.orbit(&p, 50, EVAL_CAP).unwrap();
        let long = f.orbit(&p, 120, EVAL_CAP).unwrap();
        assert_eq!(&long.states[..50], &short.states[..]);
        assert_eq!(&long.indices[..50], &short.indices[..]);
    }

    #[test]
    fn orbit_respects_eval_cap() {
        let a = SemigroupAction::cascade(MapFn::Doubling);
        let err = a.orbit(&Point::Circle(0.1), 1000, 10);
        assert!(matches!(err, Err(Error::ResourceCap { op: "orbit", .. })));
    }

    #[test]
    fn word_enumeration_is_length_then_lex() {
        let a = SemigroupAction::finitely_generated(vec![
            MapFn::Rotation(0.1),
            MapFn::Rotation(0.23),
        ]);
        let idx = a.sample_elements(2);
        let words: Vec<Vec<u8>> = idx
            .iter()
            .map(|i| match i {
                ElementIndex::Word(w) => w.clone(),
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            words,
            vec![
                vec![0],
                vec![1],
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
    }

    #[test]
    fn semigroup_law_on_samples() {
        let cases: Vec<SemigroupAction> = vec![
            SemigroupAction::cascade(MapFn::Tent),
            SemigroupAction::cascade(MapFn::CatMap),
            SemigroupAction::sampled_flow(
                FlowMap::TorusLinear {
                    omega1: 1.0,
                    omega2: 2.0f64.sqrt(),
                },
                0.01,
            ),
            SemigroupAction::finitely_generated(vec![
                MapFn::Rotation(0.381966),
                MapFn::Rotation(0.7),
            ]),
        ];
        for a in &cases {
            let space = match &a.kind {
                ActionKind::Cascade { map: MapFn::Tent } => {
                    MetricSystem::interval("i", 0.0, 1.0)
                }
                ActionKind::Cascade { .. } => MetricSystem::torus("t"),
                ActionKind::SampledFlow { .. } => MetricSystem::torus("t"),
                ActionKind::FinitelyGenerated { .. } => MetricSystem::circle("c"),
            };
            let elems = a.sample_elements(3);
            let pts = space.sample(5, 8);
            for p in &pts {
                if !space.contains(p) {
                    continue;
                }
                for s in elems.iter().take(6) {
                    for t in elems.iter().take(6) {
                        let st = s.compose(t);
                        let via_two = a.act(s, &a.act(t, p).unwrap()).unwrap();
                        let direct = a.act(&st, p).unwrap();
                        assert!(
                            space.distance(&via_two, &direct) < 1e-9,
                            "law fails for {s} after {t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cascade_flags_include_f_and_c() {
        let a = SemigroupAction::cascade(MapFn::Doubling);
        assert!(a.flags.f_semigroup);
        assert!(a.flags.c_semigroup);
        assert!(!a.flags.isometric);
        let r = SemigroupAction::cascade(MapFn::Rotation(0.3));
        assert!(r.flags.isometric);
        let f = SemigroupAction::sampled_flow(
            FlowMap::TorusLinear {
                omega1: 1.0,
                omega2: 1.5,
            },
            0.01,
        );
        assert!(!f.flags.f_semigroup);
        assert!(f.flags.c_semigroup);
    }
}
