//! Compact metric state spaces.
//!
//! Four point geometries cover every built-in system: a closed interval,
//! the unit circle, the two-torus, and truncated one-sided symbol
//! sequences. A [`MetricSystem`] bundles a geometry with the metadata the
//! classifiers need: a diameter hint for scale ladders and a perfectness
//! flag (no isolated points).

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Hard cap on epsilon-net size; finer requests are refused rather than
/// silently truncated.
pub const NET_CAP: u64 = 1_000_000;

/// A state of one of the supported geometries.
///
/// Circle and torus coordinates are kept canonical in `[0, 1)`. Sequences
/// are truncated at the owning space's depth; coordinates beyond the
/// truncation are unobservable through the metric.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Interval(f64),
    Circle(f64),
    Torus(f64, f64),
    Seq(Vec<u8>),
}

impl Point {
    /// Short deterministic rendering used in witness strings.
    pub fn render(&self) -> String {
        match self {
            Point::Interval(x) => format!("{x}"),
            Point::Circle(x) => format!("{x}"),
            Point::Torus(x, y) => format!("({x},{y})"),
            Point::Seq(w) => w.iter().map(|s| char::from(b'0' + s)).collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Reduce to the canonical circle coordinate in `[0, 1)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can return 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on the unit circle, at most 1/2.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Closed interval `[lo, hi]` with the absolute-value metric.
    Interval { lo: f64, hi: f64 },
    /// Unit circle `R/Z` with the wrap-around metric.
    Circle,
    /// Two-torus with the maximum of the coordinate circle metrics.
    Torus,
    /// Words of length `depth` over `{0, .., alphabet-1}`, metric
    /// `2^-(first differing index)`, zero when no index below `depth`
    /// differs.
    SymbolSeq { alphabet: u8, depth: usize },
}

/// A named compact metric space with classifier metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSystem {
    pub name: String,
    pub geometry: Geometry,
    /// Upper bound on the diameter; scale ladders start here.
    pub diameter_hint: f64,
    /// Declared absence of isolated points.
    pub perfect: bool,
}

impl MetricSystem {
    pub fn interval(name: &str, lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "empty interval");
        MetricSystem {
            name: name.to_string(),
            geometry: Geometry::Interval { lo, hi },
            diameter_hint: hi - lo,
            perfect: true,
        }
    }

    pub fn circle(name: &str) -> Self {
        MetricSystem {
            name: name.to_string(),
            geometry: Geometry::Circle,
            diameter_hint: 0.5,
            perfect: true,
        }
    }

    pub fn torus(name: &str) -> Self {
        MetricSystem {
            name: name.to_string(),
            geometry: Geometry::Torus,
            diameter_hint: 0.5,
            perfect: true,
        }
    }

    pub fn symbol_seq(name: &str, alphabet: u8, depth: usize) -> Self {
        assert!(alphabet >= 2 && depth >= 1);
        MetricSystem {
            name: name.to_string(),
            geometry: Geometry::SymbolSeq { alphabet, depth },
            diameter_hint: 1.0,
            perfect: true,
        }
    }

    /// Metric. Total on pairs of points of this space's geometry; mixing
    /// geometries is a programming error and panics.
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        match (&self.geometry, a, b) {
            (Geometry::Interval { .. }, Point::Interval(x), Point::Interval(y)) => (x - y).abs(),
            (Geometry::Circle, Point::Circle(x), Point::Circle(y)) => circle_dist(*x, *y),
            (Geometry::Torus, Point::Torus(x1, x2), Point::Torus(y1, y2)) => {
                circle_dist(*x1, *y1).max(circle_dist(*x2, *y2))
            }
            (Geometry::SymbolSeq { depth, .. }, Point::Seq(u), Point::Seq(v)) => {
                for i in 0..*depth {
                    let a = u.get(i).copied().unwrap_or(0);
                    let b = v.get(i).copied().unwrap_or(0);
                    if a != b {
                        return 0.5f64.powi(i as i32); // 2^-i
                    }
                }
                0.0
            }
            _ => panic!("point geometry mismatch in {}", self.name),
        }
    }

    /// True when the point belongs to this geometry (and, for intervals,
    /// lies inside the bounds).
    pub fn contains(&self, p: &Point) -> bool {
        match (&self.geometry, p) {
            (Geometry::Interval { lo, hi }, Point::Interval(x)) => *x >= *lo && *x <= *hi,
            (Geometry::Circle, Point::Circle(x)) => (0.0..1.0).contains(x),
            (Geometry::Torus, Point::Torus(x, y)) => {
                (0.0..1.0).contains(x) && (0.0..1.0).contains(y)
            }
            (Geometry::SymbolSeq { alphabet, depth }, Point::Seq(w)) => {
                w.len() == *depth && w.iter().all(|s| s < alphabet)
            }
            _ => false,
        }
    }

    /// Finite set of points such that every point of the space lies within
    /// `eps` of some member.
    ///
    /// Interval nets use cell centers, circle and torus nets use uniform
    /// grids, and sequence nets fix the first `ceil(log2(1/eps)) + 1`
    /// coordinates and enumerate all words on them. Requests finer than
    /// [`NET_CAP`] points are refused.
    pub fn epsilon_net(&self, eps: f64) -> Result<Vec<Point>> {
        if eps <= 0.0 || !eps.is_finite() {
            return Err(Error::BadScale {
                name: "eps",
                value: eps,
            });
        }
        let cap_check = |n: u64, detail: String| -> Result<u64> {
            if n > NET_CAP {
                Err(Error::ResourceCap {
                    op: "epsilon_net",
                    cap: NET_CAP,
                    detail,
                })
            } else {
                Ok(n)
            }
        };
        match &self.geometry {
            Geometry::Interval { lo, hi } => {
                let n = ((hi - lo) / eps).ceil().max(1.0) as u64;
                let n = cap_check(n, format!("{n} cells"))?;
                let w = (hi - lo) / n as f64;
                Ok((0..n)
                    .map(|k| Point::Interval(lo + w * (k as f64 + 0.5)))
                    .collect())
            }
            Geometry::Circle => {
                let n = (1.0 / eps).ceil().max(1.0) as u64;
                let n = cap_check(n, format!("{n} grid points"))?;
                Ok((0..n).map(|k| Point::Circle(k as f64 / n as f64)).collect())
            }
            Geometry::Torus => {
                let n = (1.0 / eps).ceil().max(1.0) as u64;
                cap_check(n * n, format!("{n}x{n} grid"))?;
                let mut pts = Vec::with_capacity((n * n) as usize);
                for i in 0..n {
                    for j in 0..n {
                        pts.push(Point::Torus(i as f64 / n as f64, j as f64 / n as f64));
                    }
                }
                Ok(pts)
            }
            Geometry::SymbolSeq { alphabet, depth } => {
                // fixing m symbols leaves every completion within 2^-m < eps
                let m = if eps >= 1.0 {
                    1
                } else {
                    ((1.0 / eps).log2().ceil() as usize + 1).min(*depth)
                };
                let count = (*alphabet as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
                cap_check(count, format!("{alphabet}^{m} cylinders"))?;
                let mut pts = Vec::with_capacity(count as usize);
                let mut word = vec![0u8; *depth];
                loop {
                    pts.push(Point::Seq(word.clone()));
                    // increment the first m coordinates as a base-k counter
                    let mut i = m;
                    loop {
                        if i == 0 {
                            return Ok(pts);
                        }
                        i -= 1;
                        if word[i] + 1 < *alphabet {
                            word[i] += 1;
                            break;
                        }
                        word[i] = 0;
                    }
                }
            }
        }
    }

    /// Deterministic uniform sample stream. Draws are sequential, so the
    /// first `n` points of `sample(seed, m)` with `m >= n` equal
    /// `sample(seed, n)`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_one(&mut rng)).collect()
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng) -> Point {
        match &self.geometry {
            Geometry::Interval { lo, hi } => Point::Interval(rng.gen_range(*lo..*hi)),
            Geometry::Circle => Point::Circle(rng.gen_range(0.0..1.0)),
            Geometry::Torus => {
                let x = rng.gen_range(0.0..1.0);
                let y = rng.gen_range(0.0..1.0);
                Point::Torus(x, y)
            }
            Geometry::SymbolSeq { alphabet, depth } => {
                Point::Seq((0..*depth).map(|_| rng.gen_range(0..*alphabet)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn circle_metric_wraps() {
        let s = MetricSystem::circle("c");
        let d = s.distance(&Point::Circle(0.95), &Point::Circle(0.05));
        assert!(close(d, 0.1));
        assert!(close(s.distance(&Point::Circle(0.0), &Point::Circle(0.5)), 0.5));
    }

    #[test]
    fn torus_metric_is_sup_of_coordinates() {
        let s = MetricSystem::torus("t");
        let d = s.distance(&Point::Torus(0.1, 0.9), &Point::Torus(0.2, 0.1));
        assert!(close(d, 0.2));
    }

    #[test]
    fn seq_metric_is_two_to_minus_first_difference() {
        let s = MetricSystem::symbol_seq("s", 2, 8);
        let a = Point::Seq(vec![0, 1, 1, 0, 0, 0, 0, 0]);
        let b = Point::Seq(vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert!(close(s.distance(&a, &b), 0.25));
        assert!(close(s.distance(&a, &a), 0.0));
        let c = Point::Seq(vec![1, 1, 1, 0, 0, 0, 0, 0]);
        assert!(close(s.distance(&a, &c), 1.0));
    }

    #[test]
    fn circle_net_at_quarter_is_the_four_grid() {
        let s = MetricSystem::circle("c");
        let net = s.epsilon_net(0.25).unwrap();
        let got: Vec<f64> = net
            .iter()
            .map(|p| match p {
                Point::Circle(x) => *x,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got, vec![0.0, 0.25, 0.5, 0.75]);
        // every circle point is within 0.125 of the grid, so within eps
        for k in 0..1000 {
            let x = Point::Circle(k as f64 / 1000.0);
            let best = net
                .iter()
                .map(|p| s.distance(&x, p))
                .fold(f64::INFINITY, f64::min);
            assert!(best <= 0.125 + 1e-12);
        }
    }

    #[test]
    fn interval_net_at_half_is_the_two_cell_centers() {
        let s = MetricSystem::interval("i", 0.0, 1.0);
        let net = s.epsilon_net(0.5).unwrap();
        let got: Vec<f64> = net
            .iter()
            .map(|p| match p {
                Point::Interval(x) => *x,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got, vec![0.25, 0.75]);
    }

    #[test]
    fn seq_net_fixes_enough_coordinates() {
        let s = MetricSystem::symbol_seq("s", 2, 3);
        // eps = 0.3 fixes ceil(log2(1/0.3)) + 1 = 3 coordinates: all 8 words
        let net = s.epsilon_net(0.3).unwrap();
        assert_eq!(net.len(), 8);
        for p in &net {
            assert!(s.contains(p));
        }
    }

    #[test]
    fn net_coverage_holds_on_random_points() {
        for (space, eps) in [
            (MetricSystem::interval("i", 0.0, 1.0), 0.13),
            (MetricSystem::circle("c"), 0.09),
            (MetricSystem::torus("t"), 0.21),
            (MetricSystem::symbol_seq("s", 2, 16), 0.2),
        ] {
            let net = space.epsilon_net(eps).unwrap();
            for p in space.sample(7, 1000) {
                let best = net
                    .iter()
                    .map(|q| space.distance(&p, q))
                    .fold(f64::INFINITY, f64::min);
                assert!(best <= eps + 1e-12, "{} misses at eps={eps}", space.name);
            }
        }
    }

    #[test]
    fn net_refuses_absurd_resolution() {
        let s = MetricSystem::torus("t");
        match s.epsilon_net(1e-9) {
            Err(Error::ResourceCap { op, .. }) => assert_eq!(op, "epsilon_net"),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic_and_prefix_stable() {
        let s = MetricSystem::torus("t");
        let a = s.sample(99, 10);
        let b = s.sample(99, 10);
        assert_eq!(a, b);
        let long = s.sample(99, 25);
        assert_eq!(&long[..10], &a[..]);
        for p in &a {
            assert!(s.contains(p));
        }
    }

    #[test]
    fn metric_axioms_on_sampled_triples() {
        for space in [
            MetricSystem::interval("i", 0.0, 1.0),
            MetricSystem::circle("c"),
            MetricSystem::torus("t"),
            MetricSystem::symbol_seq("s", 3, 12),
        ] {
            let pts = space.sample(1234, 30);
            for a in &pts {
                assert_eq!(space.distance(a, a), 0.0);
                for b in &pts {
                    let dab = space.distance(a, b);
                    assert!(dab >= 0.0);
                    assert!((dab - space.distance(b, a)).abs() < 1e-15, "symmetry");
                    assert!(dab <= space.diameter_hint + 1e-12, "diameter hint");
                    for c in &pts {
                        let dac = space.distance(a, c);
                        let dcb = space.distance(c, b);
                        assert!(dab <= dac + dcb + 1e-12, "triangle inequality");
                    }
                }
            }
        }
    }
}
