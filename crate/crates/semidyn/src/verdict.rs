//! Four-valued verdicts with witnesses.
//!
//! Every claim the toolkit emits is graded. `Proven` and `Refuted` are
//! reserved for the exact subshift engine and for structural facts such as
//! an action being an isometry. The finite-horizon estimators can only say
//! `Witnessed` (a concrete certificate was found and re-validated) or
//! `Unknown` (the search budget ran out before a certificate appeared).

use std::fmt;

/// Confidence grade of a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Refuted,
    Unknown,
    Witnessed,
    Proven,
}

impl Status {
    /// Positive evidence strength used when chaining implications.
    /// Refuted carries no positive strength.
    pub fn strength(self) -> u8 {
        match self {
            Status::Refuted => 0,
            Status::Unknown => 1,
            Status::Witnessed => 2,
            Status::Proven => 3,
        }
    }

    pub fn at_least_witnessed(self) -> bool {
        self.strength() >= Status::Witnessed.strength()
    }

    /// Conjunction of two graded claims: any refuted conjunct refutes the
    /// conjunction, otherwise the weaker grade wins.
    pub fn meet(self, other: Status) -> Status {
        if self == Status::Refuted || other == Status::Refuted {
            Status::Refuted
        } else if self.strength() <= other.strength() {
            self
        } else {
            other
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Proven => "Proven",
            Status::Witnessed => "Witnessed",
            Status::Unknown => "Unknown",
            Status::Refuted => "Refuted",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "Proven" => Some(Status::Proven),
            "Witnessed" => Some(Status::Witnessed),
            "Unknown" => Some(Status::Unknown),
            "Refuted" => Some(Status::Refuted),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Search-resolution metadata attached to estimator verdicts. A verdict is
/// only meaningful relative to the resolution at which it was computed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HorizonMeta {
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub horizon: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl HorizonMeta {
    pub fn horizon(h: u64) -> Self {
        HorizonMeta {
            horizon: Some(h),
            ..Default::default()
        }
    }

    /// Compact `k=v` rendering, empty string when nothing is set.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if let Some(e) = self.eps {
            parts.push(format!("eps={e}"));
        }
        if let Some(d) = self.delta {
            parts.push(format!("delta={d}"));
        }
        if let Some(h) = self.horizon {
            parts.push(format!("horizon={h}"));
        }
        if let Some(s) = self.samples {
            parts.push(format!("samples={s}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        parts.join(";")
    }
}

/// Where a verdict's evidence came from. Exact answers and structural
/// facts support full-strength reasoning; estimator output and anything
/// chained from it caps at `Witnessed` strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Combinatorial computation on an exact representation.
    Exact,
    /// A declared structural flag, such as the action being isometric.
    Structural,
    /// Finite-horizon search.
    Estimated,
    /// Chained from other verdicts by an implication rule.
    Derived,
}

/// A graded claim together with the evidence behind it.
///
/// The `witness` string is a compact deterministic summary of the concrete
/// certificate (a point, a pair and an element index, a rule derivation).
/// It never contains tabs or newlines so reports can carry it verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: String,
    pub origin: Origin,
    pub meta: HorizonMeta,
}

impl Verdict {
    pub fn new(status: Status, witness: impl Into<String>) -> Self {
        let witness = witness.into();
        debug_assert!(!witness.contains('\t') && !witness.contains('\n'));
        Verdict {
            status,
            witness,
            origin: Origin::Estimated,
            meta: HorizonMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: HorizonMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Verdict::new(Status::Unknown, reason)
    }

    pub fn proven(witness: impl Into<String>) -> Self {
        Verdict::new(Status::Proven, witness).with_origin(Origin::Exact)
    }

    pub fn witnessed(witness: impl Into<String>) -> Self {
        Verdict::new(Status::Witnessed, witness)
    }

    pub fn refuted(witness: impl Into<String>) -> Self {
        Verdict::new(Status::Refuted, witness).with_origin(Origin::Exact)
    }

    pub fn structural(status: Status, witness: impl Into<String>) -> Self {
        Verdict::new(status, witness).with_origin(Origin::Structural)
    }

    /// Strength this verdict contributes as a positive premise. Derived
    /// verdicts already carry the weakest grade along their derivation, so
    /// status strength is the right measure; a raw estimator result is
    /// additionally capped at Witnessed.
    pub fn positive_grade(&self) -> u8 {
        if self.status == Status::Refuted {
            0
        } else if self.origin == Origin::Estimated {
            self.status.strength().min(Status::Witnessed.strength())
        } else {
            self.status.strength()
        }
    }

    /// Strength this verdict contributes as a negative premise; zero
    /// unless the claim is refuted.
    pub fn refutation_grade(&self) -> u8 {
        if self.status != Status::Refuted {
            0
        } else {
            match self.origin {
                Origin::Exact | Origin::Structural | Origin::Derived => 3,
                Origin::Estimated => 2,
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.witness.is_empty() {
            write!(f, "{}", self.status)
        } else {
            write!(f, "{} ({})", self.status, self.witness)
        }
    }
}

/// Return-time structure of an orbit relative to a target ball.
///
/// `returns` lists the element indices (iteration counts or flow times)
/// whose image lands in the ball. `max_gap` is the largest gap in that
/// list, counting the leading gap from zero to the first return and the
/// trailing gap from the last return to the horizon. Bounded gaps are the
/// finite-horizon shadow of a syndetic return-time set.
#[derive(Debug, Clone, PartialEq)]
pub struct SyndeticCertificate {
    pub base: String,
    pub center: String,
    pub radius: f64,
    pub returns: Vec<f64>,
    pub max_gap: f64,
    pub horizon_span: f64,
}

impl SyndeticCertificate {
    /// Largest gap of a return list inside `[0, span]`, boundary gaps
    /// included. An empty list means one gap covering the whole span.
    pub fn gap_of(returns: &[f64], span: f64) -> f64 {
        if returns.is_empty() {
            return span;
        }
        let mut max = returns[0];
        for w in returns.windows(2) {
            max = max.max(w[1] - w[0]);
        }
        max.max(span - returns[returns.len() - 1])
    }
}

/// Output of the sensitivity estimator.
///
/// `constant` is the largest candidate separation for which every sampled
/// base point admitted a certified witness pair. `runner_up` records the
/// next larger candidate and the coverage it reached, as a diagnostic for
/// how close the verdict was to a stronger constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityEstimate {
    pub verdict: Verdict,
    pub constant: Option<f64>,
    pub coverage: f64,
    pub witnesses: Vec<SensitivityWitness>,
    pub runner_up: Option<(f64, f64)>,
}

/// One certified separation: a base point, a nearby probe, and the element
/// index at which their images separate by more than the constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityWitness {
    pub base: String,
    pub probe: String,
    pub start_distance: f64,
    pub index: String,
    pub separation: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_order_matches_strength() {
        assert!(Status::Proven > Status::Witnessed);
        assert!(Status::Witnessed > Status::Unknown);
        assert!(Status::Unknown > Status::Refuted);
        assert_eq!(Status::Proven.strength(), 3);
        assert_eq!(Status::Refuted.strength(), 0);
    }

    #[test]
    fn meet_is_refuted_dominant() {
        assert_eq!(Status::Proven.meet(Status::Refuted), Status::Refuted);
        assert_eq!(Status::Refuted.meet(Status::Unknown), Status::Refuted);
        assert_eq!(Status::Proven.meet(Status::Witnessed), Status::Witnessed);
        assert_eq!(Status::Witnessed.meet(Status::Unknown), Status::Unknown);
        assert_eq!(Status::Proven.meet(Status::Proven), Status::Proven);
    }

    #[test]
    fn gap_counts_both_boundaries() {
        // returns at 4, 8 inside [0, 20]: trailing gap 12 dominates
        let g = SyndeticCertificate::gap_of(&[4.0, 8.0], 20.0);
        assert_eq!(g, 12.0);
        // empty return list: the whole span is one gap
        assert_eq!(SyndeticCertificate::gap_of(&[], 7.0), 7.0);
        // leading gap dominates
        assert_eq!(SyndeticCertificate::gap_of(&[9.0, 10.0], 10.0), 9.0);
    }

    #[test]
    fn status_round_trips_through_name() {
        for s in [
            Status::Proven,
            Status::Witnessed,
            Status::Unknown,
            Status::Refuted,
        ] {
            assert_eq!(Status::parse(s.name()), Some(s));
        }
        assert_eq!(Status::parse("maybe"), None);
    }
}
