//! Property lattice and the implication-rule engine.
//!
//! A classification report is a table of graded verdicts over a fixed set
//! of dynamical properties, plus the structural flags of the acting
//! semigroup. `derive_closure` forward-chains a fixed table of implication
//! rules until nothing changes, upgrading weaker verdicts and recording
//! each derivation. `check_consistency` re-walks the same table and flags
//! every rule instance whose premises hold at `Witnessed` or better while
//! a conclusion stands refuted.
//!
//! Two of the rules are point-level: they relate the set of probed
//! equicontinuity points to the set of probed transitive points, so they
//! participate in consistency checking over the report's point table and
//! never derive a system-level verdict.

use crate::action::StructuralFlags;
use crate::verdict::{Origin, SensitivityEstimate, Status, SyndeticCertificate, Verdict};
use std::collections::BTreeMap;
use std::fmt;

/// The dynamical properties the toolkit reasons about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Topological transitivity: every pair of opens is connected by the
    /// action.
    TT,
    /// Point transitivity: some point has a dense orbit.
    PT,
    /// A dense set of points with dense orbits.
    DPT,
    /// The set of equicontinuity points is nonempty.
    EqNonempty,
    /// The set of equicontinuity points is dense.
    AlmostEquicontinuous,
    /// Every point is an equicontinuity point.
    Equicontinuous,
    /// Every orbit is dense.
    Minimal,
    /// The almost periodic points are dense.
    BronsteinDense,
    /// Topologically transitive with dense almost periodic points.
    MSystem,
    /// Topologically transitive with dense periodic points.
    PSystem,
    /// The periodic points are dense.
    PeriodicDense,
    /// Some separation constant is realized near every point.
    Sensitive,
    /// The space is infinite.
    Infinite,
    /// The space has no isolated points.
    Perfect,
}

pub const ALL_PROPERTIES: [Property; 14] = [
    Property::TT,
    Property::PT,
    Property::DPT,
    Property::EqNonempty,
    Property::AlmostEquicontinuous,
    Property::Equicontinuous,
    Property::Minimal,
    Property::BronsteinDense,
    Property::MSystem,
    Property::PSystem,
    Property::PeriodicDense,
    Property::Sensitive,
    Property::Infinite,
    Property::Perfect,
];

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::TT => "TT",
            Property::PT => "PT",
            Property::DPT => "DPT",
            Property::EqNonempty => "EqNonempty",
            Property::AlmostEquicontinuous => "AlmostEquicontinuous",
            Property::Equicontinuous => "Equicontinuous",
            Property::Minimal => "Minimal",
            Property::BronsteinDense => "BronsteinDense",
            Property::MSystem => "MSystem",
            Property::PSystem => "PSystem",
            Property::PeriodicDense => "PeriodicDense",
            Property::Sensitive => "Sensitive",
            Property::Infinite => "Infinite",
            Property::Perfect => "Perfect",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        ALL_PROPERTIES.iter().copied().find(|p| p.name() == s)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flags a rule may require of the acting semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagReq {
    FSemigroup,
    CSemigroup,
    Polish,
}

impl FlagReq {
    fn holds(self, f: &StructuralFlags) -> bool {
        match self {
            FlagReq::FSemigroup => f.f_semigroup,
            FlagReq::CSemigroup => f.c_semigroup,
            FlagReq::Polish => f.polish,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FlagReq::FSemigroup => "f_semigroup",
            FlagReq::CSemigroup => "c_semigroup",
            FlagReq::Polish => "polish",
        }
    }
}

/// One premise of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Premise {
    /// The property must hold at Witnessed strength or better.
    Holds(Property),
    /// At least one of the listed properties must be refuted.
    AnyRefuted(&'static [Property]),
}

/// Shape of a rule's consequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Premises entail every listed conclusion.
    Implies { conclusions: &'static [Property] },
    /// Under the premises, `left` holds exactly when `right` holds
    /// (`negated_right` flips the right side's polarity).
    Biconditional {
        left: Property,
        right: Property,
        negated_right: bool,
    },
    /// Point-level inclusion between probe classes; consistency only.
    PointInclusion { sub: PointClass, sup: PointClass },
}

/// Per-point probe classes used by the point-level rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    EquicontinuityPoint,
    TransitivePoint,
}

#[derive(Debug, Clone, Copy)]
pub struct ImplicationRule {
    pub id: &'static str,
    pub flags: &'static [FlagReq],
    pub premises: &'static [Premise],
    pub kind: RuleKind,
    /// Self-contained statement of the fact the rule encodes; cited in
    /// violation messages.
    pub anchor: &'static str,
}

use FlagReq::*;
use Premise::*;
use Property::*;

/// The fixed rule table. Identifiers are stable and cited by reports.
pub const RULES: [ImplicationRule; 12] = [
    ImplicationRule {
        id: "R1",
        flags: &[FSemigroup],
        premises: &[Holds(Perfect), Holds(PT)],
        kind: RuleKind::Implies { conclusions: &[TT] },
        anchor: "on a perfect space under an F-semigroup, a dense orbit forces topological transitivity",
    },
    ImplicationRule {
        id: "R2",
        flags: &[Polish],
        premises: &[Holds(TT)],
        kind: RuleKind::Implies {
            conclusions: &[DPT],
        },
        anchor: "on a Polish space, topological transitivity yields a dense set of transitive points",
    },
    ImplicationRule {
        id: "R3",
        flags: &[],
        premises: &[Holds(DPT)],
        kind: RuleKind::Implies { conclusions: &[TT] },
        anchor: "a dense set of transitive points makes the system topologically transitive",
    },
    ImplicationRule {
        id: "R4",
        flags: &[],
        premises: &[Holds(TT)],
        kind: RuleKind::PointInclusion {
            sub: PointClass::EquicontinuityPoint,
            sup: PointClass::TransitivePoint,
        },
        anchor: "in a topologically transitive system, every equicontinuity point is a transitive point",
    },
    ImplicationRule {
        id: "R5",
        flags: &[CSemigroup],
        premises: &[Holds(PT), Holds(EqNonempty)],
        kind: RuleKind::PointInclusion {
            sub: PointClass::TransitivePoint,
            sup: PointClass::EquicontinuityPoint,
        },
        anchor: "under a C-semigroup, point transitivity with a nonempty equicontinuity set places every transitive point inside that set",
    },
    ImplicationRule {
        id: "R6",
        flags: &[CSemigroup],
        premises: &[Holds(Minimal), Holds(EqNonempty)],
        kind: RuleKind::Implies {
            conclusions: &[Equicontinuous],
        },
        anchor: "under a C-semigroup, a minimal system with a nonempty equicontinuity set is equicontinuous",
    },
    ImplicationRule {
        id: "R7",
        flags: &[CSemigroup, Polish],
        premises: &[Holds(TT)],
        kind: RuleKind::Biconditional {
            left: AlmostEquicontinuous,
            right: EqNonempty,
            negated_right: false,
        },
        anchor: "under a C-semigroup on a Polish space, a transitive system is almost equicontinuous exactly when some equicontinuity point exists",
    },
    ImplicationRule {
        id: "R8",
        flags: &[CSemigroup, Polish],
        premises: &[Holds(TT)],
        kind: RuleKind::Biconditional {
            left: AlmostEquicontinuous,
            right: Sensitive,
            negated_right: true,
        },
        anchor: "under a C-semigroup on a Polish space, a transitive system is almost equicontinuous exactly when it is not sensitive",
    },
    ImplicationRule {
        id: "R9",
        flags: &[CSemigroup, Polish],
        premises: &[Holds(MSystem), Holds(EqNonempty)],
        kind: RuleKind::Implies {
            conclusions: &[Minimal, Equicontinuous],
        },
        anchor: "under a C-semigroup on a Polish space, an M-system with a nonempty equicontinuity set is minimal and equicontinuous",
    },
    ImplicationRule {
        id: "R10",
        flags: &[CSemigroup, Polish],
        premises: &[
            Holds(MSystem),
            AnyRefuted(&[Minimal, Equicontinuous]),
        ],
        kind: RuleKind::Implies {
            conclusions: &[Sensitive],
        },
        anchor: "under a C-semigroup on a Polish space, an M-system that fails minimality or equicontinuity is sensitive",
    },
    ImplicationRule {
        id: "R11",
        flags: &[],
        premises: &[Holds(PSystem)],
        kind: RuleKind::Implies {
            conclusions: &[MSystem],
        },
        anchor: "every P-system is an M-system",
    },
    ImplicationRule {
        id: "R12",
        flags: &[],
        premises: &[Holds(PeriodicDense)],
        kind: RuleKind::Implies {
            conclusions: &[BronsteinDense],
        },
        anchor: "dense periodic points give dense almost periodic points",
    },
];

/// Definitional constraints between properties. These are not implication
/// rules; they restate what the compound properties mean, and both the
/// normalizer and the consistency checker enforce them.
#[derive(Debug, Clone, Copy)]
pub struct Definition {
    pub id: &'static str,
    pub anchor: &'static str,
}

pub const DEF_PSYSTEM: Definition = Definition {
    id: "D1",
    anchor: "a P-system is by definition a transitive system with dense periodic points",
};
pub const DEF_MSYSTEM: Definition = Definition {
    id: "D2",
    anchor: "an M-system is by definition a transitive system with dense almost periodic points",
};
pub const DEF_DPT_PT: Definition = Definition {
    id: "D3",
    anchor: "a dense set of transitive points contains one",
};
pub const DEF_EQ_AE: Definition = Definition {
    id: "D4",
    anchor: "if every point is an equicontinuity point, the equicontinuity set is dense",
};
pub const DEF_AE_NONEMPTY: Definition = Definition {
    id: "D5",
    anchor: "a dense equicontinuity set in a nonempty space is nonempty",
};

/// Equicontinuity and transitivity status of one probed point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointProbe {
    pub point: String,
    pub equicontinuity: Status,
    pub transitive: Status,
}

/// A full classification of one system.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub system: String,
    pub flags: StructuralFlags,
    pub verdicts: BTreeMap<Property, Verdict>,
    pub points: Vec<PointProbe>,
    pub syndetic: Vec<SyndeticCertificate>,
    pub sensitivity: Option<SensitivityEstimate>,
    pub seed: u64,
}

impl ClassificationReport {
    pub fn new(system: impl Into<String>, flags: StructuralFlags, seed: u64) -> Self {
        let mut verdicts = BTreeMap::new();
        for p in ALL_PROPERTIES {
            verdicts.insert(p, Verdict::unknown(""));
        }
        ClassificationReport {
            system: system.into(),
            flags,
            verdicts,
            points: Vec::new(),
            syndetic: Vec::new(),
            sensitivity: None,
            seed,
        }
    }

    pub fn verdict(&self, p: Property) -> &Verdict {
        &self.verdicts[&p]
    }

    pub fn status(&self, p: Property) -> Status {
        self.verdicts[&p].status
    }

    pub fn set(&mut self, p: Property, v: Verdict) {
        self.verdicts.insert(p, v);
    }

    /// Upgrade `p` to `v` if `v` is strictly stronger positive evidence;
    /// never touches refuted entries.
    pub fn upgrade(&mut self, p: Property, v: Verdict) -> bool {
        let cur = &self.verdicts[&p];
        if cur.status == Status::Refuted {
            return false;
        }
        if v.positive_grade() > cur.positive_grade() {
            self.verdicts.insert(p, v);
            true
        } else {
            false
        }
    }

    /// Write a derived refutation if the slot is still undecided.
    fn refute_if_unknown(&mut self, p: Property, v: Verdict) -> bool {
        if self.verdicts[&p].status == Status::Unknown {
            self.verdicts.insert(p, v);
            true
        } else {
            false
        }
    }
}

fn status_for_grade(grade: u8) -> Status {
    if grade >= 3 {
        Status::Proven
    } else {
        Status::Witnessed
    }
}

/// Scalar grade of a rule instance's premises on `report`, or `None` when
/// some flag or premise fails. Grade 3 means every contributing fact is
/// exact or structural.
fn premise_grade(rule: &ImplicationRule, report: &ClassificationReport) -> Option<u8> {
    for f in rule.flags {
        if !f.holds(&report.flags) {
            return None;
        }
    }
    let mut grade = 3u8; // structural flags contribute full strength
    for p in rule.premises {
        match p {
            Premise::Holds(prop) => {
                let g = report.verdict(*prop).positive_grade();
                if g < 2 {
                    return None;
                }
                grade = grade.min(g);
            }
            Premise::AnyRefuted(props) => {
                let g = props
                    .iter()
                    .map(|q| report.verdict(*q).refutation_grade())
                    .max()
                    .unwrap_or(0);
                if g < 2 {
                    return None;
                }
                grade = grade.min(g);
            }
        }
    }
    Some(grade)
}

fn premise_summary(rule: &ImplicationRule, report: &ClassificationReport) -> String {
    let mut parts: Vec<String> = rule
        .flags
        .iter()
        .map(|f| f.name().to_string())
        .collect();
    for p in rule.premises {
        match p {
            Premise::Holds(prop) => {
                parts.push(format!("{}={}", prop.name(), report.status(*prop)))
            }
            Premise::AnyRefuted(props) => {
                for q in *props {
                    if report.status(*q) == Status::Refuted {
                        parts.push(format!("{}=Refuted", q.name()));
                    }
                }
            }
        }
    }
    parts.join(",")
}

/// Re-derive the definitional compounds and chains. Returns true when
/// anything changed.
fn normalize_once(r: &mut ClassificationReport) -> bool {
    let mut changed = false;
    // compound meets
    for (compound, left, right, def) in [
        (PSystem, TT, PeriodicDense, DEF_PSYSTEM),
        (MSystem, TT, BronsteinDense, DEF_MSYSTEM),
    ] {
        let lv = r.verdict(left).clone();
        let rv = r.verdict(right).clone();
        let meet = lv.status.meet(rv.status);
        let witness = format!(
            "{}: {}={},{}={}",
            def.id,
            left.name(),
            lv.status,
            right.name(),
            rv.status
        );
        if meet == Status::Refuted {
            let grade = lv.refutation_grade().max(rv.refutation_grade());
            if grade >= 3 {
                changed |= r.refute_if_unknown(
                    compound,
                    Verdict::new(Status::Refuted, witness).with_origin(Origin::Derived),
                );
            }
        } else if meet.at_least_witnessed() {
            let grade = lv.positive_grade().min(rv.positive_grade());
            changed |= r.upgrade(
                compound,
                Verdict::new(status_for_grade(grade), witness).with_origin(Origin::Derived),
            );
        }
    }
    // positive chains
    for (from, to, def) in [
        (DPT, PT, DEF_DPT_PT),
        (Equicontinuous, AlmostEquicontinuous, DEF_EQ_AE),
        (AlmostEquicontinuous, EqNonempty, DEF_AE_NONEMPTY),
    ] {
        let fv = r.verdict(from).clone();
        if fv.positive_grade() >= 2 {
            let witness = format!("{}: {}={}", def.id, from.name(), fv.status);
            changed |= r.upgrade(
                to,
                Verdict::new(status_for_grade(fv.positive_grade()), witness)
                    .with_origin(Origin::Derived),
            );
        }
        // contrapositive, exact refutations only
        let tv = r.verdict(to).clone();
        if tv.refutation_grade() >= 3 {
            let witness = format!("{}: {}=Refuted", def.id, to.name());
            changed |= r.refute_if_unknown(
                from,
                Verdict::new(Status::Refuted, witness).with_origin(Origin::Derived),
            );
        }
    }
    changed
}

fn apply_rule(rule: &ImplicationRule, r: &mut ClassificationReport) -> bool {
    let Some(grade) = premise_grade(rule, r) else {
        return false;
    };
    let mut changed = false;
    match rule.kind {
        RuleKind::Implies { conclusions } => {
            let witness = format!("via {}: {}", rule.id, premise_summary(rule, r));
            for c in conclusions {
                changed |= r.upgrade(
                    *c,
                    Verdict::new(status_for_grade(grade), witness.clone())
                        .with_origin(Origin::Derived),
                );
            }
        }
        RuleKind::Biconditional {
            left,
            right,
            negated_right,
        } => {
            let lv = r.verdict(left).clone();
            let rv = r.verdict(right).clone();
            // polarity-adjusted grades of the right side
            let (right_pos, right_neg) = if negated_right {
                (rv.refutation_grade(), rv.positive_grade())
            } else {
                (rv.positive_grade(), rv.refutation_grade())
            };
            let witness = |src: Property, st: Status| {
                format!("via {}: {}={}", rule.id, src.name(), st)
            };
            // right -> left
            if right_pos >= 2 {
                changed |= r.upgrade(
                    left,
                    Verdict::new(status_for_grade(grade.min(right_pos)), witness(right, rv.status))
                        .with_origin(Origin::Derived),
                );
            }
            if right_neg >= 3 && grade >= 3 {
                changed |= r.refute_if_unknown(
                    left,
                    Verdict::new(Status::Refuted, witness(right, rv.status))
                        .with_origin(Origin::Derived),
                );
            }
            // left -> right
            if lv.positive_grade() >= 2 {
                let g = grade.min(lv.positive_grade());
                if negated_right {
                    if g >= 3 {
                        changed |= r.refute_if_unknown(
                            right,
                            Verdict::new(Status::Refuted, witness(left, lv.status))
                                .with_origin(Origin::Derived),
                        );
                    }
                } else {
                    changed |= r.upgrade(
                        right,
                        Verdict::new(status_for_grade(g), witness(left, lv.status))
                            .with_origin(Origin::Derived),
                    );
                }
            }
            if lv.refutation_grade() >= 3 && grade >= 3 {
                if negated_right {
                    changed |= r.upgrade(
                        right,
                        Verdict::new(Status::Proven, witness(left, lv.status))
                            .with_origin(Origin::Derived),
                    );
                } else {
                    changed |= r.refute_if_unknown(
                        right,
                        Verdict::new(Status::Refuted, witness(left, lv.status))
                            .with_origin(Origin::Derived),
                    );
                }
            }
        }
        RuleKind::PointInclusion { .. } => {}
    }
    changed
}

/// Forward-chain the rule table and the definitional constraints to a
/// fixed point. Pure: the input is untouched. Idempotent and monotone;
/// derived verdicts carry the rule id and the premise statuses in their
/// witness and never exceed the weakest premise grade.
pub fn derive_closure(report: &ClassificationReport) -> ClassificationReport {
    let mut r = report.clone();
    loop {
        let mut changed = normalize_once(&mut r);
        for rule in &RULES {
            changed |= apply_rule(rule, &mut r);
        }
        if !changed {
            return r;
        }
    }
}

/// A detected contradiction between the report and one rule or
/// definition.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: &'static str,
    pub anchor: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [{}]", self.rule, self.detail, self.anchor)
    }
}

/// Scan the report against every rule and definition. Empty result means
/// no rule instance has all premises at Witnessed strength or better with
/// a refuted conclusion, and no biconditional has conflicting sides.
pub fn check_consistency(report: &ClassificationReport) -> Vec<Violation> {
    let mut out = Vec::new();
    for rule in &RULES {
        let Some(_grade) = premise_grade(rule, report) else {
            continue;
        };
        match rule.kind {
            RuleKind::Implies { conclusions } => {
                for c in conclusions {
                    if report.status(*c) == Status::Refuted {
                        out.push(Violation {
                            rule: rule.id,
                            anchor: rule.anchor,
                            detail: format!(
                                "premises hold ({}) but {} is Refuted",
                                premise_summary(rule, report),
                                c.name()
                            ),
                        });
                    }
                }
            }
            RuleKind::Biconditional {
                left,
                right,
                negated_right,
            } => {
                let lv = report.verdict(left);
                let rv = report.verdict(right);
                let (right_pos, right_neg) = if negated_right {
                    (rv.refutation_grade(), rv.positive_grade())
                } else {
                    (rv.positive_grade(), rv.refutation_grade())
                };
                let conflict = (lv.positive_grade() >= 2 && right_neg >= 2)
                    || (lv.refutation_grade() >= 2 && right_pos >= 2);
                if conflict {
                    out.push(Violation {
                        rule: rule.id,
                        anchor: rule.anchor,
                        detail: format!(
                            "{}={} conflicts with {}={} under {}",
                            left.name(),
                            lv.status,
                            right.name(),
                            rv.status,
                            premise_summary(rule, report),
                        ),
                    });
                }
            }
            RuleKind::PointInclusion { sub, sup } => {
                for probe in &report.points {
                    let (sub_status, sup_status) = match (sub, sup) {
                        (PointClass::EquicontinuityPoint, PointClass::TransitivePoint) => {
                            (probe.equicontinuity, probe.transitive)
                        }
                        (PointClass::TransitivePoint, PointClass::EquicontinuityPoint) => {
                            (probe.transitive, probe.equicontinuity)
                        }
                        _ => continue,
                    };
                    if sub_status.at_least_witnessed() && sup_status == Status::Refuted {
                        out.push(Violation {
                            rule: rule.id,
                            anchor: rule.anchor,
                            detail: format!(
                                "probed point {} is in the smaller class ({}) but excluded from the larger ({})",
                                probe.point, sub_status, sup_status
                            ),
                        });
                    }
                }
            }
        }
    }
    // definitional checks
    for (compound, left, right, def) in [
        (PSystem, TT, PeriodicDense, DEF_PSYSTEM),
        (MSystem, TT, BronsteinDense, DEF_MSYSTEM),
    ] {
        let meet = report.status(left).meet(report.status(right));
        let comp = report.status(compound);
        let conflict = (meet == Status::Refuted && comp.at_least_witnessed())
            || (meet.at_least_witnessed() && comp == Status::Refuted);
        if conflict {
            out.push(Violation {
                rule: def.id,
                anchor: def.anchor,
                detail: format!(
                    "{}={} but {}={} and {}={}",
                    compound.name(),
                    comp,
                    left.name(),
                    report.status(left),
                    right.name(),
                    report.status(right)
                ),
            });
        }
    }
    for (from, to, def) in [
        (DPT, PT, DEF_DPT_PT),
        (Equicontinuous, AlmostEquicontinuous, DEF_EQ_AE),
        (AlmostEquicontinuous, EqNonempty, DEF_AE_NONEMPTY),
    ] {
        if report.status(from).at_least_witnessed() && report.status(to) == Status::Refuted {
            out.push(Violation {
                rule: def.id,
                anchor: def.anchor,
                detail: format!(
                    "{}={} but {}=Refuted",
                    from.name(),
                    report.status(from),
                    to.name()
                ),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags_all() -> StructuralFlags {
        StructuralFlags {
            f_semigroup: true,
            c_semigroup: true,
            group: false,
            isometric: false,
            polish: true,
        }
    }

    fn report_with(pairs: &[(Property, Verdict)]) -> ClassificationReport {
        let mut r = ClassificationReport::new("test", flags_all(), 0);
        for (p, v) in pairs {
            r.set(*p, v.clone());
        }
        r
    }

    #[test]
    fn psystem_proven_derives_msystem_proven() {
        let r = report_with(&[
            (PSystem, Verdict::proven("x")),
            (TT, Verdict::proven("x")),
            (PeriodicDense, Verdict::proven("x")),
        ]);
        let c = derive_closure(&r);
        assert_eq!(c.status(MSystem), Status::Proven);
        assert!(c.verdict(MSystem).witness.contains("R11") || c.verdict(MSystem).witness.contains("D2"));
    }

    #[test]
    fn msystem_with_refuted_minimal_derives_sensitive() {
        let r = report_with(&[
            (MSystem, Verdict::proven("irreducible")),
            (Minimal, Verdict::refuted("two cycles")),
        ]);
        let c = derive_closure(&r);
        assert_eq!(c.status(Sensitive), Status::Proven);
        assert!(c.verdict(Sensitive).witness.contains("R10"));
        assert_eq!(c.verdict(Sensitive).origin, Origin::Derived);
    }

    #[test]
    fn witnessed_tt_derives_witnessed_dpt() {
        let r = report_with(&[(TT, Verdict::witnessed("pairs"))]);
        let c = derive_closure(&r);
        assert_eq!(c.status(DPT), Status::Witnessed);
        assert!(c.verdict(DPT).witness.contains("R2"));
        // grade soundness: Witnessed premises never yield Proven
        assert_eq!(c.verdict(DPT).positive_grade(), 2);
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        let r = report_with(&[
            (TT, Verdict::witnessed("pairs")),
            (PeriodicDense, Verdict::witnessed("grid")),
            (Minimal, Verdict::new(Status::Refuted, "fixed point")),
        ]);
        let once = derive_closure(&r);
        let twice = derive_closure(&once);
        assert_eq!(once, twice);
        // monotone: every verdict got at least as strong
        for p in ALL_PROPERTIES {
            assert!(
                once.verdict(p).positive_grade() >= r.verdict(p).positive_grade()
                    || once.status(p) == Status::Refuted
            );
        }
        // and the M-system chain fired
        assert_eq!(once.status(BronsteinDense), Status::Witnessed);
        assert_eq!(once.status(MSystem), Status::Witnessed);
        assert_eq!(once.status(Sensitive), Status::Witnessed);
    }

    #[test]
    fn refuted_conclusions_are_never_overwritten() {
        let mut r = report_with(&[(TT, Verdict::witnessed("pairs"))]);
        r.set(DPT, Verdict::refuted("manual"));
        let c = derive_closure(&r);
        assert_eq!(c.status(DPT), Status::Refuted);
        let v = check_consistency(&c);
        assert!(v.iter().any(|v| v.rule == "R2"), "{v:?}");
    }

    #[test]
    fn consistency_flags_r10_on_nonsensitive_broken_msystem() {
        let r = report_with(&[
            (MSystem, Verdict::proven("x")),
            (TT, Verdict::proven("x")),
            (BronsteinDense, Verdict::proven("x")),
            (Minimal, Verdict::refuted("x")),
            (Sensitive, Verdict::refuted("x")),
        ]);
        let v = check_consistency(&r);
        assert!(v.iter().any(|v| v.rule == "R10"), "{v:?}");
    }

    #[test]
    fn consistency_flags_r8_on_ae_plus_sensitive() {
        let r = report_with(&[
            (TT, Verdict::proven("x")),
            (AlmostEquicontinuous, Verdict::proven("x")),
            (Sensitive, Verdict::proven("x")),
        ]);
        let v = check_consistency(&r);
        assert!(v.iter().any(|v| v.rule == "R8"), "{v:?}");
    }

    #[test]
    fn consistent_minimal_equicontinuous_report_is_clean() {
        let r = report_with(&[
            (TT, Verdict::witnessed("pairs")),
            (PT, Verdict::witnessed("orbit")),
            (Minimal, Verdict::witnessed("ap everywhere")),
            (Equicontinuous, Verdict::structural(Status::Proven, "isometry")),
            (AlmostEquicontinuous, Verdict::structural(Status::Proven, "isometry")),
            (EqNonempty, Verdict::structural(Status::Proven, "isometry")),
            (Sensitive, Verdict::structural(Status::Refuted, "isometry")),
            (BronsteinDense, Verdict::witnessed("returns")),
            (MSystem, Verdict::witnessed("meet")),
            (Perfect, Verdict::structural(Status::Proven, "declared")),
            (Infinite, Verdict::structural(Status::Proven, "declared")),
        ]);
        let c = derive_closure(&r);
        let v = check_consistency(&c);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn point_inclusion_violation_is_detected() {
        let mut r = report_with(&[(TT, Verdict::proven("x"))]);
        r.points.push(PointProbe {
            point: "0.5".into(),
            equicontinuity: Status::Witnessed,
            transitive: Status::Refuted,
        });
        let v = check_consistency(&r);
        assert!(v.iter().any(|v| v.rule == "R4"), "{v:?}");
    }

    #[test]
    fn rule_table_is_exactly_the_twelve() {
        assert_eq!(RULES.len(), 12);
        let ids: Vec<&str> = RULES.iter().map(|r| r.id).collect();
        assert_eq!(
            ids,
            ["R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11", "R12"]
        );
        for r in &RULES {
            assert!(!r.anchor.is_empty());
        }
    }

    #[test]
    fn sensitive_proven_blocks_ae_via_r8() {
        let r = report_with(&[
            (TT, Verdict::proven("irreducible")),
            (Sensitive, Verdict::proven("c=1/2")),
        ]);
        let c = derive_closure(&r);
        assert_eq!(c.status(AlmostEquicontinuous), Status::Refuted);
        assert_eq!(c.verdict(AlmostEquicontinuous).origin, Origin::Derived);
        assert!(check_consistency(&c).is_empty());
    }
}
