//! Report assembly and the two output panes.
//!
//! The human pane is a fixed-width table meant for a terminal. The
//! machine pane is a line protocol: one record per line, fields separated
//! by single tabs, the first field naming the record kind. Property
//! records use the property name itself as the kind; the names never
//! collide with the reserved kinds. Floats are printed in Rust's shortest
//! round-trip form, so re-emitting a parsed pane reproduces it byte for
//! byte.

use crate::action::StructuralFlags;
use crate::error::{Error, Result};
use crate::rules::{ClassificationReport, Property, Violation, ALL_PROPERTIES};
use crate::verdict::Status;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One analyzed system: its classification, the consistency findings, and
/// the tool version that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub classification: ClassificationReport,
    pub violations: Vec<Violation>,
    pub version: String,
}

impl Report {
    pub fn new(classification: ClassificationReport, violations: Vec<Violation>) -> Self {
        Report {
            classification,
            violations,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn render_flags(f: &StructuralFlags) -> String {
    format!(
        "F={};C={};group={};isometric={};polish={}",
        f.f_semigroup, f.c_semigroup, f.group, f.isometric, f.polish
    )
}

fn parse_flags(s: &str, line: usize) -> Result<StructuralFlags> {
    let mut vals = [None; 5];
    let keys = ["F", "C", "group", "isometric", "polish"];
    for part in s.split(';') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(line, 1, format!("flag without '=': {part}")))?;
        let b = match v {
            "true" => true,
            "false" => false,
            _ => return Err(Error::parse(line, 1, format!("bad flag value: {v}"))),
        };
        match keys.iter().position(|n| *n == k) {
            Some(i) => vals[i] = Some(b),
            None => return Err(Error::parse(line, 1, format!("unknown flag: {k}"))),
        }
    }
    let get = |i: usize| -> Result<bool> {
        vals[i].ok_or_else(|| Error::parse(line, 1, format!("missing flag: {}", keys[i])))
    };
    Ok(StructuralFlags {
        f_semigroup: get(0)?,
        c_semigroup: get(1)?,
        group: get(2)?,
        isometric: get(3)?,
        polish: get(4)?,
    })
}

/// Emit the machine pane for one report.
pub fn emit_machine(report: &Report) -> String {
    let c = &report.classification;
    let mut out = String::new();
    let _ = writeln!(out, "system\t{}", c.system);
    let _ = writeln!(out, "version\t{}", report.version);
    let _ = writeln!(out, "seed\t{}", c.seed);
    let _ = writeln!(out, "flags\t{}", render_flags(&c.flags));
    for p in ALL_PROPERTIES {
        let v = &c.verdicts[&p];
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            p.name(),
            v.status.name(),
            v.witness,
            v.meta.render()
        );
    }
    for probe in &c.points {
        let _ = writeln!(
            out,
            "point\t{}\t{}\t{}",
            probe.point,
            probe.equicontinuity.name(),
            probe.transitive.name()
        );
    }
    for cert in &c.syndetic {
        let _ = writeln!(
            out,
            "syndetic\t{}\t{}\t{}\t{}\t{}\t{}",
            cert.base,
            cert.center,
            cert.radius,
            cert.max_gap,
            cert.horizon_span,
            cert.returns.len()
        );
    }
    if let Some(est) = &c.sensitivity {
        let constant = est
            .constant
            .map(|c| c.to_string())
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            out,
            "sensitivity\t{}\t{}\t{}\t{}",
            est.verdict.status.name(),
            constant,
            est.coverage,
            est.witnesses.len()
        );
    }
    for v in &report.violations {
        let _ = writeln!(out, "violation\t{}\t{}\t{}", v.rule, v.anchor, v.detail);
    }
    let _ = writeln!(out, "end\t{}", c.system);
    out
}

/// Concatenated machine panes for several reports.
pub fn emit_machine_all(reports: &[Report]) -> String {
    reports.iter().map(emit_machine).collect()
}

/// The machine pane's own view of a report: exactly the fields the line
/// protocol carries, so `parse_machine(emit_machine(r))` equals
/// `MachineReport::from_report(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineReport {
    pub system: String,
    pub version: String,
    pub seed: u64,
    pub flags: StructuralFlags,
    /// Status, witness text, rendered resolution per property.
    pub properties: BTreeMap<Property, (Status, String, String)>,
    /// Probed point, its equicontinuity status, its transitivity status.
    pub points: Vec<(String, Status, Status)>,
    /// Base, center, radius, max gap, span, return count.
    pub syndetic: Vec<(String, String, f64, f64, f64, usize)>,
    /// Status, constant, coverage, witness count.
    pub sensitivity: Option<(Status, Option<f64>, f64, usize)>,
    /// Rule id, anchor, detail.
    pub violations: Vec<(String, String, String)>,
}

impl MachineReport {
    pub fn from_report(report: &Report) -> MachineReport {
        let c = &report.classification;
        MachineReport {
            system: c.system.clone(),
            version: report.version.clone(),
            seed: c.seed,
            flags: c.flags,
            properties: c
                .verdicts
                .iter()
                .map(|(p, v)| (*p, (v.status, v.witness.clone(), v.meta.render())))
                .collect(),
            points: c
                .points
                .iter()
                .map(|p| (p.point.clone(), p.equicontinuity, p.transitive))
                .collect(),
            syndetic: c
                .syndetic
                .iter()
                .map(|s| {
                    (
                        s.base.clone(),
                        s.center.clone(),
                        s.radius,
                        s.max_gap,
                        s.horizon_span,
                        s.returns.len(),
                    )
                })
                .collect(),
            sensitivity: c
                .sensitivity
                .as_ref()
                .map(|e| (e.verdict.status, e.constant, e.coverage, e.witnesses.len())),
            violations: report
                .violations
                .iter()
                .map(|v| (v.rule.to_string(), v.anchor.to_string(), v.detail.clone()))
                .collect(),
        }
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::parse(line, 1, format!("bad number: {s}")))
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, 1, format!("bad count: {s}")))
}

fn parse_status(s: &str, line: usize) -> Result<Status> {
    Status::parse(s).ok_or_else(|| Error::parse(line, 1, format!("bad status: {s}")))
}

fn expect_fields<'a>(
    fields: &'a [&'a str],
    n: usize,
    kind: &str,
    line: usize,
) -> Result<&'a [&'a str]> {
    if fields.len() != n {
        return Err(Error::parse(
            line,
            1,
            format!("{kind} record wants {n} fields, got {}", fields.len()),
        ));
    }
    Ok(fields)
}

/// Parse one or more concatenated machine panes.
pub fn parse_machine(input: &str) -> Result<Vec<MachineReport>> {
    let mut out = Vec::new();
    let mut current: Option<MachineReport> = None;
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let kind = fields[0];
        if kind == "system" {
            if current.is_some() {
                return Err(Error::parse(line, 1, "unterminated previous pane"));
            }
            let f = expect_fields(&fields, 2, "system", line)?;
            current = Some(MachineReport {
                system: f[1].to_string(),
                version: String::new(),
                seed: 0,
                flags: StructuralFlags {
                    f_semigroup: false,
                    c_semigroup: false,
                    group: false,
                    isometric: false,
                    polish: false,
                },
                properties: BTreeMap::new(),
                points: Vec::new(),
                syndetic: Vec::new(),
                sensitivity: None,
                violations: Vec::new(),
            });
            continue;
        }
        let rep = current
            .as_mut()
            .ok_or_else(|| Error::parse(line, 1, "record outside a system pane"))?;
        if let Some(p) = Property::parse(kind) {
            let f = expect_fields(&fields, 4, "property", line)?;
            let status = parse_status(f[1], line)?;
            rep.properties
                .insert(p, (status, f[2].to_string(), f[3].to_string()));
            continue;
        }
        match kind {
            "version" => {
                let f = expect_fields(&fields, 2, "version", line)?;
                rep.version = f[1].to_string();
            }
            "seed" => {
                let f = expect_fields(&fields, 2, "seed", line)?;
                rep.seed = f[1]
                    .parse()
                    .map_err(|_| Error::parse(line, 1, format!("bad seed: {}", f[1])))?;
            }
            "flags" => {
                let f = expect_fields(&fields, 2, "flags", line)?;
                rep.flags = parse_flags(f[1], line)?;
            }
            "point" => {
                let f = expect_fields(&fields, 4, "point", line)?;
                rep.points.push((
                    f[1].to_string(),
                    parse_status(f[2], line)?,
                    parse_status(f[3], line)?,
                ));
            }
            "syndetic" => {
                let f = expect_fields(&fields, 7, "syndetic", line)?;
                rep.syndetic.push((
                    f[1].to_string(),
                    f[2].to_string(),
                    parse_f64(f[3], line)?,
                    parse_f64(f[4], line)?,
                    parse_f64(f[5], line)?,
                    parse_usize(f[6], line)?,
                ));
            }
            "sensitivity" => {
                let f = expect_fields(&fields, 5, "sensitivity", line)?;
                let constant = if f[2] == "-" {
                    None
                } else {
                    Some(parse_f64(f[2], line)?)
                };
                rep.sensitivity = Some((
                    parse_status(f[1], line)?,
                    constant,
                    parse_f64(f[3], line)?,
                    parse_usize(f[4], line)?,
                ));
            }
            "violation" => {
                let f = expect_fields(&fields, 4, "violation", line)?;
                rep.violations
                    .push((f[1].to_string(), f[2].to_string(), f[3].to_string()));
            }
            "end" => {
                let f = expect_fields(&fields, 2, "end", line)?;
                if f[1] != rep.system {
                    return Err(Error::parse(
                        line,
                        1,
                        format!("pane for {} ends as {}", rep.system, f[1]),
                    ));
                }
                out.push(current.take().expect("pane in progress"));
            }
            other => {
                return Err(Error::parse(line, 1, format!("unknown record kind: {other}")));
            }
        }
    }
    if let Some(rep) = current {
        return Err(Error::parse(
            input.lines().count(),
            1,
            format!("pane for {} never ends", rep.system),
        ));
    }
    Ok(out)
}

/// Render the human pane for one report.
pub fn render_human(report: &Report) -> String {
    let c = &report.classification;
    let mut out = String::new();
    let _ = writeln!(out, "== {} {}", c.system, "=".repeat(60usize.saturating_sub(c.system.len())));
    let mut traits = Vec::new();
    if c.flags.f_semigroup {
        traits.push("F-semigroup");
    }
    if c.flags.c_semigroup {
        traits.push("C-semigroup");
    }
    if c.flags.group {
        traits.push("group");
    }
    if c.flags.isometric {
        traits.push("isometric");
    }
    if c.flags.polish {
        traits.push("polish");
    }
    let _ = writeln!(
        out,
        "flags: {}   seed {}   tool {}",
        traits.join(", "),
        c.seed,
        report.version
    );
    let _ = writeln!(out, "{:<22}{:<11}witness", "property", "status");
    for p in ALL_PROPERTIES {
        let v = &c.verdicts[&p];
        let meta = v.meta.render();
        let tail = if meta.is_empty() {
            v.witness.clone()
        } else if v.witness.is_empty() {
            format!("[{meta}]")
        } else {
            format!("{} [{meta}]", v.witness)
        };
        let _ = writeln!(out, "{:<22}{:<11}{}", p.name(), v.status.name(), tail);
    }
    if !c.points.is_empty() {
        let _ = writeln!(out, "probed points:");
        for probe in &c.points {
            let _ = writeln!(
                out,
                "  {}  equicontinuity={}  transitive={}",
                probe.point,
                probe.equicontinuity.name(),
                probe.transitive.name()
            );
        }
    }
    if !c.syndetic.is_empty() {
        let _ = writeln!(out, "syndetic certificates:");
        for s in &c.syndetic {
            let _ = writeln!(
                out,
                "  {} returns to the {} ball at {}: {} visits, max gap {} over span {}",
                s.base,
                s.radius,
                s.center,
                s.returns.len(),
                s.max_gap,
                s.horizon_span
            );
        }
    }
    if let Some(est) = &c.sensitivity {
        let c_str = est
            .constant
            .map(|v| format!(" c={v}"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "sensitivity: {}{} coverage {}",
            est.verdict.status.name(),
            c_str,
            est.coverage
        );
        for w in &est.witnesses {
            let _ = writeln!(
                out,
                "  {} vs {} (start {}): separation {} at {}",
                w.base, w.probe, w.start_distance, w.index, w.separation
            );
        }
    }
    if report.violations.is_empty() {
        let _ = writeln!(out, "violations: none");
    } else {
        let _ = writeln!(out, "violations:");
        for v in &report.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::PointProbe;
    use crate::verdict::{
        HorizonMeta, SensitivityEstimate, SensitivityWitness, SyndeticCertificate, Verdict,
    };

    fn sample_report() -> Report {
        let flags = StructuralFlags {
            f_semigroup: true,
            c_semigroup: true,
            group: false,
            isometric: false,
            polish: true,
        };
        let mut c = ClassificationReport::new("demo", flags, 42);
        c.set(
            Property::TT,
            Verdict::witnessed("dense orbit from 0.3").with_meta(HorizonMeta {
                eps: Some(0.0625),
                horizon: Some(1000),
                ..HorizonMeta::default()
            }),
        );
        c.set(Property::Sensitive, Verdict::witnessed("separates"));
        c.points.push(PointProbe {
            point: "0.3".to_string(),
            equicontinuity: Status::Refuted,
            transitive: Status::Witnessed,
        });
        c.syndetic.push(SyndeticCertificate {
            base: "0.3".to_string(),
            center: "0.3".to_string(),
            radius: 0.1,
            returns: vec![2.0, 4.0],
            max_gap: 2.0,
            horizon_span: 40.0,
        });
        c.sensitivity = Some(SensitivityEstimate {
            verdict: Verdict::witnessed("every ball separates"),
            constant: Some(0.25),
            coverage: 1.0,
            witnesses: vec![SensitivityWitness {
                base: "0.3".to_string(),
                probe: "0.300001".to_string(),
                start_distance: 1e-6,
                index: "n=20".to_string(),
                separation: 0.5,
            }],
            runner_up: None,
        });
        Report::new(c, vec![])
    }

    #[test]
    fn machine_pane_round_trips() {
        let report = sample_report();
        let pane = emit_machine(&report);
        let parsed = parse_machine(&pane).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0], MachineReport::from_report(&report));
    }

    #[test]
    fn emitted_pane_is_stable_under_reemission() {
        let report = sample_report();
        let pane = emit_machine(&report);
        let again = emit_machine(&report);
        assert_eq!(pane, again);
    }

    #[test]
    fn multiple_panes_parse_in_order() {
        let a = sample_report();
        let mut b = sample_report();
        b.classification.system = "second".to_string();
        let pane = emit_machine_all(&[a.clone(), b.clone()]);
        let parsed = parse_machine(&pane).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].system, "demo");
        assert_eq!(parsed[1].system, "second");
    }

    #[test]
    fn parse_rejects_stray_records() {
        let err = parse_machine("seed\t42\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("outside"));
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_unterminated_pane() {
        let report = sample_report();
        let pane = emit_machine(&report);
        let cut = pane.rsplit_once("end").unwrap().0;
        assert!(parse_machine(cut).is_err());
    }

    #[test]
    fn parse_positions_point_at_the_bad_line() {
        let report = sample_report();
        let mut pane = emit_machine(&report);
        pane.insert_str(0, "system\tdemo\nmystery\t1\nend\tdemo\n");
        let err = parse_machine(&pane).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("mystery"));
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn human_pane_names_every_property() {
        let report = sample_report();
        let text = render_human(&report);
        for p in ALL_PROPERTIES {
            assert!(text.contains(p.name()), "missing {}", p.name());
        }
        assert!(text.contains("violations: none"));
    }
}
