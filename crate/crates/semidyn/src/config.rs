//! System specifications.
//!
//! Two input spellings resolve to the same [`SystemSpec`]:
//!
//! * an inline one-liner, `builtin:rotation alpha=0.618 seed=7`, handy on
//!   a command line;
//! * a config file of sections, one per system:
//!
//! ```text
//! # lines starting with # are comments
//! [slow_rotation]
//! kind = builtin:rotation
//! alpha = 0.01
//!
//! [my_shift]
//! kind = sft:fixtures/golden.sft
//!
//! [skew]
//! kind = map:mod1(x + y), mod1(x + 2*y)
//! polish = true
//! ```
//!
//! A `kind` is `builtin:NAME`, `sft:PATH`, or `map:EXPR[, EXPR]`. Map
//! expressions use `+`, `-`, `*`, `mod1(..)`, `abs(..)`, numeric
//! constants, and the coordinates `x` and `y`; one expression acts on the
//! circle (or the unit interval with `space = interval`), two act on the
//! torus. Greek spellings of the parameter keys are accepted where they
//! are traditional: `α` for `alpha`, `Δt` for `dt`, `ω₁`/`ω₂` for
//! `omega1`/`omega2`.
//!
//! Every key is validated against the kind it modifies, at the position
//! where it appears, so a typo fails loudly instead of being ignored.
//! Built-in systems are complete-metric by construction; a user map gets
//! `polish = false` unless the config asserts otherwise, which weakens
//! the rule closure rather than silently assuming topology the map may
//! not have.

use crate::action::{MapFn, SemigroupAction};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::pipeline::AnalysisConfig;
use crate::registry::{self, System, SystemKind};
use crate::sft::Sft;
use crate::space::MetricSystem;
use std::fs;
use std::path::Path;

/// Geometry a user map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSpace {
    Interval,
    Circle,
    Torus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecKind {
    Builtin(String),
    SftFile(String),
    Map { exprs: Vec<Expr>, space: MapSpace },
}

/// Parameter overrides attached to a spec. `None` means "use the
/// default"; which keys may be set depends on the kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub dt: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub eps_levels: Option<usize>,
    pub max_evals: Option<u64>,
    pub polish: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub name: String,
    pub kind: SpecKind,
    pub overrides: Overrides,
}

/// Parse one inline spec line. `lineno` seeds error positions, so config
/// files and command lines report the same way.
pub fn parse_spec_line(line: &str, lineno: usize) -> Result<SystemSpec> {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(lineno, 1, "empty system spec"));
    }
    let indent = line.chars().count() - line.trim_start().chars().count();

    // overrides are the trailing key=value tokens; everything before the
    // first one is the kind spec (map expressions may contain spaces)
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    let split = tokens
        .iter()
        .position(|t| t.contains('='))
        .unwrap_or(tokens.len());
    if split == 0 {
        return Err(Error::parse(
            lineno,
            indent + 1,
            "spec must start with builtin:, sft:, or map:",
        ));
    }
    let kind_src = tokens[..split].join(" ");
    let kind = parse_kind(&kind_src, lineno, indent + 1)?;
    let name = default_name(&kind);

    let mut overrides = Overrides::default();
    let mut col = indent + 1;
    let mut seen = trimmed;
    for tok in &tokens[split..] {
        // locate the token to report its true column
        let at = seen.find(tok).expect("token comes from this string");
        col += seen[..at].chars().count();
        seen = &seen[at..];
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(lineno, col, "expected key=value"))?;
        apply_override(&mut overrides, &kind, key, value, lineno, col)?;
        let consumed = tok.chars().count();
        col += consumed;
        seen = &seen[tok.len()..];
    }

    Ok(SystemSpec {
        name,
        kind,
        overrides,
    })
}

/// Parse a whole config file: `[name]` sections of `key = value` lines.
pub fn parse_config(text: &str) -> Result<Vec<SystemSpec>> {
    struct Section {
        name: String,
        lineno: usize,
        kind: Option<SpecKind>,
        space: Option<(MapSpace, usize, usize)>,
        overrides: Overrides,
    }

    fn finish(sec: Section) -> Result<SystemSpec> {
        let mut kind = sec.kind.ok_or_else(|| {
            Error::parse(
                sec.lineno,
                1,
                format!("section [{}] has no kind line", sec.name),
            )
        })?;
        if let Some((space, line, col)) = sec.space {
            match &mut kind {
                SpecKind::Map { space: s, exprs } => {
                    check_space_arity(space, exprs.len(), line, col)?;
                    *s = space;
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        col,
                        "space only applies to map systems",
                    ))
                }
            }
        }
        Ok(SystemSpec {
            name: sec.name,
            kind,
            overrides: sec.overrides,
        })
    }

    let mut specs: Vec<SystemSpec> = Vec::new();
    let mut current: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        let stripped = line.trim_start();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let indent = line.chars().count() - stripped.chars().count();

        if let Some(rest) = stripped.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(Error::parse(lineno, indent + 1, "unterminated [section]"));
            };
            let name = inner.trim();
            if name.is_empty() {
                return Err(Error::parse(lineno, indent + 1, "empty section name"));
            }
            if name.contains('\t') {
                return Err(Error::parse(
                    lineno,
                    indent + 1,
                    "section name must not contain tabs",
                ));
            }
            if let Some(sec) = current.take() {
                specs.push(finish(sec)?);
            }
            if specs.iter().any(|s| s.name == name) {
                return Err(Error::parse(
                    lineno,
                    indent + 1,
                    format!("duplicate section [{name}]"),
                ));
            }
            current = Some(Section {
                name: name.to_string(),
                lineno,
                kind: None,
                space: None,
                overrides: Overrides::default(),
            });
            continue;
        }

        let Some(sec) = current.as_mut() else {
            return Err(Error::parse(
                lineno,
                indent + 1,
                "expected a [section] header before key lines",
            ));
        };
        let Some((key_part, value_part)) = stripped.split_once('=') else {
            return Err(Error::parse(lineno, indent + 1, "expected key = value"));
        };
        let key = key_part.trim();
        let value = value_part.trim();
        let key_col = indent + 1;
        let value_col =
            indent + key_part.chars().count() + 2 + leading_ws(value_part);

        if key == "kind" {
            if sec.kind.is_some() {
                return Err(Error::parse(lineno, key_col, "duplicate kind line"));
            }
            sec.kind = Some(parse_kind(value, lineno, value_col)?);
        } else if key == "space" {
            if sec.space.is_some() {
                return Err(Error::parse(lineno, key_col, "duplicate space line"));
            }
            let space = match value {
                "interval" => MapSpace::Interval,
                "circle" => MapSpace::Circle,
                "torus" => MapSpace::Torus,
                other => {
                    return Err(Error::parse(
                        lineno,
                        value_col,
                        format!("unknown space {other:?}; expected interval, circle, or torus"),
                    ))
                }
            };
            sec.space = Some((space, lineno, value_col));
        } else {
            let Some(kind) = sec.kind.as_ref() else {
                return Err(Error::parse(
                    lineno,
                    key_col,
                    "kind must come before parameter keys",
                ));
            };
            let kind = kind.clone();
            apply_override(&mut sec.overrides, &kind, key, value, lineno, key_col)?;
        }
    }

    if let Some(sec) = current.take() {
        specs.push(finish(sec)?);
    }
    if specs.is_empty() {
        return Err(Error::parse(1, 1, "config describes no systems"));
    }
    Ok(specs)
}

/// Build the system a spec describes and the per-system analysis config,
/// reading subshift matrices from disk as needed.
pub fn resolve(spec: &SystemSpec, base: &AnalysisConfig) -> Result<(System, AnalysisConfig)> {
    let o = &spec.overrides;
    let mut cfg = base.clone();
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(h) = o.horizon {
        cfg.horizon = h;
    }
    if let Some(e) = o.eps_levels {
        cfg.eps_levels = e;
    }
    if let Some(m) = o.max_evals {
        cfg.max_evals = m;
    }

    let system = match &spec.kind {
        SpecKind::Builtin(id) => {
            let mut sys = match id.as_str() {
                "rotation" => registry::rotation(o.alpha.unwrap_or_else(registry::golden_alpha)),
                "torus_linear_flow" => registry::torus_linear_flow(
                    o.omega1.unwrap_or(1.0),
                    o.omega2.unwrap_or_else(|| 2.0f64.sqrt()),
                    o.dt.unwrap_or(registry::DEFAULT_DT),
                ),
                other => registry::builtin(other)
                    .ok_or_else(|| Error::parse(1, 1, format!("unknown builtin {other:?}")))?,
            };
            sys.name = spec.name.clone();
            sys
        }
        SpecKind::SftFile(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            let sft = Sft::parse(&text)?;
            let alphabet = sft.states().min(64) as u8;
            System {
                name: spec.name.clone(),
                kind: SystemKind::Shift {
                    sft,
                    space: MetricSystem::symbol_seq(&spec.name, alphabet, 32),
                },
            }
        }
        SpecKind::Map { exprs, space } => {
            let map = MapFn::Exprs(exprs.clone());
            let metric_space = match space {
                MapSpace::Interval => MetricSystem::interval(&spec.name, 0.0, 1.0),
                MapSpace::Circle => MetricSystem::circle(&spec.name),
                MapSpace::Torus => MetricSystem::torus(&spec.name),
            };
            let mut action = SemigroupAction::cascade(map);
            action.flags.polish = o.polish.unwrap_or(false);
            System {
                name: spec.name.clone(),
                kind: SystemKind::Metric {
                    action,
                    space: metric_space,
                },
            }
        }
    };
    Ok((system, cfg))
}

fn default_name(kind: &SpecKind) -> String {
    match kind {
        SpecKind::Builtin(id) => id.clone(),
        SpecKind::SftFile(path) => Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sft".to_string()),
        SpecKind::Map { .. } => "map".to_string(),
    }
}

fn leading_ws(s: &str) -> usize {
    s.chars().count() - s.trim_start().chars().count()
}

fn check_space_arity(space: MapSpace, exprs: usize, line: usize, col: usize) -> Result<()> {
    let needed = match space {
        MapSpace::Interval | MapSpace::Circle => 1,
        MapSpace::Torus => 2,
    };
    if exprs != needed {
        return Err(Error::parse(
            line,
            col,
            format!("this space needs {needed} coordinate expression(s), got {exprs}"),
        ));
    }
    Ok(())
}

fn parse_kind(src: &str, line: usize, col: usize) -> Result<SpecKind> {
    if let Some(id) = src.strip_prefix("builtin:") {
        let id = id.trim();
        if registry::builtin(id).is_none() {
            let known: Vec<&str> = registry::registry_list()
                .iter()
                .map(|d| d.name)
                .collect();
            return Err(Error::parse(
                line,
                col + "builtin:".len(),
                format!("unknown builtin {id:?}; known: {}", known.join(", ")),
            ));
        }
        return Ok(SpecKind::Builtin(id.to_string()));
    }
    if let Some(path) = src.strip_prefix("sft:") {
        let path = path.trim();
        if path.is_empty() {
            return Err(Error::parse(line, col + 4, "sft: needs a file path"));
        }
        return Ok(SpecKind::SftFile(path.to_string()));
    }
    if let Some(body) = src.strip_prefix("map:") {
        let segments = split_top_level(body);
        if segments.is_empty() || segments.len() > 2 {
            return Err(Error::parse(
                line,
                col + 4,
                format!(
                    "map: takes one or two comma-separated expressions, got {}",
                    segments.len()
                ),
            ));
        }
        let mut exprs = Vec::new();
        for (offset, seg) in &segments {
            let expr = parse_expr_str(seg, line, col + 4 + offset)?;
            exprs.push(expr);
        }
        let space = if exprs.len() == 1 {
            MapSpace::Circle
        } else {
            MapSpace::Torus
        };
        let max_allowed = exprs.len() as u8 - 1;
        for (i, e) in exprs.iter().enumerate() {
            if e.max_coord().is_some_and(|m| m > max_allowed) {
                let (offset, _) = segments[i];
                return Err(Error::parse(
                    line,
                    col + 4 + offset,
                    format!(
                        "expression {} uses coordinate y but the map is one-dimensional",
                        i + 1
                    ),
                ));
            }
        }
        return Ok(SpecKind::Map { exprs, space });
    }
    Err(Error::parse(
        line,
        col,
        format!("unknown kind {src:?}; expected builtin:, sft:, or map:"),
    ))
}

/// Split on commas at parenthesis depth zero, keeping each segment's char
/// offset within the input.
fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start_byte = 0usize;
    let mut start_char = 0usize;
    for (chars, (b, c)) in s.char_indices().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push((start_char, &s[start_byte..b]));
                start_byte = b + 1;
                start_char = chars + 1;
            }
            _ => {}
        }
    }
    out.push((start_char, &s[start_byte..]));
    out.retain(|(_, seg)| !seg.trim().is_empty());
    out
}

fn apply_override(
    o: &mut Overrides,
    kind: &SpecKind,
    key: &str,
    value: &str,
    line: usize,
    col: usize,
) -> Result<()> {
    let canonical = match key {
        "α" | "alpha" => "alpha",
        "Δt" | "dt" => "dt",
        "ω₁" | "omega1" | "w1" => "omega1",
        "ω₂" | "omega2" | "w2" => "omega2",
        "seed" => "seed",
        "horizon" => "horizon",
        "eps_levels" | "eps-levels" => "eps_levels",
        "max_evals" | "max-evals" => "max_evals",
        "polish" => "polish",
        other => {
            return Err(Error::parse(
                line,
                col,
                format!("unknown key {other:?}"),
            ))
        }
    };

    let allowed: &[&str] = match kind {
        SpecKind::Builtin(id) if id == "rotation" => {
            &["alpha", "seed", "horizon", "eps_levels", "max_evals"]
        }
        SpecKind::Builtin(id) if id == "torus_linear_flow" => &[
            "dt",
            "omega1",
            "omega2",
            "seed",
            "horizon",
            "eps_levels",
            "max_evals",
        ],
        SpecKind::Builtin(_) => &["seed", "horizon", "eps_levels", "max_evals"],
        SpecKind::SftFile(_) => &["seed"],
        SpecKind::Map { .. } => &["polish", "seed", "horizon", "eps_levels", "max_evals"],
    };
    if !allowed.contains(&canonical) {
        return Err(Error::parse(
            line,
            col,
            format!("{canonical} does not apply to this kind of system"),
        ));
    }

    fn num<T: std::str::FromStr>(
        value: &str,
        what: &str,
        line: usize,
        col: usize,
    ) -> Result<T> {
        value
            .parse()
            .map_err(|_| Error::parse(line, col, format!("{what} wants a number, got {value:?}")))
    }

    match canonical {
        "alpha" => o.alpha = Some(num(value, "alpha", line, col)?),
        "dt" => o.dt = Some(num(value, "dt", line, col)?),
        "omega1" => o.omega1 = Some(num(value, "omega1", line, col)?),
        "omega2" => o.omega2 = Some(num(value, "omega2", line, col)?),
        "seed" => o.seed = Some(num(value, "seed", line, col)?),
        "horizon" => o.horizon = Some(num(value, "horizon", line, col)?),
        "eps_levels" => o.eps_levels = Some(num(value, "eps_levels", line, col)?),
        "max_evals" => o.max_evals = Some(num(value, "max_evals", line, col)?),
        "polish" => {
            o.polish = Some(match value {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::parse(
                        line,
                        col,
                        format!("polish wants true or false, got {other:?}"),
                    ))
                }
            })
        }
        _ => unreachable!(),
    }
    Ok(())
}

// expression parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(src: &str, line: usize, base_col: usize) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = base_col + i;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' | '−' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            '*' | '×' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::parse(line, col, format!("bad number {text:?}")))?;
                out.push((Tok::Num(v), col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((Tok::Name(text), col));
            }
            other => {
                return Err(Error::parse(
                    line,
                    col,
                    format!("unexpected character {other:?}"),
                ))
            }
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    line: usize,
    end_col: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.i)
            .map(|&(_, c)| c)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect_rparen(&mut self, what: &str) -> Result<()> {
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => Err(Error::parse(
                self.line,
                self.here().min(self.end_col),
                format!("expected ) to close {what}"),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let col = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::Name(n)) => match n.as_str() {
                "x" => Ok(Expr::Coord(0)),
                "y" => Ok(Expr::Coord(1)),
                "mod1" | "abs" => {
                    match self.bump() {
                        Some(Tok::LParen) => {}
                        _ => {
                            return Err(Error::parse(
                                self.line,
                                self.here().min(self.end_col),
                                format!("{n} needs a parenthesized argument"),
                            ))
                        }
                    }
                    let inner = self.expr()?;
                    self.expect_rparen(&n)?;
                    Ok(if n == "mod1" {
                        Expr::Mod1(Box::new(inner))
                    } else {
                        Expr::Abs(Box::new(inner))
                    })
                }
                other => Err(Error::parse(
                    self.line,
                    col,
                    format!("unknown name {other:?}; expected x, y, mod1, or abs"),
                )),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect_rparen("the group")?;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                let inner = self.factor()?;
                Ok(Expr::Sub(Box::new(Expr::Const(0.0)), Box::new(inner)))
            }
            _ => Err(Error::parse(self.line, col, "expected an expression")),
        }
    }
}

fn parse_expr_str(src: &str, line: usize, base_col: usize) -> Result<Expr> {
    let toks = tokenize(src, line, base_col)?;
    let end_col = base_col + src.chars().count();
    let mut p = ExprParser {
        toks,
        i: 0,
        line,
        end_col,
    };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return Err(Error::parse(line, p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::ActionKind;

    #[test]
    fn inline_builtin_with_overrides() {
        let spec = parse_spec_line("builtin:rotation α=0.25 seed=7", 1).unwrap();
        assert_eq!(spec.name, "rotation");
        assert_eq!(spec.kind, SpecKind::Builtin("rotation".into()));
        assert_eq!(spec.overrides.alpha, Some(0.25));
        assert_eq!(spec.overrides.seed, Some(7));

        let (sys, cfg) = resolve(&spec, &AnalysisConfig::default()).unwrap();
        assert_eq!(cfg.seed, 7);
        match sys.kind {
            SystemKind::Metric { action, .. } => match action.kind {
                ActionKind::Cascade { map: MapFn::Rotation(a) } => assert_eq!(a, 0.25),
                other => panic!("wrong action {other:?}"),
            },
            _ => panic!("expected a metric system"),
        }
    }

    #[test]
    fn inline_map_keeps_spaces_inside_the_expression() {
        let spec = parse_spec_line("map:mod1(x + x) seed=3", 1).unwrap();
        assert_eq!(spec.name, "map");
        match &spec.kind {
            SpecKind::Map { exprs, space } => {
                assert_eq!(exprs.len(), 1);
                assert_eq!(*space, MapSpace::Circle);
                assert_eq!(exprs[0].eval(&[0.3]), 0.6);
            }
            other => panic!("wrong kind {other:?}"),
        }
        assert_eq!(spec.overrides.seed, Some(3));
    }

    #[test]
    fn map_systems_default_to_not_polish() {
        let spec = parse_spec_line("map:mod1(x + 0.1)", 1).unwrap();
        let (sys, _) = resolve(&spec, &AnalysisConfig::default()).unwrap();
        match sys.kind {
            SystemKind::Metric { action, .. } => assert!(!action.flags.polish),
            _ => panic!("expected a metric system"),
        }

        let spec = parse_spec_line("map:mod1(x + 0.1) polish=true", 1).unwrap();
        let (sys, _) = resolve(&spec, &AnalysisConfig::default()).unwrap();
        match sys.kind {
            SystemKind::Metric { action, .. } => assert!(action.flags.polish),
            _ => panic!("expected a metric system"),
        }
    }

    #[test]
    fn overrides_are_checked_against_the_kind() {
        let err = parse_spec_line("builtin:doubling alpha=0.3", 1).unwrap_err();
        match err {
            Error::Parse { line, column, message } => {
                assert_eq!(line, 1);
                assert_eq!(column, 18);
                assert!(message.contains("alpha"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn unknown_builtin_lists_the_registry() {
        let err = parse_spec_line("builtin:dubling", 1).unwrap_err();
        match err {
            Error::Parse { message, .. } => {
                assert!(message.contains("doubling"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn expression_errors_carry_positions() {
        let err = parse_spec_line("map:mod1(x + z)", 1).unwrap_err();
        match err {
            Error::Parse { line, column, message } => {
                assert_eq!(line, 1);
                assert_eq!(column, 14);
                assert!(message.contains('z'), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }

        let err = parse_spec_line("map:mod1(x + x", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
    }

    #[test]
    fn two_expressions_make_a_torus_map() {
        let spec = parse_spec_line("map:mod1(x + y), mod1(x + 2*y)", 1).unwrap();
        match &spec.kind {
            SpecKind::Map { exprs, space } => {
                assert_eq!(exprs.len(), 2);
                assert_eq!(*space, MapSpace::Torus);
            }
            other => panic!("wrong kind {other:?}"),
        }
        let (sys, _) = resolve(&spec, &AnalysisConfig::default()).unwrap();
        match sys.kind {
            SystemKind::Metric { space, .. } => assert_eq!(space.name, "map"),
            _ => panic!("expected a metric system"),
        }
    }

    #[test]
    fn one_dimensional_map_cannot_use_y() {
        let err = parse_spec_line("map:mod1(y)", 1).unwrap_err();
        match err {
            Error::Parse { message, .. } => {
                assert!(message.contains("one-dimensional"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn config_file_round_trip() {
        let text = "\
# two systems
[slow]
kind = builtin:rotation
alpha = 0.01
seed = 5

[skew]
kind = map:mod1(x + y), mod1(x + 2*y)
polish = true
";
        let specs = parse_config(text).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].name, "slow");
        assert_eq!(specs[0].overrides.alpha, Some(0.01));
        assert_eq!(specs[0].overrides.seed, Some(5));
        assert_eq!(specs[1].name, "skew");
        assert_eq!(specs[1].overrides.polish, Some(true));
    }

    #[test]
    fn config_errors_report_the_offending_line() {
        let text = "[a]\nkind = builtin:rotation\nhorizn = 10\n";
        let err = parse_config(text).unwrap_err();
        match err {
            Error::Parse { line, column, message } => {
                assert_eq!(line, 3);
                assert_eq!(column, 1);
                assert!(message.contains("horizn"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }

        let text = "[a]\nalpha = 0.3\n";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");

        let text = "[a]\nkind = builtin:identity\n[a]\n";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn section_without_kind_is_rejected() {
        let err = parse_config("[a]\nseed = 3\n").unwrap_err();
        match err {
            Error::Parse { message, .. } => {
                assert!(message.contains("kind"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn sft_kind_resolves_from_disk() {
        let dir = std::env::temp_dir().join("semidyn-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("golden.sft");
        std::fs::write(&path, Sft::golden_mean().render()).unwrap();

        let line = format!("sft:{}", path.display());
        let spec = parse_spec_line(&line, 1).unwrap();
        assert_eq!(spec.name, "golden");
        let (sys, _) = resolve(&spec, &AnalysisConfig::default()).unwrap();
        match sys.kind {
            SystemKind::Shift { sft, .. } => assert_eq!(sft, Sft::golden_mean()),
            _ => panic!("expected a shift"),
        }
    }

    #[test]
    fn missing_sft_file_is_an_io_error() {
        let spec = parse_spec_line("sft:/no/such/file.sft", 1).unwrap();
        let err = resolve(&spec, &AnalysisConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Io { .. }), "{err:?}");
    }

    #[test]
    fn space_key_switches_the_interval() {
        let text = "[m]\nkind = map:abs(x - 0.5)\nspace = interval\n";
        let specs = parse_config(text).unwrap();
        match &specs[0].kind {
            SpecKind::Map { space, .. } => assert_eq!(*space, MapSpace::Interval),
            other => panic!("wrong kind {other:?}"),
        }

        let text = "[m]\nkind = map:abs(x - 0.5)\nspace = torus\n";
        let err = parse_config(text).unwrap_err();
        match err {
            Error::Parse { message, .. } => {
                assert!(message.contains("needs 2"), "{message}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }
}
