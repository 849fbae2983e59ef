//! Line-oriented text formats for fans, weighted configurations and ideals.
//!
//! ```text
//! # comment
//! format 1
//! field Q
//! gamma all
//! rank 2
//! valuation dense
//! cone
//! 1 0 | 0
//! 0 1 | 0
//! -1 -1 | 1
//! ```

use std::fmt::Write as _;

use vtoric::fan::GammaFan;
use vtoric::gamma_cone::{GammaCone, GammaIneq, ValuationMode};
use vtoric::projective::WeightedConfig;
use vtoric::semigroup::{MonomialDatum, SemigroupGens};
use vtoric::{Error, Field, Result, Scalar, ValueGroup};

pub const FORMAT_VERSION: u32 = 1;

/// Command-line overrides of header values.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub field: Option<Field>,
    pub gamma: Option<String>,
    pub discrete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub field: Field,
    pub gamma: ValueGroup,
    pub rank: usize,
    pub mode: ValuationMode,
    pub points: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Fan,
    Config,
    Ideal,
}

impl Kind {
    fn allows(self, key: &str) -> bool {
        match key {
            "format" | "field" | "gamma" | "rank" => true,
            "valuation" => self != Kind::Ideal,
            "points" => self == Kind::Config,
            _ => false,
        }
    }
}

pub fn parse_gamma(field: Field, text: &str) -> Result<ValueGroup> {
    let text = text.trim();
    if text == "all" || text == "whole-field" {
        return Ok(ValueGroup::WholeField(field));
    }
    let gens = text
        .split(',')
        .map(|g| g.trim().parse::<Scalar>())
        .collect::<Result<Vec<_>>>()?;
    ValueGroup::generated(field, gens)
}

/// Content lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn is_data_line(l: &str) -> bool {
    l == "cone" || l.contains('|')
}

fn parse_header(lines: &[(usize, &str)], kind: Kind, ov: &Overrides) -> Result<(Header, usize)> {
    let mut seen: Vec<(&str, usize, &str)> = Vec::new();
    let mut k = 0;
    while k < lines.len() && !is_data_line(lines[k].1) {
        let (no, l) = lines[k];
        let (key, value) = l
            .split_once(char::is_whitespace)
            .map(|(a, b)| (a, b.trim()))
            .ok_or_else(|| Error::parse(no, format!("expected `key value`, found `{l}`")))?;
        if !kind.allows(key) {
            return Err(Error::parse(no, format!("unknown header key `{key}`")));
        }
        if seen.iter().any(|(k2, _, _)| *k2 == key) {
            return Err(Error::parse(no, format!("duplicate header key `{key}`")));
        }
        seen.push((key, no, value));
        k += 1;
    }
    let get = |key: &str| seen.iter().find(|(k2, _, _)| *k2 == key).map(|(_, no, v)| (*no, *v));
    let end_line = lines.get(k).map_or(lines.last().map_or(1, |l| l.0), |l| l.0);
    match get("format") {
        None => return Err(Error::parse(end_line, "missing header key `format`")),
        Some((no, v)) => {
            if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                return Err(Error::parse(no, format!("unsupported format version `{v}`")));
            }
        }
    }
    let field = match (&ov.field, get("field")) {
        (Some(f), _) => *f,
        (None, Some((no, v))) => v.parse::<Field>().map_err(|e| Error::parse(no, e.to_string()))?,
        (None, None) => Field::Rational,
    };
    let gamma = match (&ov.gamma, get("gamma")) {
        (Some(g), _) => parse_gamma(field, g)?,
        (None, Some((no, v))) => parse_gamma(field, v).map_err(|e| match e {
            Error::Domain(m) => Error::parse(no, m),
            e => e,
        })?,
        (None, None) => ValueGroup::WholeField(field),
    };
    let rank = match get("rank") {
        None => return Err(Error::parse(end_line, "missing header key `rank`")),
        Some((no, v)) => v.parse::<usize>().map_err(|_| Error::parse(no, format!("bad rank `{v}`")))?,
    };
    let mode = if ov.discrete {
        ValuationMode::Discrete
    } else {
        match get("valuation") {
            None => ValuationMode::Dense,
            Some((no, v)) => v.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?,
        }
    };
    let points = match get("points") {
        None if kind == Kind::Config => return Err(Error::parse(end_line, "missing header key `points`")),
        None => None,
        Some((no, v)) => Some(v.parse::<usize>().map_err(|_| Error::parse(no, format!("bad count `{v}`")))?),
    };
    Ok((
        Header {
            field,
            gamma,
            rank,
            mode,
            points,
        },
        k,
    ))
}

/// Splits `m_1 … m_n | x` into the integer vector and the right-hand side.
fn split_data(no: usize, l: &str, rank: usize) -> Result<(Vec<i64>, &str)> {
    let (lhs, rhs) = l
        .split_once('|')
        .ok_or_else(|| Error::parse(no, format!("expected `m_1 … m_n | c`, found `{l}`")))?;
    let m = lhs
        .split_whitespace()
        .map(|x| x.parse::<i64>().map_err(|_| Error::parse(no, format!("bad integer `{x}`"))))
        .collect::<Result<Vec<i64>>>()?;
    if m.len() != rank {
        return Err(Error::parse(no, format!("expected {rank} integers, found {}", m.len())));
    }
    Ok((m, rhs.trim()))
}

fn parse_scalar(no: usize, s: &str, field: Field) -> Result<Scalar> {
    let x: Scalar = s.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
    if !x.fits(field) {
        return Err(Error::parse(no, format!("{x} is not in {field}")));
    }
    Ok(x)
}

/// Parsed fan file: header plus the Γ-cones in file order.
pub fn parse_fan_cones(text: &str, ov: &Overrides) -> Result<(Header, Vec<GammaCone>)> {
    let lines = content_lines(text);
    let (h, start) = parse_header(&lines, Kind::Fan, ov)?;
    let mut blocks: Vec<(usize, Vec<(usize, GammaIneq)>)> = Vec::new();
    for &(no, l) in &lines[start..] {
        if l == "cone" {
            blocks.push((no, Vec::new()));
            continue;
        }
        let block = blocks
            .last_mut()
            .ok_or_else(|| Error::parse(no, "inequality outside a `cone` block"))?;
        let (m, rhs) = split_data(no, l, h.rank)?;
        block.1.push((no, GammaIneq::new(m, parse_scalar(no, rhs, h.field)?)));
    }
    if blocks.is_empty() {
        return Err(Error::domain("no cones"));
    }
    let mut cones = Vec::new();
    for (index, (_, ineqs)) in blocks.into_iter().enumerate() {
        for (no, q) in &ineqs {
            if !h.gamma.contains(&q.c)? {
                return Err(Error::domain(format!(
                    "line {no}: {} is not an element of the value group {}",
                    q.c, h.gamma
                )));
            }
        }
        let ineqs = ineqs.into_iter().map(|(_, q)| q).collect();
        let cone = GammaCone::admissible(&h.gamma, h.rank, ineqs).map_err(|e| match e {
            Error::NotAdmissible { certificate, .. } => Error::NotAdmissible { index, certificate },
            e => e,
        })?;
        cones.push(cone);
    }
    Ok((h, cones))
}

pub fn parse_fan(text: &str, ov: &Overrides) -> Result<GammaFan> {
    let (h, cones) = parse_fan_cones(text, ov)?;
    GammaFan::new(h.gamma, h.mode, h.rank, cones)
}

fn write_header(out: &mut String, gamma: &ValueGroup, rank: usize, mode: Option<ValuationMode>) {
    writeln!(out, "format {FORMAT_VERSION}").unwrap();
    writeln!(out, "field {}", gamma.field()).unwrap();
    writeln!(out, "gamma {gamma}").unwrap();
    writeln!(out, "rank {rank}").unwrap();
    if let Some(mode) = mode {
        writeln!(out, "valuation {mode}").unwrap();
    }
}

pub fn serialize_cones<'a>(
    gamma: &ValueGroup,
    mode: ValuationMode,
    n: usize,
    cones: impl IntoIterator<Item = &'a GammaCone>,
) -> String {
    let mut out = String::new();
    write_header(&mut out, gamma, n, Some(mode));
    for c in cones {
        out.push_str("cone\n");
        for q in c.inequalities() {
            writeln!(out, "{q}").unwrap();
        }
    }
    out
}

/// Canonical text of a fan: fixed header order, cones in fan order.
pub fn serialize_fan(fan: &GammaFan) -> String {
    serialize_cones(fan.gamma(), fan.mode(), fan.n(), fan.cones())
}

pub fn parse_config(text: &str, ov: &Overrides) -> Result<WeightedConfig> {
    let lines = content_lines(text);
    let (h, start) = parse_header(&lines, Kind::Config, ov)?;
    let mut points = Vec::new();
    let mut heights = Vec::new();
    for &(no, l) in &lines[start..] {
        if l == "cone" {
            return Err(Error::parse(no, "`cone` blocks are not allowed in a configuration"));
        }
        let (m, rhs) = split_data(no, l, h.rank)?;
        points.push(m);
        heights.push(if rhs == "inf" {
            None
        } else {
            Some(parse_scalar(no, rhs, h.field)?)
        });
    }
    let expected = h.points.expect("config header has points");
    if points.len() != expected {
        let last = lines.last().map_or(1, |l| l.0);
        return Err(Error::parse(last, format!("expected {expected} points, found {}", points.len())));
    }
    WeightedConfig::new(h.gamma, h.mode, h.rank, points, heights)
}

pub fn serialize_config(cfg: &WeightedConfig) -> String {
    let mut out = String::new();
    write_header(&mut out, cfg.gamma(), cfg.n(), Some(cfg.mode()));
    writeln!(out, "points {}", cfg.points().len()).unwrap();
    out.push_str(&cfg.to_string());
    out
}

pub fn parse_ideal(text: &str, ov: &Overrides) -> Result<(Header, SemigroupGens)> {
    let lines = content_lines(text);
    let (h, start) = parse_header(&lines, Kind::Ideal, ov)?;
    let mut gens = Vec::new();
    for &(no, l) in &lines[start..] {
        if l == "cone" {
            return Err(Error::parse(no, "`cone` blocks are not allowed in an ideal"));
        }
        let (u, rhs) = split_data(no, l, h.rank)?;
        gens.push(MonomialDatum::new(u, parse_scalar(no, rhs, h.field)?));
    }
    let s = SemigroupGens::new(&h.gamma, h.rank, gens)?;
    Ok((h, s))
}

pub fn serialize_ideal(gamma: &ValueGroup, gens: &SemigroupGens) -> String {
    let mut out = String::new();
    write_header(&mut out, gamma, gens.n(), None);
    for d in gens.elements() {
        writeln!(out, "{d}").unwrap();
    }
    out
}
