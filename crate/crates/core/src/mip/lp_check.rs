//! A small reader for the LP subset the exporter writes.
//!
//! It accepts comment lines (`\`), the section headers `Minimize`,
//! `Maximize`, `Subject To`, `Bounds`, `Binary`/`Binaries`, `General` and
//! `End` in that order, one row per line, and rejects anything else.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token {
            "<=" | "=<" | "<" => Some(Relation::Le),
            ">=" | "=>" | ">" => Some(Relation::Ge),
            "=" => Some(Relation::Eq),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Rational,
    pub var: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpBound {
    pub var: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LpModel {
    pub minimize: bool,
    pub objective: Vec<Term>,
    pub constraints: Vec<LpConstraint>,
    pub bounds: Vec<LpBound>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

impl LpModel {
    /// Rows whose name is `family` or starts with `family_`.
    pub fn rows_in_family(&self, family: &str) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.name.split('_').next() == Some(family))
            .count()
    }

    /// Row counts keyed by family (the name up to the first `_`).
    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.constraints {
            let family = c.name.split('_').next().unwrap_or_default().to_string();
            *out.entry(family).or_insert(0) += 1;
        }
        out
    }

    /// Every variable mentioned anywhere in the model.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        out.extend(self.objective.iter().map(|t| t.var.clone()));
        for c in &self.constraints {
            out.extend(c.terms.iter().map(|t| t.var.clone()));
        }
        out.extend(self.bounds.iter().map(|b| b.var.clone()));
        out.extend(self.binaries.iter().cloned());
        out.extend(self.generals.iter().cloned());
        out
    }

    /// Whether every coefficient, right-hand side and bound is an integer.
    pub fn all_integral(&self) -> bool {
        let terms = self
            .objective
            .iter()
            .chain(self.constraints.iter().flat_map(|c| c.terms.iter()));
        terms.clone().all(|t| t.coef.is_integer())
            && self.constraints.iter().all(|c| c.rhs.is_integer())
            && self
                .bounds
                .iter()
                .flat_map(|b| b.lower.iter().chain(b.upper.iter()))
                .all(Rational::is_integer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LpParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for LpParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    End,
}

fn header(line: &str) -> Option<Section> {
    let lower = line.to_ascii_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    match words.as_slice() {
        ["minimize"] | ["minimise"] | ["min"] | ["maximize"] | ["maximise"] | ["max"] => {
            Some(Section::Objective)
        }
        ["subject", "to"] | ["such", "that"] | ["st"] | ["s.t."] => Some(Section::Constraints),
        ["bounds"] | ["bound"] => Some(Section::Bounds),
        ["binary"] | ["binaries"] | ["bin"] => Some(Section::Binary),
        ["general"] | ["generals"] | ["gen"] => Some(Section::General),
        ["end"] => Some(Section::End),
        _ => None,
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || "_.[]".contains(c))
        && name.len() <= 255
}

fn parse_number(token: &str) -> Option<Rational> {
    let (neg, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let value = match body.split_once('.') {
        None => body.parse::<Rational>().ok()?,
        Some((int, frac)) => {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return None;
            }
            let digits = format!("{int}{frac}");
            let denom = format!("1{}", "0".repeat(frac.len()));
            format!("{digits}/{denom}").parse::<Rational>().ok()?
        }
    };
    Some(if neg { -value } else { value })
}

fn parse_terms(tokens: &[&str]) -> Result<Vec<Term>, String> {
    let mut out = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    let mut need_operator = false;
    for &tok in tokens {
        if tok == "+" || tok == "-" {
            if coef.is_some() {
                return Err(format!("sign {tok:?} after a coefficient"));
            }
            if tok == "-" {
                sign = -sign;
            }
            need_operator = false;
        } else if let Some(value) = parse_number(tok) {
            if need_operator || coef.is_some() {
                return Err(format!("unexpected number {tok:?}"));
            }
            coef = Some(value);
        } else if valid_name(tok) {
            if need_operator {
                return Err(format!("missing operator before {tok:?}"));
            }
            let c = coef.take().unwrap_or_else(Rational::one);
            out.push(Term { coef: c * &sign, var: tok.to_string() });
            sign = Rational::one();
            need_operator = true;
        } else {
            return Err(format!("unexpected token {tok:?}"));
        }
    }
    if coef.is_some() {
        return Err("dangling coefficient".into());
    }
    Ok(out)
}

fn split_label(body: &str) -> Result<(Option<String>, &str), String> {
    match body.split_once(':') {
        Some((name, rest)) => {
            let name = name.trim();
            if !valid_name(name) {
                return Err(format!("invalid row name {name:?}"));
            }
            Ok((Some(name.to_string()), rest))
        }
        None => Ok((None, body)),
    }
}

fn parse_constraint(body: &str, index: usize) -> Result<LpConstraint, String> {
    let (name, rest) = split_label(body)?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    let pos = tokens
        .iter()
        .position(|t| Relation::parse(t).is_some())
        .ok_or("row has no relation")?;
    let relation = Relation::parse(tokens[pos]).unwrap();
    let rhs_tokens = &tokens[pos + 1..];
    let rhs = match rhs_tokens {
        [v] => parse_number(v),
        ["-", v] => parse_number(v).map(|r| -r),
        _ => None,
    }
    .ok_or("right-hand side must be a single number")?;
    let terms = parse_terms(&tokens[..pos])?;
    if terms.is_empty() {
        return Err("row has no terms".into());
    }
    Ok(LpConstraint {
        name: name.unwrap_or_else(|| format!("R{}", index + 1)),
        terms,
        relation,
        rhs,
    })
}

fn parse_bound(body: &str) -> Result<LpBound, String> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let num = |t: &str| parse_number(t).ok_or_else(|| format!("expected a number, got {t:?}"));
    let var = |t: &str| {
        if valid_name(t) {
            Ok(t.to_string())
        } else {
            Err(format!("expected a variable, got {t:?}"))
        }
    };
    match tokens.as_slice() {
        [lo, r1, v, r2, hi] if Relation::parse(r1) == Some(Relation::Le) && Relation::parse(r2) == Some(Relation::Le) => {
            Ok(LpBound { var: var(v)?, lower: Some(num(lo)?), upper: Some(num(hi)?) })
        }
        [v, "free"] | [v, "Free"] | [v, "FREE"] => Ok(LpBound { var: var(v)?, lower: None, upper: None }),
        [v, r, x] => {
            let (v, x) = (var(v)?, num(x)?);
            match Relation::parse(r) {
                Some(Relation::Le) => Ok(LpBound { var: v, lower: None, upper: Some(x) }),
                Some(Relation::Ge) => Ok(LpBound { var: v, lower: Some(x), upper: None }),
                Some(Relation::Eq) => Ok(LpBound { var: v, lower: Some(x.clone()), upper: Some(x) }),
                None => Err(format!("unknown relation {r:?}")),
            }
        }
        _ => Err(format!("unrecognized bound {body:?}")),
    }
}

/// Parses LP text, checking section order, row syntax and name uniqueness.
pub fn parse_lp(text: &str) -> Result<LpModel, LpParseError> {
    let mut model = LpModel::default();
    let mut section = Section::Start;
    let mut names = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| LpParseError { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('\\') {
            continue;
        }
        if let Some(next) = header(trimmed) {
            if next <= section || (section == Section::Start) != (next == Section::Objective) {
                return Err(err(format!("section {trimmed:?} out of order")));
            }
            if next == Section::Objective {
                model.minimize = trimmed.to_ascii_lowercase().starts_with("min");
            }
            section = next;
            continue;
        }
        match section {
            Section::Start => return Err(err("content before the objective section".into())),
            Section::End => return Err(err("content after End".into())),
            Section::Objective => {
                if !model.objective.is_empty() {
                    return Err(err("objective spans more than one line".into()));
                }
                let (_, rest) = split_label(trimmed).map_err(err)?;
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                model.objective = parse_terms(&tokens).map_err(err)?;
            }
            Section::Constraints => {
                let row = parse_constraint(trimmed, model.constraints.len()).map_err(err)?;
                if !names.insert(row.name.clone()) {
                    return Err(err(format!("duplicate row name {:?}", row.name)));
                }
                model.constraints.push(row);
            }
            Section::Bounds => model.bounds.push(parse_bound(trimmed).map_err(err)?),
            Section::Binary | Section::General => {
                for tok in trimmed.split_whitespace() {
                    if !valid_name(tok) {
                        return Err(err(format!("invalid variable {tok:?}")));
                    }
                    if section == Section::Binary {
                        model.binaries.push(tok.to_string());
                    } else {
                        model.generals.push(tok.to_string());
                    }
                }
            }
        }
    }
    if section != Section::End {
        return Err(LpParseError {
            line: text.lines().count(),
            message: "missing End".into(),
        });
    }
    if model.constraints.is_empty() {
        return Err(LpParseError { line: 0, message: "no Subject To rows".into() });
    }
    Ok(model)
}
