//! Line-oriented instance files.
//!
//! ```text
//! nurses 4
//! days 7
//! shifts 3
//! alpha 0.5
//! work_days 5 6
//! max_distinct 2
//! coverage default 1          # per (day, shift); override: coverage <day> <shift> <count>
//! pref <nurse> <day> <shift> <weight>
//! ```
//!
//! `#` starts a comment. Nurse, day and coverage-shift indices are 1-based;
//! the shift in a `pref` line is a code, 0 meaning a requested day off.
//! Only `nurses`, `days` and `shifts` are mandatory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::nsp::{InstanceError, Preference, RosterInstance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid instance: {0}")]
    Semantic(#[from] InstanceError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn arity(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.len() != n + 1 {
            return Err(syntax(self.number, format!("`{}` takes {n} argument(s)", self.tokens[0])));
        }
        Ok(())
    }

    fn arg<T: FromStr>(&self, i: usize) -> Result<T, ParseError> {
        let tok = self.tokens[i + 1];
        tok.parse().map_err(|_| syntax(self.number, format!("cannot parse `{tok}` in `{}`", self.tokens[0])))
    }

    /// A 1-based index converted to 0-based.
    fn index(&self, i: usize, what: &str) -> Result<usize, ParseError> {
        let v: usize = self.arg(i)?;
        v.checked_sub(1).ok_or_else(|| syntax(self.number, format!("{what} indices start at 1")))
    }
}

#[derive(Default)]
struct Draft {
    nurses: Option<usize>,
    days: Option<usize>,
    shifts: Option<u32>,
    alpha: Option<f64>,
    work_days: Option<(u32, u32)>,
    max_distinct: Option<u32>,
    coverage_default: Option<u32>,
    coverage: BTreeMap<(usize, usize), (u32, usize)>,
    preferences: Vec<(Preference, usize)>,
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: &Line) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(syntax(line.number, format!("`{}` given twice", line.tokens[0])));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<RosterInstance, ParseError> {
    let mut d = Draft::default();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let line = Line { number: i + 1, tokens };
        match line.tokens[0] {
            "nurses" => {
                line.arity(1)?;
                set_once(&mut d.nurses, line.arg(0)?, &line)?;
            }
            "days" => {
                line.arity(1)?;
                set_once(&mut d.days, line.arg(0)?, &line)?;
            }
            "shifts" => {
                line.arity(1)?;
                set_once(&mut d.shifts, line.arg(0)?, &line)?;
            }
            "alpha" => {
                line.arity(1)?;
                set_once(&mut d.alpha, line.arg(0)?, &line)?;
            }
            "work_days" => {
                line.arity(2)?;
                set_once(&mut d.work_days, (line.arg(0)?, line.arg(1)?), &line)?;
            }
            "max_distinct" => {
                line.arity(1)?;
                set_once(&mut d.max_distinct, line.arg(0)?, &line)?;
            }
            "coverage" if line.tokens.get(1) == Some(&"default") => {
                line.arity(2)?;
                set_once(&mut d.coverage_default, line.arg(1)?, &line)?;
            }
            "coverage" => {
                line.arity(3)?;
                let key = (line.index(0, "day")?, line.index(1, "shift")?);
                if d.coverage.insert(key, (line.arg(2)?, line.number)).is_some() {
                    return Err(syntax(line.number, "coverage for this day and shift given twice"));
                }
            }
            "pref" => {
                line.arity(4)?;
                let pref = Preference {
                    nurse: line.index(0, "nurse")?,
                    day: line.index(1, "day")?,
                    shift: line.arg(2)?,
                    weight: line.arg(3)?,
                };
                d.preferences.push((pref, line.number));
            }
            other => return Err(syntax(line.number, format!("unknown key `{other}`"))),
        }
    }

    let num_nurses = d.nurses.ok_or(ParseError::Missing("nurses"))?;
    let num_days = d.days.ok_or(ParseError::Missing("days"))?;
    let num_shifts = d.shifts.ok_or(ParseError::Missing("shifts"))?;
    let mut coverage = RosterInstance::uniform_coverage(num_days, num_shifts, d.coverage_default.unwrap_or(1));
    for (&(day, shift), &(count, line)) in &d.coverage {
        if day >= num_days || shift >= num_shifts as usize {
            return Err(syntax(line, format!("coverage for day {} shift {} is outside the horizon", day + 1, shift + 1)));
        }
        coverage[day][shift] = count;
    }
    let (work_days_min, work_days_max) = d.work_days.unwrap_or((5, 6));
    let instance = RosterInstance {
        num_nurses,
        num_days,
        num_shifts,
        coverage,
        work_days_min,
        work_days_max,
        max_distinct_per_shift_week: d.max_distinct.unwrap_or(2),
        preferences: d.preferences.into_iter().map(|(p, _)| p).collect(),
        alpha: d.alpha.unwrap_or(0.5),
    };
    instance.validate()?;
    Ok(instance)
}

/// Serializes an instance so that [`parse_instance`] reads it back unchanged.
pub fn write_instance(instance: &RosterInstance) -> String {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in instance.coverage.iter().flatten() {
        *counts.entry(c).or_default() += 1;
    }
    // most frequent count; ties to the smallest
    let default = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map_or(1, |(&c, _)| c);

    let mut out = String::new();
    let _ = writeln!(out, "nurses {}", instance.num_nurses);
    let _ = writeln!(out, "days {}", instance.num_days);
    let _ = writeln!(out, "shifts {}", instance.num_shifts);
    let _ = writeln!(out, "alpha {}", instance.alpha);
    let _ = writeln!(out, "work_days {} {}", instance.work_days_min, instance.work_days_max);
    let _ = writeln!(out, "max_distinct {}", instance.max_distinct_per_shift_week);
    let _ = writeln!(out, "coverage default {default}");
    for (day, row) in instance.coverage.iter().enumerate() {
        for (shift, &c) in row.iter().enumerate() {
            if c != default {
                let _ = writeln!(out, "coverage {} {} {c}", day + 1, shift + 1);
            }
        }
    }
    for p in &instance.preferences {
        let _ = writeln!(out, "pref {} {} {} {}", p.nurse + 1, p.day + 1, p.shift, p.weight);
    }
    out
}
