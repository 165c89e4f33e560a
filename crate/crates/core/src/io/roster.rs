//! Roster grids.
//!
//! ```text
//! Nurse/Day 1 2 3 4 5 6 7
//! N1 O O M M M M M
//! N2 M M O O A A A
//! ```
//!
//! With at most three shifts, codes print as letters (O = Off, M = 1, A = 2,
//! N = 3); otherwise as `O` and decimal numbers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::nsp::{RosterInstance, Schedule};

const HEADER: &str = "Nurse/Day";

pub fn render_roster(schedule: &Schedule, instance: &RosterInstance) -> String {
    let letters = instance.num_shifts <= 3;
    let mut out = String::from(HEADER);
    for day in 1..=schedule.days() {
        let _ = write!(out, " {day}");
    }
    out.push('\n');
    for (i, row) in schedule.rows().enumerate() {
        let _ = write!(out, "N{}", i + 1);
        for &code in row {
            out.push(' ');
            match (code, letters) {
                (0, _) => out.push('O'),
                (1, true) => out.push('M'),
                (2, true) => out.push('A'),
                (3, true) => out.push('N'),
                (c, _) => {
                    let _ = write!(out, "{c}");
                }
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RosterParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("roster has {got} nurse rows, instance has {expected}")]
    RowCount { got: usize, expected: usize },
}

fn parse_cell(tok: &str) -> Option<u32> {
    match tok {
        "O" => Some(0),
        "M" => Some(1),
        "A" => Some(2),
        "N" => Some(3),
        _ if tok.bytes().all(|b| b.is_ascii_digit()) => tok.parse().ok(),
        _ => None,
    }
}

/// Reads a grid produced by [`render_roster`].
///
/// Leading blank and `#` lines are skipped; the grid ends at the first blank
/// line after it, so trailing report text is ignored. Numeric cells are
/// accepted for any shift count; range checks are left to the roster checker.
pub fn parse_roster(text: &str, instance: &RosterInstance) -> Result<Schedule, RosterParseError> {
    let mut lines = text.lines().enumerate().skip_while(|(_, l)| {
        let t = l.trim();
        t.is_empty() || t.starts_with('#')
    });
    let err = |line: usize, message: String| RosterParseError::Syntax { line: line + 1, message };

    match lines.next() {
        Some((_, l)) if l.split_whitespace().next() == Some(HEADER) => {}
        Some((n, _)) => return Err(err(n, format!("expected a `{HEADER}` header"))),
        None => return Err(RosterParseError::RowCount { got: 0, expected: instance.num_nurses }),
    }

    let mut rows = Vec::new();
    for (n, line) in lines {
        let mut tokens = line.split_whitespace();
        let Some(label) = tokens.next() else { break };
        let expected = format!("N{}", rows.len() + 1);
        if label != expected {
            return Err(err(n, format!("expected row label `{expected}`, found `{label}`")));
        }
        let cells = tokens
            .map(|t| parse_cell(t).ok_or_else(|| err(n, format!("unknown shift code `{t}`"))))
            .collect::<Result<Vec<u32>, _>>()?;
        if cells.len() != instance.num_days {
            return Err(err(n, format!("{} cells, expected {}", cells.len(), instance.num_days)));
        }
        rows.push(cells);
    }
    if rows.len() != instance.num_nurses {
        return Err(RosterParseError::RowCount { got: rows.len(), expected: instance.num_nurses });
    }
    Ok(Schedule::from_rows(rows).expect("rows checked to equal length"))
}
