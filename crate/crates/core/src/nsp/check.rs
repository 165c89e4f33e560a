//! Ground-truth audit of a roster against the hard rules.
//!
//! Works directly on cell codes and never touches the constraint engine, so
//! it can cross-check solver output as well as rosters from elsewhere.

use std::fmt;

use super::{RosterInstance, Schedule, ShapeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HardConstraint {
    /// Cell codes come from the shift universe `0..=S`.
    Hc1,
    /// Daily coverage per shift.
    Hc2,
    /// Workdays per nurse per week.
    Hc3,
    /// Distinct nurses per shift per week.
    Hc4,
    /// No isolated late-shift day.
    Hc5,
}

impl fmt::Display for HardConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            HardConstraint::Hc1 => "HC1",
            HardConstraint::Hc2 => "HC2",
            HardConstraint::Hc3 => "HC3",
            HardConstraint::Hc4 => "HC4",
            HardConstraint::Hc5 => "HC5",
        };
        f.write_str(label)
    }
}

/// Where a violation happened. Indices are 0-based; `Display` prints 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub nurse: Option<usize>,
    pub day: Option<usize>,
    pub shift: Option<u32>,
    pub week: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: HardConstraint,
    pub location: Location,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constraint)?;
        let loc = &self.location;
        if let Some(n) = loc.nurse {
            write!(f, " nurse {}", n + 1)?;
        }
        if let Some(d) = loc.day {
            write!(f, " day {}", d + 1)?;
        }
        if let Some(s) = loc.shift {
            write!(f, " shift {s}")?;
        }
        if let Some(w) = loc.week {
            write!(f, " week {}", w + 1)?;
        }
        write!(f, ": {}", self.detail)
    }
}

fn violation(constraint: HardConstraint, location: Location, detail: String) -> Violation {
    Violation { constraint, location, detail }
}

/// All hard-rule violations of `schedule`, in HC order; empty iff feasible.
pub fn check_roster(schedule: &Schedule, instance: &RosterInstance) -> Result<Vec<Violation>, ShapeError> {
    schedule.check_shape(instance)?;
    let s_max = instance.num_shifts;
    let mut out = Vec::new();

    for i in 0..instance.num_nurses {
        for k in 0..instance.num_days {
            let code = schedule.get(i, k);
            if code > s_max {
                out.push(violation(
                    HardConstraint::Hc1,
                    Location { nurse: Some(i), day: Some(k), shift: Some(code), week: None },
                    format!("code {code} is not a shift in 0..={s_max}"),
                ));
            }
        }
    }

    for k in 0..instance.num_days {
        for s in 1..=s_max {
            let staffed = (0..instance.num_nurses).filter(|&i| schedule.get(i, k) == s).count() as u32;
            let required = instance.coverage[k][s as usize - 1];
            if staffed != required {
                out.push(violation(
                    HardConstraint::Hc2,
                    Location { day: Some(k), shift: Some(s), ..Default::default() },
                    format!("{staffed} nurses on shift, {required} required"),
                ));
            }
        }
    }

    let windows = instance.week_windows();
    for (w, window) in windows.iter().enumerate() {
        let (min, max) = instance.work_bounds(window.len());
        for i in 0..instance.num_nurses {
            let worked = schedule.row(i)[window.clone()].iter().filter(|&&c| c != 0).count() as u32;
            if worked < min || worked > max {
                out.push(violation(
                    HardConstraint::Hc3,
                    Location { nurse: Some(i), week: Some(w), ..Default::default() },
                    format!("works {worked} days, allowed {min}..={max}"),
                ));
            }
        }
    }

    for (w, window) in windows.iter().enumerate() {
        for s in 1..=s_max {
            let distinct = (0..instance.num_nurses)
                .filter(|&i| schedule.row(i)[window.clone()].contains(&s))
                .count() as u32;
            if distinct > instance.max_distinct_per_shift_week {
                out.push(violation(
                    HardConstraint::Hc4,
                    Location { shift: Some(s), week: Some(w), ..Default::default() },
                    format!("{distinct} different nurses, at most {} allowed", instance.max_distinct_per_shift_week),
                ));
            }
        }
    }

    let late = instance.late_shifts();
    for i in 0..instance.num_nurses {
        let row = schedule.row(i);
        for (k, &code) in row.iter().enumerate() {
            if !late.contains(&code) {
                continue;
            }
            let before = k.checked_sub(1).map(|p| row[p]);
            let after = row.get(k + 1).copied();
            if before != Some(code) && after != Some(code) {
                out.push(violation(
                    HardConstraint::Hc5,
                    Location { nurse: Some(i), day: Some(k), shift: Some(code), week: None },
                    "late shift not worked on an adjacent day".to_string(),
                ));
            }
        }
    }

    Ok(out)
}
