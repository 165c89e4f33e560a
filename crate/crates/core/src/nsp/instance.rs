use std::ops::Range;

use thiserror::Error;

use crate::cp::MAX_VALUE;

/// Days per HC3/HC4 window.
pub const WEEK_LEN: usize = 7;

/// A nurse's request for a shift code (0 = a day off) on a given day.
#[derive(Debug, Clone, PartialEq)]
pub struct Preference {
    pub nurse: usize,
    pub day: usize,
    pub shift: u32,
    pub weight: f64,
}

/// A nurse rostering problem.
///
/// Shift codes run `1..=num_shifts`; code 0 is Off. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RosterInstance {
    pub num_nurses: usize,
    pub num_days: usize,
    pub num_shifts: u32,
    /// `coverage[day][shift - 1]` nurses required on that shift.
    pub coverage: Vec<Vec<u32>>,
    pub work_days_min: u32,
    pub work_days_max: u32,
    pub max_distinct_per_shift_week: u32,
    pub preferences: Vec<Preference>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("{0} must be at least 1")]
    ZeroDimension(&'static str),
    #[error("shifts must be at most {max}, got {got}")]
    TooManyShifts { got: u32, max: u32 },
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("work_days bounds {min}..{max} are invalid (need min <= max <= 7)")]
    WorkBounds { min: u32, max: u32 },
    #[error("coverage table is {rows}x{cols}, expected {days}x{shifts}")]
    CoverageShape { rows: usize, cols: usize, days: usize, shifts: u32 },
    #[error("coverage on day {day} needs {required} nurses but only {nurses} exist")]
    CoverageExceedsNurses { day: usize, required: u32, nurses: usize },
    #[error("preference {index} refers to {what} outside the instance")]
    PreferenceOutOfRange { index: usize, what: &'static str },
    #[error("preference {index} has non-positive weight {weight}")]
    PreferenceWeight { index: usize, weight: f64 },
}

impl RosterInstance {
    /// Uniform coverage of `per_shift` nurses on every (day, shift).
    pub fn uniform_coverage(num_days: usize, num_shifts: u32, per_shift: u32) -> Vec<Vec<u32>> {
        vec![vec![per_shift; num_shifts as usize]; num_days]
    }

    /// Checks every instance invariant. Day numbers in errors are 1-based.
    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.num_nurses == 0 {
            return Err(InstanceError::ZeroDimension("nurses"));
        }
        if self.num_days == 0 {
            return Err(InstanceError::ZeroDimension("days"));
        }
        if self.num_shifts == 0 {
            return Err(InstanceError::ZeroDimension("shifts"));
        }
        if self.num_shifts > MAX_VALUE {
            return Err(InstanceError::TooManyShifts { got: self.num_shifts, max: MAX_VALUE });
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(InstanceError::AlphaOutOfRange(self.alpha));
        }
        if self.work_days_min > self.work_days_max || self.work_days_max > WEEK_LEN as u32 {
            return Err(InstanceError::WorkBounds { min: self.work_days_min, max: self.work_days_max });
        }
        let shape_ok = self.coverage.len() == self.num_days
            && self.coverage.iter().all(|row| row.len() == self.num_shifts as usize);
        if !shape_ok {
            return Err(InstanceError::CoverageShape {
                rows: self.coverage.len(),
                cols: self.coverage.first().map_or(0, Vec::len),
                days: self.num_days,
                shifts: self.num_shifts,
            });
        }
        for (day, row) in self.coverage.iter().enumerate() {
            let required: u32 = row.iter().sum();
            if required as usize > self.num_nurses {
                return Err(InstanceError::CoverageExceedsNurses {
                    day: day + 1,
                    required,
                    nurses: self.num_nurses,
                });
            }
        }
        for (index, p) in self.preferences.iter().enumerate() {
            let what = if p.nurse >= self.num_nurses {
                Some("a nurse")
            } else if p.day >= self.num_days {
                Some("a day")
            } else if p.shift > self.num_shifts {
                Some("a shift")
            } else {
                None
            };
            if let Some(what) = what {
                return Err(InstanceError::PreferenceOutOfRange { index, what });
            }
            if !p.weight.is_finite() || p.weight <= 0.0 {
                return Err(InstanceError::PreferenceWeight { index, weight: p.weight });
            }
        }
        Ok(())
    }

    /// Nurses left Off on `day` once coverage is met.
    pub fn off_count(&self, day: usize) -> u32 {
        self.num_nurses as u32 - self.coverage[day].iter().sum::<u32>()
    }

    /// Total working cells over the horizon.
    pub fn total_work(&self) -> u32 {
        self.coverage.iter().flatten().sum()
    }

    /// Consecutive disjoint 7-day windows from day 0; the last may be shorter.
    pub fn week_windows(&self) -> Vec<Range<usize>> {
        (0..self.num_days)
            .step_by(WEEK_LEN)
            .map(|start| start..(start + WEEK_LEN).min(self.num_days))
            .collect()
    }

    /// Workday bounds for a window of `len` days: the weekly bounds scaled by
    /// `len / 7`, rounding the minimum down and the maximum up.
    pub fn work_bounds(&self, len: usize) -> (u32, u32) {
        let len = len as u32;
        let week = WEEK_LEN as u32;
        let min = self.work_days_min * len / week;
        let max = (self.work_days_max * len).div_ceil(week);
        (min, max)
    }

    /// Shift codes that must be worked as stretches of at least two days.
    pub fn late_shifts(&self) -> Range<u32> {
        2..self.num_shifts + 1
    }

    /// True when there are exactly `S + 1` nurses and one per shift each day,
    /// so every day is a permutation with a single Off.
    pub fn is_permutation_coverage(&self) -> bool {
        self.num_nurses == self.num_shifts as usize + 1 && self.coverage.iter().flatten().all(|&c| c == 1)
    }
}
