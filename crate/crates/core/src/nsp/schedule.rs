use thiserror::Error;

use super::RosterInstance;

/// A complete roster: one shift code per (nurse, day), 0 = Off.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    nurses: usize,
    days: usize,
    cells: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("schedule is {got_nurses}x{got_days}, instance expects {nurses}x{days}")]
    Dimensions { got_nurses: usize, got_days: usize, nurses: usize, days: usize },
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("cell (nurse {nurse}, day {day}) has {count} active shifts, expected exactly one")]
    NotOneHot { nurse: usize, day: usize, count: usize },
}

impl Schedule {
    /// An all-Off roster.
    pub fn new(nurses: usize, days: usize) -> Self {
        Schedule { nurses, days, cells: vec![0; nurses * days] }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self, ShapeError> {
        let days = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != days) {
            return Err(ShapeError::Ragged);
        }
        Ok(Schedule { nurses: rows.len(), days, cells: rows.concat() })
    }

    pub fn nurses(&self) -> usize {
        self.nurses
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn get(&self, nurse: usize, day: usize) -> u32 {
        assert!(day < self.days);
        self.cells[nurse * self.days + day]
    }

    pub fn set(&mut self, nurse: usize, day: usize, code: u32) {
        assert!(day < self.days);
        self.cells[nurse * self.days + day] = code;
    }

    pub fn row(&self, nurse: usize) -> &[u32] {
        &self.cells[nurse * self.days..(nurse + 1) * self.days]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks(self.days.max(1)).take(self.nurses)
    }

    /// Non-Off cells per nurse.
    pub fn workdays(&self) -> Vec<u32> {
        self.rows().map(|r| r.iter().filter(|&&c| c != 0).count() as u32).collect()
    }

    pub fn check_shape(&self, instance: &RosterInstance) -> Result<(), ShapeError> {
        if self.nurses != instance.num_nurses || self.days != instance.num_days {
            return Err(ShapeError::Dimensions {
                got_nurses: self.nurses,
                got_days: self.days,
                nurses: instance.num_nurses,
                days: instance.num_days,
            });
        }
        Ok(())
    }

    /// One-hot view with `num_codes` codes per cell (Off included as code 0).
    pub fn to_tensor(&self, num_codes: usize) -> AssignmentTensor {
        let mut t = AssignmentTensor::zeros(self.nurses, self.days, num_codes);
        for i in 0..self.nurses {
            for k in 0..self.days {
                let s = self.get(i, k) as usize;
                if s < num_codes {
                    t.set(i, k, s, true);
                }
            }
        }
        t
    }

    pub fn from_tensor(tensor: &AssignmentTensor) -> Result<Self, ShapeError> {
        let mut sched = Schedule::new(tensor.nurses, tensor.days);
        for i in 0..tensor.nurses {
            for k in 0..tensor.days {
                let active: Vec<usize> = (0..tensor.codes).filter(|&s| tensor.get(i, k, s)).collect();
                match active[..] {
                    [s] => sched.set(i, k, s as u32),
                    _ => return Err(ShapeError::NotOneHot { nurse: i, day: k, count: active.len() }),
                }
            }
        }
        Ok(sched)
    }
}

/// Binary decision tensor `D[i][k][s]`: nurse `i` works code `s` on day `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentTensor {
    nurses: usize,
    days: usize,
    codes: usize,
    data: Vec<bool>,
}

impl AssignmentTensor {
    pub fn zeros(nurses: usize, days: usize, codes: usize) -> Self {
        AssignmentTensor { nurses, days, codes, data: vec![false; nurses * days * codes] }
    }

    fn offset(&self, nurse: usize, day: usize, code: usize) -> usize {
        assert!(nurse < self.nurses && day < self.days && code < self.codes);
        (nurse * self.days + day) * self.codes + code
    }

    pub fn get(&self, nurse: usize, day: usize, code: usize) -> bool {
        self.data[self.offset(nurse, day, code)]
    }

    pub fn set(&mut self, nurse: usize, day: usize, code: usize, on: bool) {
        let o = self.offset(nurse, day, code);
        self.data[o] = on;
    }

    /// `Σ_s D[i][k][s]`.
    pub fn cell_sum(&self, nurse: usize, day: usize) -> usize {
        (0..self.codes).filter(|&s| self.get(nurse, day, s)).count()
    }

    pub fn total(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}
