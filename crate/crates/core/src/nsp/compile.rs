//! Translation of roster instances into constraint models.
//!
//! | rule | propagator |
//! |------|------------|
//! | HC1 shift universe | initial domain `0..=S` per cell |
//! | HC2 daily coverage | `AllDifferent` + one Off, or `GlobalCardinality` |
//! | HC3 workdays per week | `CountInRange` over each nurse's week |
//! | HC4 distinct nurses per shift-week | `AtMostKDistinctRows` |
//! | HC5 late shifts come in stretches | `NeighborStretch` per cell |

use crate::cp::{CardinalityBound, CspModel, Domain, Propagator, Solution, VarId};

use super::{InstanceError, RosterInstance, Schedule};

/// A compiled instance: the model plus the (nurse, day) → variable map.
#[derive(Debug, Clone)]
pub struct CompiledRoster {
    pub model: CspModel,
    vars: Vec<Vec<VarId>>,
}

impl CompiledRoster {
    pub fn var(&self, nurse: usize, day: usize) -> VarId {
        self.vars[nurse][day]
    }

    /// Variables indexed `[nurse][day]`.
    pub fn vars(&self) -> &[Vec<VarId>] {
        &self.vars
    }

    pub fn schedule(&self, solution: &Solution) -> Schedule {
        let rows = self
            .vars
            .iter()
            .map(|row| row.iter().map(|&v| solution.value(v)).collect())
            .collect();
        Schedule::from_rows(rows).expect("variable map is rectangular")
    }

    /// Inverse of [`schedule`](Self::schedule).
    pub fn solution(&self, schedule: &Schedule) -> Solution {
        let mut values = vec![0; self.model.num_vars()];
        for (i, row) in self.vars.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                values[v.index()] = schedule.get(i, k);
            }
        }
        Solution { values }
    }
}

pub fn compile(instance: &RosterInstance) -> Result<CompiledRoster, InstanceError> {
    instance.validate()?;
    let nurses = instance.num_nurses;
    let days = instance.num_days;
    let shifts = instance.num_shifts;
    let working = Domain::range(1, shifts);

    let mut model = CspModel::new();
    let vars: Vec<Vec<VarId>> = (0..nurses)
        .map(|_| {
            (0..days)
                .map(|_| model.add_var(Domain::range(0, shifts)).expect("non-empty domain"))
                .collect()
        })
        .collect();
    let column = |day: usize| -> Vec<VarId> { vars.iter().map(|row| row[day]).collect() };
    let post = |model: &mut CspModel, p: Propagator| {
        model.post(p).expect("compiled propagators are well-formed");
    };

    // HC2
    let permutation = instance.is_permutation_coverage();
    for day in 0..days {
        if permutation {
            post(&mut model, Propagator::AllDifferent { scope: column(day), except: Domain::singleton(0) });
            post(
                &mut model,
                Propagator::CountInRange { scope: column(day), values: Domain::singleton(0), min: 1, max: 1 },
            );
        } else {
            let off = instance.off_count(day);
            let bounds = std::iter::once(CardinalityBound { value: 0, min: off, max: off })
                .chain(
                    instance.coverage[day]
                        .iter()
                        .zip(1..)
                        .map(|(&c, value)| CardinalityBound { value, min: c, max: c }),
                )
                .collect();
            post(&mut model, Propagator::GlobalCardinality { scope: column(day), bounds });
        }
    }

    for window in instance.week_windows() {
        // HC3
        let (min, max) = instance.work_bounds(window.len());
        for row in &vars {
            post(
                &mut model,
                Propagator::CountInRange { scope: row[window.clone()].to_vec(), values: working, min, max },
            );
        }
        // HC4
        let rows: Vec<Vec<VarId>> = vars.iter().map(|row| row[window.clone()].to_vec()).collect();
        for value in 1..=shifts {
            post(
                &mut model,
                Propagator::AtMostKDistinctRows {
                    rows: rows.clone(),
                    value,
                    k: instance.max_distinct_per_shift_week,
                },
            );
        }
    }

    // HC5
    let late: Domain = instance.late_shifts().collect();
    if !late.is_empty() {
        for row in &vars {
            for day in 0..days {
                let neighbors = [day.checked_sub(1), Some(day + 1).filter(|&d| d < days)]
                    .into_iter()
                    .flatten()
                    .map(|d| row[d])
                    .collect();
                post(&mut model, Propagator::NeighborStretch { cell: row[day], neighbors, stretch_values: late });
            }
        }
    }

    Ok(CompiledRoster { model, vars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::{solve_satisfy, PropagatorKind, SearchConfig, SearchStatus};
    use crate::nsp::{canonical_instance, check_roster};

    #[test]
    fn canonical_shape() {
        let c = compile(&canonical_instance()).unwrap();
        assert_eq!(c.model.num_vars(), 28);
        assert!(c.model.domains().iter().all(|&d| d == Domain::range(0, 3)));
        let kinds: Vec<_> = c.model.propagators().iter().map(|p| p.kind()).collect();
        let count = |k| kinds.iter().filter(|&&x| x == k).count();
        assert_eq!(count(PropagatorKind::AllDifferent), 7);
        assert_eq!(count(PropagatorKind::CountInRange), 7 + 4);
        assert_eq!(count(PropagatorKind::AtMostKDistinctRows), 3);
        assert_eq!(count(PropagatorKind::NeighborStretch), 28);
        assert_eq!(count(PropagatorKind::GlobalCardinality), 0);
    }

    #[test]
    fn general_coverage_uses_cardinality() {
        let mut inst = canonical_instance();
        inst.num_nurses = 6;
        let c = compile(&inst).unwrap();
        let gcc = c.model.propagators().iter().filter(|p| p.kind() == PropagatorKind::GlobalCardinality).count();
        assert_eq!(gcc, 7);
    }

    #[test]
    fn single_nurse_every_day_is_unsat() {
        let inst = RosterInstance {
            num_nurses: 1,
            num_days: 7,
            num_shifts: 1,
            coverage: RosterInstance::uniform_coverage(7, 1, 1),
            work_days_min: 5,
            work_days_max: 6,
            max_distinct_per_shift_week: 2,
            preferences: vec![],
            alpha: 0.5,
        };
        let mut c = compile(&inst).unwrap();
        let (sol, stats) = solve_satisfy(&mut c.model, &SearchConfig::default());
        assert!(sol.is_none());
        assert_eq!(stats.status, SearchStatus::Unsat);
    }

    #[test]
    fn canonical_solution_passes_checker() {
        let inst = canonical_instance();
        let mut c = compile(&inst).unwrap();
        let (sol, stats) = solve_satisfy(&mut c.model, &SearchConfig::default());
        assert_eq!(stats.status, SearchStatus::Sat);
        let sched = c.schedule(&sol.unwrap());
        assert_eq!(check_roster(&sched, &inst).unwrap(), vec![]);
        assert_eq!(c.solution(&sched), c.solution(&c.schedule(&c.solution(&sched))));
    }

    #[test]
    fn invalid_instance_rejected() {
        let mut inst = canonical_instance();
        inst.alpha = -0.1;
        assert!(matches!(compile(&inst), Err(InstanceError::AlphaOutOfRange(_))));
    }
}
