//! Roster scoring: `alpha * fairness + (1 - alpha) * preference satisfaction`.
//!
//! Fairness is `1 / (1 + σ)` where σ is the population standard deviation of
//! per-nurse workdays. Preference satisfaction is the satisfied share of the
//! total preference weight, or 1 when there are no preferences. Both terms
//! and their blend lie in `[0, 1]`.

use crate::cp::{Domain, Objective};

use super::{CompiledRoster, RosterInstance, Schedule, ShapeError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessReport {
    pub fairness_f: f64,
    pub preference_g: f64,
    pub combined: f64,
    pub alpha: f64,
}

impl FitnessReport {
    fn new(fairness_f: f64, preference_g: f64, alpha: f64) -> Self {
        FitnessReport { fairness_f, preference_g, combined: alpha * fairness_f + (1.0 - alpha) * preference_g, alpha }
    }
}

pub fn fitness(schedule: &Schedule, instance: &RosterInstance) -> Result<FitnessReport, ShapeError> {
    schedule.check_shape(instance)?;
    let fairness = fairness_of(&schedule.workdays());
    let satisfied: f64 = instance
        .preferences
        .iter()
        .filter(|p| schedule.get(p.nurse, p.day) == p.shift)
        .map(|p| p.weight)
        .sum();
    Ok(FitnessReport::new(fairness, preference_share(satisfied, instance), instance.alpha))
}

fn fairness_of(workdays: &[u32]) -> f64 {
    1.0 / (1.0 + population_std(workdays))
}

fn population_std(xs: &[u32]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
    let var = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

fn preference_share(satisfied: f64, instance: &RosterInstance) -> f64 {
    let total: f64 = instance.preferences.iter().map(|p| p.weight).sum();
    if instance.preferences.is_empty() {
        1.0
    } else {
        satisfied / total
    }
}

/// The most even integer workloads with `lo[i] <= x[i] <= hi[i]` and
/// `Σ x = total`, or `None` if the box cannot reach `total`.
///
/// Minimizing `Σ x²` at fixed sum is separable and convex, so filling the
/// lowest workloads first (a water level) is optimal.
pub(crate) fn most_even_workloads(lo: &[u32], hi: &[u32], total: u32) -> Option<Vec<u32>> {
    let lo_sum: u32 = lo.iter().sum();
    let hi_sum: u32 = hi.iter().sum();
    if total < lo_sum || total > hi_sum {
        return None;
    }
    let clamp_sum = |level: u32| -> u32 { lo.iter().zip(hi).map(|(&l, &h)| level.clamp(l, h)).sum() };
    let top = hi.iter().copied().max().unwrap_or(0);
    // largest level whose clamped sum does not exceed the total
    let level = (0..=top).take_while(|&l| clamp_sum(l) <= total).last().unwrap_or(0);
    let mut xs: Vec<u32> = lo.iter().zip(hi).map(|(&l, &h)| level.clamp(l, h)).collect();
    let mut left = total - xs.iter().sum::<u32>();
    for (x, &h) in xs.iter_mut().zip(hi) {
        if left == 0 {
            break;
        }
        if *x == level && level < h {
            *x += 1;
            left -= 1;
        }
    }
    debug_assert_eq!(left, 0);
    Some(xs)
}

/// Branch-and-bound objective over a compiled roster.
///
/// The bound relaxes every hard rule except the fixed total of working cells.
pub struct RosterObjective<'a> {
    instance: &'a RosterInstance,
    compiled: &'a CompiledRoster,
    total_work: u32,
    total_weight: f64,
}

impl<'a> RosterObjective<'a> {
    pub fn new(instance: &'a RosterInstance, compiled: &'a CompiledRoster) -> Self {
        RosterObjective {
            instance,
            compiled,
            total_work: instance.total_work(),
            total_weight: instance.preferences.iter().map(|p| p.weight).sum(),
        }
    }

    fn blend(&self, fairness: f64, satisfied_weight: f64) -> f64 {
        let g = if self.instance.preferences.is_empty() { 1.0 } else { satisfied_weight / self.total_weight };
        FitnessReport::new(fairness, g, self.instance.alpha).combined
    }
}

impl Objective for RosterObjective<'_> {
    fn evaluate(&self, values: &[u32]) -> f64 {
        let vars = self.compiled.vars();
        let workdays: Vec<u32> =
            vars.iter().map(|row| row.iter().filter(|v| values[v.index()] != 0).count() as u32).collect();
        let satisfied: f64 = self
            .instance
            .preferences
            .iter()
            .filter(|p| values[vars[p.nurse][p.day].index()] == p.shift)
            .map(|p| p.weight)
            .sum();
        self.blend(fairness_of(&workdays), satisfied)
    }

    fn upper_bound(&self, domains: &[Domain]) -> f64 {
        let vars = self.compiled.vars();
        let mut lo = Vec::with_capacity(vars.len());
        let mut hi = Vec::with_capacity(vars.len());
        for row in vars {
            let doms = row.iter().map(|v| domains[v.index()]);
            lo.push(doms.clone().filter(|d| !d.contains(0)).count() as u32);
            hi.push(doms.filter(|d| d.max() > Some(0)).count() as u32);
        }
        let Some(even) = most_even_workloads(&lo, &hi, self.total_work) else {
            return f64::NEG_INFINITY;
        };
        let reachable: f64 = self
            .instance
            .preferences
            .iter()
            .filter(|p| domains[vars[p.nurse][p.day].index()].contains(p.shift))
            .map(|p| p.weight)
            .sum();
        self.blend(fairness_of(&even), reachable)
    }
}
