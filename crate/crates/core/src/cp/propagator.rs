//! Constraint propagators.
//!
//! Every propagator runs to its own local fixpoint before returning, so the
//! engine only has to wake the *other* propagators that watch a changed
//! variable. Filtering is deliberately light (forward-checking style); the
//! search finishes what propagation leaves open.

use super::domain::{Domain, MAX_VALUE};
use super::VarId;

/// Signal that some domain was emptied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wipeout;

/// Discriminant of [`Propagator`], handy for reporting and test sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagatorKind {
    AllDifferent,
    CountInRange,
    AtMostKDistinctRows,
    NeighborStretch,
    GlobalCardinality,
}

impl PropagatorKind {
    pub const ALL: [PropagatorKind; 5] = [
        PropagatorKind::AllDifferent,
        PropagatorKind::CountInRange,
        PropagatorKind::AtMostKDistinctRows,
        PropagatorKind::NeighborStretch,
        PropagatorKind::GlobalCardinality,
    ];
}

/// Occurrence bounds for one value inside a [`Propagator::GlobalCardinality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityBound {
    pub value: u32,
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Propagator {
    /// Pairwise distinct values, ignoring values in `except`.
    AllDifferent { scope: Vec<VarId>, except: Domain },
    /// The number of variables taking a value from `values` lies in `min..=max`.
    CountInRange {
        scope: Vec<VarId>,
        values: Domain,
        min: u32,
        max: u32,
    },
    /// At most `k` rows contain a cell equal to `value`.
    AtMostKDistinctRows {
        rows: Vec<Vec<VarId>>,
        value: u32,
        k: u32,
    },
    /// If `cell` takes a value from `stretch_values`, at least one neighbour
    /// takes the same value.
    NeighborStretch {
        cell: VarId,
        neighbors: Vec<VarId>,
        stretch_values: Domain,
    },
    /// Each listed value occurs within its bounds; unlisted values are free.
    GlobalCardinality {
        scope: Vec<VarId>,
        bounds: Vec<CardinalityBound>,
    },
}

/// Records removals so the engine knows whom to wake.
struct Narrowing<'a> {
    domains: &'a mut [Domain],
    changed: &'a mut Vec<VarId>,
}

impl Narrowing<'_> {
    fn get(&self, var: VarId) -> Domain {
        self.domains[var.index()]
    }

    fn retain(&mut self, var: VarId, keep: Domain) -> Result<bool, Wipeout> {
        let d = &mut self.domains[var.index()];
        let narrowed = d.intersect(keep);
        if narrowed == *d {
            return Ok(false);
        }
        *d = narrowed;
        if narrowed.is_empty() {
            return Err(Wipeout);
        }
        self.changed.push(var);
        Ok(true)
    }

    fn remove(&mut self, var: VarId, value: u32) -> Result<bool, Wipeout> {
        let mut keep = Domain::range(0, MAX_VALUE);
        keep.remove(value);
        self.retain(var, keep)
    }
}

impl Propagator {
    pub fn kind(&self) -> PropagatorKind {
        match self {
            Propagator::AllDifferent { .. } => PropagatorKind::AllDifferent,
            Propagator::CountInRange { .. } => PropagatorKind::CountInRange,
            Propagator::AtMostKDistinctRows { .. } => PropagatorKind::AtMostKDistinctRows,
            Propagator::NeighborStretch { .. } => PropagatorKind::NeighborStretch,
            Propagator::GlobalCardinality { .. } => PropagatorKind::GlobalCardinality,
        }
    }

    /// Every variable the propagator reads or narrows.
    pub fn scope(&self) -> Vec<VarId> {
        match self {
            Propagator::AllDifferent { scope, .. }
            | Propagator::CountInRange { scope, .. }
            | Propagator::GlobalCardinality { scope, .. } => scope.clone(),
            Propagator::AtMostKDistinctRows { rows, .. } => rows.iter().flatten().copied().collect(),
            Propagator::NeighborStretch { cell, neighbors, .. } => {
                std::iter::once(*cell).chain(neighbors.iter().copied()).collect()
            }
        }
    }

    pub(crate) fn validate(&self, num_vars: usize) -> Result<(), String> {
        let scope = self.scope();
        if scope.is_empty() {
            return Err("propagator scope is empty".into());
        }
        if let Some(v) = scope.iter().find(|v| v.index() >= num_vars) {
            return Err(format!("variable {} is not part of the model", v.index()));
        }
        match self {
            Propagator::CountInRange { min, max, .. } if min > max => {
                Err(format!("count bounds {min}..={max} are empty"))
            }
            Propagator::AtMostKDistinctRows { rows, value, .. } => {
                if rows.iter().any(Vec::is_empty) {
                    Err("row partition contains an empty row".into())
                } else if *value > MAX_VALUE {
                    Err(format!("value {value} exceeds {MAX_VALUE}"))
                } else {
                    Ok(())
                }
            }
            Propagator::GlobalCardinality { bounds, .. } => {
                for b in bounds {
                    if b.value > MAX_VALUE {
                        return Err(format!("value {} exceeds {MAX_VALUE}", b.value));
                    }
                    if b.min > b.max {
                        return Err(format!("cardinality bounds for value {} are empty", b.value));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Narrows `domains` to this propagator's local fixpoint.
    ///
    /// Every variable whose domain shrank is pushed to `changed` (possibly
    /// more than once).
    pub fn propagate(&self, domains: &mut [Domain], changed: &mut Vec<VarId>) -> Result<(), Wipeout> {
        let mut n = Narrowing { domains, changed };
        match self {
            Propagator::AllDifferent { scope, except } => all_different(&mut n, scope, *except),
            Propagator::CountInRange { scope, values, min, max } => {
                count_in_range(&mut n, scope, *values, *min, *max)
            }
            Propagator::AtMostKDistinctRows { rows, value, k } => at_most_k_rows(&mut n, rows, *value, *k),
            Propagator::NeighborStretch { cell, neighbors, stretch_values } => {
                neighbor_stretch(&mut n, *cell, neighbors, *stretch_values)
            }
            Propagator::GlobalCardinality { scope, bounds } => global_cardinality(&mut n, scope, bounds),
        }
    }

    /// Ground check on a complete assignment indexed by variable.
    pub fn is_satisfied(&self, values: &[u32]) -> bool {
        let val = |v: &VarId| values[v.index()];
        match self {
            Propagator::AllDifferent { scope, except } => {
                let mut seen = Domain::EMPTY;
                for x in scope.iter().map(val).filter(|x| !except.contains(*x)) {
                    if seen.contains(x) {
                        return false;
                    }
                    seen.insert(x);
                }
                true
            }
            Propagator::CountInRange { scope, values: set, min, max } => {
                let count = scope.iter().filter(|v| set.contains(val(v))).count() as u32;
                (*min..=*max).contains(&count)
            }
            Propagator::AtMostKDistinctRows { rows, value, k } => {
                let rows_using = rows.iter().filter(|row| row.iter().any(|v| val(v) == *value)).count();
                rows_using as u32 <= *k
            }
            Propagator::NeighborStretch { cell, neighbors, stretch_values } => {
                let x = val(cell);
                !stretch_values.contains(x) || neighbors.iter().any(|v| val(v) == x)
            }
            Propagator::GlobalCardinality { scope, bounds } => bounds.iter().all(|b| {
                let count = scope.iter().filter(|v| val(v) == b.value).count() as u32;
                (b.min..=b.max).contains(&count)
            }),
        }
    }
}

fn all_different(n: &mut Narrowing, scope: &[VarId], except: Domain) -> Result<(), Wipeout> {
    loop {
        let mut taken = Domain::EMPTY;
        for &v in scope {
            if let Some(x) = n.get(v).value() {
                if except.contains(x) {
                    continue;
                }
                if taken.contains(x) {
                    return Err(Wipeout);
                }
                taken.insert(x);
            }
        }
        let mut progress = false;
        for &v in scope {
            let d = n.get(v);
            if !d.is_fixed() && d.intersects(taken) {
                progress |= n.retain(v, d.difference(taken))?;
            }
        }
        if !progress {
            return Ok(());
        }
    }
}

fn count_in_range(n: &mut Narrowing, scope: &[VarId], values: Domain, min: u32, max: u32) -> Result<(), Wipeout> {
    loop {
        let mut must = 0;
        let mut may = 0;
        for &v in scope {
            let d = n.get(v);
            if d.is_subset_of(values) {
                must += 1;
            }
            if d.intersects(values) {
                may += 1;
            }
        }
        if must > max || may < min {
            return Err(Wipeout);
        }
        let mut progress = false;
        for &v in scope {
            let d = n.get(v);
            let undecided = d.intersects(values) && !d.is_subset_of(values);
            if !undecided {
                continue;
            }
            if must == max {
                progress |= n.retain(v, d.difference(values))?;
            } else if may == min {
                progress |= n.retain(v, values)?;
            }
        }
        if !progress {
            return Ok(());
        }
    }
}

fn global_cardinality(n: &mut Narrowing, scope: &[VarId], bounds: &[CardinalityBound]) -> Result<(), Wipeout> {
    loop {
        let mut progress = false;
        for b in bounds {
            let mut fixed = 0;
            let mut may = 0;
            for &v in scope {
                let d = n.get(v);
                if d.contains(b.value) {
                    may += 1;
                    if d.is_fixed() {
                        fixed += 1;
                    }
                }
            }
            if fixed > b.max || may < b.min {
                return Err(Wipeout);
            }
            if fixed == b.max && may > fixed {
                for &v in scope {
                    let d = n.get(v);
                    if d.contains(b.value) && !d.is_fixed() {
                        progress |= n.remove(v, b.value)?;
                    }
                }
            } else if may == b.min && may > fixed {
                for &v in scope {
                    let d = n.get(v);
                    if d.contains(b.value) && !d.is_fixed() {
                        progress |= n.retain(v, Domain::singleton(b.value))?;
                    }
                }
            }
        }
        if !progress {
            return Ok(());
        }
    }
}

fn at_most_k_rows(n: &mut Narrowing, rows: &[Vec<VarId>], value: u32, k: u32) -> Result<(), Wipeout> {
    let committed = |n: &Narrowing, row: &[VarId]| row.iter().any(|&v| n.get(v).value() == Some(value));
    let used = rows.iter().filter(|row| committed(n, row)).count() as u32;
    if used > k {
        return Err(Wipeout);
    }
    if used == k {
        for row in rows {
            if committed(n, row) {
                continue;
            }
            for &v in row {
                n.remove(v, value)?;
            }
        }
    }
    Ok(())
}

fn neighbor_stretch(n: &mut Narrowing, cell: VarId, neighbors: &[VarId], stretch: Domain) -> Result<(), Wipeout> {
    loop {
        let mut progress = false;
        let d = n.get(cell);
        for x in d.intersect(stretch) {
            if !neighbors.iter().any(|&w| n.get(w).contains(x)) {
                progress |= n.remove(cell, x)?;
            }
        }
        if let Some(x) = n.get(cell).value().filter(|x| stretch.contains(*x)) {
            let mut supporters = neighbors.iter().filter(|&&w| n.get(w).contains(x));
            if let (Some(&only), None) = (supporters.next(), supporters.next()) {
                progress |= n.retain(only, Domain::singleton(x))?;
            }
        }
        if !progress {
            return Ok(());
        }
    }
}
