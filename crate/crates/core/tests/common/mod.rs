//! Reference implementations shared by the integration tests.
//!
//! Nothing here calls into the propagation engine: constraint semantics,
//! enumeration and fitness are re-derived from the problem definition so the
//! engine can be checked against them.

#![allow(dead_code)]

use std::collections::HashSet;

use nurse_cp::cp::{Domain, Propagator, VarId};
use nurse_cp::nsp::{Preference, RosterInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Generic CSP reference
// ---------------------------------------------------------------------------

/// Ground truth for one constraint on a full assignment (indexed by variable).
pub fn holds(p: &Propagator, values: &[u32]) -> bool {
    let val = |v: &VarId| values[v.0];
    match p {
        Propagator::AllDifferent { scope, except } => {
            let mut seen = 0u64;
            for x in scope.iter().map(val).filter(|x| !except.contains(*x)) {
                if seen >> x & 1 == 1 {
                    return false;
                }
                seen |= 1 << x;
            }
            true
        }
        Propagator::CountInRange { scope, values: set, min, max } => {
            let n = scope.iter().filter(|v| set.contains(val(v))).count() as u32;
            *min <= n && n <= *max
        }
        Propagator::AtMostKDistinctRows { rows, value, k } => {
            rows.iter().filter(|row| row.iter().any(|v| val(v) == *value)).count() as u32 <= *k
        }
        Propagator::NeighborStretch { cell, neighbors, stretch_values } => {
            let x = val(cell);
            !stretch_values.contains(x) || neighbors.iter().any(|v| val(v) == x)
        }
        Propagator::GlobalCardinality { scope, bounds } => bounds.iter().all(|b| {
            let n = scope.iter().filter(|v| val(v) == b.value).count() as u32;
            b.min <= n && n <= b.max
        }),
    }
}

/// Calls `visit` on every assignment drawn from `domains`, in lexicographic order.
pub fn for_each_assignment(domains: &[Domain], mut visit: impl FnMut(&[u32])) {
    let choices: Vec<Vec<u32>> = domains.iter().map(|d| d.iter().collect()).collect();
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; domains.len()];
    let mut values: Vec<u32> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&values);
        let mut pos = domains.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                values[pos] = choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            values[pos] = choices[pos][0];
        }
    }
}

/// All solutions of `constraints` within `domains`.
pub fn all_solutions(domains: &[Domain], constraints: &[Propagator]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_assignment(domains, |a| {
        if constraints.iter().all(|p| holds(p, a)) {
            out.push(a.to_vec());
        }
    });
    out
}

/// Per-variable union of the values used by `solutions`.
pub fn supports(num_vars: usize, solutions: &[Vec<u32>]) -> Vec<Domain> {
    let mut out = vec![Domain::EMPTY; num_vars];
    for s in solutions {
        for (d, &x) in out.iter_mut().zip(s) {
            d.insert(x);
        }
    }
    out
}

/// Every non-empty subset of `0..=max`.
pub fn nonempty_subsets(max: u32) -> Vec<Domain> {
    (1u64..(1 << (max + 1))).map(Domain::from_bits).collect()
}

pub fn ids(range: std::ops::Range<usize>) -> Vec<VarId> {
    range.map(VarId).collect()
}

// ---------------------------------------------------------------------------
// Roster reference
// ---------------------------------------------------------------------------

/// Fairness from per-nurse workdays: `1 / (1 + population sd)`.
pub fn reference_fairness(workdays: &[u32]) -> f64 {
    let n = workdays.len() as f64;
    let mean = workdays.iter().map(|&w| w as f64).sum::<f64>() / n;
    let var = workdays.iter().map(|&w| (w as f64 - mean).powi(2)).sum::<f64>() / n;
    1.0 / (1.0 + var.sqrt())
}

/// Weighted share of satisfied preferences; 1 when there are none.
pub fn reference_preference(rows: &[Vec<u32>], prefs: &[Preference]) -> f64 {
    let total: f64 = prefs.iter().map(|p| p.weight).sum();
    if prefs.is_empty() {
        return 1.0;
    }
    let met: f64 = prefs.iter().filter(|p| rows[p.nurse][p.day] == p.shift).map(|p| p.weight).sum();
    met / total
}

pub fn reference_combined(rows: &[Vec<u32>], inst: &RosterInstance) -> f64 {
    let workdays: Vec<u32> = rows.iter().map(|r| r.iter().filter(|&&c| c != 0).count() as u32).collect();
    inst.alpha * reference_fairness(&workdays) + (1.0 - inst.alpha) * reference_preference(rows, &inst.preferences)
}

/// Every vector of `nurses` codes whose per-shift counts equal `coverage`
/// (remaining nurses Off).
pub fn day_patterns(nurses: usize, coverage: &[u32]) -> Vec<Vec<u32>> {
    fn go(pos: usize, left: &mut Vec<u32>, off_left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        if off_left > 0 {
            cur[pos] = 0;
            go(pos + 1, left, off_left - 1, cur, out);
        }
        for s in 0..left.len() {
            if left[s] > 0 {
                left[s] -= 1;
                cur[pos] = s as u32 + 1;
                go(pos + 1, left, off_left, cur, out);
                left[s] += 1;
            }
        }
    }
    let working: u32 = coverage.iter().sum();
    let mut out = Vec::new();
    if working as usize > nurses {
        return out;
    }
    let mut left = coverage.to_vec();
    go(0, &mut left, nurses as u32 - working, &mut vec![0; nurses], &mut out);
    out
}

fn is_late(code: u32) -> bool {
    code >= 2
}

/// Exhaustive day-by-day roster search with incremental hard-constraint
/// checks, written from the constraint definitions alone.
pub struct RosterOracle<'a> {
    inst: &'a RosterInstance,
    patterns: Vec<Vec<Vec<u32>>>,
    rows: Vec<Vec<u32>>,
    failed: HashSet<Vec<u64>>,
}

impl<'a> RosterOracle<'a> {
    pub fn new(inst: &'a RosterInstance) -> Self {
        let patterns = (0..inst.num_days).map(|d| day_patterns(inst.num_nurses, &inst.coverage[d])).collect();
        RosterOracle { inst, patterns, rows: vec![Vec::new(); inst.num_nurses], failed: HashSet::new() }
    }

    fn window_of(&self, day: usize) -> (usize, usize) {
        let start = day / 7 * 7;
        (start, (start + 7).min(self.inst.num_days))
    }

    fn week_bounds(&self, len: usize) -> (u32, u32) {
        let (lo, hi) = (self.inst.work_days_min, self.inst.work_days_max);
        if len == 7 {
            (lo, hi)
        } else {
            (lo * len as u32 / 7, (hi * len as u32).div_ceil(7))
        }
    }

    /// Whether the partial roster (days `0..=day` filled) can still be completed
    /// as far as the constraints touching those days can tell.
    fn consistent(&self, day: usize) -> bool {
        let inst = self.inst;
        let (start, end) = self.window_of(day);
        let (min, max) = self.week_bounds(end - start);
        for row in &self.rows {
            let worked = row[start..=day].iter().filter(|&&c| c != 0).count() as u32;
            if worked > max || worked + ((end - 1 - day) as u32) < min {
                return false;
            }
            // the previous day is now fully surrounded
            if day >= 1 {
                let c = row[day - 1];
                if is_late(c) && row[day] != c && (day < 2 || row[day - 2] != c) {
                    return false;
                }
            }
            if day + 1 == inst.num_days && is_late(row[day]) && (day == 0 || row[day - 1] != row[day]) {
                return false;
            }
        }
        for shift in 1..=inst.num_shifts {
            let nurses = self.rows.iter().filter(|row| row[start..=day].contains(&shift)).count() as u32;
            if nurses > inst.max_distinct_per_shift_week {
                return false;
            }
        }
        true
    }

    /// Everything the future depends on after `day` is filled.
    fn state_key(&self, day: usize) -> Vec<u64> {
        let (start, _) = self.window_of(day + 1);
        let mut key = vec![day as u64];
        for row in &self.rows {
            let worked = if start > day { 0 } else { row[start..=day].iter().filter(|&&c| c != 0).count() as u64 };
            let last = row[day] as u64;
            let supported = day >= 1 && row[day - 1] == row[day];
            key.push(worked << 16 | last << 1 | supported as u64);
        }
        for shift in 1..=self.inst.num_shifts {
            let mut mask = 0u64;
            if start <= day {
                for (n, row) in self.rows.iter().enumerate() {
                    if row[start..=day].contains(&shift) {
                        mask |= 1 << n;
                    }
                }
            }
            key.push(mask);
        }
        key
    }

    fn dfs(&mut self, day: usize, visit: &mut dyn FnMut(&[Vec<u32>]) -> bool, memo: bool) -> bool {
        if day == self.inst.num_days {
            return visit(&self.rows);
        }
        let mut found = false;
        for p in 0..self.patterns[day].len() {
            for n in 0..self.rows.len() {
                let code = self.patterns[day][p][n];
                self.rows[n].push(code);
            }
            if self.consistent(day) {
                let key = memo.then(|| self.state_key(day));
                if key.as_ref().is_none_or(|k| !self.failed.contains(k)) {
                    let sub = self.dfs(day + 1, visit, memo);
                    if !sub {
                        if let Some(k) = key {
                            self.failed.insert(k);
                        }
                    }
                    found |= sub;
                }
            }
            for row in &mut self.rows {
                row.pop();
            }
            if found && memo {
                return true;
            }
        }
        found
    }

    /// Calls `visit` on every feasible roster (rows indexed by nurse).
    pub fn for_each(&mut self, mut visit: impl FnMut(&[Vec<u32>])) {
        self.dfs(
            0,
            &mut |rows| {
                visit(rows);
                true
            },
            false,
        );
    }

    /// Whether any feasible roster exists (memoised on failed states).
    pub fn feasible(&mut self) -> bool {
        self.failed.clear();
        self.dfs(0, &mut |_| true, true)
    }

    /// Number of feasible rosters and the largest combined fitness among them.
    pub fn best(&mut self) -> (u64, Option<f64>) {
        let inst = self.inst;
        let mut count = 0u64;
        let mut best: Option<f64> = None;
        self.for_each(|rows| {
            count += 1;
            let f = reference_combined(rows, inst);
            best = Some(best.map_or(f, |b: f64| b.max(f)));
        });
        (count, best)
    }
}

/// Ground check of HC1-HC5 on a complete roster.
pub fn roster_is_valid(rows: &[Vec<u32>], inst: &RosterInstance) -> bool {
    let days = inst.num_days;
    if rows.len() != inst.num_nurses || rows.iter().any(|r| r.len() != days) {
        return false;
    }
    if rows.iter().flatten().any(|&c| c > inst.num_shifts) {
        return false;
    }
    for d in 0..days {
        for s in 1..=inst.num_shifts {
            let n = rows.iter().filter(|r| r[d] == s).count() as u32;
            if n != inst.coverage[d][s as usize - 1] {
                return false;
            }
        }
    }
    let mut start = 0;
    while start < days {
        let end = (start + 7).min(days);
        let len = (end - start) as u32;
        let (lo, hi) = if len == 7 {
            (inst.work_days_min, inst.work_days_max)
        } else {
            (inst.work_days_min * len / 7, (inst.work_days_max * len).div_ceil(7))
        };
        for r in rows {
            let w = r[start..end].iter().filter(|&&c| c != 0).count() as u32;
            if w < lo || w > hi {
                return false;
            }
        }
        for s in 1..=inst.num_shifts {
            let n = rows.iter().filter(|r| r[start..end].contains(&s)).count() as u32;
            if n > inst.max_distinct_per_shift_week {
                return false;
            }
        }
        start = end;
    }
    rows.iter().all(|r| {
        (0..days).all(|d| {
            let c = r[d];
            !is_late(c) || (d > 0 && r[d - 1] == c) || (d + 1 < days && r[d + 1] == c)
        })
    })
}

/// Random one-week instance for agreement tests. Daily staffing sits in or
/// next to the band the weekly workday bounds allow, with a per-instance
/// split over shifts that some days perturb, so both outcomes are common.
pub fn random_instance(rng: &mut ChaCha8Rng, nurses: usize, shifts: u32) -> RosterInstance {
    let days = 7;
    let i = nurses as u32;
    let lo = (5 * i).div_ceil(7).saturating_sub(1).max(shifts);
    let hi = (6 * i / 7 + 1).min(i - 1).max(lo);
    let mut base = vec![0u32; shifts as usize];
    for _ in 0..rng.gen_range(lo..=hi) {
        base[rng.gen_range(0..shifts as usize)] += 1;
    }
    let coverage = (0..days)
        .map(|_| {
            let mut row = base.clone();
            if rng.gen_bool(0.3) {
                let from = rng.gen_range(0..shifts as usize);
                if row[from] > 0 {
                    row[from] -= 1;
                    if rng.gen_bool(0.5) {
                        row[rng.gen_range(0..shifts as usize)] += 1;
                    }
                }
            }
            row
        })
        .collect();
    let prefs = (0..rng.gen_range(0..=nurses))
        .map(|_| Preference {
            nurse: rng.gen_range(0..nurses),
            day: rng.gen_range(0..days),
            shift: rng.gen_range(0..=shifts),
            weight: rng.gen_range(1..=3) as f64,
        })
        .collect();
    RosterInstance {
        num_nurses: nurses,
        num_days: days,
        num_shifts: shifts,
        coverage,
        work_days_min: 5,
        work_days_max: 6,
        max_distinct_per_shift_week: rng.gen_range(2..=i),
        preferences: prefs,
        alpha: rng.gen_range(0..=4) as f64 / 4.0,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Propagator soundness sweep
// ---------------------------------------------------------------------------

/// Parameterisations of every propagator kind over the scope `0..n`.
pub fn propagator_cases(n: usize) -> Vec<Propagator> {
    use nurse_cp::cp::CardinalityBound as B;
    let scope = ids(0..n);
    let mut out = Vec::new();
    for except in [Domain::EMPTY, Domain::singleton(0)] {
        out.push(Propagator::AllDifferent { scope: scope.clone(), except });
    }
    for values in [Domain::singleton(0), [1, 2].into_iter().collect()] {
        for min in 0..=n as u32 {
            for max in min..=n as u32 {
                out.push(Propagator::CountInRange { scope: scope.clone(), values, min, max });
            }
        }
    }
    let gcc: [&[B]; 4] = [
        &[B { value: 0, min: 1, max: 1 }],
        &[B { value: 0, min: 0, max: 1 }, B { value: 1, min: 1, max: 2 }],
        &[B { value: 2, min: 2, max: 2 }, B { value: 3, min: 0, max: 1 }],
        &[B { value: 0, min: 1, max: 1 }, B { value: 1, min: 1, max: 1 }, B { value: 4, min: 1, max: 1 }],
    ];
    for bounds in gcc {
        out.push(Propagator::GlobalCardinality { scope: scope.clone(), bounds: bounds.to_vec() });
    }
    // every split of 0..n into consecutive rows
    for cuts in 0u32..(1 << (n - 1)) {
        let mut rows = vec![vec![VarId(0)]];
        for v in 1..n {
            if cuts >> (v - 1) & 1 == 1 {
                rows.push(Vec::new());
            }
            rows.last_mut().unwrap().push(VarId(v));
        }
        for k in 0..rows.len() as u32 {
            out.push(Propagator::AtMostKDistinctRows { rows: rows.clone(), value: 1, k });
        }
    }
    if n >= 2 {
        for stretch_values in [[1, 2].into_iter().collect(), [2, 3, 4].into_iter().collect::<Domain>()] {
            out.push(Propagator::NeighborStretch { cell: VarId(0), neighbors: ids(1..n), stretch_values });
        }
    }
    out
}

#[derive(Debug, Default)]
pub struct SweepReport {
    pub cases: u64,
    pub violations: Vec<String>,
}

/// Propagates every case from `propagator_cases(n)` on every tuple of
/// domains taken from `subsets` (values at most 4) and compares against
/// ground supports.
pub fn soundness_sweep(n: usize, subsets: &[Domain], report: &mut SweepReport) {
    const BASE: usize = 5;
    assert!(subsets.iter().all(|d| d.max().is_none_or(|m| (m as usize) < BASE)));
    let cases = propagator_cases(n);
    // ground truth of every case on every assignment, indexed by base-5 code
    let full = vec![Domain::range(0, BASE as u32 - 1); n];
    let mut truth = vec![Vec::new(); cases.len()];
    for_each_assignment(&full, |a| {
        for (t, p) in truth.iter_mut().zip(&cases) {
            t.push(holds(p, a));
        }
    });
    let code = |a: &[u32]| a.iter().fold(0usize, |c, &x| c * BASE + x as usize);

    let mut tuple = vec![0usize; n];
    let mut assignments: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut changed = Vec::new();
    loop {
        let domains: Vec<Domain> = tuple.iter().map(|&i| subsets[i]).collect();
        assignments.clear();
        for_each_assignment(&domains, |a| assignments.push((code(a), a.to_vec())));
        for (p, t) in cases.iter().zip(&truth) {
            report.cases += 1;
            let mut support = vec![Domain::EMPTY; n];
            let mut any = false;
            for (c, a) in &assignments {
                if t[*c] {
                    any = true;
                    for (d, &x) in support.iter_mut().zip(a) {
                        d.insert(x);
                    }
                }
            }
            let mut after = domains.clone();
            changed.clear();
            let result = p.propagate(&mut after, &mut changed);
            let bad = match result {
                Err(_) => any,
                Ok(()) => after.iter().zip(&domains).zip(&support).any(|((a, d), s)| !a.is_subset_of(*d) || !s.is_subset_of(*a)),
            };
            if bad && report.violations.len() < 20 {
                report.violations.push(format!("{p:?} on {domains:?} gave {after:?} ({result:?})"));
            }
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            tuple[pos] += 1;
            if tuple[pos] < subsets.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Hard-constraint fixtures
// ---------------------------------------------------------------------------

/// A valid week for the canonical instance.
pub fn feasible_week() -> Vec<Vec<u32>> {
    vec![
        vec![0, 0, 1, 1, 1, 1, 1],
        vec![1, 1, 0, 0, 2, 2, 2],
        vec![2, 2, 2, 2, 0, 3, 3],
        vec![3, 3, 3, 3, 3, 0, 0],
    ]
}

/// One minimal roster per hard constraint that breaks that constraint only,
/// with the instance it is checked against.
pub fn violating_fixtures() -> Vec<(&'static str, RosterInstance, Vec<Vec<u32>>)> {
    let canonical = nurse_cp::nsp::canonical_instance();
    let edit = |cells: &[(usize, usize, u32)]| {
        let mut rows = feasible_week();
        for &(n, d, c) in cells {
            rows[n][d] = c;
        }
        rows
    };
    let with_distinct = |k| RosterInstance { max_distinct_per_shift_week: k, ..canonical.clone() };
    vec![
        // a code beyond the three shifts
        ("HC1", canonical.clone(), edit(&[(0, 0, 4)])),
        // two mornings and no Off on day 3
        ("HC2", canonical.clone(), edit(&[(1, 2, 1)])),
        // nurse 2 drops to four workdays while nurse 1 covers the morning
        ("HC3", canonical.clone(), edit(&[(0, 0, 1), (1, 0, 0)])),
        // the feasible week uses two nurses per shift
        ("HC4", with_distinct(1), feasible_week()),
        // swapping day 6 between nurses 2 and 3 isolates late shifts
        ("HC5", with_distinct(4), edit(&[(1, 5, 3), (2, 5, 2)])),
    ]
}
