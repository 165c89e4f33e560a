use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Preference, RosterInstance, WEEK_LEN};

const COVERAGE_STREAM: u64 = 0;
const PREFERENCE_STREAM: u64 = 1;

/// Four nurses, three shifts, one week: each day is a permutation of
/// {Off, M, A, N}.
pub fn canonical_instance() -> RosterInstance {
    RosterInstance {
        num_nurses: 4,
        num_days: 7,
        num_shifts: 3,
        coverage: RosterInstance::uniform_coverage(7, 3, 1),
        work_days_min: 5,
        work_days_max: 6,
        max_distinct_per_shift_week: 2,
        preferences: Vec::new(),
        alpha: 0.5,
    }
}

/// Seeded random instance for benchmarking.
///
/// Every day is staffed by the same `ceil(5I/7)` nurses (capped at `I - 1`),
/// the fewest that let each nurse reach five workdays a week. Each late shift
/// draws its own constant crew size from `1..=total/S` and the morning shift
/// takes the rest, so it is never smaller than a late shift. Constant late
/// crews matter: a crew shrinking overnight strands nurses mid-stretch, and
/// late-heavy days leave the Off budget too tight for the search to place.
/// The weekly distinct-nurse cap is twice the largest crew, which is the
/// canonical "two nurses per shift" rule scaled to wider coverage. One
/// unit-weight preference per nurse is drawn uniformly over (nurse, day, code).
///
/// Panics unless `num_nurses > num_shifts >= 1` and `num_days >= 1`.
pub fn benchmark_instance(num_nurses: usize, num_shifts: u32, num_days: usize, seed: u64) -> RosterInstance {
    assert!(num_shifts >= 1 && num_days >= 1, "empty benchmark dimensions");
    assert!(num_nurses > num_shifts as usize, "need at least shifts + 1 nurses");
    let (work_min, work_max) = (5u32, 6u32);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(COVERAGE_STREAM);
    let week = WEEK_LEN as u32;
    let nurses = num_nurses as u32;
    // The smallest daily total that lets every nurse reach `work_min`
    // workdays a week, held constant over the horizon.
    let total = (work_min * nurses).div_ceil(week).min(nurses - 1);
    let late_cap = (total / num_shifts).max(1);
    let mut row = vec![0; num_shifts as usize];
    for late in row.iter_mut().skip(1) {
        *late = rng.gen_range(1..=late_cap);
    }
    row[0] = total.saturating_sub(row.iter().sum());
    // two nurses per staffed slot, the canonical rule scaled to wider coverage
    let max_distinct = (2 * row.iter().max().copied().unwrap_or(0)).clamp(2, nurses);
    let coverage = vec![row; num_days];

    RosterInstance {
        num_nurses,
        num_days,
        num_shifts,
        coverage,
        work_days_min: work_min,
        work_days_max: work_max,
        max_distinct_per_shift_week: max_distinct,
        preferences: benchmark_preferences(num_nurses, num_shifts, num_days, seed),
        alpha: 0.5,
    }
}

/// The preference list [`benchmark_instance`] draws for `seed`.
pub fn benchmark_preferences(num_nurses: usize, num_shifts: u32, num_days: usize, seed: u64) -> Vec<Preference> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(PREFERENCE_STREAM);
    (0..num_nurses)
        .map(|_| Preference {
            nurse: rng.gen_range(0..num_nurses),
            day: rng.gen_range(0..num_days),
            shift: rng.gen_range(0..=num_shifts),
            weight: 1.0,
        })
        .collect()
}
