//! Global-best particle swarm over relaxed rosters.
//!
//! A particle is an `I x K` real matrix in `[0, S]`; it decodes to a roster by
//! rounding each cell and clamping into the shift universe. Hard-rule
//! violations are charged `lambda` each against the roster fitness.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::nsp::{check_roster, fitness, InstanceError, RosterInstance, Schedule};

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub population: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Penalty per hard-rule violation, `>= 0`.
    pub lambda: f64,
    pub seed: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig { population: 30, iterations: 2000, inertia: 0.72, cognitive: 1.49, social: 1.49, lambda: 0.1, seed: 0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PsoError {
    #[error("swarm population must be at least 1")]
    EmptySwarm,
    #[error("penalty lambda must be finite and non-negative, got {0}")]
    Lambda(f64),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_score: f64,
}

#[derive(Debug, Clone)]
pub struct PsoOutcome {
    pub best: Schedule,
    pub best_score: f64,
    pub wall_time: Duration,
    /// Best-ever score after initialisation and after each iteration.
    pub history: Vec<f64>,
}

/// Rounds each entry of a row-major `I x K` position to a shift code.
pub fn decode(position: &[f64], instance: &RosterInstance) -> Schedule {
    let days = instance.num_days;
    assert_eq!(position.len(), instance.num_nurses * days, "position does not match the instance");
    let top = instance.num_shifts as f64;
    let rows = position
        .chunks(days)
        .map(|row| row.iter().map(|x| x.round().clamp(0.0, top) as u32).collect())
        .collect();
    Schedule::from_rows(rows).expect("chunks are equal length")
}

/// Roster fitness minus `lambda` per hard-rule violation.
pub fn penalized_fitness(schedule: &Schedule, instance: &RosterInstance, lambda: f64) -> f64 {
    let combined = fitness(schedule, instance).expect("schedule matches instance").combined;
    let violations = check_roster(schedule, instance).expect("schedule matches instance").len();
    combined - lambda * violations as f64
}

pub fn pso_run(instance: &RosterInstance, config: &SwarmConfig) -> Result<PsoOutcome, PsoError> {
    instance.validate()?;
    if config.population == 0 {
        return Err(PsoError::EmptySwarm);
    }
    if !(config.lambda >= 0.0 && config.lambda.is_finite()) {
        return Err(PsoError::Lambda(config.lambda));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dims = instance.num_nurses * instance.num_days;
    let top = instance.num_shifts as f64;
    let v_max = top;
    let score = |x: &[f64]| penalized_fitness(&decode(x, instance), instance, config.lambda);

    let mut swarm: Vec<Particle> = (0..config.population)
        .map(|_| {
            let position: Vec<f64> = (0..dims).map(|_| rng.gen_range(0.0..=top)).collect();
            let velocity = (0..dims).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let best_score = score(&position);
            Particle { best_position: position.clone(), position, velocity, best_score }
        })
        .collect();

    let mut leader = best_index(&swarm);
    let mut global_position = swarm[leader].best_position.clone();
    let mut global_score = swarm[leader].best_score;
    let mut history = Vec::with_capacity(config.iterations + 1);
    history.push(global_score);

    for _ in 0..config.iterations {
        for p in &mut swarm {
            #[allow(clippy::needless_range_loop)]
            for d in 0..dims {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let v = config.inertia * p.velocity[d]
                    + config.cognitive * r1 * (p.best_position[d] - p.position[d])
                    + config.social * r2 * (global_position[d] - p.position[d]);
                p.velocity[d] = v.clamp(-v_max, v_max);
                p.position[d] = (p.position[d] + p.velocity[d]).clamp(0.0, top);
            }
            let s = score(&p.position);
            if s > p.best_score {
                p.best_score = s;
                p.best_position.copy_from_slice(&p.position);
            }
        }
        leader = best_index(&swarm);
        if swarm[leader].best_score > global_score {
            global_score = swarm[leader].best_score;
            global_position.copy_from_slice(&swarm[leader].best_position);
        }
        history.push(global_score);
    }

    Ok(PsoOutcome {
        best: decode(&global_position, instance),
        best_score: global_score,
        wall_time: start.elapsed(),
        history,
    })
}

/// Lowest index among the particles with the highest personal best.
fn best_index(swarm: &[Particle]) -> usize {
    let mut best = 0;
    for (i, p) in swarm.iter().enumerate() {
        if p.best_score > swarm[best].best_score {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsp::canonical_instance;

    fn quick(seed: u64, iterations: usize) -> SwarmConfig {
        SwarmConfig { population: 8, iterations, seed, ..Default::default() }
    }

    #[test]
    fn decode_rounds_and_clamps() {
        let mut inst = canonical_instance();
        inst.num_nurses = 1;
        inst.num_days = 3;
        let s = decode(&[1.4, 3.9, -0.2], &inst);
        assert_eq!(s.row(0), &[1, 3, 0]);
    }

    #[test]
    fn penalty_counts_violations() {
        let inst = canonical_instance();
        let s = Schedule::new(4, 7);
        let violations = check_roster(&s, &inst).unwrap().len() as f64;
        let combined = fitness(&s, &inst).unwrap().combined;
        assert_eq!(penalized_fitness(&s, &inst, 1.0), combined - violations);
        assert_eq!(penalized_fitness(&s, &inst, 0.0), combined);
    }

    #[test]
    fn zero_iterations_returns_best_initial() {
        let inst = canonical_instance();
        let out = pso_run(&inst, &quick(3, 0)).unwrap();
        assert_eq!(out.history.len(), 1);
        // replay the initial population draw
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..8 {
            let pos: Vec<f64> = (0..28).map(|_| rng.gen_range(0.0..=3.0)).collect();
            let _: Vec<f64> = (0..28).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            best = best.max(penalized_fitness(&decode(&pos, &inst), &inst, 0.1));
        }
        assert_eq!(out.best_score, best);
    }

    #[test]
    fn seeded_runs_repeat() {
        let inst = canonical_instance();
        let a = pso_run(&inst, &quick(11, 50)).unwrap();
        let b = pso_run(&inst, &quick(11, 50)).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.best_score, b.best_score);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn incumbent_never_worsens() {
        let out = pso_run(&canonical_instance(), &quick(5, 100)).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*out.history.last().unwrap(), out.best_score);
    }

    #[test]
    fn bad_config_rejected() {
        let inst = canonical_instance();
        let cfg = SwarmConfig { population: 0, ..Default::default() };
        assert_eq!(pso_run(&inst, &cfg).unwrap_err(), PsoError::EmptySwarm);
        let cfg = SwarmConfig { lambda: -1.0, ..Default::default() };
        assert_eq!(pso_run(&inst, &cfg).unwrap_err(), PsoError::Lambda(-1.0));
    }
}
