//! Repeated CP-vs-PSO runs with summary statistics.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cp::{solve_optimize, SearchConfig, SearchStatus};
use crate::io::{descriptive_stats, render_stats, StatsError};
use crate::nsp::{benchmark_instance, benchmark_preferences, compile, InstanceError, RosterInstance, RosterObjective};
use crate::pso::{pso_run, PsoError, SwarmConfig};

/// Where the per-run instances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchSource {
    /// `benchmark_instance` dimensions; coverage comes from the master seed and
    /// each run redraws the preferences from its own seed.
    Generated { nurses: usize, shifts: u32, days: usize },
    /// The same instance for every run; only the PSO seed changes.
    Fixed(RosterInstance),
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub source: BenchSource,
    pub runs: usize,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub search: SearchConfig,
    /// `seed` is replaced per run.
    pub swarm: SwarmConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub runs: usize,
    pub cp_runtimes: Vec<f64>,
    pub cp_fitnesses: Vec<f64>,
    pub pso_fitnesses: Vec<f64>,
    pub seeds: Vec<u64>,
    pub cp_status: Vec<SearchStatus>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("statistics need at least 2 runs, got {0}")]
    TooFewRuns(usize),
    #[error("benchmark needs more nurses ({nurses}) than shifts ({shifts})")]
    Dimensions { nurses: usize, shifts: u32 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Pso(#[from] PsoError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// One `RESULT` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub cp_ms: f64,
    pub cp_fit: f64,
    pub pso_fit: f64,
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RESULT run={} cp_ms={:.3} cp_fit={} pso_fit={}", self.run, self.cp_ms, self.cp_fit, self.pso_fit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed RESULT line: {0}")]
pub struct RecordParseError(String);

impl FromStr for RunRecord {
    type Err = RecordParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || RecordParseError(line.to_string());
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("RESULT") {
            return Err(bad());
        }
        let (mut run, mut cp_ms, mut cp_fit, mut pso_fit) = (None, None, None, None);
        for tok in tokens {
            let (key, value) = tok.split_once('=').ok_or_else(bad)?;
            match key {
                "run" => run = Some(value.parse().map_err(|_| bad())?),
                "cp_ms" => cp_ms = Some(value.parse().map_err(|_| bad())?),
                "cp_fit" => cp_fit = Some(value.parse().map_err(|_| bad())?),
                "pso_fit" => pso_fit = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(RunRecord {
            run: run.ok_or_else(bad)?,
            cp_ms: cp_ms.ok_or_else(bad)?,
            cp_fit: cp_fit.ok_or_else(bad)?,
            pso_fit: pso_fit.ok_or_else(bad)?,
        })
    }
}

/// Per-run seeds drawn from the master seed.
pub fn derive_seeds(master: u64, runs: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..runs).map(|_| rng.next_u64()).collect()
}

/// The instance solved in run `run_seed` of a benchmark.
pub fn run_instance(config: &BenchConfig, run_seed: u64) -> Result<RosterInstance, BenchError> {
    let mut inst = match &config.source {
        BenchSource::Generated { nurses, shifts, days } => {
            if *nurses <= *shifts as usize || *shifts == 0 || *days == 0 {
                return Err(BenchError::Dimensions { nurses: *nurses, shifts: *shifts });
            }
            let mut inst = benchmark_instance(*nurses, *shifts, *days, config.seed);
            inst.preferences = benchmark_preferences(*nurses, *shifts, *days, run_seed);
            inst
        }
        BenchSource::Fixed(inst) => inst.clone(),
    };
    if let Some(alpha) = config.alpha {
        inst.alpha = alpha;
    }
    inst.validate()?;
    Ok(inst)
}

struct RunOutcome {
    cp_ms: f64,
    cp_fit: f64,
    cp_status: SearchStatus,
    pso_fit: f64,
}

fn single_run(config: &BenchConfig, run_seed: u64) -> Result<RunOutcome, BenchError> {
    let instance = run_instance(config, run_seed)?;
    let compiled = compile(&instance)?;
    let mut model = compiled.model.clone();
    let objective = RosterObjective::new(&instance, &compiled);
    let (best, stats) = solve_optimize(&mut model, &objective, &config.search);
    let swarm = SwarmConfig { seed: run_seed, ..config.swarm.clone() };
    let pso = pso_run(&instance, &swarm)?;
    Ok(RunOutcome {
        cp_ms: stats.wall_time_ms(),
        cp_fit: best.map_or(f64::NAN, |(_, score)| score),
        cp_status: stats.status,
        pso_fit: pso.best_score,
    })
}

/// Runs the benchmark; runs execute in parallel but results keep run order.
pub fn run_bench(config: &BenchConfig) -> Result<BenchResult, BenchError> {
    if config.runs < 2 {
        return Err(BenchError::TooFewRuns(config.runs));
    }
    let seeds = derive_seeds(config.seed, config.runs);
    let outcomes: Vec<RunOutcome> =
        seeds.par_iter().map(|&s| single_run(config, s)).collect::<Result<_, _>>()?;
    Ok(BenchResult {
        runs: config.runs,
        cp_runtimes: outcomes.iter().map(|o| o.cp_ms).collect(),
        cp_fitnesses: outcomes.iter().map(|o| o.cp_fit).collect(),
        pso_fitnesses: outcomes.iter().map(|o| o.pso_fit).collect(),
        cp_status: outcomes.iter().map(|o| o.cp_status).collect(),
        seeds,
    })
}

impl BenchResult {
    pub fn records(&self) -> Vec<RunRecord> {
        (0..self.runs)
            .map(|r| RunRecord {
                run: r + 1,
                cp_ms: self.cp_runtimes[r],
                cp_fit: self.cp_fitnesses[r],
                pso_fit: self.pso_fitnesses[r],
            })
            .collect()
    }

    pub fn stats_table(&self) -> Result<String, StatsError> {
        stats_table(&self.records())
    }
}

/// Statistics table over a set of run records.
pub fn stats_table(records: &[RunRecord]) -> Result<String, StatsError> {
    let column = |f: fn(&RunRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let runtime = descriptive_stats(&column(|r| r.cp_ms))?;
    let cp = descriptive_stats(&column(|r| r.cp_fit))?;
    let pso = descriptive_stats(&column(|r| r.pso_fit))?;
    Ok(render_stats(&runtime, &cp, &pso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsp::canonical_instance;

    fn small(source: BenchSource) -> BenchConfig {
        BenchConfig {
            source,
            runs: 3,
            seed: 4,
            alpha: None,
            search: SearchConfig::default(),
            swarm: SwarmConfig { population: 6, iterations: 20, ..Default::default() },
        }
    }

    #[test]
    fn record_line_round_trip() {
        let r = RunRecord { run: 2, cp_ms: 12.5, cp_fit: 0.8489, pso_fit: -1.25 };
        let line = r.to_string();
        assert_eq!(line, "RESULT run=2 cp_ms=12.500 cp_fit=0.8489 pso_fit=-1.25");
        assert_eq!(line.parse::<RunRecord>().unwrap(), r);
        assert!("RESULT run=1 cp_ms=1".parse::<RunRecord>().is_err());
        assert!("run=1".parse::<RunRecord>().is_err());
    }

    #[test]
    fn seeds_are_stable() {
        assert_eq!(derive_seeds(1, 4), derive_seeds(1, 4));
        assert_eq!(derive_seeds(1, 4)[..2], derive_seeds(1, 2)[..]);
    }

    #[test]
    fn generated_runs_vary_preferences_only() {
        let cfg = small(BenchSource::Generated { nurses: 5, shifts: 3, days: 7 });
        let seeds = derive_seeds(cfg.seed, 2);
        let a = run_instance(&cfg, seeds[0]).unwrap();
        let b = run_instance(&cfg, seeds[1]).unwrap();
        assert_eq!(a.coverage, b.coverage);
        assert_ne!(a.preferences, b.preferences);
    }

    #[test]
    fn bench_is_deterministic_apart_from_time() {
        let cfg = small(BenchSource::Fixed(canonical_instance()));
        let a = run_bench(&cfg).unwrap();
        let b = run_bench(&cfg).unwrap();
        assert_eq!(a.cp_fitnesses, b.cp_fitnesses);
        assert_eq!(a.pso_fitnesses, b.pso_fitnesses);
        assert_eq!(a.seeds, b.seeds);
        assert!(a.cp_status.iter().all(|&s| s == SearchStatus::Sat));
    }

    #[test]
    fn one_run_is_rejected() {
        let mut cfg = small(BenchSource::Fixed(canonical_instance()));
        cfg.runs = 1;
        assert!(matches!(run_bench(&cfg), Err(BenchError::TooFewRuns(1))));
    }
}
