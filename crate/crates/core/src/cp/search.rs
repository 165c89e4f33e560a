//! Depth-first backtracking search and branch-and-bound.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::Domain;
use super::model::{Consistency, CspModel, Solution};
use super::VarId;

/// Improvements smaller than this are not worth another subtree.
const BOUND_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarHeuristic {
    /// Smallest domain first, ties to the lowest index.
    #[default]
    FirstFail,
    InputOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValHeuristic {
    #[default]
    MinValue,
    MaxValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchConfig {
    pub var_heuristic: VarHeuristic,
    pub val_heuristic: ValHeuristic,
    /// A zero limit expires before the root is explored.
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Breaks first-fail ties randomly (seeded) instead of by index.
    pub randomize_ties: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// A solution was found; for optimization, the incumbent is proven optimal.
    Sat,
    Unsat,
    TimedOut,
    NodeLimit,
}

impl SearchStatus {
    pub fn is_complete(self) -> bool {
        matches!(self, SearchStatus::Sat | SearchStatus::Unsat)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub propagations: u64,
    pub solutions: u64,
    pub wall_time: Duration,
    /// Time until the first solution, if any was found.
    pub first_solution_time: Option<Duration>,
    pub status: SearchStatus,
}

impl SearchStats {
    pub fn wall_time_ms(&self) -> f64 {
        self.wall_time.as_secs_f64() * 1e3
    }
}

/// Objective to maximize over complete assignments.
pub trait Objective {
    fn evaluate(&self, values: &[u32]) -> f64;

    /// An upper bound on `evaluate` over every completion of `domains`.
    /// The default never prunes.
    fn upper_bound(&self, _domains: &[Domain]) -> f64 {
        f64::INFINITY
    }
}

impl<F: Fn(&[u32]) -> f64> Objective for F {
    fn evaluate(&self, values: &[u32]) -> f64 {
        self(values)
    }
}

/// Picks the next branching variable, or `None` when every variable is fixed.
pub fn select_variable(model: &CspModel, config: &SearchConfig) -> Option<VarId> {
    pick(model.domains(), config.var_heuristic, None)
}

fn pick(domains: &[Domain], heuristic: VarHeuristic, rng: Option<&mut ChaCha8Rng>) -> Option<VarId> {
    let mut unfixed = domains.iter().enumerate().filter(|(_, d)| !d.is_fixed());
    match heuristic {
        VarHeuristic::InputOrder => unfixed.next().map(|(i, _)| VarId(i)),
        VarHeuristic::FirstFail => {
            let mut best: Option<(usize, u32)> = None;
            let mut ties = 0u32;
            let mut rng = rng;
            for (i, d) in unfixed {
                let size = d.size();
                match best {
                    Some((_, s)) if size > s => {}
                    Some((_, s)) if size == s => {
                        ties += 1;
                        // reservoir sampling over the tied variables
                        if let Some(r) = rng.as_deref_mut() {
                            if r.gen_range(0..=ties) == 0 {
                                best = Some((i, size));
                            }
                        }
                    }
                    _ => {
                        best = Some((i, size));
                        ties = 0;
                    }
                }
            }
            best.map(|(i, _)| VarId(i))
        }
    }
}

/// Finds the first solution in depth-first order.
pub fn solve_satisfy(model: &mut CspModel, config: &SearchConfig) -> (Option<Solution>, SearchStats) {
    let mut search = Search::new(config, None::<&fn(&[u32]) -> f64>);
    let status = search.run(model);
    let stats = search.finish(model, status);
    (search.best.map(|(s, _)| s), stats)
}

/// Branch-and-bound maximization of `objective`.
///
/// Keeps the first strictly better solution seen and returns the incumbent
/// when the tree is exhausted or a limit fires.
pub fn solve_optimize<O: Objective + ?Sized>(
    model: &mut CspModel,
    objective: &O,
    config: &SearchConfig,
) -> (Option<(Solution, f64)>, SearchStats) {
    let mut search = Search::new(config, Some(objective));
    let status = search.run(model);
    let best = search.best.take();
    (best, search.finish(model, status))
}

struct Search<'a, O: ?Sized> {
    config: &'a SearchConfig,
    objective: Option<&'a O>,
    start: Instant,
    nodes: u64,
    backtracks: u64,
    solutions: u64,
    first_solution: Option<Duration>,
    propagations_before: u64,
    limit: Option<SearchStatus>,
    best: Option<(Solution, f64)>,
    rng: Option<ChaCha8Rng>,
}

impl<'a, O: Objective + ?Sized> Search<'a, O> {
    fn new(config: &'a SearchConfig, objective: Option<&'a O>) -> Self {
        Search {
            config,
            objective,
            start: Instant::now(),
            nodes: 0,
            backtracks: 0,
            solutions: 0,
            first_solution: None,
            propagations_before: 0,
            limit: None,
            best: None,
            rng: config.randomize_ties.then(|| ChaCha8Rng::seed_from_u64(config.seed)),
        }
    }

    fn run(&mut self, model: &mut CspModel) -> SearchStatus {
        self.propagations_before = model.propagation_count();
        let root = model.domains().to_vec();
        if !self.limit_reached() && model.propagate_fixpoint() == Consistency::Consistent {
            self.dfs(model);
        }
        model.restore(&root);
        match (self.limit, &self.best) {
            (Some(limit), _) => limit,
            (None, Some(_)) => SearchStatus::Sat,
            (None, None) => SearchStatus::Unsat,
        }
    }

    fn finish(&self, model: &CspModel, status: SearchStatus) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            backtracks: self.backtracks,
            propagations: model.propagation_count() - self.propagations_before,
            solutions: self.solutions,
            wall_time: self.start.elapsed(),
            first_solution_time: self.first_solution,
            status,
        }
    }

    fn limit_reached(&mut self) -> bool {
        if self.limit.is_some() {
            return true;
        }
        if let Some(limit) = self.config.node_limit {
            if self.nodes >= limit {
                self.limit = Some(SearchStatus::NodeLimit);
            }
        }
        if let Some(limit) = self.config.time_limit {
            if self.start.elapsed() >= limit {
                self.limit = Some(SearchStatus::TimedOut);
            }
        }
        self.limit.is_some()
    }

    /// Returns true when the search must stop.
    fn dfs(&mut self, model: &mut CspModel) -> bool {
        if let (Some(obj), Some((_, best))) = (self.objective, &self.best) {
            if obj.upper_bound(model.domains()) <= best + BOUND_EPSILON {
                return false;
            }
        }
        let Some(var) = pick(model.domains(), self.config.var_heuristic, self.rng.as_mut()) else {
            return self.on_solution(model);
        };
        let domain = model.domain(var);
        let values: Vec<u32> = match self.config.val_heuristic {
            ValHeuristic::MinValue => domain.iter().collect(),
            ValHeuristic::MaxValue => domain.iter().rev().collect(),
        };
        let snapshot = model.domains().to_vec();
        for value in values {
            if self.limit_reached() {
                return true;
            }
            self.nodes += 1;
            model.assign(var, value);
            if model.propagate_from(var) == Consistency::Consistent {
                if self.dfs(model) {
                    model.restore(&snapshot);
                    return true;
                }
            } else {
                self.backtracks += 1;
            }
            model.restore(&snapshot);
        }
        false
    }

    fn on_solution(&mut self, model: &CspModel) -> bool {
        let values: Vec<u32> = model.domains().iter().map(|d| d.min().unwrap()).collect();
        self.solutions += 1;
        if self.first_solution.is_none() {
            self.first_solution = Some(self.start.elapsed());
        }
        match self.objective {
            None => {
                self.best = Some((Solution { values }, 0.0));
                true
            }
            Some(obj) => {
                let score = obj.evaluate(&values);
                if self.best.as_ref().is_none_or(|(_, b)| score > *b) {
                    self.best = Some((Solution { values }, score));
                }
                false
            }
        }
    }
}
