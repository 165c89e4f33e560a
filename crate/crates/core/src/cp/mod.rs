//! Finite-domain constraint engine: domains, propagators, fixpoint
//! propagation, depth-first search and branch-and-bound.

mod domain;
mod model;
mod propagator;
mod search;

pub use domain::{Domain, DomainIter, RemoveOutcome, MAX_VALUE};
pub use model::{CheckOutcome, Consistency, CspModel, Solution, Violated};
pub use propagator::{CardinalityBound, Propagator, PropagatorKind, Wipeout};
pub use search::{
    select_variable, solve_optimize, solve_satisfy, Objective, SearchConfig, SearchStats, SearchStatus,
    ValHeuristic, VarHeuristic,
};

use thiserror::Error;

/// Dense index of a variable within one [`CspModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CpError {
    #[error("variable {0} declared with an empty domain")]
    EmptyDomain(usize),
    #[error("invalid propagator: {0}")]
    InvalidPropagator(String),
}
