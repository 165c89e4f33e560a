//! Constraint-programming nurse rostering.
//!
//! * [`cp`] is a small finite-domain solver (propagators, first-fail
//!   backtracking, branch-and-bound).
//! * [`nsp`] defines roster instances, compiles the hard rules into a
//!   [`cp::CspModel`], scores schedules and audits them.
//! * [`pso`] is a particle swarm baseline over relaxed rosters.
//! * [`io`] reads and writes instances, roster grids and statistics tables.
//! * [`bench`] runs repeated CP-vs-PSO comparisons.

pub mod bench;
pub mod cp;
pub mod io;
pub mod nsp;
pub mod pso;
