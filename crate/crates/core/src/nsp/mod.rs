//! Nurse rostering: instances, compilation to a constraint model, scoring
//! and an independent feasibility checker.

mod check;
mod compile;
mod fitness;
mod generate;
mod instance;
mod schedule;

pub use check::{check_roster, HardConstraint, Location, Violation};
pub use compile::{compile, CompiledRoster};
pub use fitness::{fitness, FitnessReport, RosterObjective};
pub use generate::{benchmark_instance, benchmark_preferences, canonical_instance};
pub use instance::{InstanceError, Preference, RosterInstance, WEEK_LEN};
pub use schedule::{AssignmentTensor, Schedule, ShapeError};
