//! Text formats: instance files, roster grids and statistics tables.

mod instance_format;
mod roster;
mod stats;

pub use instance_format::{parse_instance, write_instance, ParseError};
pub use roster::{parse_roster, render_roster, RosterParseError};
pub use stats::{descriptive_stats, render_stats, spss_number, StatsError, StatsSummary};
