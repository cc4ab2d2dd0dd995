//! Reproductions of the published comparison table, rate races between the
//! schemes and the data-dependence experiment.

mod audit;
pub mod corpus;
mod datadep;
mod oracle;
mod race;
mod table;

pub use audit::{envelope_audit, EnvelopeAudit};
pub use datadep::{run_datadep, DataDepConfig, DataDepReport};
pub use oracle::RationalOracle;
pub use race::{rate_race, Comparison, RaceReport, SchemeRun};
pub use table::{comparison_table, reproduce_table, CellMismatch, ComparisonTable, TableRow, COLUMNS, PAPER_DIGITS, PAPER_ROWS};
