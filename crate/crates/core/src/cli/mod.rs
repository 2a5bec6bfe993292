//! Task files, canonical suites and reports.

mod parse;
mod report;
mod run;
mod taskfile;

pub use parse::{parse_polynomial, parse_rational, ParseError, Parser, Value};
pub use report::{emit_report, Entry, Format, Report, Status};
pub use run::{canonical_ck_basis, run_tasks, solve_entry, suite, suite_report, weight_grid};
pub use taskfile::{parse_taskfile, print_taskfile, yamabe_weight, Decl, FieldValue, MetricValue, Task, TaskFile};

#[cfg(test)]
mod tests;
