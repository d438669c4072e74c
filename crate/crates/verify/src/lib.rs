//! Verification suites for siegel-core: seeded case families with JSON
//! reports.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Counts, Ctx, Suite, SuiteConfig};
pub use report::{emit_report, to_sorted_json, CaseRecord, Cases, Format, Outcome, SuiteReport, Verdict};
pub use suites::run_suite;
