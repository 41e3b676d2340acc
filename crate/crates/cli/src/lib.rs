//! Scenario files in, deterministic reports out.
//!
//! A scenario is a JSON object selecting one of four modes:
//!
//! * `classify`: counts the scalar fields of invariant connections for an
//!   `su(2)` action on `ℂⁿ`, given as a partition or as explicit matrices.
//! * `verify-calculus`: randomized identity suites for the differential
//!   calculus and the gauge action on `M_n`.
//! * `spherical`: checks of the spherically symmetric ansatz plus a sweep of
//!   the radial-gauge form over a `(t, r, ϑ, ϕ)` grid.
//! * `transition`: transition cocycle and the singular-to-radial gauge
//!   transport over a grid.
//!
//! Exit codes: 0 on success, 2 for an invalid scenario, 3 for a numerically
//! ambiguous rank or spectrum decision, 1 for anything else.

pub mod error;
pub mod report;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use report::{emit_report, render, Format};
pub use run::{run, run_scenario, Report};
pub use scenario::{Overrides, Scenario};
