//! Derivation-based noncommutative differential calculus on matrix algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: matrix Lie algebra infrastructure (bases, brackets, Killing
//!   form, centralizers, reductive splits, adjoint action).
//! * [`forms`]: the graded algebra `M_n ⊗ Λ sl_n*` with its differential,
//!   Cartan operation, canonical 1-form `iθ`, connections and gauge action.
//! * [`classifier`]: representation-theoretic counting of the degrees of
//!   freedom of invariant noncommutative connections.
//! * [`spherical`]: the spherically symmetric ansatz on
//!   `ℝ × ℝ³∖{0}` with `M_2` as the noncommutative fibre.
//! * [`verify`]: seeded randomized identity suites shared by the CLI and the
//!   acceptance tests.
//!
//! All arithmetic is complex double precision.

pub mod classifier;
pub mod error;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod random;
pub mod serial;
pub mod spherical;
pub mod verify;

pub use error::{NcgError, Result};
pub use linalg::C64;
