//! Boolean quadratic programs with planted global minimizers.
//!
//! The crate generates instances of
//!
//! ```text
//! minimize ½ xᵀQx − cᵀx  subject to  x ∈ {−1, 1}ⁿ
//! ```
//!
//! whose optimum is known by construction, solves their Lagrangian dual by
//! Newton's method, and checks the resulting optimality certificates. An
//! exhaustive Gray-code oracle provides ground truth for small sizes.
//!
//! The `parallel` feature (on by default) runs the data-parallel loops on
//! rayon; see [`exec`].

pub mod bench;
pub mod dual_solver;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod generator;
pub mod io;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod verify;

pub use dual_solver::{solve_dual, SolveOptions, SolveReport, SolveStatus};
pub use error::{BqpError, Result};
pub use exec::Execution;
pub use generator::{generate_instance, Certificate, GenConfig};
pub use io::{parse_instance, serialize_instance, BenchRecord, InstanceFile, ParseError};
pub use model::{BqpInstance, DualState, Multipliers, SignVector};
pub use numerics::{SpdFactor, SymMatrix};
pub use oracle::{brute_force_minimize, OracleResult};
pub use verify::{verify_certificate, VerifyReport};
