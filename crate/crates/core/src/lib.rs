//! Trap spaces of Boolean networks.
//!
//! The minimal and maximal trap spaces of a network are computed from its
//! prime implicant graph by enumerating inclusion-extremal stable and
//! consistent arc sets with a native 0-1 search. Small networks can be
//! cross-checked against their explicit state transition graphs.

pub mod analysis;
#[cfg(feature = "cli")]
pub mod cli;
pub mod dynamics;
pub mod encode;
pub mod error;
pub mod expr;
pub mod io;
pub mod primes;
pub mod randgen;
pub mod solver;
pub mod space;

pub use error::{Error, Result};
pub use expr::{parse_expression, Expr};
pub use primes::{HyperArc, Literal, PrimeImplicantGraph};
pub use solver::{SolverOptions, TrapSpaceReport};
pub use space::{BooleanNetwork, Subspace};
