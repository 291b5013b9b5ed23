//! Exact solvers, approximation algorithms and brute-force oracles for the
//! double travelling salesman problem with multiple stacks.

pub mod apx_two;
pub mod bench;
pub mod diff_even;
pub mod diff_odd;
pub mod error;
pub mod feasibility;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod pctsp;
pub mod reduction;
pub mod scaled;
pub mod solve;
pub mod tsp;

pub use error::{Error, Result};
pub use model::*;
