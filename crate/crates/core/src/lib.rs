pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod encoder;
pub mod error;
pub mod model;
pub(crate) mod search;
pub mod solver;

pub use error::{Error, Result};
pub use model::{Coloring, Params, PartialColoring, Triple};
pub use solver::{Budget, Decision, SolveOutcome, Solver, Status};
