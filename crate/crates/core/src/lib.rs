//! Popular matchings in bipartite graphs with one-sided ties.

pub mod cli;
pub mod dm;
pub mod error;
pub mod format;
pub mod gen;
pub mod instance;
pub mod oracle;
pub mod reduction;
pub mod solver;
pub mod verifier;

pub use error::{Error, Result};
pub use instance::{ApplicantId, Instance, Labels, Matching, PostId, PostPolicy, Rank, Vertex, Vote};
pub use solver::{solve, solve_detailed, Outcome};
pub use verifier::{is_popular, margin, MarginReport};
