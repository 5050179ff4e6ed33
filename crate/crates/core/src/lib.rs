//! Mobile Ambients and the Ambient Logic: reduction, structural congruence,
//! bisimilarity, model checking and a Turing machine encoding.

pub mod congruence;
pub mod equivalence;
pub mod error;
pub mod logic;
pub mod semantics;
pub mod syntax;
pub mod turing;

pub use error::Error;
