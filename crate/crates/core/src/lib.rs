//! Weighted zero-sum constants of small finite abelian groups.
//!
//! Computes the weighted Davenport, eta, Erdős–Ginzburg–Ziv and Harborth
//! constants and the critical number by exhaustive search, enumerates the
//! extremal sequences of the Harborth-type inverse problems, and checks known
//! closed forms and structural characterizations against the search.

pub mod automorphism;
pub mod cli;
pub mod engine;
pub mod error;
pub mod formulas;
pub mod inverse;
pub mod group;
pub mod sequence;

pub use engine::{ConstantKind, Engine, SearchMode, SearchOptions, SearchReport};
pub use error::{Error, Result};
pub use group::{Basis2x2n, GroupElement, GroupSpec, Hom, SumSet};
pub use sequence::{Sequence, WeightSet};
