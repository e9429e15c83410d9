//! Word maps on symmetric groups.
//!
//! A word `w` in the free group `F_k` induces a map `S_n^k -> S_n` by
//! substitution. This crate evaluates such maps on random or exhaustively
//! enumerated permutation tuples and compares the small-cycle statistics of
//! `w(σ_1, …, σ_k)` with the universal Poisson-type limit that depends only
//! on the power `d` in `w = Ω^d`.
//!
//! Points are 1-based in every public contract.

pub mod error;
pub mod experiment;
pub mod graph;
pub mod limit;
pub mod mc;
pub mod numbers;
pub mod perm;
pub mod sampler;
pub mod word;
pub mod young;

pub use error::{Error, Result};
pub use graph::{GraphClass, PartialPermGraph, Trajectory};
pub use limit::{psi, LimitSpec, SplitTable};
pub use perm::{CycleStats, Permutation};
pub use sampler::{SamplerKind, SamplerSpec, TupleSpec};
pub use word::{CyclicReduction, GammaProfile, Letter, PowerDecomposition, ReductionCase, RunForm, Word};
pub use young::YoungDiagram;
