//! Compilation of `M'` to circuits and CNF.

pub mod circuit;
pub mod mprime;
pub mod relation;
pub mod sat;
pub mod tseitin;

pub use mprime::{compile_mprime, CompileError, CompiledMPrime, InputLayout};
pub use relation::CnfRelation;
