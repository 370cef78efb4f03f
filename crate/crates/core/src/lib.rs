//! Least infinite-valued models of formula-based logic programs.

pub mod cli;
pub mod eval;
pub mod fixpoint;
pub mod ground;
pub mod interp;
pub mod oracle;
pub mod ordinal;
pub mod syntax;
