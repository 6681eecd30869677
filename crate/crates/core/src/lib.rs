//! Exact computations with commuting matrices and finite-length modules over
//! local Artinian algebras and principal ideal domains.

pub mod algebra;
pub mod cli;
pub mod diagrams;
pub mod exactlin;
pub mod modtheory;
pub mod pid;
pub mod search;
