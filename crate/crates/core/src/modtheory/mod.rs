//! Finite-length modules over commutative local algebras with residue field `k`.

mod decompose;
mod glue;
mod local;
mod module;
mod reps;
mod sample;

pub use decompose::{
    faithful_small_subfactor, is_subdirect_embedding, lt3_decompose, subdirect_simple_socles,
    sum_of_local_tops, DecompositionKind, DecompositionReport, FaithfulSubfactorReport,
};
pub use glue::{
    cyclic_identification, glue, glue_spec_from_pair, quotient_annihilator, GlueLengths,
    GlueResult, GlueSpec,
};
pub use local::LocalAlgebra;
pub use module::ModuleOverLocal;
pub use reps::{enumerate_reps, enumerate_reps_with, RepStats};
pub use sample::{random_faithful_module, random_module};

use thiserror::Error;

use crate::exactlin::LinError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("basis element `{0}` is not nilpotent, so the algebra is not local")]
    NotLocal(String),
    #[error("unknown algebra preset `{0}`")]
    UnknownPreset(String),
    #[error("subspace is not a submodule")]
    NotSubmodule,
    #[error("{0} is not an ideal")]
    NotIdeal(String),
    #[error("the ideals I1 and I2 intersect nontrivially")]
    IdealsIntersect,
    #[error("the given map is not a module isomorphism")]
    NotIsomorphic,
    #[error("module has length {0}, more than 3")]
    LengthTooLarge(usize),
    #[error("module is not faithful")]
    NotFaithful,
    #[error("search budget exceeded after {0} steps")]
    BudgetExceeded(u64),
    #[error("representation enumeration needs a prime field")]
    FieldNotFinite,
    #[error(transparent)]
    Lin(#[from] LinError),
}
