//! Finite-length modules over a principal ideal domain with one endomorphism.

mod module;
mod ring;
mod smith;

pub use module::{
    cayley_hamilton_over_pid, coprime_base, embeds, ideal_chain, length_of, random_endo,
    random_module_with_endo, rt_verify, span_structure, IdealChain, InvariantFactors,
    PidModuleWithEndo, RtReport, SpanReport,
};
pub use ring::{PidSpec, RingElem};
pub use smith::{det, identity, mat_mul, smith, PidMatrix, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PidError {
    #[error("unknown ring `{0}`")]
    BadRing(String),
    #[error("cannot parse ring element `{0}`")]
    BadElement(String),
    #[error("module does not have finite length")]
    NotFiniteLength,
    #[error("invariant factor {0} is a unit")]
    UnitFactor(String),
    #[error("{0} does not divide {1}")]
    NotChain(String, String),
    #[error("endomorphism must be a {0}x{0} matrix")]
    Shape(usize),
    #[error("entry ({row}, {col}) does not define a homomorphism between the cyclic summands")]
    IllFormedEndo { row: usize, col: usize },
}
