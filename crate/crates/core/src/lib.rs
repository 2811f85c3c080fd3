//! Finite-dimensional truncations of some explicit operator-algebra examples,
//! with exact and numerical certificates for the identities and norm bounds
//! they satisfy.

pub mod chain;
pub mod diagonal;
pub mod embedding;
pub mod error;
pub mod experiment;
pub mod generation;
pub mod matrix;
mod par;
pub mod sampling;

pub use chain::{
    build_chain, norm_profile, verify_semilattice, Chain, ChainSpec, Coupling, CouplingScheme,
};
pub use error::{Error, Result};
pub use generation::{
    certify_generation, single_generator, GenerationCertificate, WeightScheme, WeightSeq,
};
pub use matrix::{is_idempotent, op_norm, schatten1_norm, Backend, Matrix, Scalar, Tolerance};
pub use par::Exec;
