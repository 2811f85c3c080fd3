//! Tensor elements over a matrix algebra and the diagonals built from a chain.

mod delta;
mod expectation;
mod mbad;
mod tensor;

pub use delta::{build_delta, unitize_diagonal};
pub use expectation::{
    certify_expectation, expectation_from_diagonal, skew_idempotent_demo, ExpectationReport,
    FiniteDiagonal, SkewDemo,
};
pub use mbad::{certify_mbad, MbadRecord, MbadReport, SampleElement};
pub use tensor::{
    bimodule_commutator, flatten, pi_map, regroup, tensor_norm_bounds, NormBounds, TensorElem,
};
