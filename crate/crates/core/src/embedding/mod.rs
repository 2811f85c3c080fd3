//! Rank-one idempotents `E_n` and the embedding `φ` of `ℓ¹` into a product of
//! matrix algebras indexed by finite subsets.

mod certify;
mod family;
mod phi;
mod subset_sum;
mod subsets;
mod trace;

pub use certify::{
    certify_embedding_bounds, certify_subset_sums, EmbedParams, EmbeddingReport, RootsRecord,
    SubsetSumReport, TrialRecord,
};
pub use family::{build_e, certify_e_family, coord, EFamilyReport, RankOneFamily, ALPHA, OMEGA};
pub use phi::{phi, phi_block, phi_sup_norm, EmbeddedElement};
pub use subset_sum::{
    best_subset_sum, brute_force_subset_sum, l1_norm, roots_of_unity, SubsetSum, BRUTE_FORCE_MAX,
};
pub use subsets::{canonical_cmp, SubsetFamily};
pub use trace::{l1_trace_norm, make_trace, TraceScheme, TraceWeights};
