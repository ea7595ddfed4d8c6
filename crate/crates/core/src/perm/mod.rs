//! Permutation averages, decreasing rearrangements and the matrix norm `‖·‖ₐ`.

mod average;
mod enumerate;
mod matrix_norm;
mod sampler;
mod weights;

pub use average::{
    ave_l2, ave_max_two, ave_max_vector, build_b_vector, dra, dra_sum_bound, AverageMode,
    AverageResult, Mode, DEFAULT_SAMPLES, EXACT_PAIR_LIMIT, EXACT_SINGLE_LIMIT,
};
pub(crate) use average::{ExactSum, Running};
pub use enumerate::{factorial, for_each_permutation};
pub use matrix_norm::{
    lemma_matrixnorm_check, lemma_matrixnorm_check_with, matrix_norm_a, matrix_norm_system,
    NORM_SANDWICH_SLACK,
};
pub use sampler::PermutationSampler;
pub use weights::{Cube, WeightMatrix};
