//! Musielak-Orlicz norms generated by permutation averages.
//!
//! Given a weight matrix `a` with positive nonincreasing rows, the average
//!
//! ```text
//! Ave_π ( Σ_i |x_i a_{i,π(i)}|² )^{1/2}
//! ```
//!
//! over all permutations π is equivalent to a Musielak-Orlicz norm whose
//! Orlicz functions are read off the matrix. Conversely, strictly 2-concave
//! Orlicz functions determine a matrix whose average reproduces their norm,
//! which in turn embeds the space into `L_1`.
//!
//! The crate is `no_std` (with `alloc`) and split into:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`convex`] | piecewise-affine convex functions, Orlicz functions, Legendre conjugates, the Luxemburg norm |
//! | [`perm`] | weight matrices, permutation enumeration and sampling, permutation averages, the matrix norm `‖·‖ₐ` |
//! | [`constructions`] | matrix → Orlicz functions, Orlicz functions → matrix (the f-profile), round trips |
//! | [`embedding`] | the map into `L_1^{2ⁿn!}`, the Khintchine sandwich, distortion witnesses |
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod constructions;
pub mod convex;
pub mod embedding;
mod error;
pub mod perm;
pub mod report;

pub use error::{Error, Result};

pub use constructions::{
    functions_from_matrix, matrix_from_functions, power_orlicz, roundtrip_check, ConstructionConfig,
};
pub use convex::{
    equivalence_constants, is_two_concave, MusielakSystem, OrliczFunction, PiecewiseAffineConvex,
    PowerFunction,
};
pub use embedding::{distortion_estimate, khintchine_sandwich_check, psi_image_norm};
pub use perm::{
    ave_l2, ave_max_two, ave_max_vector, build_b_vector, dra, dra_sum_bound, matrix_norm_a,
    AverageResult, Cube, Mode, PermutationSampler, WeightMatrix,
};
pub use report::{EquivalenceReport, Sandwich};
