//! Orlicz functions, their conjugates and the Musielak-Orlicz norm.

mod equivalence;
mod norm;
mod orlicz;
mod pwa;

pub use equivalence::equivalence_constants;
pub use norm::{MusielakSystem, NORM_MAX_ITER, NORM_TOL};
pub use orlicz::{
    conjugate_exponent, is_two_concave, log_grid, OrliczFunction, PowerFunction, Regularity,
    TwoConcavityReport, TWO_CONCAVITY_GRID,
};
pub use pwa::PiecewiseAffineConvex;
