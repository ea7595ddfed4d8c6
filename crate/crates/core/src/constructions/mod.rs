//! The two directions between weight matrices and Musielak-Orlicz systems.

mod from_functions;
mod from_matrix;
pub mod profile;
pub mod quadrature;
mod roundtrip;
mod spline;

pub use from_functions::{
    matrix_from_functions, matrix_from_profiles, power_orlicz, MatrixConstruction,
};
pub use from_matrix::{functions_from_matrix, knot_values, GeneratedSystem};
pub use profile::{
    h_reconstruct_check, ConcaveProfile, DerivativeBackend, FProfile, FnProfile, PowerProfile,
};
pub use quadrature::{integrate, Integral, QuadratureConfig};
pub use roundtrip::{roundtrip_check, RoundtripReport};
pub use spline::ConcaveSpline;

use crate::{Error, Result};

/// Parameters of the matrix construction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstructionConfig {
    pub n: usize,
    pub quadrature: QuadratureConfig,
    /// Relative finite-difference step for `H'` and `H''`.
    pub fd_step: f64,
    /// Below this point `f` is replaced by a power-law extrapolation.
    pub t_min: f64,
}

impl ConstructionConfig {
    /// Defaults: absolute quadrature tolerance `1e-9`, step `1e-3`,
    /// cutoff `1e-6 / n`.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            quadrature: QuadratureConfig::default(),
            fd_step: 1e-3,
            t_min: 1e-6 / n.max(1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let q = &self.quadrature;
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !(q.abs_tol > 0.0 && q.rel_tol >= 0.0 && q.max_intervals > 0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 0.1) {
            return Err(Error::InvalidParameter(alloc::format!(
                "fd step {}",
                self.fd_step
            )));
        }
        if !(self.t_min > 0.0 && self.t_min < 1.0 / self.n as f64) {
            return Err(Error::InvalidParameter(alloc::format!(
                "cutoff t_min = {} must lie in (0, 1/n)",
                self.t_min
            )));
        }
        Ok(())
    }
}
