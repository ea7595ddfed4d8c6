use alloc::format;
use alloc::vec::Vec;

use super::profile::{ConcaveProfile, DerivativeBackend, FProfile, PowerProfile};
use super::ConstructionConfig;
use crate::convex::{conjugate_exponent, MusielakSystem, OrliczFunction, PowerFunction};
use crate::perm::WeightMatrix;
use crate::{Error, Result};

/// The normalized power Orlicz function `M(t) = c t^p` with `M*(x) = x^q`,
/// restricted to the strictly 2-concave range `1 < p < 2`.
pub fn power_orlicz(p: f64) -> Result<OrliczFunction> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "strictly 2-concave power family needs 1 < p < 2, got {p}"
        )));
    }
    PowerFunction::normalized(p).map(OrliczFunction::from)
}

/// A weight matrix built from Orlicz functions, together with the normalized
/// system it reproduces.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatrixConstruction {
    pub matrix: WeightMatrix,
    /// `M_i(λ_i ·)`, rescaled so that each conjugate equals 1 at 1.
    pub normalized: MusielakSystem,
    /// The dilations `λ_i`.
    pub dilations: Vec<f64>,
}

/// Builds `a_{i,j} = n ∫_{(j−1)/n}^{j/n} f_i` from `H_i = (M_i*⁻¹)²`.
///
/// Each `M_i` must be a power function with `1 < p ≤ 2` (`p = 2` is the
/// degenerate limit `H(t) = t`); the argument of `M_i` is first rescaled so
/// that `M_i*(1) = 1`.
pub fn matrix_from_functions(
    system: &MusielakSystem,
    cfg: &ConstructionConfig,
) -> Result<MatrixConstruction> {
    if cfg.n != system.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            got: cfg.n,
        });
    }
    let mut profiles = Vec::with_capacity(system.dim());
    let mut normalized = Vec::with_capacity(system.dim());
    let mut dilations = Vec::with_capacity(system.dim());
    for (index, m) in system.functions().iter().enumerate() {
        let power = m.as_power().ok_or_else(|| Error::NotSmooth {
            index,
            reason:
                "piecewise-affine functions are neither strictly convex nor twice differentiable"
                    .into(),
        })?;
        if power.exponent() > 2.0 {
            return Err(Error::NotSmooth {
                index,
                reason: format!("exponent {} is not 2-concave", power.exponent()),
            });
        }
        let conj = power.conjugate();
        // M(λ·)* = M*(·/λ); pick λ with M*(1/λ) = 1
        let lambda = conj.inverse(1.0).recip();
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Normalization {
                index,
                reason: format!("M*⁻¹(1) = {}", 1.0 / lambda),
            });
        }
        let q = conjugate_exponent(power.exponent());
        profiles.push(PowerProfile {
            scale: 1.0,
            exponent: 2.0 / q,
        });
        normalized.push(OrliczFunction::from(power.dilate(lambda)));
        dilations.push(lambda);
    }
    let matrix = matrix_from_profiles(&profiles, DerivativeBackend::Analytic, cfg)?;
    Ok(MatrixConstruction {
        matrix,
        normalized: MusielakSystem::new(normalized)?,
        dilations,
    })
}

/// `a_{i,j} = n ∫_{(j−1)/n}^{j/n} f_i` for explicit profiles `H_i`.
///
/// Quadrature noise that makes a row increase by less than the quadrature
/// tolerance is flattened; larger increases are reported.
pub fn matrix_from_profiles<H: ConcaveProfile>(
    profiles: &[H],
    backend: DerivativeBackend,
    cfg: &ConstructionConfig,
) -> Result<WeightMatrix> {
    cfg.validate()?;
    let n = cfg.n;
    if profiles.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: profiles.len(),
        });
    }
    let nf = n as f64;
    let noise = 10.0 * nf * cfg.quadrature.abs_tol;
    let mut data = Vec::with_capacity(n * n);
    for (i, h) in profiles.iter().enumerate() {
        let f = FProfile::new(h, backend, cfg)?;
        let mut prev = f64::INFINITY;
        for j in 0..n {
            let mut aij = nf * f.integral(j as f64 / nf, (j + 1) as f64 / nf)?;
            if aij > prev {
                if aij - prev > noise + 1e-12 * prev {
                    return Err(Error::NotDecreasing { row: i, col: j });
                }
                aij = prev;
            }
            if !(aij > 0.0 && aij.is_finite()) {
                return Err(Error::NonPositiveEntry { row: i, col: j });
            }
            data.push(aij);
            prev = aij;
        }
    }
    WeightMatrix::from_flat(n, n, data)
}
