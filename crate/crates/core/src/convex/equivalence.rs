use alloc::format;
use alloc::vec::Vec;

use super::norm::MusielakSystem;
use crate::report::EquivalenceReport;
use crate::{Error, Result};

/// Ratios `M_i⁻¹(t) / N_i⁻¹(t)` over every coordinate `i` and every grid
/// point `t > 0`, summarized as `(c_low, c_high)`.
pub fn equivalence_constants(
    a: &MusielakSystem,
    b: &MusielakSystem,
    grid: &[f64],
) -> Result<EquivalenceReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let mut ratios = Vec::with_capacity(a.dim() * grid.len());
    for (m, n) in a.functions().iter().zip(b.functions()) {
        for &t in grid {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "grid point {t} must be positive"
                )));
            }
            let den = n.inverse(t)?;
            if den == 0.0 {
                return Err(Error::ZeroDenominator { t });
            }
            ratios.push(m.inverse(t)? / den);
        }
    }
    EquivalenceReport::from_ratios(ratios, format!("n={} grid={}", a.dim(), grid.len()))
}
