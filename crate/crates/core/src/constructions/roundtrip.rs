use alloc::format;
use alloc::vec::Vec;

use super::from_functions::matrix_from_profiles;
use super::from_matrix::functions_from_matrix;
use super::profile::DerivativeBackend;
use super::spline::ConcaveSpline;
use super::ConstructionConfig;
use crate::perm::WeightMatrix;
use crate::report::EquivalenceReport;
use crate::Result;

/// Result of matrix → functions → matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundtripReport {
    /// Ratios `v_{i,ℓ} / v'_{i,ℓ}` of original to reconstructed knot values.
    pub equivalence: EquivalenceReport,
    pub reconstructed: WeightMatrix,
    pub original_knots: Vec<Vec<f64>>,
    pub reconstructed_knots: Vec<Vec<f64>>,
}

/// Generates the system of `a`, smooths each `H_i = (M_i*⁻¹)²` through its
/// knots `(ℓ/n, v_ℓ²)` with a concave C¹ spline, rebuilds a matrix from the
/// f-profiles and compares the knot values generated by the two matrices.
///
/// Each `H_i` is divided by `v_n²` before the profile is taken and the row is
/// scaled back by `v_n`, so the comparison is free of normalization factors.
pub fn roundtrip_check(a: &WeightMatrix, cfg: &ConstructionConfig) -> Result<RoundtripReport> {
    let original = functions_from_matrix(a)?;
    let n = a.n();
    let mut xs = Vec::with_capacity(n + 1);
    xs.push(0.0);
    xs.extend((1..=n).map(|l| l as f64 / n as f64));
    let mut splines = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    for v in &original.knots {
        let top = v[n - 1];
        let mut ys = Vec::with_capacity(n + 1);
        ys.push(0.0);
        ys.extend(v.iter().map(|x| (x / top) * (x / top)));
        splines.push(ConcaveSpline::interpolate(&xs, &ys)?);
        scales.push(top);
    }
    let unit = matrix_from_profiles(&splines, DerivativeBackend::Analytic, cfg)?;
    let rows: Vec<Vec<f64>> = unit
        .rows()
        .zip(&scales)
        .map(|(r, s)| r.iter().map(|x| x * s).collect())
        .collect();
    let reconstructed = WeightMatrix::new(rows)?;
    let rebuilt = functions_from_matrix(&reconstructed)?;
    let ratios = original
        .knots
        .iter()
        .zip(&rebuilt.knots)
        .flat_map(|(v, w)| v.iter().zip(w).map(|(x, y)| x / y))
        .collect();
    Ok(RoundtripReport {
        equivalence: EquivalenceReport::from_ratios(ratios, format!("roundtrip n={n}"))?,
        reconstructed,
        original_knots: original.knots,
        reconstructed_knots: rebuilt.knots,
    })
}
