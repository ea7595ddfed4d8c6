use alloc::vec::Vec;
#[allow(unused_imports)] // unused whenever std is linked
use num_traits::Float;

use crate::convex::{MusielakSystem, OrliczFunction, PiecewiseAffineConvex};
use crate::perm::WeightMatrix;
use crate::{Error, Result};

const CONCAVITY_TOL: f64 = 1e-12;

/// The system generated by a square weight matrix, with its knot tables.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratedSystem {
    pub system: MusielakSystem,
    /// `knots[i][ℓ−1] = M_i*⁻¹(ℓ/n)`, `ℓ = 1, …, n`.
    pub knots: Vec<Vec<f64>>,
}

/// `v_ℓ = √((1/n Σ_{j≤ℓ} a_j)² + (ℓ/n)(1/n Σ_{j>ℓ} a_j²))`, `ℓ = 1, …, n`.
pub fn knot_values(row: &[f64]) -> Vec<f64> {
    let n = row.len();
    let nf = n as f64;
    // tail sums of squares, accumulated from the right
    let mut tail = alloc::vec![0.0; n + 1];
    for j in (0..n).rev() {
        tail[j] = tail[j + 1] + row[j] * row[j];
    }
    let mut head = 0.0;
    (1..=n)
        .map(|l| {
            head += row[l - 1];
            let mean = head / nf;
            (mean * mean + (l as f64 / nf) * (tail[l] / nf)).sqrt()
        })
        .collect()
}

/// Builds `M_1, …, M_n` from a square weight matrix.
///
/// `M_i*⁻¹` is the piecewise-affine function through `(0, 0)` and
/// `(ℓ/n, v_ℓ)`, affine on each `[(ℓ−1)/n, ℓ/n]` and extended linearly;
/// `M_i` is obtained by exact inversion and conjugation. The knot values
/// must be strictly increasing and concave so that `M_i*` is convex.
pub fn functions_from_matrix(a: &WeightMatrix) -> Result<GeneratedSystem> {
    a.require_square()?;
    let n = a.n();
    let levels: Vec<f64> = (1..=n).map(|l| l as f64 / n as f64).collect();
    let mut functions = Vec::with_capacity(n);
    let mut knots = Vec::with_capacity(n);
    for (i, row) in a.rows().enumerate() {
        let v = knot_values(row);
        check_concave(i, &v)?;
        let conj = PiecewiseAffineConvex::from_inverse_knots(&levels, &v)?;
        functions.push(OrliczFunction::from(conj.conjugate()));
        knots.push(v);
    }
    Ok(GeneratedSystem {
        system: MusielakSystem::new(functions)?,
        knots,
    })
}

fn check_concave(row: usize, v: &[f64]) -> Result<()> {
    let mut prev_point = 0.0;
    let mut prev_inc = f64::INFINITY;
    for (l, &x) in v.iter().enumerate() {
        let inc = x - prev_point;
        if !(inc > 0.0) {
            return Err(Error::NotConcave { row, index: l + 1 });
        }
        if inc > prev_inc * (1.0 + CONCAVITY_TOL) {
            return Err(Error::NotConcave { row, index: l + 1 });
        }
        prev_point = x;
        prev_inc = inc;
    }
    Ok(())
}
