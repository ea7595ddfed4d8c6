use alloc::vec::Vec;

use super::weights::WeightMatrix;
use crate::convex::{MusielakSystem, OrliczFunction, PiecewiseAffineConvex};
use crate::report::Sandwich;
use crate::{Error, Result};

/// Relative slack for sandwich checks that involve the Luxemburg solver.
pub const NORM_SANDWICH_SLACK: f64 = 1e-8;

/// `‖x‖_a = max_{Σℓ_i ≤ N} Σ_i (Σ_{j ≤ ℓ_i} a_{i,j}) |x_i|`.
///
/// Rows are nonincreasing, so the maximizing budget picks the `N` largest
/// products `a_{i,j}|x_i|` and those always form row prefixes.
pub fn matrix_norm_a(a: &WeightMatrix, x: &[f64]) -> Result<f64> {
    a.require_len(x)?;
    let budget = a.cols();
    let mut products: Vec<f64> = Vec::with_capacity(a.n() * budget);
    for (row, &xi) in a.rows().zip(x) {
        let w = xi.abs();
        products.extend(row.iter().map(|&aij| aij * w));
    }
    if budget < products.len() {
        products.select_nth_unstable_by(budget - 1, |p, q| q.total_cmp(p));
    }
    let mut top = products[..budget].to_vec();
    // fixed summation order keeps the result independent of the selection
    top.sort_by(|p, q| q.total_cmp(p));
    Ok(top.iter().sum())
}

/// The system with `M_i*` the piecewise-affine function through
/// `(Σ_{j≤m} a_{i,j}, m/N)`, `m = 0, …, N`, extended by its final slope,
/// and `M_i = (M_i*)*`.
pub fn matrix_norm_system(a: &WeightMatrix) -> Result<MusielakSystem> {
    let big_n = a.cols() as f64;
    let mut functions = Vec::with_capacity(a.n());
    for (i, row) in a.rows().enumerate() {
        let mut prefix = 0.0;
        let mut points = Vec::with_capacity(row.len());
        let mut levels = Vec::with_capacity(row.len());
        for (j, &aij) in row.iter().enumerate() {
            let next = prefix + aij;
            if next <= prefix {
                return Err(Error::PrefixSums { row: i, col: j });
            }
            prefix = next;
            points.push(prefix);
            levels.push((j + 1) as f64 / big_n);
        }
        // the inverse of M_i* has knots (m/N, S_m); build M_i* directly
        let mut knots = Vec::with_capacity(points.len() + 1);
        let mut values = Vec::with_capacity(points.len() + 1);
        knots.push(0.0);
        values.push(0.0);
        knots.extend_from_slice(&points);
        values.extend_from_slice(&levels);
        let last = knots.len() - 1;
        let ext = (values[last] - values[last - 1]) / (knots[last] - knots[last - 1]);
        let conj = PiecewiseAffineConvex::new(knots, values, Some(ext))?;
        functions.push(OrliczFunction::from(conj.conjugate()));
    }
    MusielakSystem::new(functions)
}

/// Checks `½‖x‖_a ≤ ‖x‖_{ΣM_i} ≤ 2‖x‖_a` for the system of
/// [`matrix_norm_system`].
pub fn lemma_matrixnorm_check(a: &WeightMatrix, x: &[f64]) -> Result<Sandwich> {
    let system = matrix_norm_system(a)?;
    lemma_matrixnorm_check_with(a, &system, x)
}

/// As [`lemma_matrixnorm_check`] with a prebuilt system.
pub fn lemma_matrixnorm_check_with(
    a: &WeightMatrix,
    system: &MusielakSystem,
    x: &[f64],
) -> Result<Sandwich> {
    let reference = matrix_norm_a(a, x)?;
    let value = system.luxemburg_norm(x)?;
    Ok(Sandwich::check(
        reference,
        value,
        0.5,
        2.0,
        NORM_SANDWICH_SLACK,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_row() {
        let a = WeightMatrix::new(vec![vec![3.0, 1.0]]).unwrap();
        assert_eq!(matrix_norm_a(&a, &[2.0]).unwrap(), 8.0);
        assert_eq!(matrix_norm_a(&a, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn two_by_two_composition() {
        // compositions (2,0) → 3, (0,2) → 4, (1,1) → 5
        let a = WeightMatrix::new(vec![vec![2.0, 1.0], vec![3.0, 1.0]]).unwrap();
        assert_eq!(matrix_norm_a(&a, &[1.0, 1.0]).unwrap(), 5.0);
    }

    #[test]
    fn one_by_one_sandwich_is_tight() {
        let a = WeightMatrix::new(vec![vec![2.5]]).unwrap();
        let s = lemma_matrixnorm_check(&a, &[-3.0]).unwrap();
        assert!(s.pass);
        assert!((s.value - 7.5).abs() < 7.5 * 1e-9);
        assert!((s.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_vector_sandwich() {
        let a = WeightMatrix::new(vec![vec![2.0, 1.0], vec![3.0, 1.0]]).unwrap();
        let s = lemma_matrixnorm_check(&a, &[0.0, 0.0]).unwrap();
        assert!(s.pass);
        assert_eq!((s.reference, s.value), (0.0, 0.0));
    }

    #[test]
    fn system_hits_prescribed_levels() {
        let a = WeightMatrix::new(vec![vec![4.0, 2.0, 1.0]]).unwrap();
        let s = matrix_norm_system(&a).unwrap();
        let conj = s.functions()[0].conjugate().unwrap();
        for (m, prefix) in [(1.0, 4.0), (2.0, 6.0), (3.0, 7.0)] {
            assert!((conj.eval(prefix).unwrap() - m / 3.0).abs() < 1e-15);
        }
    }
}
