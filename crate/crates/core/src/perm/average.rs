//! Uniform averages over the symmetric group, exact or sampled.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused whenever std is linked
use num_traits::Float;

use super::enumerate::{factorial, for_each_permutation};
use super::sampler::PermutationSampler;
use super::weights::{Cube, WeightMatrix};
use crate::{Error, Result};

/// Largest `n` for exact averages over one permutation (`8! = 40320` terms).
pub const EXACT_SINGLE_LIMIT: usize = 8;
/// Largest `n` for exact averages over permutation pairs (`(5!)² = 14400` terms).
pub const EXACT_PAIR_LIMIT: usize = 5;
/// Default Monte-Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// How an average over permutations is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "kebab-case"))]
pub enum Mode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

impl Mode {
    pub fn monte_carlo(seed: u64) -> Self {
        Self::MonteCarlo {
            samples: DEFAULT_SAMPLES,
            seed,
        }
    }

    /// Exact when `n ≤ limit`, otherwise the default Monte-Carlo mode.
    pub fn exact_up_to(n: usize, limit: usize, seed: u64) -> Self {
        if n <= limit {
            Self::Exact
        } else {
            Self::monte_carlo(seed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum AverageMode {
    Exact,
    MonteCarlo,
}

/// An average together with how it was obtained.
///
/// Exact results carry a zero standard error; Monte-Carlo results carry the
/// sample standard deviation divided by `√samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AverageResult {
    pub mode: AverageMode,
    pub value: f64,
    pub samples: u64,
    pub stderr: f64,
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct ExactSum {
    sum: f64,
    carry: f64,
    count: u64,
}

impl ExactSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
        self.count += 1;
    }

    pub(crate) fn finish(self) -> AverageResult {
        AverageResult {
            mode: AverageMode::Exact,
            value: (self.sum + self.carry) / self.count as f64,
            samples: self.count,
            stderr: 0.0,
        }
    }
}

/// Welford running mean and variance.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Running {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    pub(crate) fn add(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    pub(crate) fn finish(self) -> AverageResult {
        let var = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        AverageResult {
            mode: AverageMode::MonteCarlo,
            value: self.mean,
            samples: self.count,
            stderr: (var / self.count as f64).sqrt(),
        }
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        Err(Error::InvalidParameter(
            "Monte-Carlo mode needs at least one sample".into(),
        ))
    } else {
        Ok(())
    }
}

/// Average of `g(π)` over permutations of `{0, …, n−1}`.
pub(crate) fn average_over_permutations(
    n: usize,
    mode: Mode,
    limit: usize,
    mut g: impl FnMut(&[usize]) -> f64,
) -> Result<AverageResult> {
    match mode {
        Mode::Exact => {
            if n > limit {
                return Err(Error::ExactModeTooLarge { n, limit });
            }
            let mut acc = ExactSum::default();
            for_each_permutation(n, |p| acc.add(g(p)));
            debug_assert_eq!(acc.count, factorial(n));
            Ok(acc.finish())
        }
        Mode::MonteCarlo { samples, seed } => {
            check_samples(samples)?;
            let mut sampler = PermutationSampler::new(seed);
            let mut perm = vec![0; n];
            let mut acc = Running::default();
            for _ in 0..samples {
                sampler.draw_into(&mut perm);
                acc.add(g(&perm));
            }
            Ok(acc.finish())
        }
    }
}

/// Decreasing rearrangement: `|values|` sorted nonincreasingly, ties kept in
/// their original order.
pub fn dra(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `Ave_π (Σ_i (x_i a_{i,π(i)})²)^{1/2}` for a square weight matrix.
pub fn ave_l2(a: &WeightMatrix, x: &[f64], mode: Mode) -> Result<AverageResult> {
    a.require_square()?;
    a.require_len(x)?;
    let n = a.n();
    average_over_permutations(n, mode, EXACT_SINGLE_LIMIT, |p| {
        let mut s = 0.0;
        for (i, &pi) in p.iter().enumerate() {
            let v = x[i] * a.get(i, pi);
            s += v * v;
        }
        s.sqrt()
    })
}

/// `Ave_{π,σ} max_i |a(i, π(i), σ(i))|`.
pub fn ave_max_two(a: &Cube, mode: Mode) -> Result<AverageResult> {
    let n = a.n();
    let value =
        |p: &[usize], s: &[usize]| (0..n).fold(0.0f64, |m, i| m.max(a.get(i, p[i], s[i]).abs()));
    match mode {
        Mode::Exact => {
            if n > EXACT_PAIR_LIMIT {
                return Err(Error::ExactModeTooLarge {
                    n,
                    limit: EXACT_PAIR_LIMIT,
                });
            }
            let mut acc = ExactSum::default();
            for_each_permutation(n, |p| for_each_permutation(n, |s| acc.add(value(p, s))));
            Ok(acc.finish())
        }
        Mode::MonteCarlo { samples, seed } => {
            check_samples(samples)?;
            let mut sampler = PermutationSampler::new(seed);
            let (mut p, mut s) = (vec![0; n], vec![0; n]);
            let mut acc = Running::default();
            for _ in 0..samples {
                sampler.draw_into(&mut p);
                sampler.draw_into(&mut s);
                acc.add(value(&p, &s));
            }
            Ok(acc.finish())
        }
    }
}

/// `(1/n²) Σ_{k ≤ n²} s(k)` where `s` is the decreasing rearrangement of the
/// `n³` entries.
pub fn dra_sum_bound(a: &Cube) -> f64 {
    let n = a.n();
    let mut abs: Vec<f64> = a.entries().iter().map(|v| v.abs()).collect();
    let k = n * n;
    if k < abs.len() {
        abs.select_nth_unstable_by(k - 1, |x, y| y.total_cmp(x));
    }
    abs[..k].iter().sum::<f64>() / k as f64
}

/// `b_k = √(n/k)`, `k = 1, …, n`.
pub fn build_b_vector(n: usize) -> Vec<f64> {
    (1..=n).map(|k| (n as f64 / k as f64).sqrt()).collect()
}

/// `Ave_σ max_k |y_k b_{σ(k)}|`.
pub fn ave_max_vector(b: &[f64], y: &[f64], mode: Mode) -> Result<AverageResult> {
    if b.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            got: y.len(),
        });
    }
    average_over_permutations(y.len(), mode, EXACT_SINGLE_LIMIT, |s| {
        y.iter()
            .zip(s)
            .fold(0.0f64, |m, (&yk, &sk)| m.max((yk * b[sk]).abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(v: &[f64]) -> WeightMatrix {
        let n = (v.len() as f64).sqrt() as usize;
        WeightMatrix::from_flat(n, n, v.to_vec()).unwrap()
    }

    #[test]
    fn dra_sorts_absolute_values() {
        assert_eq!(dra(&[3.0, 1.0, 2.0]), vec![3.0, 2.0, 1.0]);
        assert_eq!(dra(&[-5.0, 2.0]), vec![5.0, 2.0]);
        assert_eq!(dra(&[2.0, -1.0, 7.0, -2.0]), dra(&[-2.0, 7.0, 2.0, -1.0]));
    }

    #[test]
    fn ave_l2_small_cases() {
        let r = ave_l2(&sq(&[1.0; 4]), &[1.0, 1.0], Mode::Exact).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((r.samples, r.stderr, r.mode), (2, 0.0, AverageMode::Exact));
        let r = ave_l2(&sq(&[3.0]), &[-2.0], Mode::Exact).unwrap();
        assert_eq!(r.value, 6.0);
    }

    #[test]
    fn ave_l2_three_by_three_enumeration() {
        // rows all (3,2,1): every permutation gives √(9+4+1)
        let a = sq(&[3.0, 2.0, 1.0, 3.0, 2.0, 1.0, 3.0, 2.0, 1.0]);
        let r = ave_l2(&a, &[1.0, 1.0, 1.0], Mode::Exact).unwrap();
        assert!((r.value - 14f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exact_mode_refused_above_limit() {
        let a = WeightMatrix::constant(9, 9, 1.0).unwrap();
        assert_eq!(
            ave_l2(&a, &[1.0; 9], Mode::Exact),
            Err(Error::ExactModeTooLarge { n: 9, limit: 8 })
        );
        let c = Cube::new(6, vec![1.0; 216]).unwrap();
        assert!(matches!(
            ave_max_two(&c, Mode::Exact),
            Err(Error::ExactModeTooLarge { .. })
        ));
    }

    #[test]
    fn ave_max_two_trivial_cases() {
        let c = Cube::new(1, vec![-4.0]).unwrap();
        assert_eq!(ave_max_two(&c, Mode::Exact).unwrap().value, 4.0);
        let c = Cube::new(3, vec![2.5; 27]).unwrap();
        assert_eq!(ave_max_two(&c, Mode::Exact).unwrap().value, 2.5);
        assert_eq!(dra_sum_bound(&c), 2.5);
    }

    #[test]
    fn dra_sum_bound_top_four() {
        let c = Cube::new(2, vec![8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(dra_sum_bound(&c), 6.5);
        let c = Cube::new(2, vec![1.0, -8.0, 3.0, 5.0, -4.0, 7.0, 2.0, 6.0]).unwrap();
        assert_eq!(dra_sum_bound(&c), 6.5);
        assert_eq!(dra_sum_bound(&Cube::new(1, vec![-3.0]).unwrap()), 3.0);
    }

    #[test]
    fn b_vector() {
        let b = build_b_vector(4);
        let expected = [2.0, 2f64.sqrt(), 2.0 / 3f64.sqrt(), 1.0];
        for (x, e) in b.iter().zip(expected) {
            assert!((x - e).abs() < 1e-15);
        }
        assert_eq!(build_b_vector(1), vec![1.0]);
    }

    #[test]
    fn ave_max_vector_small_cases() {
        let r = ave_max_vector(&[2f64.sqrt(), 1.0], &[1.0, 0.0], Mode::Exact).unwrap();
        assert!((r.value - (2f64.sqrt() + 1.0) / 2.0).abs() < 1e-15);
        let r = ave_max_vector(&[1.0], &[-3.0], Mode::Exact).unwrap();
        assert_eq!(r.value, 3.0);
        assert!(ave_max_vector(&[1.0], &[1.0, 2.0], Mode::Exact).is_err());
    }

    #[test]
    fn monte_carlo_reports_standard_error() {
        let a = sq(&[3.0, 2.0, 1.0, 2.0, 2.0, 1.0, 5.0, 1.0, 0.5]);
        let x = [1.0, -2.0, 0.5];
        let exact = ave_l2(&a, &x, Mode::Exact).unwrap();
        let mc = ave_l2(
            &a,
            &x,
            Mode::MonteCarlo {
                samples: 20_000,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(mc.mode, AverageMode::MonteCarlo);
        assert_eq!(mc.samples, 20_000);
        assert!(mc.stderr > 0.0);
        assert!((mc.value - exact.value).abs() < 5.0 * mc.stderr);
        let again = ave_l2(
            &a,
            &x,
            Mode::MonteCarlo {
                samples: 20_000,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(mc, again);
        assert!(ave_l2(
            &a,
            &x,
            Mode::MonteCarlo {
                samples: 0,
                seed: 3
            }
        )
        .is_err());
    }
}
