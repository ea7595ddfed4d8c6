//! The embedding `Ψₙ x = (Σ_i x_i ε_i a_{i,π(i)})_{ε,π}` into `L_1^{2ⁿn!}`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::convex::MusielakSystem;
use crate::perm::{
    ave_l2, for_each_permutation, AverageResult, ExactSum, Mode, PermutationSampler, Running,
    WeightMatrix,
};
use crate::report::Sandwich;
use crate::{Error, Result};

/// Largest `n` for exact `L_1^{2ⁿn!}` norms (`2⁶·6! = 46080` terms).
pub const EXACT_EMBEDDING_LIMIT: usize = 6;
/// Relative slack of the Khintchine sandwich (both sides are exact sums).
pub const KHINTCHINE_SLACK: f64 = 1e-12;

/// A vector of signs `ε_i = ±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().all(|&s| s == 1 || s == -1) {
            Ok(Self(signs))
        } else {
            Err(Error::InvalidParameter(format!(
                "signs must be ±1, got {signs:?}"
            )))
        }
    }

    /// Bit `i` of `bits` set means `ε_i = −1`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// `Σ_i ε_i c_i`.
    pub fn apply(&self, c: &[f64]) -> f64 {
        self.0.iter().zip(c).map(|(&e, &v)| f64::from(e) * v).sum()
    }
}

/// `‖Ψₙ x‖ = (1/(2ⁿn!)) Σ_{ε,π} |Σ_i x_i ε_i a_{i,π(i)}|`.
///
/// Exact mode walks the sign patterns in Gray-code order, updating the inner
/// sum with one flip per step.
pub fn psi_image_norm(a: &WeightMatrix, x: &[f64], mode: Mode) -> Result<AverageResult> {
    a.require_square()?;
    a.require_len(x)?;
    let n = a.n();
    let mut c = vec![0.0; n];
    match mode {
        Mode::Exact => {
            if n > EXACT_EMBEDDING_LIMIT {
                return Err(Error::ExactModeTooLarge {
                    n,
                    limit: EXACT_EMBEDDING_LIMIT,
                });
            }
            let mut acc = ExactSum::default();
            let mut eps = vec![1.0f64; n];
            for_each_permutation(n, |p| {
                for i in 0..n {
                    c[i] = x[i] * a.get(i, p[i]);
                    eps[i] = 1.0;
                }
                let mut s: f64 = c.iter().sum();
                acc.add(s.abs());
                for k in 1u64..(1u64 << n) {
                    let b = k.trailing_zeros() as usize;
                    s -= 2.0 * eps[b] * c[b];
                    eps[b] = -eps[b];
                    acc.add(s.abs());
                }
            });
            Ok(acc.finish())
        }
        Mode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter(
                    "Monte-Carlo mode needs at least one sample".into(),
                ));
            }
            let mut sampler = PermutationSampler::new(seed);
            let mut perm = vec![0; n];
            let mut eps = vec![0.0; n];
            let mut acc = Running::default();
            for _ in 0..samples {
                sampler.draw_into(&mut perm);
                sampler.signs_into(&mut eps);
                let s: f64 = (0..n).map(|i| x[i] * eps[i] * a.get(i, perm[i])).sum();
                acc.add(s.abs());
            }
            Ok(acc.finish())
        }
    }
}

/// Checks `(1/√2)·Ave_π(Σ|x_i a_{i,π(i)}|²)^{1/2} ≤ ‖Ψₙ x‖ ≤ Ave_π(…)^{1/2}`
/// with both sides computed exactly.
pub fn khintchine_sandwich_check(a: &WeightMatrix, x: &[f64]) -> Result<Sandwich> {
    let reference = ave_l2(a, x, Mode::Exact)?.value;
    let value = psi_image_norm(a, x, Mode::Exact)?.value;
    Ok(Sandwich::check(
        reference,
        value,
        core::f64::consts::FRAC_1_SQRT_2,
        1.0,
        KHINTCHINE_SLACK,
    ))
}

/// Sampling scheme for [`distortion_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectionConfig {
    /// Number of normalized Gaussian directions (basis vectors and the
    /// all-ones vector are always added).
    pub random_directions: usize,
    pub seed: u64,
    /// Mode for `‖Ψₙ x‖`; exact mode requires `n ≤ 6`.
    pub mode: Mode,
}

impl DirectionConfig {
    pub fn new(random_directions: usize, seed: u64) -> Self {
        Self {
            random_directions,
            seed,
            mode: Mode::Exact,
        }
    }
}

/// One sampled direction and its norm ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectionRatio {
    pub label: String,
    pub direction: Vec<f64>,
    pub psi_norm: f64,
    pub musielak_norm: f64,
    pub ratio: f64,
}

/// Empirical ratios `‖Ψₙ x‖ / ‖x‖_{ΣM_i}` over sampled directions.
///
/// `distortion = ratio_max / ratio_min` is an upper-bound witness for the
/// Banach-Mazur distance between the Musielak-Orlicz space and the image of
/// this particular embedding, not the distance itself.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistortionReport {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub distortion: f64,
    pub samples: usize,
    pub scheme: String,
    pub directions: Vec<DirectionRatio>,
}

pub fn distortion_estimate(
    system: &MusielakSystem,
    a: &WeightMatrix,
    cfg: &DirectionConfig,
) -> Result<DistortionReport> {
    let n = system.dim();
    if a.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n(),
        });
    }
    let mut candidates: Vec<(String, Vec<f64>)> = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        candidates.push((format!("e{}", i + 1), e));
    }
    candidates.push(("ones".into(), vec![1.0; n]));
    let mut sampler = PermutationSampler::with_stream(cfg.seed, 1);
    for k in 0..cfg.random_directions {
        let g: Vec<f64> = (0..n)
            .map(|_| StandardNormal.sample(sampler.rng()))
            .collect();
        candidates.push((format!("gauss{k}"), g));
    }
    let mut directions = Vec::with_capacity(candidates.len());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (label, x) in candidates {
        let norm = system.luxemburg_norm(&x)?;
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "direction {label} has zero norm"
            )));
        }
        let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let musielak_norm = system.luxemburg_norm(&unit)?;
        let psi_norm = psi_image_norm(a, &unit, cfg.mode)?.value;
        let ratio = psi_norm / musielak_norm;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        directions.push(DirectionRatio {
            label,
            direction: unit,
            psi_norm,
            musielak_norm,
            ratio,
        });
    }
    Ok(DistortionReport {
        ratio_min: lo,
        ratio_max: hi,
        distortion: hi / lo,
        samples: directions.len(),
        scheme: format!(
            "{} basis vectors + all-ones + {} Gaussian directions (seed {}), normalized to the unit sphere",
            n, cfg.random_directions, cfg.seed
        ),
        directions,
    })
}
