use alloc::format;
use alloc::vec::Vec;

use super::orlicz::OrliczFunction;
use crate::{Error, Result};

/// Relative stopping tolerance of the Luxemburg bisection.
pub const NORM_TOL: f64 = 1e-10;
/// Iteration cap of the Luxemburg bisection.
pub const NORM_MAX_ITER: usize = 200;

/// An ordered list of Orlicz functions `M_1, …, M_n` defining
/// `‖x‖ = inf{ρ > 0 : Σ_i M_i(|x_i|/ρ) ≤ 1}` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "SystemRepr", into = "SystemRepr"))]
pub struct MusielakSystem {
    functions: Vec<OrliczFunction>,
}

impl MusielakSystem {
    pub fn new(functions: Vec<OrliczFunction>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidParameter(
                "a system needs at least one function".into(),
            ));
        }
        for f in &functions {
            f.validate()?;
        }
        Ok(Self { functions })
    }

    /// `n` copies of the same function.
    pub fn uniform(f: OrliczFunction, n: usize) -> Result<Self> {
        Self::new(alloc::vec![f; n])
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[OrliczFunction] {
        &self.functions
    }

    /// The system of conjugates `M_1*, …, M_n*`.
    pub fn conjugate(&self) -> Result<Self> {
        let functions = self
            .functions
            .iter()
            .map(OrliczFunction::conjugate)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { functions })
    }

    /// `Σ_i M_i(|x_i| / ρ)`, `None` when some term is infinite.
    pub fn modular(&self, x: &[f64], rho: f64) -> Option<f64> {
        let mut sum = 0.0;
        for (m, &xi) in self.functions.iter().zip(x) {
            sum += m.eval_extended(xi.abs() / rho)?;
        }
        Some(sum)
    }

    fn feasible(&self, x: &[f64], rho: f64) -> bool {
        let mut sum = 0.0;
        for (m, &xi) in self.functions.iter().zip(x) {
            match m.eval_extended(xi.abs() / rho) {
                Some(v) => sum += v,
                None => return false,
            }
            if sum > 1.0 {
                return false;
            }
        }
        true
    }

    /// The Luxemburg norm, by bisection on `ρ`.
    ///
    /// The modular is nonincreasing in `ρ`; the search starts from the bracket
    /// `[‖x‖_∞ / max_i M_i⁻¹(1), ‖x‖_1 / min_i M_i⁻¹(1/n)]` and stops at
    /// relative width [`NORM_TOL`]. The returned `ρ` is always feasible.
    pub fn luxemburg_norm(&self, x: &[f64]) -> Result<f64> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("input vector {x:?}")));
        }
        let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup == 0.0 {
            return Ok(0.0);
        }
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let mut max_inv_one = 0.0f64;
        let mut min_inv_share = f64::INFINITY;
        for m in &self.functions {
            max_inv_one = max_inv_one.max(m.inverse(1.0)?);
            min_inv_share = min_inv_share.min(m.inverse(1.0 / n as f64)?);
        }
        if !(min_inv_share > 0.0 && max_inv_one.is_finite()) {
            return Err(Error::InvalidOrlicz(
                "degenerate inverse at the bracket levels".into(),
            ));
        }
        let mut lo = sup / max_inv_one;
        let mut hi = l1 / min_inv_share;
        if self.feasible(x, lo) {
            return Ok(lo);
        }
        // round-off guard; the bracket is feasible in exact arithmetic
        let mut guard = 0;
        while !self.feasible(x, hi) {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 64 {
                return Err(Error::NonFinite("no feasible radius found".into()));
            }
        }
        for _ in 0..NORM_MAX_ITER {
            if hi - lo <= NORM_TOL * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.feasible(x, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(dead_code)]
struct SystemRepr {
    n: usize,
    functions: Vec<OrliczFunction>,
}

impl TryFrom<SystemRepr> for MusielakSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<Self> {
        if r.n != r.functions.len() {
            return Err(Error::DimensionMismatch {
                expected: r.n,
                got: r.functions.len(),
            });
        }
        Self::new(r.functions)
    }
}

impl From<MusielakSystem> for SystemRepr {
    fn from(s: MusielakSystem) -> Self {
        Self {
            n: s.functions.len(),
            functions: s.functions,
        }
    }
}
