//! The f-profile attached to a concave `H` with `H(0) = 0`:
//!
//! ```text
//! f(t) = −½ ∫_t^1 H''(s) / √(H(s) − sH'(s)) ds + √H(1) − √(H(1) − H'(1))
//! ```
//!
//! which is nonnegative, nonincreasing and satisfies
//! `H(t) = (∫_0^t f)² + t ∫_t^1 f²`.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused whenever std is linked
use num_traits::Float;

use super::quadrature::{integrate_with_breaks, QuadratureConfig};
use super::ConstructionConfig;
use crate::{Error, Result};

/// Round-off allowance when checking signs of `f` and `H(1) − H'(1)`.
const SIGN_TOL: f64 = 1e-9;

/// A concave, increasing `H` on `[0, 1]` with `H(0) = 0`.
///
/// Implementors must be defined slightly beyond 1 when derivatives are
/// obtained by finite differences.
pub trait ConcaveProfile {
    fn value(&self, t: f64) -> f64;

    fn derivative(&self, _t: f64) -> Option<f64> {
        None
    }

    fn second_derivative(&self, _t: f64) -> Option<f64> {
        None
    }

    /// `H(t) − tH'(t)` without cancellation, if known in closed form.
    fn tangent_gap(&self, _t: f64) -> Option<f64> {
        None
    }

    /// `∫_a^b H''(s) / √(H(s) − sH'(s)) ds`, if known in closed form.
    fn integrand_integral(&self, _a: f64, _b: f64) -> Option<f64> {
        None
    }

    /// Points in `(0, 1)` where `H''` may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `H(t) = scale · t^exponent`, `0 < exponent ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProfile {
    pub scale: f64,
    pub exponent: f64,
}

impl ConcaveProfile for PowerProfile {
    fn value(&self, t: f64) -> f64 {
        self.scale * t.powf(self.exponent)
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        Some(self.scale * self.exponent * t.powf(self.exponent - 1.0))
    }

    fn second_derivative(&self, t: f64) -> Option<f64> {
        let a = self.exponent;
        if a == 1.0 {
            return Some(0.0);
        }
        Some(self.scale * a * (a - 1.0) * t.powf(a - 2.0))
    }

    fn tangent_gap(&self, t: f64) -> Option<f64> {
        Some(self.scale * (1.0 - self.exponent) * t.powf(self.exponent))
    }
}

/// Wraps a closure; derivatives come from finite differences.
pub struct FnProfile<F>(pub F);

impl<F: Fn(f64) -> f64> ConcaveProfile for FnProfile<F> {
    fn value(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// How `H'` and `H''` are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DerivativeBackend {
    Analytic,
    /// Central differences with one Richardson step; the step is relative
    /// to `min(s, 1)`.
    FiniteDifference {
        step: f64,
    },
}

/// Quadrature tolerance floor for the finite-difference backend.
pub const FD_QUAD_TOL: f64 = 1e-8;

/// The f-profile of a given `H`, with its boundary terms cached.
pub struct FProfile<'h, H: ConcaveProfile + ?Sized> {
    h: &'h H,
    backend: DerivativeBackend,
    quad: QuadratureConfig,
    t_min: f64,
    breaks: Vec<f64>,
    sqrt_h1: f64,
    sqrt_gap1: f64,
}

impl<'h, H: ConcaveProfile + ?Sized> FProfile<'h, H> {
    pub fn new(h: &'h H, backend: DerivativeBackend, cfg: &ConstructionConfig) -> Result<Self> {
        cfg.validate()?;
        let mut p = Self {
            h,
            backend,
            quad: match backend {
                // difference quotients carry ~1e-10 of rounding noise
                DerivativeBackend::FiniteDifference { .. } => QuadratureConfig {
                    abs_tol: cfg.quadrature.abs_tol.max(FD_QUAD_TOL),
                    rel_tol: cfg.quadrature.rel_tol.max(FD_QUAD_TOL),
                    ..cfg.quadrature
                },
                DerivativeBackend::Analytic => cfg.quadrature,
            },
            t_min: cfg.t_min,
            breaks: h.breakpoints(),
            sqrt_h1: 0.0,
            sqrt_gap1: 0.0,
        };
        let h1 = h.value(1.0);
        if !(h1.is_finite() && h1 > 0.0) {
            return Err(Error::NonFinite(alloc::format!("H(1) = {h1}")));
        }
        let mut gap = h1 - p.first(1.0)?;
        if gap < 0.0 && gap > -SIGN_TOL * h1 {
            gap = 0.0;
        }
        if !(gap >= 0.0) {
            return Err(Error::ProfileHypothesis { s: 1.0, gap });
        }
        p.sqrt_h1 = h1.sqrt();
        p.sqrt_gap1 = gap.sqrt();
        Ok(p)
    }

    pub fn backend(&self) -> DerivativeBackend {
        self.backend
    }

    /// `√H(1)` and `√(H(1) − H'(1))`.
    pub fn boundary_terms(&self) -> (f64, f64) {
        (self.sqrt_h1, self.sqrt_gap1)
    }

    pub fn h(&self) -> &H {
        self.h
    }

    fn step(&self, s: f64) -> f64 {
        match self.backend {
            DerivativeBackend::FiniteDifference { step } => step * s.min(1.0),
            DerivativeBackend::Analytic => 0.0,
        }
    }

    fn first(&self, s: f64) -> Result<f64> {
        match self.backend {
            DerivativeBackend::Analytic => self.h.derivative(s).ok_or(Error::NotSmooth {
                index: 0,
                reason: "no analytic first derivative registered".into(),
            }),
            DerivativeBackend::FiniteDifference { .. } => {
                let d = self.step(s);
                let central = |d: f64| (self.h.value(s + d) - self.h.value(s - d)) / (2.0 * d);
                Ok((4.0 * central(0.5 * d) - central(d)) / 3.0)
            }
        }
    }

    fn second(&self, s: f64) -> Result<f64> {
        match self.backend {
            DerivativeBackend::Analytic => self.h.second_derivative(s).ok_or(Error::NotSmooth {
                index: 0,
                reason: "no analytic second derivative registered".into(),
            }),
            DerivativeBackend::FiniteDifference { .. } => {
                let d = self.step(s);
                let hs = self.h.value(s);
                let central =
                    |d: f64| (self.h.value(s + d) - 2.0 * hs + self.h.value(s - d)) / (d * d);
                Ok((4.0 * central(0.5 * d) - central(d)) / 3.0)
            }
        }
    }

    /// `H''(s) / √(H(s) − sH'(s))`, taken as 0 where `H''` vanishes.
    pub fn integrand(&self, s: f64) -> Result<f64> {
        let h2 = self.second(s)?;
        if h2 == 0.0 {
            return Ok(0.0);
        }
        let gap = match (self.backend, self.h.tangent_gap(s)) {
            (DerivativeBackend::Analytic, Some(g)) => g,
            _ => self.h.value(s) - s * self.first(s)?,
        };
        if !(gap > 0.0) {
            return Err(Error::ProfileHypothesis { s, gap });
        }
        Ok(h2 / gap.sqrt())
    }

    /// `f(t)` for `t ∈ (0, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "f-profile needs t in (0, 1], got {t}"
            )));
        }
        let boundary = self.sqrt_h1 - self.sqrt_gap1;
        let exact = match self.backend {
            DerivativeBackend::Analytic => self.h.integrand_integral(t, 1.0),
            DerivativeBackend::FiniteDifference { .. } => None,
        };
        let inner = if let Some(v) = exact {
            v
        } else if t < 1.0 {
            let mut g = |s: f64| self.integrand(s);
            integrate_with_breaks(&mut g, t, 1.0, &self.breaks, &self.quad)?.value
        } else {
            0.0
        };
        let f = boundary - 0.5 * inner;
        if f < 0.0 {
            if f < -SIGN_TOL * self.sqrt_h1.max(1.0) {
                return Err(Error::NegativeProfile { t, value: f });
            }
            return Ok(0.0);
        }
        Ok(f)
    }

    /// Model of `f` on `(0, t_min]` fitted to `f(t_min)`, `f(2t_min)`,
    /// `f(4t_min)`.
    fn tail_model(&self) -> Result<TailModel> {
        let tm = self.t_min;
        let f0 = self.eval(tm)?;
        let f1 = self.eval(2.0 * tm)?;
        let f2 = self.eval(4.0 * tm)?;
        let (d01, d12) = (f0 - f1, f1 - f2);
        if d01 == 0.0 {
            return Ok(TailModel::Power {
                offset: f0,
                coef: 0.0,
                gamma: 0.0,
            });
        }
        let r = d12 / d01;
        if (r - 1.0).abs() < 1e-6 {
            // equal steps per doubling: f ≈ f0 − a ln(t / t_min)
            return Ok(TailModel::Log {
                f0,
                a: d01 / core::f64::consts::LN_2,
            });
        }
        // f ≈ offset + coef (t / t_min)^γ with 2^γ = r
        let gamma = r.ln() / core::f64::consts::LN_2;
        if !(r > 0.0 && gamma > -1.0) {
            return Err(Error::NonFinite(alloc::format!(
                "integral near 0 diverges: fitted exponent {gamma}"
            )));
        }
        let coef = d01 / (1.0 - 2f64.powf(gamma));
        Ok(TailModel::Power {
            offset: f0 - coef,
            coef,
            gamma,
        })
    }

    fn integrate_power(&self, a: f64, b: f64, power: i32) -> Result<f64> {
        if !(0.0 <= a && a <= b && b <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "bad interval [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        let mut total = 0.0;
        let mut start = a;
        if a < self.t_min {
            let model = self.tail_model()?;
            let end = b.min(self.t_min);
            total += model.antiderivative(end, self.t_min, power)?
                - model.antiderivative(a, self.t_min, power)?;
            start = end;
        }
        if start < b {
            let mut g = |t: f64| self.eval(t).map(|v| v.powi(power));
            total += integrate_with_breaks(&mut g, start, b, &self.breaks, &self.quad)?.value;
        }
        Ok(total)
    }

    /// `∫_a^b f`, with `[0, t_min]` handled by a fitted tail model
    /// (power law plus constant, or logarithmic).
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        self.integrate_power(a, b, 1)
    }

    /// `∫_a^b f²`.
    pub fn square_integral(&self, a: f64, b: f64) -> Result<f64> {
        self.integrate_power(a, b, 2)
    }
}

#[derive(Debug, Clone, Copy)]
enum TailModel {
    /// `offset + coef (t/t_min)^γ`
    Power { offset: f64, coef: f64, gamma: f64 },
    /// `f0 − a ln(t/t_min)`
    Log { f0: f64, a: f64 },
}

impl TailModel {
    /// `∫_0^x f^power` for `power ∈ {1, 2}`.
    fn antiderivative(&self, x: f64, tm: f64, power: i32) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let u = x / tm;
        Ok(match (*self, power) {
            (
                Self::Power {
                    offset,
                    coef,
                    gamma,
                },
                1,
            ) => offset * x + coef * tm * u.powf(gamma + 1.0) / (gamma + 1.0),
            (
                Self::Power {
                    offset,
                    coef,
                    gamma,
                },
                _,
            ) => {
                if coef != 0.0 && !(2.0 * gamma > -1.0) {
                    return Err(Error::NonFinite(alloc::format!(
                        "square integral near 0 diverges: fitted exponent {gamma}"
                    )));
                }
                offset * offset * x
                    + 2.0 * offset * coef * tm * u.powf(gamma + 1.0) / (gamma + 1.0)
                    + coef * coef * tm * u.powf(2.0 * gamma + 1.0) / (2.0 * gamma + 1.0)
            }
            (Self::Log { f0, a }, 1) => x * (f0 - a * u.ln() + a),
            (Self::Log { f0, a }, _) => {
                let g = f0 - a * u.ln();
                x * (g * g + 2.0 * a * g + 2.0 * a * a)
            }
        })
    }
}

/// Largest `|H(t) − ((∫_0^t f)² + t ∫_t^1 f²)|` over the grid points in `(0, 1]`.
pub fn h_reconstruct_check<H: ConcaveProfile + ?Sized>(
    profile: &FProfile<'_, H>,
    grid: &[f64],
) -> Result<f64> {
    let mut pts: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t <= 1.0)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.is_empty() {
        return Ok(0.0);
    }
    // prefix integrals of f from 0, suffix integrals of f² up to 1
    let mut prefix = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    let mut left = 0.0;
    for &t in &pts {
        acc += profile.integral(left, t)?;
        prefix.push(acc);
        left = t;
    }
    let mut suffix = alloc::vec![0.0; pts.len()];
    let mut acc = 0.0;
    let mut right = 1.0;
    for k in (0..pts.len()).rev() {
        acc += profile.square_integral(pts[k], right)?;
        suffix[k] = acc;
        right = pts[k];
    }
    let mut worst = 0.0f64;
    for k in 0..pts.len() {
        let t = pts[k];
        let rebuilt = prefix[k] * prefix[k] + t * suffix[k];
        worst = worst.max((profile.h().value(t) - rebuilt).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form of f for `H = A t^α`:
    /// `√A [1 − 2√(1−α)/(2−α) + κ t^{α/2−1}]`, `κ = α√(1−α)/(2−α)`.
    fn power_f(a: f64, alpha: f64, t: f64) -> f64 {
        let r = (1.0 - alpha).sqrt();
        let kappa = alpha * r / (2.0 - alpha);
        a.sqrt() * (1.0 - 2.0 * r / (2.0 - alpha) + kappa * t.powf(alpha / 2.0 - 1.0))
    }

    fn cfg(n: usize) -> ConstructionConfig {
        ConstructionConfig::new(n)
    }

    #[test]
    fn linear_h_gives_unit_profile() {
        let h = PowerProfile {
            scale: 1.0,
            exponent: 1.0,
        };
        let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg(4)).unwrap();
        for &t in &[1e-3, 0.25, 0.7, 1.0] {
            assert!((f.eval(t).unwrap() - 1.0).abs() < 1e-15);
        }
        let grid: Vec<f64> = (1..=16).map(|k| k as f64 / 16.0).collect();
        assert!(h_reconstruct_check(&f, &grid).unwrap() < 1e-14);
    }

    #[test]
    fn power_profile_matches_closed_form() {
        for &alpha in &[1.0 / 3.0, 2.0 / 3.0, 8.0 / 9.0] {
            let h = PowerProfile {
                scale: 2.0,
                exponent: alpha,
            };
            let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg(4)).unwrap();
            for &t in &[1e-5, 0.01, 0.3, 0.99, 1.0] {
                let exact = power_f(2.0, alpha, t);
                let got = f.eval(t).unwrap();
                assert!(
                    (got - exact).abs() < 1e-9 * exact.max(1.0),
                    "α={alpha} t={t}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn boundary_value_at_one() {
        let h = PowerProfile {
            scale: 1.0,
            exponent: 0.5,
        };
        let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg(3)).unwrap();
        assert_eq!(f.eval(1.0).unwrap(), 1.0 - 0.5f64.sqrt());
    }

    #[test]
    fn finite_differences_track_analytic() {
        let h = PowerProfile {
            scale: 1.0,
            exponent: 2.0 / 3.0,
        };
        let fd = FnProfile(|t: f64| t.powf(2.0 / 3.0));
        let a = FProfile::new(&h, DerivativeBackend::Analytic, &cfg(4)).unwrap();
        let b = FProfile::new(
            &fd,
            DerivativeBackend::FiniteDifference { step: 1e-3 },
            &cfg(4),
        )
        .unwrap();
        for &t in &[0.05, 0.3, 0.8] {
            let (x, y) = (a.eval(t).unwrap(), b.eval(t).unwrap());
            assert!((x - y).abs() < 1e-4 * x, "t={t}: {x} vs {y}");
        }
    }

    #[test]
    fn missing_analytic_derivatives_are_reported() {
        let fd = FnProfile(|t: f64| t.sqrt());
        assert!(matches!(
            FProfile::new(&fd, DerivativeBackend::Analytic, &cfg(2)),
            Err(Error::NotSmooth { .. })
        ));
    }

    #[test]
    fn convex_h_violates_hypothesis() {
        // H = t²: H(1) − H'(1) = −1
        let h = PowerProfile {
            scale: 1.0,
            exponent: 2.0,
        };
        assert!(matches!(
            FProfile::new(&h, DerivativeBackend::Analytic, &cfg(2)),
            Err(Error::ProfileHypothesis { .. })
        ));
    }

    #[test]
    fn rejects_t_outside_unit_interval() {
        let h = PowerProfile {
            scale: 1.0,
            exponent: 0.5,
        };
        let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg(2)).unwrap();
        assert!(f.eval(0.0).is_err());
        assert!(f.eval(1.5).is_err());
    }
}
