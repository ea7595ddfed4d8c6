use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused whenever std is linked
use num_traits::Float;

use super::pwa::PiecewiseAffineConvex;
use crate::{Error, Result};

/// `M(t) = scale · t^exponent` with `exponent > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFunction {
    exponent: f64,
    scale: f64,
}

impl PowerFunction {
    pub fn new(exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 1.0) {
            return Err(Error::InvalidOrlicz(format!(
                "power exponent must exceed 1, got {exponent}"
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidOrlicz(format!(
                "power scale must be positive, got {scale}"
            )));
        }
        Ok(Self { exponent, scale })
    }

    /// The power function whose conjugate is exactly `x^q`, `1/p + 1/q = 1`,
    /// so that `M*(1) = 1`.
    pub fn normalized(exponent: f64) -> Result<Self> {
        let q = conjugate_exponent(exponent);
        Self::new(exponent, (q - 1.0) / q.powf(exponent))
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.scale * t.powf(self.exponent)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (y / self.scale).powf(1.0 / self.exponent)
    }

    /// `sup_t (xt − c t^p) = (p − 1) c (x / (cp))^q`.
    pub fn conjugate(&self) -> Self {
        let (p, c) = (self.exponent, self.scale);
        let q = conjugate_exponent(p);
        Self {
            exponent: q,
            scale: (p - 1.0) * c * (c * p).powf(-q),
        }
    }

    /// `M(λ·)`, again a power function.
    pub fn dilate(&self, lambda: f64) -> Self {
        Self {
            exponent: self.exponent,
            scale: self.scale * lambda.powf(self.exponent),
        }
    }
}

/// `q = p / (p − 1)`.
pub fn conjugate_exponent(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Analytic regularity flags of an Orlicz function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub strictly_convex: bool,
    pub twice_differentiable: bool,
    pub strictly_two_concave: bool,
}

/// A convex `M : [0, ∞) → [0, ∞]` with `M(0) = 0`.
///
/// Piecewise-affine members may vanish on an initial interval and may be
/// `+∞` beyond a finite bound; both occur for conjugates of functions built
/// from weight matrices.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum OrliczFunction {
    Power {
        p: f64,
        scale: f64,
    },
    Pwa {
        knots: Vec<f64>,
        values: Vec<f64>,
        ext_slope: Option<f64>,
    },
}

impl OrliczFunction {
    pub fn power(p: f64, scale: f64) -> Result<Self> {
        PowerFunction::new(p, scale).map(Self::from)
    }

    pub fn pwa(knots: Vec<f64>, values: Vec<f64>, ext_slope: Option<f64>) -> Result<Self> {
        let f = PiecewiseAffineConvex::new(knots, values, ext_slope)?;
        let out = Self::from(f);
        out.validate()?;
        Ok(out)
    }

    /// Checks the representation invariants and that `M` is not identically 0.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Power { p, scale } => PowerFunction::new(*p, *scale).map(|_| ()),
            Self::Pwa { .. } => {
                let f = self.as_pwa().unwrap()?;
                let grows = f.values().last().is_some_and(|&v| v > 0.0)
                    || f.ext_slope().is_some_and(|s| s > 0.0)
                    || f.domain_bound().is_some();
                if grows {
                    Ok(())
                } else {
                    Err(Error::InvalidOrlicz("function vanishes identically".into()))
                }
            }
        }
    }

    pub(crate) fn as_power(&self) -> Option<PowerFunction> {
        match *self {
            Self::Power { p, scale } => Some(PowerFunction { exponent: p, scale }),
            Self::Pwa { .. } => None,
        }
    }

    pub(crate) fn as_pwa(&self) -> Option<Result<PiecewiseAffineConvex>> {
        match self {
            Self::Pwa {
                knots,
                values,
                ext_slope,
            } => Some(PiecewiseAffineConvex::new(
                knots.clone(),
                values.clone(),
                *ext_slope,
            )),
            Self::Power { .. } => None,
        }
    }

    /// Value at `t`, `None` meaning `+∞` (outside a finite domain).
    pub(crate) fn eval_extended(&self, t: f64) -> Option<f64> {
        match self {
            Self::Power { p, scale } => Some(scale * t.powf(*p)),
            Self::Pwa {
                knots,
                values,
                ext_slope,
            } => pwa_eval(knots, values, *ext_slope, t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeArgument(t));
        }
        match self {
            Self::Power { .. } => Ok(self.eval_extended(t).unwrap()),
            Self::Pwa { knots, .. } => self.eval_extended(t).ok_or(Error::OutsideDomain {
                t,
                bound: *knots.last().unwrap(),
            }),
        }
    }

    /// Generalized inverse `sup{t : M(t) ≤ y}` (closed form for powers).
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y < 0.0 || y.is_nan() {
            return Err(Error::NegativeArgument(y));
        }
        match self {
            Self::Power { p, scale } => Ok((y / scale).powf(1.0 / p)),
            Self::Pwa { .. } => self.as_pwa().unwrap()?.inverse(y),
        }
    }

    pub fn conjugate(&self) -> Result<Self> {
        match self {
            Self::Power { .. } => Ok(self.as_power().unwrap().conjugate().into()),
            Self::Pwa { .. } => Ok(self.as_pwa().unwrap()?.conjugate().into()),
        }
    }

    /// `M(λ·)` for `λ > 0`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation {lambda}")));
        }
        match self {
            Self::Power { .. } => Ok(self.as_power().unwrap().dilate(lambda).into()),
            Self::Pwa {
                knots,
                values,
                ext_slope,
            } => {
                let knots = knots.iter().map(|t| t / lambda).collect();
                let ext = ext_slope.map(|s| s * lambda);
                Ok(PiecewiseAffineConvex::new(knots, values.clone(), ext)?.into())
            }
        }
    }

    /// Finite domain bound, if any.
    pub fn domain_bound(&self) -> Option<f64> {
        match self {
            Self::Power { .. } => None,
            Self::Pwa {
                knots, ext_slope, ..
            } => ext_slope.is_none().then(|| *knots.last().unwrap()),
        }
    }

    pub fn regularity(&self) -> Regularity {
        match self {
            Self::Power { p, .. } => Regularity {
                strictly_convex: true,
                twice_differentiable: true,
                strictly_two_concave: *p < 2.0,
            },
            Self::Pwa { .. } => Regularity {
                strictly_convex: false,
                twice_differentiable: false,
                strictly_two_concave: false,
            },
        }
    }
}

impl From<PowerFunction> for OrliczFunction {
    fn from(f: PowerFunction) -> Self {
        Self::Power {
            p: f.exponent,
            scale: f.scale,
        }
    }
}

impl From<PiecewiseAffineConvex> for OrliczFunction {
    fn from(f: PiecewiseAffineConvex) -> Self {
        let ext_slope = f.ext_slope();
        Self::Pwa {
            knots: f.knots().to_vec(),
            values: f.values().to_vec(),
            ext_slope,
        }
    }
}

// Hot path of the norm solver: evaluates straight from the stored slices.
fn pwa_eval(knots: &[f64], values: &[f64], ext: Option<f64>, t: f64) -> Option<f64> {
    let last = knots.len() - 1;
    if t >= knots[last] {
        if t == knots[last] {
            return Some(values[last]);
        }
        return ext.map(|s| values[last] + s * (t - knots[last]));
    }
    let k = knots.partition_point(|&x| x <= t);
    let (t0, t1) = (knots[k - 1], knots[k]);
    let (v0, v1) = (values[k - 1], values[k]);
    if t == t0 {
        return Some(v0);
    }
    Some(v0 + (v1 - v0) * ((t - t0) / (t1 - t0)))
}

/// Outcome of a grid certification of 2-concavity (`t ↦ M(√t)` concave).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoConcavityReport {
    pub concave: bool,
    pub strictly_concave: bool,
    /// Largest relative increase between consecutive divided-difference
    /// slopes of `M(√·)`; negative means strictly concave on the grid.
    pub worst_margin: f64,
    pub grid_points: usize,
}

/// Default grid: 2048 log-spaced points on `[1e-6, 1e3]`.
pub const TWO_CONCAVITY_GRID: usize = 2048;
const TWO_CONCAVITY_RANGE: (f64, f64) = (1e-6, 1e3);
const TWO_CONCAVITY_TOL: f64 = 1e-9;

/// Certifies 2-concavity of `m` on a log-spaced grid with `points` nodes.
///
/// Second divided differences of `u ↦ M(√u)` are compared relative to the
/// neighbouring slopes; the non-strict test allows `1e-9` of round-off, the
/// strict one demands every difference below `-1e-9`.
pub fn is_two_concave(m: &OrliczFunction, points: usize) -> TwoConcavityReport {
    let (lo, mut hi) = TWO_CONCAVITY_RANGE;
    if let Some(b) = m.domain_bound() {
        hi = hi.min(b * b);
    }
    let grid = log_grid(lo, hi, points.max(3));
    let g: Vec<f64> = grid
        .iter()
        .map(|&u| m.eval_extended(u.sqrt()).unwrap_or(f64::INFINITY))
        .collect();
    let slopes: Vec<f64> = (0..grid.len() - 1)
        .map(|k| (g[k + 1] - g[k]) / (grid[k + 1] - grid[k]))
        .collect();
    let mut worst = f64::NEG_INFINITY;
    for w in slopes.windows(2) {
        let scale = w[0].abs().max(w[1].abs());
        let margin = if !scale.is_finite() {
            f64::INFINITY
        } else if scale == 0.0 {
            0.0
        } else {
            (w[1] - w[0]) / scale
        };
        worst = worst.max(margin);
    }
    TwoConcavityReport {
        concave: worst <= TWO_CONCAVITY_TOL,
        strictly_concave: worst < -TWO_CONCAVITY_TOL,
        worst_margin: worst,
        grid_points: grid.len(),
    }
}

/// `count` points spaced geometrically from `lo` to `hi` (both included).
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn power_eval_and_inverse() {
        let m = OrliczFunction::power(2.0, 1.0).unwrap();
        assert_eq!(m.eval(3.0).unwrap(), 9.0);
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert_eq!(m.inverse(9.0).unwrap(), 3.0);
        assert_eq!(m.inverse(0.0).unwrap(), 0.0);
    }

    #[test]
    fn power_conjugate_of_p_over_p() {
        // t²/2 is self-conjugate
        let m = OrliczFunction::power(2.0, 0.5).unwrap();
        let c = m.conjugate().unwrap();
        assert_eq!(c, OrliczFunction::Power { p: 2.0, scale: 0.5 });
        // t^{3/2}/(3/2) ↦ t³/3
        let m = PowerFunction::new(1.5, 1.0 / 1.5).unwrap().conjugate();
        assert!((m.exponent() - 3.0).abs() < 1e-15);
        assert!((m.scale() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn normalized_power_has_unit_conjugate_at_one() {
        for &p in &[1.2, 1.5, 1.8, 2.0, 3.0] {
            let c = PowerFunction::normalized(p).unwrap().conjugate();
            assert!((c.eval(1.0) - 1.0).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OrliczFunction::power(1.0, 1.0).is_err());
        assert!(OrliczFunction::power(2.0, 0.0).is_err());
        assert!(OrliczFunction::pwa(vec![0.0, 1.0], vec![0.0, 0.0], Some(0.0)).is_err());
    }

    #[test]
    fn two_concavity_of_powers() {
        let r = is_two_concave(
            &OrliczFunction::power(1.5, 1.0).unwrap(),
            TWO_CONCAVITY_GRID,
        );
        assert!(r.concave && r.strictly_concave);
        let r = is_two_concave(
            &OrliczFunction::power(2.0, 1.0).unwrap(),
            TWO_CONCAVITY_GRID,
        );
        assert!(r.concave && !r.strictly_concave, "{r:?}");
        let r = is_two_concave(
            &OrliczFunction::power(3.0, 1.0).unwrap(),
            TWO_CONCAVITY_GRID,
        );
        assert!(!r.concave);
    }

    #[test]
    fn two_concavity_fails_for_kinked_pwa() {
        let m = OrliczFunction::pwa(vec![0.0, 1.0], vec![0.0, 1.0], Some(3.0)).unwrap();
        assert!(!is_two_concave(&m, 256).concave);
    }

    #[test]
    fn pwa_dilation_rescales_argument() {
        let m = OrliczFunction::pwa(vec![0.0, 1.0], vec![0.0, 1.0], Some(2.0)).unwrap();
        let d = m.dilate(2.0).unwrap();
        for &t in &[0.1, 0.5, 0.9, 3.0] {
            assert!((d.eval(t).unwrap() - m.eval(2.0 * t).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 1e3, 10);
        assert_eq!(g.len(), 10);
        assert!((g[0] - 1e-6).abs() < 1e-20);
        assert_eq!(g[9], 1e3);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
