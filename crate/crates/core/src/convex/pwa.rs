//! Piecewise-affine convex functions on `[0, ∞)` and their exact conjugates.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Relative slack used when validating slope monotonicity of computed data.
const SLOPE_TOL: f64 = 1e-12;

/// A convex, nondecreasing, piecewise-affine function with `M(0) = 0`.
///
/// The function interpolates `(knots[k], values[k])` linearly. Beyond the last
/// knot it continues with `ext_slope`; when `ext_slope` is `None` the function
/// is `+∞` there and the last knot is a finite domain bound (this is how
/// conjugates of functions with linear growth are represented).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAffineConvex {
    knots: Vec<f64>,
    values: Vec<f64>,
    ext_slope: Option<f64>,
}

impl PiecewiseAffineConvex {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, ext_slope: Option<f64>) -> Result<Self> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidPiecewise(msg));
        if knots.is_empty() || knots.len() != values.len() {
            return bad(format!(
                "need matching nonempty knots/values, got {} and {}",
                knots.len(),
                values.len()
            ));
        }
        if knots[0] != 0.0 || values[0] != 0.0 {
            return bad(format!(
                "must start at (0, 0), got ({}, {})",
                knots[0], values[0]
            ));
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return bad("knots and values must be finite".into());
        }
        for k in 1..knots.len() {
            if knots[k] <= knots[k - 1] {
                return bad(format!("knots not strictly increasing at index {k}"));
            }
        }
        let mut prev = 0.0f64;
        for k in 1..knots.len() {
            let s = (values[k] - values[k - 1]) / (knots[k] - knots[k - 1]);
            if s < prev - SLOPE_TOL * prev.abs().max(s.abs()).max(1.0) {
                return bad(format!("slopes decrease at segment {k}: {prev} then {s}"));
            }
            prev = s.max(prev);
        }
        if let Some(e) = ext_slope {
            if !e.is_finite() || e < prev - SLOPE_TOL * prev.abs().max(1.0) {
                return bad(format!("extension slope {e} below final slope {prev}"));
            }
        }
        Ok(Self {
            knots,
            values,
            ext_slope,
        })
    }

    /// A linear function `t ↦ slope·t` on `[0, ∞)`.
    pub fn linear(slope: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0], alloc::vec![0.0], Some(slope))
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ext_slope(&self) -> Option<f64> {
        self.ext_slope
    }

    /// The finite domain bound, if the function is `+∞` beyond its last knot.
    pub fn domain_bound(&self) -> Option<f64> {
        match self.ext_slope {
            Some(_) => None,
            None => Some(*self.knots.last().unwrap()),
        }
    }

    /// Segment slopes; entry `k` is the slope on `[knots[k], knots[k+1]]`.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect()
    }

    /// Evaluation with `+∞` reported as `None`.
    pub(crate) fn eval_extended(&self, t: f64) -> Option<f64> {
        let last = self.knots.len() - 1;
        let t_last = self.knots[last];
        if t >= t_last {
            if t == t_last {
                return Some(self.values[last]);
            }
            return self.ext_slope.map(|s| self.values[last] + s * (t - t_last));
        }
        // first knot strictly greater than t; at least 1 since knots[0] = 0 <= t
        let k = self.knots.partition_point(|&x| x <= t);
        if self.knots[k - 1] == t {
            return Some(self.values[k - 1]);
        }
        let (t0, t1) = (self.knots[k - 1], self.knots[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        Some(v0 + (v1 - v0) * ((t - t0) / (t1 - t0)))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeArgument(t));
        }
        self.eval_extended(t).ok_or(Error::OutsideDomain {
            t,
            bound: *self.knots.last().unwrap(),
        })
    }

    /// Generalized inverse `sup{t ≥ 0 : M(t) ≤ y}` for `y > 0`, and `0` at `y = 0`.
    ///
    /// On a bounded domain, levels above the last value map to the domain
    /// bound. A zero extension slope makes large levels unattainable.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y < 0.0 || y.is_nan() {
            return Err(Error::NegativeArgument(y));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let last = self.knots.len() - 1;
        let v_last = self.values[last];
        if y >= v_last {
            return match self.ext_slope {
                None => Ok(self.knots[last]),
                Some(s) if s > 0.0 => Ok(self.knots[last] + (y - v_last) / s),
                Some(_) => Err(Error::NonInvertibleTail { y }),
            };
        }
        let k = self.values.partition_point(|&v| v <= y);
        let (t0, t1) = (self.knots[k - 1], self.knots[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        Ok(t0 + (t1 - t0) * ((y - v0) / (v1 - v0)))
    }

    /// Legendre conjugate `M*(x) = sup_{t ≥ 0} (xt − M(t))`, computed exactly.
    ///
    /// The knots of `M*` are the distinct slopes of `M` and its slopes are the
    /// knots of `M`. Linear growth of `M` with slope `s` turns into a finite
    /// domain bound `s` for `M*`, and a bounded domain `[0, T]` for `M`
    /// turns into the extension slope `T`.
    pub fn conjugate(&self) -> Self {
        let slopes = self.slopes();
        let mut xs = Vec::with_capacity(self.knots.len() + 1);
        let mut ys = Vec::with_capacity(self.knots.len() + 1);
        xs.push(0.0);
        ys.push(0.0);
        for (k, &s) in slopes.iter().enumerate() {
            // on [s_k, s_{k+1}] the supremum sits at knot k+1
            if s > *xs.last().unwrap() {
                xs.push(s);
                ys.push((s * self.knots[k + 1] - self.values[k + 1]).max(0.0));
            }
        }
        let last = self.knots.len() - 1;
        match self.ext_slope {
            Some(e) => {
                if e > *xs.last().unwrap() {
                    xs.push(e);
                    ys.push((e * self.knots[last] - self.values[last]).max(0.0));
                }
                Self {
                    knots: xs,
                    values: ys,
                    ext_slope: None,
                }
            }
            None => Self {
                knots: xs,
                values: ys,
                ext_slope: Some(self.knots[last]),
            },
        }
    }

    /// Builds the convex function whose inverse is the concave piecewise-affine
    /// interpolant through `(0, 0)` and `(levels[k], points[k])`, extended linearly.
    ///
    /// `levels` and `points` must both be strictly increasing and the slopes
    /// of the inverse nonincreasing.
    pub fn from_inverse_knots(levels: &[f64], points: &[f64]) -> Result<Self> {
        if levels.is_empty() || levels.len() != points.len() {
            return Err(Error::InvalidPiecewise(
                "need matching nonempty levels/points".into(),
            ));
        }
        let mut knots = Vec::with_capacity(points.len() + 1);
        let mut values = Vec::with_capacity(points.len() + 1);
        knots.push(0.0);
        values.push(0.0);
        knots.extend_from_slice(points);
        values.extend_from_slice(levels);
        let m = knots.len() - 1;
        let ext = (values[m] - values[m - 1]) / (knots[m] - knots[m - 1]);
        Self::new(knots, values, Some(ext))
    }
}
