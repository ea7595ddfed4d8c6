//! Shape-preserving C¹ quadratic spline through concave data.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused whenever std is linked
use num_traits::Float;

use super::profile::ConcaveProfile;
use crate::{Error, Result};

const COLLINEAR_TOL: f64 = 1e-14;
/// Slopes this close to the secant are treated as exactly linear.
const SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    x0: f64,
    y0: f64,
    slope: f64,
    curvature: f64,
}

impl Piece {
    fn value(&self, x: f64) -> f64 {
        let d = x - self.x0;
        self.y0 + d * (self.slope + self.curvature * d)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.slope + 2.0 * self.curvature * (x - self.x0)
    }

    // q(x) − x q'(x) = (y0 − slope·x0 + c x0²) − c x²
    fn tangent_gap(&self, x: f64) -> f64 {
        self.gap_at_zero() - self.curvature * x * x
    }

    fn gap_at_zero(&self) -> f64 {
        let x0 = self.x0;
        self.y0 - self.slope * x0 + self.curvature * x0 * x0
    }

    // with k = −c and G the gap extrapolated to 0 (possibly negative),
    // ∫ 2c / √(G + k x²) dx = −2√k ln(x√k + √(G + k x²))
    fn integrand_integral(&self, a: f64, b: f64) -> f64 {
        let k = -self.curvature;
        if k <= 0.0 {
            return 0.0;
        }
        let g = self.gap_at_zero();
        let rk = k.sqrt();
        let arg = |x: f64| x * rk + (g + k * x * x).max(0.0).sqrt();
        -2.0 * rk * (arg(b) / arg(a)).ln()
    }
}

/// Schumaker-type quadratic spline interpolating increasing concave data.
///
/// Every data interval gets either one quadratic or two quadratics joined at
/// an inserted knot, chosen so that the derivative stays monotone; collinear
/// data are reproduced exactly. Beyond the last point the spline continues
/// linearly with its end slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveSpline {
    pieces: Vec<Piece>,
    end: (f64, f64, f64),
}

impl ConcaveSpline {
    /// `xs` strictly increasing, `ys` strictly increasing with nonincreasing
    /// secant slopes.
    pub fn interpolate(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let m = xs.len();
        if m < 2 || ys.len() != m {
            return Err(Error::InvalidParameter(
                "spline needs at least two matching points".into(),
            ));
        }
        let mut secants = Vec::with_capacity(m - 1);
        for k in 0..m - 1 {
            let h = xs[k + 1] - xs[k];
            if !(h > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "abscissas not increasing at {k}"
                )));
            }
            let d = (ys[k + 1] - ys[k]) / h;
            if !(d > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "data not increasing at {k}"
                )));
            }
            if let Some(&prev) = secants.last() {
                if d > prev * (1.0 + 1e-12) {
                    return Err(Error::InvalidParameter(format!("data not concave at {k}")));
                }
            }
            secants.push(d);
        }
        let slopes = node_slopes(xs, ys, &secants);
        let mut pieces = Vec::with_capacity(2 * (m - 1));
        for k in 0..m - 1 {
            let (x0, x1, y0) = (xs[k], xs[k + 1], ys[k]);
            let h = x1 - x0;
            let d = secants[k];
            let (a, b) = (slopes[k], slopes[k + 1]);
            if (a - d).abs() <= SNAP_TOL * d && (b - d).abs() <= SNAP_TOL * d {
                pieces.push(Piece {
                    x0,
                    y0,
                    slope: d,
                    curvature: 0.0,
                });
                continue;
            }
            if (a + b - 2.0 * d).abs() <= COLLINEAR_TOL * d {
                pieces.push(Piece {
                    x0,
                    y0,
                    slope: a,
                    curvature: (b - a) / (2.0 * h),
                });
                continue;
            }
            // inserted knot where the middle slope equals the secant
            let xi = if (a - d) * (b - d) < 0.0 {
                x0 + h * (d - b) / (a - b)
            } else {
                0.5 * (x0 + x1)
            };
            let mid = (2.0 * (ys[k + 1] - y0) - (a * (xi - x0) + b * (x1 - xi))) / h;
            pieces.push(Piece {
                x0,
                y0,
                slope: a,
                curvature: (mid - a) / (2.0 * (xi - x0)),
            });
            pieces.push(Piece {
                x0: xi,
                y0: y0 + 0.5 * (a + mid) * (xi - x0),
                slope: mid,
                curvature: (b - mid) / (2.0 * (x1 - xi)),
            });
        }
        Ok(Self {
            pieces,
            end: (xs[m - 1], ys[m - 1], slopes[m - 1]),
        })
    }

    fn piece(&self, x: f64) -> Option<&Piece> {
        if x >= self.end.0 {
            return None;
        }
        let k = self.pieces.partition_point(|p| p.x0 <= x);
        Some(&self.pieces[k.max(1) - 1])
    }
}

/// Weighted-secant node slopes with the Schumaker end conditions.
fn node_slopes(xs: &[f64], ys: &[f64], secants: &[f64]) -> Vec<f64> {
    let m = xs.len();
    let mut s = alloc::vec![0.0; m];
    if m == 2 {
        s[0] = secants[0];
        s[1] = secants[0];
        return s;
    }
    for k in 1..m - 1 {
        let l0 = (xs[k] - xs[k - 1]).hypot(ys[k] - ys[k - 1]);
        let l1 = (xs[k + 1] - xs[k]).hypot(ys[k + 1] - ys[k]);
        s[k] = (l0 * secants[k - 1] + l1 * secants[k]) / (l0 + l1);
    }
    s[0] = 0.5 * (3.0 * secants[0] - s[1]);
    let last = secants[m - 2];
    s[m - 1] = (0.5 * (3.0 * last - s[m - 2])).max(0.5 * last);
    s
}

impl ConcaveProfile for ConcaveSpline {
    fn value(&self, t: f64) -> f64 {
        match self.piece(t) {
            Some(p) => p.value(t),
            None => self.end.1 + self.end.2 * (t - self.end.0),
        }
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        Some(match self.piece(t) {
            Some(p) => p.derivative(t),
            None => self.end.2,
        })
    }

    fn second_derivative(&self, t: f64) -> Option<f64> {
        Some(self.piece(t).map_or(0.0, |p| 2.0 * p.curvature))
    }

    fn tangent_gap(&self, t: f64) -> Option<f64> {
        Some(match self.piece(t) {
            Some(p) => p.tangent_gap(t),
            None => self.end.1 - self.end.2 * self.end.0,
        })
    }

    fn integrand_integral(&self, a: f64, b: f64) -> Option<f64> {
        let mut total = 0.0;
        for (k, p) in self.pieces.iter().enumerate() {
            let right = self.pieces.get(k + 1).map_or(self.end.0, |q| q.x0);
            let (lo, hi) = (a.max(p.x0), b.min(right));
            if lo < hi {
                total += p.integrand_integral(lo, hi);
            }
        }
        Some(total)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.x0).collect()
    }
}
