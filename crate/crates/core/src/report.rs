//! Small result records shared by several modules.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Two-sided comparison constants `c_low ≤ ratio ≤ c_high` collected over a
/// set of samples.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceReport {
    pub c_low: f64,
    pub c_high: f64,
    pub ratios: Vec<f64>,
    pub samples: usize,
    pub instance: String,
}

impl EquivalenceReport {
    /// Builds a report from raw ratios. Every ratio must be positive and finite.
    pub fn from_ratios(ratios: Vec<f64>, instance: impl Into<String>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::InvalidParameter("no ratios to report".into()));
        }
        let mut c_low = f64::INFINITY;
        let mut c_high = 0.0f64;
        for &r in &ratios {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::NonFinite(alloc::format!("ratio {r}")));
            }
            c_low = c_low.min(r);
            c_high = c_high.max(r);
        }
        Ok(Self {
            c_low,
            c_high,
            samples: ratios.len(),
            ratios,
            instance: instance.into(),
        })
    }

    /// `c_high / c_low`.
    pub fn spread(&self) -> f64 {
        self.c_high / self.c_low
    }

    /// The report for the comparison taken the other way round.
    pub fn reciprocal(&self) -> Self {
        Self {
            c_low: 1.0 / self.c_high,
            c_high: 1.0 / self.c_low,
            ratios: self.ratios.iter().map(|r| 1.0 / r).collect(),
            samples: self.samples,
            instance: self.instance.clone(),
        }
    }
}

/// Outcome of checking `lower · reference ≤ value ≤ upper · reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sandwich {
    pub reference: f64,
    pub value: f64,
    /// `value / reference`, or 1 when both sides vanish.
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

impl Sandwich {
    /// `slack` is relative to `reference`.
    pub fn check(reference: f64, value: f64, lower: f64, upper: f64, slack: f64) -> Self {
        let eps = slack * reference.abs();
        let pass = value >= lower * reference - eps && value <= upper * reference + eps;
        let ratio = if reference == 0.0 && value == 0.0 {
            1.0
        } else {
            value / reference
        };
        Self {
            reference,
            value,
            ratio,
            lower,
            upper,
            pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn reciprocal_swaps_constants() {
        let r = EquivalenceReport::from_ratios(vec![0.5, 2.0, 1.0], "t").unwrap();
        let s = r.reciprocal();
        assert_eq!((s.c_low, s.c_high), (0.5, 2.0));
        assert_eq!(s.ratios, vec![2.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_nonpositive_ratio() {
        assert!(EquivalenceReport::from_ratios(vec![1.0, 0.0], "t").is_err());
        assert!(EquivalenceReport::from_ratios(vec![], "t").is_err());
    }

    #[test]
    fn zero_sandwich_passes() {
        let s = Sandwich::check(0.0, 0.0, 0.5, 2.0, 1e-8);
        assert!(s.pass);
        assert_eq!(s.ratio, 1.0);
    }
}
