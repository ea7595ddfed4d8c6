//! Campaign reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Command, ExperimentConfig, Tolerances};
use crate::io::fmt_float;

/// One row of the per-instance CSV table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance_id: String,
    pub n: usize,
    pub check: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl Row {
    pub const HEADER: [&'static str; 6] = ["instance_id", "n", "check", "lhs", "rhs", "ratio"];

    pub fn new(instance_id: String, n: usize, check: &'static str, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 && rhs == 0.0 {
            1.0
        } else {
            lhs / rhs
        };
        Self {
            instance_id,
            n,
            check,
            lhs,
            rhs,
            ratio,
        }
    }

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.instance_id.clone(),
            self.n.to_string(),
            self.check.to_string(),
            fmt_float(self.lhs),
            fmt_float(self.rhs),
            fmt_float(self.ratio),
        ]
    }
}

/// Pass/fail of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub instances: usize,
    pub failures: usize,
    pub detail: String,
}

impl CheckOutcome {
    pub fn count(
        name: impl Into<String>,
        instances: usize,
        failures: usize,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            pass: failures == 0,
            instances,
            failures,
            detail: detail.into(),
        }
    }
}

/// Empirical ratio band of one check at one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub check: &'static str,
    pub n: usize,
    pub count: usize,
    pub c_low: f64,
    pub c_high: f64,
    pub spread: f64,
}

impl Band {
    pub fn from_rows<'a>(
        check: &'static str,
        n: usize,
        rows: impl IntoIterator<Item = &'a Row>,
    ) -> Option<Self> {
        let (mut lo, mut hi, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0);
        for r in rows {
            lo = lo.min(r.ratio);
            hi = hi.max(r.ratio);
            count += 1;
        }
        (count > 0).then(|| Self {
            check,
            n,
            count,
            c_low: lo,
            c_high: hi,
            spread: hi / lo,
        })
    }
}

/// Bands per dimension for `check`, in the order of first appearance.
pub fn bands_by_dimension(check: &'static str, rows: &[Row]) -> Vec<Band> {
    let mut dims: Vec<usize> = Vec::new();
    for r in rows.iter().filter(|r| r.check == check) {
        if !dims.contains(&r.n) {
            dims.push(r.n);
        }
    }
    dims.into_iter()
        .filter_map(|n| {
            Band::from_rows(
                check,
                n,
                rows.iter().filter(|r| r.check == check && r.n == n),
            )
        })
        .collect()
}

/// Bounded spread at every `n`, and each band contained in the previous
/// one widened by the stability tolerance:
/// `[c_low(n+1), c_high(n+1)] ⊆ [(1 − s) c_low(n), (1 + s) c_high(n)]`.
pub fn band_check(name: &str, bands: &[Band], tol: &Tolerances) -> CheckOutcome {
    let mut sorted: Vec<&Band> = bands.iter().collect();
    sorted.sort_by_key(|b| b.n);
    let mut problems = Vec::new();
    for b in &sorted {
        if !(b.c_low > 0.0 && b.spread <= tol.band_spread) {
            problems.push(format!(
                "n={}: spread {:.4} (limit {})",
                b.n, b.spread, tol.band_spread
            ));
        }
    }
    let s = tol.band_stability;
    for w in sorted.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q.c_low < (1.0 - s) * p.c_low || q.c_high > (1.0 + s) * p.c_high {
            problems.push(format!(
                "n={}→{}: [{:.4}, {:.4}] not inside [{:.4}, {:.4}]",
                p.n,
                q.n,
                q.c_low,
                q.c_high,
                (1.0 - s) * p.c_low,
                (1.0 + s) * p.c_high
            ));
        }
    }
    let detail = if problems.is_empty() {
        sorted
            .iter()
            .map(|b| format!("n={}: [{:.6}, {:.6}]", b.n, b.c_low, b.c_high))
            .collect::<Vec<_>>()
            .join("; ")
    } else {
        problems.join("; ")
    };
    CheckOutcome {
        name: name.to_string(),
        pass: problems.is_empty(),
        instances: sorted.iter().map(|b| b.count).sum(),
        failures: problems.len(),
        detail,
    }
}

/// The JSON summary written by every campaign.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    /// Seconds since the Unix epoch; the only field that varies between
    /// runs with the same configuration.
    pub timestamp: u64,
    pub command: Command,
    pub config: ExperimentConfig,
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
    pub bands: Vec<Band>,
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(
        config: ExperimentConfig,
        command: Command,
        checks: Vec<CheckOutcome>,
        bands: Vec<Band>,
        details: serde_json::Value,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            timestamp,
            command,
            pass: checks.iter().all(|c| c.pass),
            config,
            checks,
            bands,
            details,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, ratio: f64) -> Row {
        Row::new(format!("{n}"), n, "r", ratio, 1.0)
    }

    #[test]
    fn bands_and_stability() {
        let rows = vec![
            row(2, 1.0),
            row(2, 2.0),
            row(3, 1.1),
            row(3, 2.1),
            row(4, 1.5),
            row(4, 2.7),
        ];
        let bands = bands_by_dimension("r", &rows);
        assert_eq!(bands.len(), 3);
        assert_eq!((bands[0].c_low, bands[0].c_high), (1.0, 2.0));
        let tol = Tolerances::default();
        assert!(band_check("x", &bands[..2], &tol).pass);
        let out = band_check("x", &bands, &tol);
        assert!(!out.pass);
        assert!(out.detail.contains("n=3→4"), "{}", out.detail);
        // a band that shrinks is stable however far its endpoints move
        let narrow = vec![row(2, 0.5), row(2, 2.0), row(3, 1.4), row(3, 1.5)];
        assert!(band_check("x", &bands_by_dimension("r", &narrow), &tol).pass);
    }

    #[test]
    fn zero_over_zero_is_one() {
        assert_eq!(Row::new("z".into(), 1, "r", 0.0, 0.0).ratio, 1.0);
    }

    #[test]
    fn empty_input_has_no_bands() {
        assert!(bands_by_dimension("r", &[]).is_empty());
        assert!(band_check("x", &[], &Tolerances::default()).pass);
    }
}
