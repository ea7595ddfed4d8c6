//! Distortion of the embedding for power systems.

use musielak_core::embedding::DirectionConfig;
use musielak_core::{distortion_estimate, matrix_from_functions, ConstructionConfig, Mode};
use rand::Rng;
use serde_json::json;

use super::{par_instances, tag, Outcome, Table};
use crate::config::{AverageChoice, ExperimentConfig, Family};
use crate::instances::{instance_rng, power_system};
use crate::io::fmt_float;
use crate::report::{CheckOutcome, Row};
use crate::Result;

const CHECK: &str = "psi-over-norm";

pub(super) fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let Family::PowerFamily { exponents } = &config.family else {
        unreachable!("validated: embed-report needs the power family");
    };
    // one report per dimension; `instances` is not used here
    let reports = par_instances(&config.dims, 1, |n, _| {
        let mut rng = instance_rng(config.seed, tag::EMBED, n, 0);
        let s = power_system(exponents, n)?;
        let built = matrix_from_functions(&s, &ConstructionConfig::new(n))?;
        let mut dirs = DirectionConfig::new(config.directions, rng.random());
        if config.average == AverageChoice::MonteCarlo {
            dirs.mode = Mode::MonteCarlo {
                samples: config.samples,
                seed: rng.random(),
            };
        }
        Ok(distortion_estimate(
            &built.normalized,
            &built.matrix,
            &dirs,
        )?)
    })?;
    let mut rows = Vec::new();
    let mut directions = Vec::new();
    let mut summary = Vec::new();
    for (n, _, r) in &reports {
        for d in &r.directions {
            let id = format!("n{n}-{}", d.label);
            rows.push(Row::new(id.clone(), *n, CHECK, d.psi_norm, d.musielak_norm));
            for (k, v) in d.direction.iter().enumerate() {
                directions.push(vec![
                    id.clone(),
                    n.to_string(),
                    (k + 1).to_string(),
                    fmt_float(*v),
                ]);
            }
        }
        summary.push(json!({
            "n": n,
            "ratio_min": r.ratio_min,
            "ratio_max": r.ratio_max,
            "distortion": r.distortion,
            "samples": r.samples,
            "scheme": r.scheme,
        }));
    }
    let tol = config.tolerances.distortion_stability;
    let mut problems = Vec::new();
    let mut sorted: Vec<_> = reports.iter().map(|(n, _, r)| (*n, r.distortion)).collect();
    sorted.sort_by_key(|p| p.0);
    for w in sorted.windows(2) {
        let change = (w[1].1 / w[0].1 - 1.0).abs();
        if change > tol {
            problems.push(format!(
                "n={}→{}: distortion changed by {change:.3}",
                w[0].0, w[1].0
            ));
        }
    }
    let invalid = reports
        .iter()
        .filter(|(_, _, r)| !(r.distortion >= 1.0))
        .count();
    let checks = vec![
        CheckOutcome::count(
            "distortion-at-least-one",
            reports.len(),
            invalid,
            "ratio_max / ratio_min ≥ 1",
        ),
        CheckOutcome {
            name: "distortion-stability".into(),
            pass: problems.is_empty(),
            instances: sorted.len(),
            failures: problems.len(),
            detail: if problems.is_empty() {
                format!("consecutive dimensions within {tol}")
            } else {
                problems.join("; ")
            },
        },
    ];
    let mut tables = vec![Table::from_rows("embed-report", &rows)];
    tables.push(Table {
        name: "embed-report-directions".into(),
        header: vec!["instance_id", "n", "coordinate", "value"],
        rows: directions,
    });
    Ok(Outcome {
        checks,
        details: json!({
            "note": "distortion = ratio_max / ratio_min is an upper-bound witness for the Banach-Mazur distance to the image of this embedding",
            "reports": summary,
        }),
        rows,
        tables,
        ..Outcome::default()
    })
}
