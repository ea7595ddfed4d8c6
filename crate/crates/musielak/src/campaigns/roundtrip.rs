//! matrix → functions → matrix, compared through the knot values.

use musielak_core::{matrix_from_functions, roundtrip_check, ConstructionConfig, WeightMatrix};
use serde_json::json;

use super::{instance_id, par_instances, tag, Outcome};
use crate::config::{ExperimentConfig, Family};
use crate::instances::{family_matrix, instance_rng, power_system};
use crate::io::read_matrix;
use crate::report::{CheckOutcome, Row};
use crate::Result;

const CHECK: &str = "roundtrip";

pub(super) fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let results = match &config.input {
        Some(path) => {
            let a = read_matrix(path)?;
            let n = a.n();
            vec![(n, 0, check(&a)?)]
        }
        None => {
            // the power family has one deterministic instance per dimension
            let count = match config.family {
                Family::PowerFamily { .. } => 1,
                _ => config.instances,
            };
            par_instances(&config.dims, count, |n, i| {
                let mut rng = instance_rng(config.seed, tag::ROUNDTRIP, n, i);
                let a = match &config.family {
                    Family::PowerFamily { exponents } => {
                        matrix_from_functions(
                            &power_system(exponents, n)?,
                            &ConstructionConfig::new(n),
                        )?
                        .matrix
                    }
                    family => family_matrix(family, &mut rng, n)?.expect("matrix family"),
                };
                check(&a)
            })?
        }
    };
    let (lo, hi) = (
        config.tolerances.roundtrip_low,
        config.tolerances.roundtrip_high,
    );
    let mut rows = Vec::new();
    let mut details = Vec::new();
    let mut failures = 0;
    for (n, i, (report, a)) in results {
        let id = instance_id(n, i);
        let e = &report.equivalence;
        if !(e.c_low >= lo && e.c_high <= hi) {
            failures += 1;
        }
        rows.push(Row::new(id.clone(), n, CHECK, e.c_low, e.c_high));
        details.push(json!({
            "instance_id": id,
            "original": a,
            "reconstructed": report.reconstructed,
            "original_knots": report.original_knots,
            "reconstructed_knots": report.reconstructed_knots,
            "c_low": e.c_low,
            "c_high": e.c_high,
        }));
    }
    let count = rows.len();
    Ok(Outcome {
        checks: vec![CheckOutcome::count(
            "equivalence-band",
            count,
            failures,
            format!("original/reconstructed knot ratios within [{lo}, {hi}]"),
        )],
        details: json!({
            "columns": "lhs = smallest knot ratio, rhs = largest knot ratio",
            "instances": details,
        }),
        rows,
        ..Outcome::default()
    })
}

fn check(
    a: &WeightMatrix,
) -> Result<(musielak_core::constructions::RoundtripReport, WeightMatrix)> {
    Ok((
        roundtrip_check(a, &ConstructionConfig::new(a.n()))?,
        a.clone(),
    ))
}
