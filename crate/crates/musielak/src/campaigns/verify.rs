//! Norm equivalence of the permutation ℓ₂-average with a Musielak-Orlicz
//! norm: systems generated from random matrices (`verify-thm1`) and
//! matrices generated from power systems (`verify-thm2`).

use std::collections::HashMap;

use musielak_core::{
    ave_l2, functions_from_matrix, matrix_from_functions, ConstructionConfig, Mode, MusielakSystem,
    WeightMatrix,
};
use rand::Rng;
use serde_json::json;

use super::{instance_id, par_instances, tag, Outcome};
use crate::config::{AverageChoice, Command, ExperimentConfig, Family};
use crate::instances::{family_matrix, gaussian_vector, instance_rng, power_system};
use crate::report::{band_check, bands_by_dimension, CheckOutcome, Row};
use crate::Result;

const CHECK: &str = "ave-over-norm";

pub(super) fn run(config: &ExperimentConfig, command: Command) -> Result<Outcome> {
    let t = if command == Command::VerifyThm1 {
        tag::THM1
    } else {
        tag::THM2
    };
    // power systems are deterministic: build one matrix per dimension
    let powers: HashMap<usize, (WeightMatrix, MusielakSystem)> = match &config.family {
        Family::PowerFamily { exponents } => par_instances(&config.dims, 1, |n, _| {
            let s = power_system(exponents, n)?;
            let built = matrix_from_functions(&s, &ConstructionConfig::new(n))?;
            Ok((built.matrix, built.normalized))
        })?
        .into_iter()
        .map(|(n, _, v)| (n, v))
        .collect(),
        _ => HashMap::new(),
    };
    let per_instance = par_instances(&config.dims, config.instances, |n, i| {
        let mut rng = instance_rng(config.seed, t, n, i);
        let (a, system) = match &config.family {
            Family::PowerFamily { .. } => powers[&n].clone(),
            family => {
                let a = family_matrix(family, &mut rng, n)?.expect("matrix family");
                let g = functions_from_matrix(&a)?;
                (a, g.system)
            }
        };
        let mut rows = Vec::with_capacity(config.vectors);
        for j in 0..config.vectors {
            let x = gaussian_vector(&mut rng, n);
            let mode = match config.average {
                AverageChoice::Exact => Mode::Exact,
                AverageChoice::MonteCarlo => Mode::MonteCarlo {
                    samples: config.samples,
                    seed: rng.random(),
                },
            };
            let lhs = ave_l2(&a, &x, mode)?.value;
            let rhs = system.luxemburg_norm(&x)?;
            rows.push(Row::new(
                format!("{}-x{j:03}", instance_id(n, i)),
                n,
                CHECK,
                lhs,
                rhs,
            ));
        }
        Ok(rows)
    })?;
    let rows: Vec<Row> = per_instance.into_iter().flat_map(|(_, _, r)| r).collect();
    let bands = bands_by_dimension(CHECK, &rows);
    let degenerate = rows
        .iter()
        .filter(|r| !(r.ratio.is_finite() && r.ratio > 0.0))
        .count();
    let checks = vec![
        CheckOutcome::count(
            "finite-positive-ratios",
            rows.len(),
            degenerate,
            "ave_l2 / luxemburg_norm",
        ),
        band_check("band", &bands, &config.tolerances),
    ];
    Ok(Outcome {
        details: json!({
            "ratio": "ave_l2(a, x) / luxemburg_norm(x)",
            "vectors": "standard Gaussian",
        }),
        checks,
        bands,
        rows,
        ..Outcome::default()
    })
}
