//! Both constructions: Orlicz functions from matrices, and matrices from
//! power systems.

use musielak_core::constructions::{
    h_reconstruct_check, DerivativeBackend, FProfile, PowerProfile,
};
use musielak_core::convex::conjugate_exponent;
use musielak_core::{
    functions_from_matrix, matrix_from_functions, ConstructionConfig, WeightMatrix,
};
use serde_json::json;

use super::{instance_id, par_instances, tag, Outcome, Table};
use crate::config::{ExperimentConfig, Family};
use crate::instances::{family_matrix, instance_rng, power_system};
use crate::io::{fmt_float, read_matrix};
use crate::report::{CheckOutcome, Row};
use crate::Result;

/// Agreement of `M*(v_ℓ)` with `ℓ/n`, and of constant-matrix knots with
/// `c √(ℓ/n)`.
const KNOT_TOL: f64 = 1e-12;
/// Points in `(0, 1]` on which `H` is rebuilt from `f`.
const RECONSTRUCT_POINTS: usize = 64;

const KNOT_HEADER: [&str; 6] = ["instance_id", "n", "row", "l", "level", "knot"];

pub(super) fn run(config: &ExperimentConfig) -> Result<Outcome> {
    match (&config.input, &config.family) {
        (None, Family::PowerFamily { exponents }) => from_powers(config, exponents),
        (Some(path), _) => {
            let a = read_matrix(path)?;
            from_matrices(config, vec![(a.n(), 0, a)])
        }
        (None, family) => {
            let matrices = par_instances(&config.dims, config.instances, |n, i| {
                let mut rng = instance_rng(config.seed, tag::CONSTRUCT, n, i);
                Ok(family_matrix(family, &mut rng, n)?.expect("matrix family"))
            })?;
            from_matrices(config, matrices)
        }
    }
}

fn from_matrices(
    config: &ExperimentConfig,
    matrices: Vec<(usize, usize, WeightMatrix)>,
) -> Result<Outcome> {
    let constant = match config.family {
        Family::Constant { value } if config.input.is_none() => Some(value),
        _ => None,
    };
    let generated = matrices
        .into_iter()
        .map(|(n, i, a)| Ok((n, i, functions_from_matrix(&a)?, a)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut knot_rows = Vec::new();
    let mut artifacts = Vec::new();
    let mut inverse_failures = 0;
    let mut closed_failures = 0;
    for (n, i, g, a) in &generated {
        let id = instance_id(*n, *i);
        let nf = *n as f64;
        for (r, (knots, m)) in g.knots.iter().zip(g.system.functions()).enumerate() {
            let conj = m.conjugate()?;
            for (l, &v) in knots.iter().enumerate() {
                let level = (l + 1) as f64 / nf;
                knot_rows.push(vec![
                    id.clone(),
                    n.to_string(),
                    (r + 1).to_string(),
                    (l + 1).to_string(),
                    fmt_float(level),
                    fmt_float(v),
                ]);
                let back = conj.eval(v)?;
                if (back - level).abs() > KNOT_TOL.max(1e-9 * level) {
                    inverse_failures += 1;
                }
                rows.push(Row::new(
                    format!("{id}-r{}-l{}", r + 1, l + 1),
                    *n,
                    "conjugate-at-knot",
                    back,
                    level,
                ));
                if let Some(c) = constant {
                    let expected = c * level.sqrt();
                    if (v - expected).abs() > KNOT_TOL * expected.max(1.0) {
                        closed_failures += 1;
                    }
                    rows.push(Row::new(
                        format!("{id}-r{}-l{}", r + 1, l + 1),
                        *n,
                        "constant-knot",
                        v,
                        expected,
                    ));
                }
            }
        }
        artifacts.push((
            format!("construct-{id}"),
            json!({ "instance_id": id, "matrix": a, "system": g.system, "knots": g.knots }),
        ));
    }
    let total = knot_rows.len();
    let mut checks = vec![CheckOutcome::count(
        "conjugate-at-knot",
        total,
        inverse_failures,
        "M_i*(v_ℓ) = ℓ/n",
    )];
    if constant.is_some() {
        checks.push(CheckOutcome::count(
            "constant-knot",
            total,
            closed_failures,
            format!("v_ℓ = c √(ℓ/n) within {KNOT_TOL}"),
        ));
    }
    Ok(Outcome {
        checks,
        details: json!({ "direction": "matrix to functions", "instances": generated.len() }),
        tables: vec![
            Table::from_rows("construct", &rows),
            Table {
                name: "construct-knots".into(),
                header: KNOT_HEADER.to_vec(),
                rows: knot_rows,
            },
        ],
        rows,
        artifacts,
        ..Outcome::default()
    })
}

fn from_powers(config: &ExperimentConfig, exponents: &[f64]) -> Result<Outcome> {
    let grid: Vec<f64> = (1..=RECONSTRUCT_POINTS)
        .map(|k| k as f64 / RECONSTRUCT_POINTS as f64)
        .collect();
    let built = par_instances(&config.dims, 1, |n, _| {
        let cfg = ConstructionConfig::new(n);
        let s = power_system(exponents, n)?;
        let c = matrix_from_functions(&s, &cfg)?;
        let errors = (0..n)
            .map(|i| {
                let q = conjugate_exponent(exponents[i % exponents.len()]);
                let h = PowerProfile {
                    scale: 1.0,
                    exponent: 2.0 / q,
                };
                let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg)?;
                Ok(h_reconstruct_check(&f, &grid)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((c, errors, 10.0 * cfg.quadrature.abs_tol))
    })?;
    let mut rows = Vec::new();
    let mut failures = 0;
    let mut artifacts = Vec::new();
    for (n, i, (c, errors, bound)) in &built {
        let id = instance_id(*n, *i);
        for (r, &e) in errors.iter().enumerate() {
            if !(e <= *bound) {
                failures += 1;
            }
            rows.push(Row::new(
                format!("{id}-r{}", r + 1),
                *n,
                "h-reconstruct",
                e,
                *bound,
            ));
        }
        artifacts.push((
            format!("construct-{id}"),
            json!({ "instance_id": id, "construction": c }),
        ));
    }
    let total = rows.len();
    Ok(Outcome {
        checks: vec![CheckOutcome::count(
            "h-reconstruct",
            total,
            failures,
            format!(
                "max |H − ((∫f)² + t∫f²)| on {RECONSTRUCT_POINTS} points ≤ 10 · quadrature abs_tol"
            ),
        )],
        details: json!({ "direction": "functions to matrix", "exponents": exponents }),
        rows,
        artifacts,
        ..Outcome::default()
    })
}
