//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here
//! rather than taken from library defaults.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use musielak::campaigns::{brute_force_matrix_norm, run};
use musielak::config::{AverageChoice, Command, ExperimentConfig, Family, OracleCheck, Tolerances};
use musielak::instances::{
    gaussian_vector, instance_rng, power_system, random_decreasing, uniform_vector,
};
use musielak::report::Band;
use musielak_core::constructions::{
    h_reconstruct_check, knot_values, DerivativeBackend, FProfile, PowerProfile,
};
use musielak_core::convex::conjugate_exponent;
use musielak_core::perm::matrix_norm_system;
use musielak_core::{
    ave_l2, matrix_from_functions, matrix_norm_a, psi_image_norm, roundtrip_check,
    ConstructionConfig, Mode, WeightMatrix,
};
use rand::Rng;

const SEED: u64 = 20_240_601;

/// Relative slack of the Luxemburg solver in the matrix-norm sandwich.
const NORM_SLACK: f64 = 1e-8;
/// Relative slack of sandwiches between exact finite sums.
const EXACT_SLACK: f64 = 1e-12;
const BAND_SPREAD: f64 = 20.0;
const BAND_STABILITY: f64 = 0.25;
const RECONSTRUCT_TOL: f64 = 1e-6;
const RECONSTRUCT_POINTS: usize = 64;
const LINEAR_TOL: f64 = 1e-15;
const KNOT_TOL: f64 = 1e-12;
const KNOT_MAX_N: usize = 64;
const UNIT_ROUNDTRIP_TOL: f64 = 1e-6;
const ROUNDTRIP_BAND: (f64, f64) = (0.25, 4.0);
const GREEDY_TOL: f64 = 1e-12;
const MC_SIGMAS: f64 = 4.0;
const MC_COVERAGE: f64 = 0.99;
const AXIOM_SLACK: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Norm<'a> = &'a dyn Fn(&[f64]) -> f64;

fn tolerances() -> Tolerances {
    Tolerances {
        norm_slack: NORM_SLACK,
        exact_slack: EXACT_SLACK,
        band_spread: BAND_SPREAD,
        band_stability: BAND_STABILITY,
        roundtrip_low: ROUNDTRIP_BAND.0,
        roundtrip_high: ROUNDTRIP_BAND.1,
        mc_sigmas: MC_SIGMAS,
        mc_coverage: MC_COVERAGE,
        ..Tolerances::default()
    }
}

fn campaign(command: Command, family: Family, dims: Vec<usize>) -> ExperimentConfig {
    ExperimentConfig {
        command: Some(command),
        dims,
        family,
        seed: SEED,
        tolerances: tolerances(),
        ..ExperimentConfig::default()
    }
}

fn random_family() -> Family {
    Family::RandomDecreasing { offset: 1e-3 }
}

fn bands(bands: &[Band]) -> String {
    bands
        .iter()
        .map(|b| format!("n={} [{:.4}, {:.4}]", b.n, b.c_low, b.c_high))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Runs a campaign and reports its checks.
fn via_campaign(config: ExperimentConfig) -> Outcome {
    let (report, outcome) = run(&config).map_err(|e| e.to_string())?;
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    let summary = report
        .checks
        .iter()
        .map(|c| format!("{} {}/{}", c.name, c.instances - c.failures, c.instances))
        .collect::<Vec<_>>()
        .join(", ");
    if outcome.bands.is_empty() {
        Ok(summary)
    } else {
        Ok(format!("{summary}; {}", bands(&outcome.bands)))
    }
}

fn lemma_matrix_norm() -> Outcome {
    let (dims, per_n) = ([2, 3, 4, 5, 6], 200);
    let mut worst = (f64::INFINITY, 0.0f64);
    let mut failures = 0;
    for &n in &dims {
        for i in 0..per_n {
            let mut rng = instance_rng(SEED, 101, n, i);
            let a = random_decreasing(&mut rng, n, n, 1e-3).map_err(|e| e.to_string())?;
            let x = uniform_vector(&mut rng, n, 1.0);
            let system = matrix_norm_system(&a).map_err(|e| e.to_string())?;
            let reference = matrix_norm_a(&a, &x).map_err(|e| e.to_string())?;
            let value = system.luxemburg_norm(&x).map_err(|e| e.to_string())?;
            let r = value / reference;
            worst = (worst.0.min(r), worst.1.max(r));
            if !(0.5 * (1.0 - NORM_SLACK)..=2.0 * (1.0 + NORM_SLACK)).contains(&r) {
                failures += 1;
            }
        }
    }
    let total = dims.len() * per_n;
    let msg = format!(
        "{}/{total} within [1/2, 2]; observed ratio range [{:.4}, {:.4}]",
        total - failures,
        worst.0,
        worst.1
    );
    if failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn khintchine() -> Outcome {
    let (dims, per_n) = ([2, 3, 4, 5], 250);
    let mut worst = (f64::INFINITY, 0.0f64);
    let mut failures = 0;
    for &n in &dims {
        for i in 0..per_n {
            let mut rng = instance_rng(SEED, 102, n, i);
            let a = random_decreasing(&mut rng, n, n, 1e-3).map_err(|e| e.to_string())?;
            let x = uniform_vector(&mut rng, n, 1.0);
            let ave = ave_l2(&a, &x, Mode::Exact)
                .map_err(|e| e.to_string())?
                .value;
            let psi = psi_image_norm(&a, &x, Mode::Exact)
                .map_err(|e| e.to_string())?
                .value;
            let r = psi / ave;
            worst = (worst.0.min(r), worst.1.max(r));
            if !(FRAC_1_SQRT_2 * (1.0 - EXACT_SLACK)..=1.0 + EXACT_SLACK).contains(&r) {
                failures += 1;
            }
        }
    }
    let total = dims.len() * per_n;
    let msg = format!(
        "{}/{total} within [1/√2, 1]; observed ratio range [{:.4}, {:.4}]",
        total - failures,
        worst.0,
        worst.1
    );
    if failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn equivalence_from_matrices() -> Outcome {
    // 50 matrices × 10 vectors = 500 vectors per n
    via_campaign(ExperimentConfig {
        instances: 50,
        vectors: 10,
        ..campaign(Command::VerifyThm1, random_family(), (2..=7).collect())
    })
}

fn equivalence_from_powers() -> Outcome {
    via_campaign(ExperimentConfig {
        instances: 50,
        vectors: 10,
        ..campaign(
            Command::VerifyThm2,
            Family::PowerFamily {
                exponents: vec![1.2, 1.5, 1.8],
            },
            (3..=6).collect(),
        )
    })
}

fn reconstruction() -> Outcome {
    let grid: Vec<f64> = (1..=RECONSTRUCT_POINTS)
        .map(|k| k as f64 / RECONSTRUCT_POINTS as f64)
        .collect();
    let cfg = ConstructionConfig::new(RECONSTRUCT_POINTS);
    let mut parts = Vec::new();
    let mut ok = true;
    for p in [1.2, 1.5, 1.8] {
        let h = PowerProfile {
            scale: 1.0,
            exponent: 2.0 / conjugate_exponent(p),
        };
        let f = FProfile::new(&h, DerivativeBackend::Analytic, &cfg).map_err(|e| e.to_string())?;
        let err = h_reconstruct_check(&f, &grid).map_err(|e| e.to_string())?;
        ok &= err <= RECONSTRUCT_TOL;
        parts.push(format!("p={p}: {err:.2e}"));
    }
    let linear = PowerProfile {
        scale: 1.0,
        exponent: 1.0,
    };
    let f = FProfile::new(&linear, DerivativeBackend::Analytic, &cfg).map_err(|e| e.to_string())?;
    let err = h_reconstruct_check(&f, &grid).map_err(|e| e.to_string())?;
    ok &= err <= LINEAR_TOL;
    parts.push(format!("H(t)=t: {err:.2e}"));
    let msg = format!(
        "max error on {RECONSTRUCT_POINTS} points: {} (limits {RECONSTRUCT_TOL:e}, {LINEAR_TOL:e})",
        parts.join(", ")
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn constant_knots() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=KNOT_MAX_N {
        let v = knot_values(&vec![1.0; n]);
        for (l, knot) in v.iter().enumerate() {
            worst = worst.max((knot - ((l + 1) as f64 / n as f64).sqrt()).abs());
        }
    }
    let msg = format!("n = 1..{KNOT_MAX_N}: max |v_ℓ − √(ℓ/n)| = {worst:.2e} (limit {KNOT_TOL:e})");
    if worst <= KNOT_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn roundtrips() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let a = WeightMatrix::constant(n, n, 1.0).map_err(|e| e.to_string())?;
        let r = roundtrip_check(&a, &ConstructionConfig::new(n)).map_err(|e| e.to_string())?;
        for row in r.reconstructed.rows() {
            for &v in row {
                worst = worst.max((v - 1.0).abs());
            }
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for n in 2..=6 {
        let s = power_system(&[1.2, 1.5, 1.8], n).map_err(|e| e.to_string())?;
        let cfg = ConstructionConfig::new(n);
        let built = matrix_from_functions(&s, &cfg).map_err(|e| e.to_string())?;
        let r = roundtrip_check(&built.matrix, &cfg).map_err(|e| e.to_string())?;
        lo = lo.min(r.equivalence.c_low);
        hi = hi.max(r.equivalence.c_high);
    }
    let ok = worst <= UNIT_ROUNDTRIP_TOL && lo >= ROUNDTRIP_BAND.0 && hi <= ROUNDTRIP_BAND.1;
    let msg = format!(
        "a ≡ 1, n = 1..8: max |a' − 1| = {worst:.2e} (limit {UNIT_ROUNDTRIP_TOL:e}); \
         power systems n = 2..6: constants [{lo:.4}, {hi:.4}] (limit [1/4, 4])"
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn max_two_band() -> Outcome {
    via_campaign(ExperimentConfig {
        instances: 200,
        checks: vec![OracleCheck::MaxTwo],
        ..campaign(Command::LemmaOracles, random_family(), (2..=5).collect())
    })
}

fn greedy_oracle() -> Outcome {
    let mut failures = 0;
    let total = 500;
    for i in 0..total {
        let mut rng = instance_rng(SEED, 109, 0, i);
        let n = rng.random_range(1..=4);
        let cols = rng.random_range(n..=4);
        let a = random_decreasing(&mut rng, n, cols, 1e-3).map_err(|e| e.to_string())?;
        let x = gaussian_vector(&mut rng, n);
        let greedy = matrix_norm_a(&a, &x).map_err(|e| e.to_string())?;
        let brute = brute_force_matrix_norm(&a, &x);
        if (greedy - brute).abs() > GREEDY_TOL * brute {
            failures += 1;
        }
    }
    let msg = format!(
        "{}/{total} agree to {GREEDY_TOL:e} relative (n, N ≤ 4)",
        total - failures
    );
    if failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn monte_carlo_oracle() -> Outcome {
    via_campaign(ExperimentConfig {
        instances: 50,
        samples: 20_000,
        average: AverageChoice::Exact,
        checks: vec![OracleCheck::MonteCarlo],
        ..campaign(Command::LemmaOracles, random_family(), (2..=7).collect())
    })
}

fn norm_axioms() -> Outcome {
    let total = 1000;
    let mut failures = Vec::new();
    for i in 0..total {
        let mut rng = instance_rng(SEED, 110, 0, i);
        let n = rng.random_range(1..=6);
        let a = random_decreasing(&mut rng, n, n, 1e-3).map_err(|e| e.to_string())?;
        let system = matrix_norm_system(&a).map_err(|e| e.to_string())?;
        let x = uniform_vector(&mut rng, n, 2.0);
        let y = uniform_vector(&mut rng, n, 2.0);
        let c: f64 = rng.random_range(-3.0..3.0);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        let scaled: Vec<f64> = x.iter().map(|u| c * u).collect();
        let zero = vec![0.0; n];
        let norms: [(&str, Norm); 2] = [
            ("‖·‖_a", &|v| matrix_norm_a(&a, v).unwrap()),
            ("Luxemburg", &|v| system.luxemburg_norm(v).unwrap()),
        ];
        for (name, norm) in norms {
            let (nx, ny, ns) = (norm(&x), norm(&y), norm(&sum));
            let triangle = ns <= (nx + ny) * (1.0 + AXIOM_SLACK);
            let homogeneous = (norm(&scaled) - c.abs() * nx).abs() <= AXIOM_SLACK * c.abs() * nx;
            let definite = norm(&zero) == 0.0 && (x.iter().all(|v| *v == 0.0) || nx > 0.0);
            if !(triangle && homogeneous && definite) {
                failures.push(format!("{name} on triple {i}"));
            }
        }
    }
    let msg = format!(
        "{}/{} (triple, norm) pairs satisfy triangle, homogeneity and definiteness",
        2 * total - failures.len(),
        2 * total
    );
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; first: {}", failures[0]))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "1 matrix-norm sandwich, 1000 instances, n = 2..6",
            lemma_matrix_norm,
        ),
        (
            "2 Khintchine sandwich, 1000 instances, n = 2..5",
            khintchine,
        ),
        (
            "3 equivalence for random decreasing matrices, n = 2..7",
            equivalence_from_matrices,
        ),
        (
            "4 equivalence for mixed power systems, n = 3..6",
            equivalence_from_powers,
        ),
        (
            "5 reconstruction identity for power profiles and H(t) = t",
            reconstruction,
        ),
        (
            "6 constant-matrix knots equal √(ℓ/n), n ≤ 64",
            constant_knots,
        ),
        (
            "7 round trips: a ≡ 1 fixed point, power-system constants",
            roundtrips,
        ),
        ("8 two-permutation max average band, n = 2..5", max_two_band),
        (
            "9a greedy matrix norm equals composition maximum",
            greedy_oracle,
        ),
        (
            "9b Monte-Carlo averages within 4σ, n = 2..7",
            monte_carlo_oracle,
        ),
        ("10 norm axioms on 1000 triples", norm_axioms),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        let outcome = criterion();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS [{name}] {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{name}] {msg} ({secs:.1}s)");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
