use approx::assert_relative_eq;
use musielak_core::convex::{NORM_TOL, TWO_CONCAVITY_GRID};
use musielak_core::{
    is_two_concave, power_orlicz, MusielakSystem, OrliczFunction, PiecewiseAffineConvex,
};
use proptest::prelude::*;

/// Random convex PWA function on `[0, ∞)`: increasing slopes, optional
/// flat start, unbounded.
fn pwa_strategy() -> impl Strategy<Value = PiecewiseAffineConvex> {
    (
        prop::collection::vec((0.05f64..2.0, 0.01f64..1.5), 1..6),
        any::<bool>(),
        0.01f64..1.0,
    )
        .prop_map(|(steps, flat, extra)| {
            let mut knots = vec![0.0];
            let mut values = vec![0.0];
            let mut slope = if flat { 0.0 } else { 0.1 };
            for (dx, ds) in steps {
                let t = knots.last().unwrap() + dx;
                let v = values.last().unwrap() + slope * dx;
                knots.push(t);
                values.push(v);
                slope += ds;
            }
            PiecewiseAffineConvex::new(knots, values, Some(slope + extra)).unwrap()
        })
}

fn power_strategy() -> impl Strategy<Value = OrliczFunction> {
    (1.1f64..3.0, 0.2f64..3.0).prop_map(|(p, c)| OrliczFunction::power(p, c).unwrap())
}

fn system_strategy() -> impl Strategy<Value = MusielakSystem> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec(
            prop_oneof![
                power_strategy(),
                pwa_strategy().prop_map(OrliczFunction::from)
            ],
            n,
        )
        .prop_map(|fs| MusielakSystem::new(fs).unwrap())
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

/// `sup_t (xt − M(t))` over a dense grid plus every knot.
fn conjugate_oracle(m: &PiecewiseAffineConvex, x: f64) -> f64 {
    let top = m.knots().last().unwrap() * 2.0 + 1.0;
    let mut best = 0.0f64;
    for k in 0..=20_000 {
        let t = top * k as f64 / 20_000.0;
        best = best.max(x * t - m.eval(t).unwrap());
    }
    for &t in m.knots() {
        best = best.max(x * t - m.eval(t).unwrap());
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn luxemburg_is_homogeneous((s, x, lambda) in system_strategy()
        .prop_flat_map(|s| { let n = s.dim(); (Just(s), vector(n), -5.0f64..5.0) }))
    {
        let base = s.luxemburg_norm(&x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let got = s.luxemburg_norm(&scaled).unwrap();
        prop_assert!((got - lambda.abs() * base).abs() <= 4.0 * NORM_TOL * lambda.abs() * base + 1e-300);
    }

    #[test]
    fn luxemburg_triangle_inequality((s, x, y) in system_strategy()
        .prop_flat_map(|s| { let n = s.dim(); (Just(s), vector(n), vector(n)) }))
    {
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = s.luxemburg_norm(&sum).unwrap();
        let rhs = s.luxemburg_norm(&x).unwrap() + s.luxemburg_norm(&y).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 4.0 * NORM_TOL));
    }

    #[test]
    fn norm_sits_on_the_unit_modular((s, x) in system_strategy()
        .prop_flat_map(|s| { let n = s.dim(); (Just(s), vector(n)) }))
    {
        prop_assume!(x.iter().any(|v| *v != 0.0));
        let rho = s.luxemburg_norm(&x).unwrap();
        // feasible at ρ, infeasible just below
        prop_assert!(s.modular(&x, rho).unwrap() <= 1.0);
        let below = rho * (1.0 - 10.0 * NORM_TOL);
        prop_assert!(s.modular(&x, below).is_none_or(|v| v > 1.0 - 1e-6));
    }

    #[test]
    fn pwa_conjugate_matches_grid_supremum(m in pwa_strategy(), x in 0.0f64..4.0) {
        let conj = m.conjugate();
        let exact = match conj.eval(x) {
            Ok(v) => v,
            Err(_) => return Ok(()), // beyond the slope range the supremum is +∞
        };
        let grid = conjugate_oracle(&m, x);
        prop_assert!(grid <= exact + 1e-9);
        prop_assert!(exact - grid <= 1e-8 * (1.0 + exact));
    }

    #[test]
    fn pwa_biconjugate_is_identity(m in pwa_strategy(), t in 0.0f64..8.0) {
        let back = m.conjugate().conjugate();
        let (u, v) = (m.eval(t).unwrap(), back.eval(t).unwrap());
        prop_assert!((u - v).abs() <= 1e-10 * (1.0 + u.abs()));
    }

    #[test]
    fn young_inequality(m in pwa_strategy(), t in 0.0f64..6.0, x in 0.0f64..4.0) {
        if let Ok(c) = m.conjugate().eval(x) {
            prop_assert!(t * x <= m.eval(t).unwrap() + c + 1e-10);
        }
    }

    #[test]
    fn power_conjugate_young_and_biconjugate(m in power_strategy(), t in 0.0f64..5.0, x in 0.0f64..5.0) {
        let c = m.conjugate().unwrap();
        prop_assert!(t * x <= m.eval(t).unwrap() + c.eval(x).unwrap() + 1e-10);
        let back = c.conjugate().unwrap();
        let u = m.eval(t).unwrap();
        prop_assert!((back.eval(t).unwrap() - u).abs() <= 1e-10 * (1.0 + u));
    }

    #[test]
    fn inverse_inverts(m in pwa_strategy(), y in 0.001f64..20.0) {
        let t = m.inverse(y).unwrap();
        prop_assert!((m.eval(t).unwrap() - y).abs() <= 1e-10 * (1.0 + y));
    }
}

/// Nested `ρ`-scan: the grid cell where the modular crosses 1, refined
/// until the cell is below `1e-9`.
fn rho_scan(s: &MusielakSystem, x: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let feasible = |rho: f64| s.modular(x, rho).is_some_and(|v| v <= 1.0);
    assert!(feasible(hi) && !feasible(lo));
    while hi - lo > 1e-9 {
        let steps = 1000;
        let width = (hi - lo) / steps as f64;
        let k = (1..=steps)
            .find(|&k| feasible(lo + width * k as f64))
            .unwrap();
        hi = lo + width * k as f64;
        lo = hi - width;
    }
    hi
}

#[test]
fn mixed_system_against_scan() {
    let s = MusielakSystem::new(vec![
        OrliczFunction::power(1.5, 1.0).unwrap(),
        OrliczFunction::power(2.0, 0.5).unwrap(),
        OrliczFunction::pwa(vec![0.0, 1.0, 2.0], vec![0.0, 0.5, 2.0], Some(3.0)).unwrap(),
    ])
    .unwrap();
    let x = [0.7, -1.3, 2.2];
    let exact = s.luxemburg_norm(&x).unwrap();
    let scanned = rho_scan(&s, &x, 0.5, 5.0);
    assert!((exact - scanned).abs() < 1e-6, "{exact} vs {scanned}");
}

#[test]
fn single_power_norm_is_scaled_absolute_value() {
    // M(t) = t²: ‖x‖ = |x| in one dimension, ℓ₂ in general
    let s = MusielakSystem::uniform(OrliczFunction::power(2.0, 1.0).unwrap(), 2).unwrap();
    assert_relative_eq!(
        s.luxemburg_norm(&[3.0, -4.0]).unwrap(),
        5.0,
        max_relative = 1e-9
    );
}

#[test]
fn normalized_power_family_is_strictly_two_concave() {
    for p in [1.2, 1.5, 1.8] {
        let m = power_orlicz(p).unwrap();
        let r = is_two_concave(&m, TWO_CONCAVITY_GRID);
        assert!(r.concave && r.strictly_concave, "p = {p}: {r:?}");
        assert_relative_eq!(
            m.conjugate().unwrap().eval(1.0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }
}

#[test]
fn conjugate_exponent_of_three_halves() {
    let m = power_orlicz(1.5).unwrap();
    match m.conjugate().unwrap() {
        OrliczFunction::Power { p, .. } => assert_relative_eq!(p, 3.0, max_relative = 1e-14),
        other => panic!("unexpected {other:?}"),
    }
}
