use passify_core::ramp::{self, MinimaxTable};
use proptest::prelude::*;

fn zeta_direct(n: i32, x: f64) -> f64 {
    let p = (1.0 + x).powi(n);
    x * p / (p - 1.0)
}

#[test]
fn zeta_agrees_with_direct_formula_away_from_zero() {
    for n in [1u32, 2, 3, 4, 8, 16] {
        for k in 0..400 {
            let x = -1.0 + 11.0 * k as f64 / 399.0;
            if x.abs() < 1e-3 {
                continue;
            }
            let got = ramp::zeta(n, x).unwrap();
            let want = zeta_direct(n as i32, x);
            assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "n={n} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn partial_fractions_reproduce_zeta_of_even_order() {
    for m in 1..=6u32 {
        let f = ramp::zeta_partial_fractions(m).unwrap();
        assert_eq!(f.denominator_degree(), 2 * m as usize - 1);
        for k in 0..300 {
            let x = -1.0 + 20.0 * k as f64 / 299.0;
            if x.abs() < 1e-3 {
                continue;
            }
            let want = zeta_direct(2 * m as i32, x);
            assert!((f.eval(x) - want).abs() <= 1e-11 * (1.0 + want.abs()), "m={m} x={x}");
        }
    }
}

#[test]
fn table_error_equioscillates() {
    let t = MinimaxTable::order4();
    let points = 200_000;
    let errs: Vec<f64> = (0..=points)
        .map(|k| {
            let s = k as f64 / points as f64;
            ramp::minimax_rho(s * s, &t).unwrap() - s
        })
        .collect();
    let changes = errs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert!(changes >= 9, "{changes} sign changes");
    let level = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    assert!((level - t.e_n).abs() < 2e-8, "level {level}");
}

#[test]
fn transformed_minimax_matches_direct_composition() {
    let t = MinimaxTable::order4();
    for (a, b) in [(1.0, 1.0), (0.3, 7.0), (12.0, 0.5), (2.9, 3.1)] {
        let f = ramp::minimax_transformed(a, b, &t).unwrap();
        for k in 0..=200 {
            let x = -a + (a + b) * k as f64 / 200.0;
            let want = ramp::minimax_composed(x, a, b, &t).unwrap();
            assert!((f.eval(x) - want).abs() <= 1e-11 * (1.0 + want.abs()), "a={a} b={b} x={x}");
            let gap = f.gap(x).unwrap();
            assert!(gap >= -1e-12 && gap <= f.gap_bound + 1e-12, "gap {gap}");
        }
    }
}

proptest! {
    #[test]
    fn zeta_sandwich(exp in 0u32..6, x in -1.0f64..50.0) {
        let n = 1u32 << exp;
        let g = ramp::zeta(n, x).unwrap() - x.max(0.0);
        prop_assert!(g >= -1e-14);
        prop_assert!(g <= 1.0 / n as f64 + 1e-12);
    }

    #[test]
    fn doubling_identity(exp in 0u32..4, nu in 0.1f64..5.0, u in 0.0f64..1.0) {
        let n = 1u32 << exp;
        let x = -nu + u * 20.0 * nu;
        let prev = ramp::phi(n, nu, x).unwrap();
        let next = ramp::phi(2 * n, nu, x).unwrap();
        let via = ramp::phi_double(prev, x).unwrap();
        prop_assert!((next - via).abs() <= 1e-10 * next.abs().max(1e-300));
    }

    #[test]
    fn scaled_approximant_is_phi(m in 1u32..6, nu in 0.05f64..10.0, u in 0.0f64..1.0) {
        let x = -nu + u * 30.0 * nu;
        let f = ramp::zeta_partial_fractions(m).unwrap().scaled(nu);
        let want = ramp::phi(2 * m, nu, x).unwrap();
        prop_assert!((f.eval(x) - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn minimax_gap_stays_in_band(a in 0.01f64..100.0, b in 0.01f64..100.0, u in 0.0f64..1.0) {
        let t = MinimaxTable::order4();
        let f = ramp::minimax_transformed(a, b, &t).unwrap();
        let x = -a + u * (a + b);
        let gap = f.gap(x).unwrap();
        let scale = a.max(b);
        prop_assert!(gap >= -1e-10 * scale);
        prop_assert!(gap <= f.gap_bound + 1e-10 * scale);
    }
}
