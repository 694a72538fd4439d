mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use passify_core::dissipation;
use passify_core::passify::{self, Method, PassifyOptions};
use passify_core::Realization;

fn quick() -> PassifyOptions {
    PassifyOptions { grid_points: 400, ..PassifyOptions::default() }
}

#[test]
fn every_method_certifies_on_small_models() {
    let methods = [
        Method::Shift,
        Method::Iterate { steps: 1 },
        Method::Iterate { steps: 2 },
        Method::PartFrac { m: 1 },
        Method::PartFrac { m: 3 },
        Method::Minimax { n: 4 },
    ];
    for name in ["toy", "ttp", "dumi1", "trafe1"] {
        let h = common::realization(name);
        let hinf = dissipation::hinf_norm(&h, 1e-9).unwrap();
        for method in methods {
            let r = passify::passify(&h, method, &quick()).unwrap();
            assert!(r.violations.is_empty(), "{name} {method}: {:?}", r.violations);
            assert!(r.achieved_delta_minus >= -1e-7 * (1.0 + hinf), "{name} {method}");
            assert!(r.sweep_error <= r.alpha + 1e-6, "{name} {method}");
            assert!(r.g.is_hurwitz(0.0).unwrap(), "{name} {method}");
        }
    }
}

#[test]
fn iterate_bound_halves_each_step() {
    let h = common::realization("ttp");
    let mut last: Option<f64> = None;
    for k in 0..=3u32 {
        let r = passify::passify_iterative(&h, k, &quick()).unwrap();
        let want = r.nu / f64::from(1u32 << k);
        assert!((r.alpha - want).abs() <= 1e-14 * want);
        assert!(r.sweep_error <= r.alpha + 1e-6);
        if let Some(prev) = last {
            assert!((prev / r.alpha - 2.0).abs() < 1e-12);
        }
        last = Some(r.alpha);
    }
}

#[test]
fn iterate_zero_is_the_shift() {
    let h = common::realization("trafe1");
    let a = passify::passify_iterative(&h, 0, &quick()).unwrap();
    let b = passify::shift_passify(&h, &quick()).unwrap();
    assert_eq!(a.g, b.g);
    assert_eq!(a.alpha, b.alpha);
}

/// On SISO models `G(iω) + G(iω)ᴴ` is the scalar `f` applied to `R(ω)`.
#[test]
fn siso_output_is_scalar_composition() {
    for name in ["ttp", "dumi1"] {
        let h = common::realization(name);
        let model = common::model(name);
        for method in [Method::PartFrac { m: 2 }, Method::Minimax { n: 4 }] {
            let r = passify::passify(&h, method, &quick()).unwrap();
            for w in common::log_grid(1e-3, 1e4, 80) {
                let rv = common::r_extremes(&model, w).0;
                let want = r.approximant.eval(rv);
                let gv = common::direct_eval(&r.g, Complex64::new(0.0, w))[(0, 0)];
                let got = 2.0 * gv.re;
                assert!((got - want).abs() <= 1e-7 * (1.0 + want.abs()), "{name} {method} ω={w}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn skew_feedthrough_is_restored() {
    let h = common::realization("trafe1");
    let mut d = h.d().clone();
    d[(0, 1)] += 0.4;
    d[(1, 0)] -= 0.4;
    let h = Realization::new(h.a().clone(), h.b().clone(), h.c().clone(), d.clone()).unwrap();
    for method in [Method::Shift, Method::Iterate { steps: 2 }, Method::PartFrac { m: 2 }, Method::Minimax { n: 4 }] {
        let r = passify::passify(&h, method, &quick()).unwrap();
        let skew_g = r.g.d() - r.g.d().transpose();
        let skew_h = &d - d.transpose();
        assert!((skew_g - skew_h).amax() <= 1e-12, "{method}");
        assert!(r.violations.is_empty(), "{method}: {:?}", r.violations);
    }
}

#[test]
fn state_counts_follow_the_construction() {
    let cases = [
        ("ttp", Method::Iterate { steps: 2 }, 65),
        ("ttp", Method::PartFrac { m: 3 }, 30),
        ("ttp", Method::Minimax { n: 4 }, 45),
        ("trafe1", Method::PartFrac { m: 2 }, 24),
        ("toy", Method::PartFrac { m: 5 }, 10),
    ];
    let opts = PassifyOptions { verify: false, ..PassifyOptions::default() };
    for (name, method, states) in cases {
        let r = passify::passify(&common::realization(name), method, &opts).unwrap();
        assert_eq!(r.states, states, "{name} {method}");
    }
}

#[test]
fn passive_input_is_refused() {
    let r = passify::passify(&common::realization("lowpass"), Method::Shift, &quick());
    assert!(matches!(r, Err(passify_core::Error::NotPassifiable(_))));
}

#[test]
fn reduce_of_minimal_model_keeps_order() {
    let h = common::realization("ttp");
    let r = passify::reduce(&h, 1e-12).unwrap();
    assert_eq!(r.system.states(), 5);
    assert!(!r.rolled_back);
}

#[test]
fn reduce_halves_a_duplicated_system() {
    let h = common::realization("ttp");
    let (n, p) = (h.states(), h.ports());
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(h.a());
    a.view_mut((n, n), (n, n)).copy_from(h.a());
    let mut b = DMatrix::<f64>::zeros(2 * n, p);
    b.view_mut((0, 0), (n, p)).copy_from(h.b());
    b.view_mut((n, 0), (n, p)).copy_from(h.b());
    let mut c = DMatrix::<f64>::zeros(p, 2 * n);
    c.view_mut((0, 0), (p, n)).copy_from(&(h.c() * 0.25));
    c.view_mut((0, n), (p, n)).copy_from(&(h.c() * 0.75));
    let doubled = Realization::new(a, b, c, h.d().clone()).unwrap();
    let r = passify::reduce(&doubled, 1e-10).unwrap();
    assert_eq!(r.system.states(), n);
    for w in common::log_grid(1e-3, 1e4, 50) {
        let s = Complex64::new(0.0, w);
        let want = common::direct_eval(&h, s);
        let got = common::direct_eval(&r.system, s);
        assert!((&got - &want).camax() <= 1e-8 * (1.0 + want.camax()));
    }
}

#[test]
fn reduce_error_is_within_twice_the_discarded_sum() {
    let h = common::realization("ttp");
    let g = passify::passify_iterative(&h, 2, &quick()).unwrap().g;
    for tol in [1e-9, 1e-6, 1e-4] {
        let red = passify::reduce(&g, tol).unwrap();
        if red.rolled_back {
            assert_eq!(red.system, g);
            continue;
        }
        let mut worst: f64 = 0.0;
        for w in common::log_grid(1e-4, 1e6, 400) {
            let s = Complex64::new(0.0, w);
            let diff = common::direct_eval(&red.system, s) - common::direct_eval(&g, s);
            worst = worst.max(common::spectral_norm_power(&diff));
        }
        assert!(worst <= 2.0 * red.discarded_sum + 1e-10, "tol {tol}: {worst} vs {}", red.discarded_sum);
    }
}
