use proptest::prelude::*;
use stable_ergo_core::green::*;
use stable_ergo_core::quad::QuadSpec;
use stable_ergo_core::sigma::SigmaProfile;
use stable_ergo_core::AlphaConstants;

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.2), Just(1.5), Just(1.8)]
}

fn coord() -> impl Strategy<Value = f64> {
    (-4.0f64..2.0, any::<bool>()).prop_map(|(e, neg)| if neg { -(10f64.powf(e)) } else { 10f64.powf(e) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn punctured_two_sided_bounds(a in alpha(), x in coord(), y in coord()) {
        let c = AlphaConstants::new(a).unwrap();
        let g = green_punctured(x, y, a).unwrap();
        let m = x.abs().min(y.abs()).powf(a - 1.0);
        prop_assert!(g <= c.omega() * m * (1.0 + 1e-12) + 1e-12);
        if x * y > 0.0 {
            prop_assert!(g >= 0.5 * c.omega() * m * (1.0 - 1e-12) - 1e-12);
        }
        prop_assert!((g - green_punctured(y, x, a).unwrap()).abs() <= 1e-12 * g.abs().max(1.0));
    }

    #[test]
    fn halfline_majorant(a in alpha(), x in 1e-4f64..100.0, y in 1e-4f64..100.0) {
        let c = AlphaConstants::new(a).unwrap();
        let g = green_halfline(x, y, a).unwrap();
        prop_assert!(g >= 0.0);
        prop_assert!((a - 1.0) * c.gamma_half_sq() * g <= x.min(y).powf(a - 1.0) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn complement_nonnegative(a in alpha(), x in 1.0f64..50.0, y in 1.0f64..50.0, sx in any::<bool>(), sy in any::<bool>()) {
        let x = if sx { x + 1e-12 } else { -x - 1e-12 };
        let y = if sy { y + 1e-12 } else { -y - 1e-12 };
        prop_assert!(green_complement_interval(x, y, a).unwrap() >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernels_are_symmetric(a in alpha(), x in 1.01f64..40.0, y in 1.01f64..40.0) {
        let s = |f: fn(f64, f64, f64) -> stable_ergo_core::Result<f64>| {
            let (u, v) = (f(x, y, a).unwrap(), f(y, x, a).unwrap());
            (u - v).abs() <= 1e-10 * u.abs().max(1e-300)
        };
        prop_assert!(s(green_halfline));
        prop_assert!(s(green_complement_interval));
        prop_assert!(s(|x, y, a| green_complement_interval(-x, y, a)));
    }

    #[test]
    fn bigger_killing_set_means_smaller_kernel(a in alpha(), x in 1.01f64..40.0, y in 1.01f64..40.0) {
        let gc = green_complement_interval(x, y, a).unwrap();
        let gp = green_punctured(x, y, a).unwrap();
        prop_assert!(gc <= gp * (1.0 + 1e-10));
        prop_assert!(green_halfline(x, y, a).unwrap() <= gp * (1.0 + 1e-10));
    }
}

#[test]
fn exit_time_profile_stays_below_the_analytic_bound() {
    for (gamma, alpha) in [(2.0, 1.5), (1.5, 1.2), (3.0, 1.8), (1.5, 1.5)] {
        let p = SigmaProfile::polynomial(gamma).unwrap();
        let m = mean_exit_bound(&p, alpha).unwrap();
        assert!(m.sharper > 0.0 && m.sharper <= m.bound, "{gamma} {alpha}: {m:?}");
    }
}

#[test]
fn ii_bounds_for_two_profiles() {
    let alpha = 1.5;
    let c = AlphaConstants::new(alpha).unwrap();
    for gamma in [2.0, 1.5] {
        let p = SigmaProfile::polynomial(gamma).unwrap();
        let d = stable_ergo_core::sigma::delta(&p, alpha).unwrap().finite().unwrap();
        let dp = stable_ergo_core::sigma::delta_plus(&p, alpha).unwrap().finite().unwrap();
        let ii_bound = 4.0 * c.omega() * d;
        let ii_plus_bound = 4.0 * dp / ((alpha - 1.0) * c.gamma_half_sq());
        for k in 0..10 {
            let x = 10f64.powf(-3.0 + 0.5 * k as f64);
            assert!(ii_operator(&p, alpha, x, None).unwrap() <= ii_bound + 1e-6);
            assert!(ii_operator(&p, alpha, -x, None).unwrap() <= ii_bound + 1e-6);
            assert!(ii_plus_operator(&p, alpha, x).unwrap() <= ii_plus_bound + 1e-6);
        }
    }
}

#[test]
fn green_operators_shrink_with_the_domain() {
    let p = SigmaProfile::polynomial(2.0).unwrap();
    let f = TestFn::constant(1.0);
    let spec = QuadSpec::with_rel_tol(1e-9);
    for x in [1.5, 3.0, 20.0] {
        let u = |d| green_apply(&GreenKernel::new(d, 1.5).unwrap(), &p, &f, x, &spec).unwrap().value;
        let (up, uc, uh) = (u(KillingDomain::PuncturedLine), u(KillingDomain::ComplementUnitInterval), u(KillingDomain::HalfLine));
        assert!(uc <= up && uh <= up, "{x}: {up} {uc} {uh}");
    }
}
