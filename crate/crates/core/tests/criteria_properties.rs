use proptest::prelude::*;
use stable_ergo_core::criteria::*;
use stable_ergo_core::sigma::*;

const ALPHAS: [f64; 3] = [1.2, 1.5, 1.8];

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn shipped() -> Vec<SigmaProfile> {
    let mut v: Vec<SigmaProfile> = [1.0, 1.5, 2.0, 3.0].iter().map(|&g| SigmaProfile::polynomial(g).unwrap()).collect();
    for text in ["(1+abs(x))^2*(2+abs(x))^-0.5", "(1+abs(x-1))^1.5", "max(1,abs(x))^2", "exp(abs(x))"] {
        v.push(SigmaProfile::expression(text).unwrap());
    }
    v
}

#[test]
fn quadrature_matches_closed_forms() {
    for gamma in [1.0, 1.5, 2.0, 3.0] {
        for alpha in ALPHAS {
            let p = SigmaProfile::polynomial(gamma).unwrap();
            let closed = polynomial_closed_forms(gamma, alpha).unwrap();
            let dp = delta_plus(&p, alpha).unwrap().finite().unwrap();
            let d = delta(&p, alpha).unwrap().finite().unwrap();
            assert!(rel(dp, closed.delta_plus.finite().unwrap()) <= 1e-5, "δ₊ γ={gamma} α={alpha}");
            assert!(rel(d, closed.delta.finite().unwrap()) <= 1e-5, "δ γ={gamma} α={alpha}");
            let b = rate_bounds(&p, alpha).unwrap();
            let cb = closed.bounds;
            assert!(rel(b.lambda0_lower.unwrap(), cb.lambda0_lower.unwrap()) <= 1e-5);
            assert!(rel(b.lambda0_upper.unwrap(), cb.lambda0_upper.unwrap()) <= 1e-5);
            assert!(rel(b.lambda0_halfline_lower.unwrap(), cb.lambda0_halfline_lower.unwrap()) <= 1e-5);
            assert!((b.lambda0_upper.unwrap() / b.lambda0_lower.unwrap() - 32.0).abs() <= 1e-10 * 32.0);
        }
    }
}

#[test]
fn delta_never_exceeds_i() {
    for p in shipped() {
        for alpha in ALPHAS {
            if let (Some(d), Some(i)) = (delta(&p, alpha).unwrap().finite(), i_integral(&p, alpha).unwrap().finite()) {
                assert!(d <= i * (1.0 + 1e-8), "{alpha}: δ={d} I={i}");
            }
        }
    }
}

#[test]
fn even_profiles_have_equal_one_sided_sups() {
    for p in shipped().into_iter().filter(SigmaProfile::is_even) {
        for alpha in ALPHAS {
            let (a, b) = (delta_plus(&p, alpha).unwrap(), delta_minus(&p, alpha).unwrap());
            match (a.finite(), b.finite()) {
                (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * a),
                (None, None) => {}
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn tail_mass_is_nonincreasing_on_a_grid() {
    for p in shipped() {
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let y = 10f64.powf(-2.0 + 0.15 * k as f64);
            let t = tail_mass(&p, 1.5, y).unwrap();
            assert!(t <= prev * (1.0 + 1e-10), "y={y}");
            prev = t;
        }
    }
}

#[test]
fn scaling_sigma_rescales_criteria_and_bounds() {
    let alpha = 1.5;
    for c in [2.0f64, 5.0] {
        let base = SigmaProfile::expression("(1+abs(x))^2").unwrap();
        let scaled = SigmaProfile::expression(&format!("{c}*(1+abs(x))^2")).unwrap();
        let k = c.powf(-alpha);
        for f in [delta, delta_plus, delta_minus, i_integral] {
            let (a, b) = (f(&base, alpha).unwrap().finite().unwrap(), f(&scaled, alpha).unwrap().finite().unwrap());
            assert!(rel(b, k * a) < 1e-6);
        }
        let (a, b) = (rate_bounds(&base, alpha).unwrap(), rate_bounds(&scaled, alpha).unwrap());
        for (x, y) in [
            (a.lambda0_lower, b.lambda0_lower),
            (a.lambda1_lower, b.lambda1_lower),
            (a.lambda0_halfline_lower, b.lambda0_halfline_lower),
            (a.kappa_lower, b.kappa_lower),
        ] {
            assert!(rel(y.unwrap(), x.unwrap() / k) < 1e-6);
        }
    }
}

fn implies(a: TriState, b: TriState) -> bool {
    a != TriState::Yes || b == TriState::Yes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn implication_chain_holds(
        scale in 0.5f64..3.0,
        shift in -2.0f64..2.0,
        gamma in 0.3f64..3.0,
        log_power in 0u32..2,
        alpha in prop_oneof![Just(1.2), Just(1.5), Just(1.8)],
    ) {
        let text = if log_power == 0 {
            format!("{scale}*(1+abs(x-{shift}))^{gamma}")
        } else {
            format!("{scale}*(1+abs(x-{shift}))^{gamma}*log(2+abs(x))")
        };
        let p = SigmaProfile::expression(&text).unwrap();
        let r = classify(&p, alpha).unwrap();
        prop_assert!(implies(r.strongly_ergodic, r.exponentially_ergodic), "{text}: {r:?}");
        prop_assert!(implies(r.exponentially_ergodic, r.ergodic), "{text}: {r:?}");
        if r.ergodic == TriState::No {
            prop_assert!(r.exponentially_ergodic == TriState::No && r.strongly_ergodic == TriState::No);
        }
    }
}
