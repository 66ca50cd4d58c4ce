use stable_ergo_core::criteria::rate_bounds;
use stable_ergo_core::green::KillingDomain;
use stable_ergo_core::sigma::SigmaProfile;
use stable_ergo_core::spectral::*;

const GRADED: Mesh = Mesh::Graded { h0: None, ratio: None };

#[test]
fn ordering_chain_at_large_radius() {
    let opts = SolveOptions::default();
    for gamma in [1.0, 2.0] {
        let p = SigmaProfile::polynomial(gamma).unwrap();
        for alpha in [1.2, 1.5, 1.8] {
            let lower = variational_lower(&p, alpha, KillingDomain::PuncturedLine, None).unwrap();
            let eig = lambda0_at(&p, alpha, KillingDomain::PuncturedLine, 1e8, GRADED, &opts).unwrap();
            let ray = rayleigh_upper(&p, alpha, &default_x0_grid()).unwrap();
            let upper = rate_bounds(&p, alpha).unwrap().lambda0_upper.unwrap();
            let tag = format!("γ={gamma} α={alpha}: {lower} {} {ray} {upper}", eig.lambda0);
            assert!(eig.ground_state, "{tag}");
            assert!(lower <= 1.1 * eig.lambda0, "{tag}");
            assert!(eig.lambda0 <= 1.1 * ray, "{tag}");
            assert!(ray <= 1.1 * upper, "{tag}");
        }
    }
}

#[test]
fn truncations_decrease_with_radius() {
    let p = SigmaProfile::polynomial(2.0).unwrap();
    let opts = SolveOptions::default();
    let rs = [10.0, 100.0, 1e4, 1e6];
    let res = lambda0_numeric(&p, 1.5, KillingDomain::PuncturedLine, &rs, GRADED, &opts).unwrap();
    assert!(is_monotone(&res, 1e-6), "{:?}", res.iter().map(|r| r.lambda0).collect::<Vec<_>>());
    assert!(res.iter().all(|r| r.ground_state));
}

#[test]
fn smaller_domain_has_larger_eigenvalue() {
    let p = SigmaProfile::polynomial(2.0).unwrap();
    let opts = SolveOptions::default();
    let mut prev = 0.0;
    for d in [KillingDomain::PuncturedLine, KillingDomain::HalfLine] {
        let l = lambda0_at(&p, 1.5, d, 1e4, GRADED, &opts).unwrap().lambda0;
        assert!(l >= prev, "{}: {l} < {prev}", d.name());
        prev = l;
    }
}

#[test]
fn energy_splits_into_graph_and_killing_parts() {
    let p = SigmaProfile::polynomial(1.5).unwrap();
    let grid = Grid::uniform(KillingDomain::PuncturedLine, 5.0, 64).unwrap();
    let sys = assemble_form(&p, 1.5, &grid, &SolveOptions::default()).unwrap();
    let kill = sys.killing();
    let n = sys.dim();
    let f: Vec<f64> = (0..n).map(|i| (0.37 * i as f64).sin() + 0.2).collect();
    let mut graph = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            graph += sys.weight(i, j) * (f[i] - f[j]).powi(2);
        }
    }
    let killed: f64 = (0..n).map(|i| kill[i] * f[i] * f[i]).sum();
    let e = sys.energy(&f);
    assert!(((graph + killed) - e).abs() <= 1e-10 * e.abs(), "{e} vs {}", graph + killed);
    assert!(e > 0.0);
}
