use sudsq::basis::{flip_operator, gellmann_basis, spin_matrices};
use sudsq::correlations::{collective_bundle, two_body_bundle};
use sudsq::criteria::{min_margin_enumerated, spin_squeezing_set, xi_spin, xi_sud_collective, xi_sud_two_body};
use sudsq::many_body::{avg_two_body, NQuditState};
use sudsq::models::{noisy_singlet, noisy_singlet_marginal, sud_singlet, thermal_state, HamiltonianSpec, ModelKind};

#[test]
fn maximally_mixed_value() {
    let basis = gellmann_basis(3).unwrap();
    for n in 2..=5 {
        let st = NQuditState::maximally_mixed(3, n).unwrap();
        let xi = xi_sud_collective(&collective_bundle(&st, &basis).unwrap()).unwrap();
        assert!((xi.value - 4.0 * n as f64 / 3.0).abs() < 1e-9);
        assert!(!xi.detected);
    }
}

#[test]
fn singlet_values_and_marginal() {
    let basis = gellmann_basis(3).unwrap();
    let s = sud_singlet(3, 3).unwrap();
    let av = avg_two_body(&s).unwrap();
    assert!((av.expectation(&flip_operator(3).unwrap()) + 1.0).abs() < 1e-10);
    let tb = two_body_bundle(&av, &basis).unwrap();
    for k in 0..8 {
        assert!((tb.gamma_av2[(k, k)] + 1.0 / 3.0).abs() < 1e-10);
    }
    let (best, subset) = min_margin_enumerated(&collective_bundle(&s, &basis).unwrap()).unwrap();
    assert!((best + 12.0).abs() < 1e-9);
    assert!(subset.is_empty());

    let m6 = noisy_singlet_marginal(6, 3, 0.0).unwrap();
    assert!((xi_sud_two_body(&m6, 6, &basis).unwrap().value + 24.0).abs() < 1e-9);
    let full6 = noisy_singlet(3, 3, 0.75).unwrap();
    let v = xi_sud_collective(&collective_bundle(&full6, &basis).unwrap()).unwrap();
    assert!(v.value.abs() < 1e-9 && v.boundary);
}

#[test]
fn spin_criteria_on_thermal_states() {
    let spin = spin_matrices(3).unwrap();
    let h2 = HamiltonianSpec::new(ModelKind::SudSinglet, 2, 3).build().unwrap();
    for t in [0.0, 0.1, 1.0, 5.0] {
        let st = thermal_state(&h2, 3, 2, t).unwrap();
        assert!(!spin_squeezing_set(&st, &spin).unwrap().detected, "T={t}");
        assert!(!xi_spin(&avg_two_body(&st).unwrap(), 2, &spin).unwrap().detected, "T={t}");
    }
    let h4 = HamiltonianSpec::new(ModelKind::Spin, 4, 3).with_gamma(1.0).build().unwrap();
    let cold = thermal_state(&h4, 3, 4, 0.1).unwrap();
    assert!(spin_squeezing_set(&cold, &spin).unwrap().detected);

    let m4 = noisy_singlet_marginal(4, 3, 0.0).unwrap();
    assert!(xi_spin(&m4, 4, &spin).unwrap().value < 0.0);
}
