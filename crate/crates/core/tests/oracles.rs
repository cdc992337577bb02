//! Library results against independent reference computations.

mod common;

use common::*;
use lindscope::dynamics::propagator;
use lindscope::linalg::{hermitian_eigenvalues, matrix_exp, spectral_norm};
use lindscope::metrics::{analyze, nonnormality_from_parts};
use lindscope::models::{self, random};
use lindscope::superop::{apply, devectorize, liouvillian, vectorize, Superoperator};
use lindscope::{ComplexMatrix, RegimeThresholds};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_reference_is_sane() {
    let ev = jacobi_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] - 3.0).abs() < 1e-15);
    let ev = hermitian_eigenvalues_oracle(&models::pauli(models::Axis::Y));
    assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    // σ(diag(3, -4i)) = {4, 3}
    let m = ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(0.0, -4.0)]);
    assert!((spectral_norm_oracle(&m) - 4.0).abs() < 1e-14);
}

#[test]
fn superoperator_matches_direct_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..30 {
        let m = random::sweep_model(&mut rng).unwrap();
        let direct = liouvillian_by_action(m.hamiltonian(), m.jumps());
        assert!(max_abs_diff(liouvillian(&m).matrix(), &direct) <= 1e-12);
    }
    let jc = models::jaynes_cummings(1.0, 1.0, 0.1, 3).unwrap();
    let direct = liouvillian_by_action(jc.hamiltonian(), jc.jumps());
    assert!(max_abs_diff(liouvillian(&jc).matrix(), &direct) <= 1e-12);
}

#[test]
fn apply_matches_operator_space_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..20 {
        let m = random::sweep_model(&mut rng).unwrap();
        let x = random::gaussian(&mut rng, m.dim(), m.dim());
        let got = apply(&liouvillian(&m), &x).unwrap();
        let want = lindblad_action(m.hamiltonian(), m.jumps(), &x);
        assert!(max_abs_diff(&got, &want) <= 1e-12);
        assert_eq!(devectorize(&vectorize(&x).unwrap(), m.dim()).unwrap(), x);
    }
}

#[test]
fn spectral_norm_matches_gram_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for n in 1..=9 {
        let a = random::gaussian(&mut rng, n, n);
        let (got, want) = (spectral_norm(&a), spectral_norm_oracle(&a));
        assert!((got - want).abs() <= 1e-12 * want, "n={n}: {got} vs {want}");
    }
}

#[test]
fn hermitian_eigenvalues_match_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for n in 1..=8 {
        let h = random::hermitian(&mut rng, n);
        let got = hermitian_eigenvalues(&h).unwrap();
        let want = hermitian_eigenvalues_oracle(&h);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-12 * (1.0 + w.abs()));
        }
    }
}

#[test]
fn metrics_match_reference_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..40 {
        let m = random::sweep_model(&mut rng).unwrap();
        let s = liouvillian(&m);
        let got = analyze(&s, &RegimeThresholds::default());
        let (delta, eta) = (delta_oracle(s.matrix()), eta_oracle(s.matrix()));
        assert!((got.delta - delta).abs() <= 1e-9 * (1.0 + delta));
        assert!((got.eta - eta).abs() <= 1e-9 * (1.0 + eta));
        assert!((nonnormality_from_parts(&s) - eta).abs() <= 1e-9 * (1.0 + eta));
    }
}

#[test]
fn propagator_matches_runge_kutta() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..10 {
        let m = random::sweep_model(&mut rng).unwrap();
        let rho = random::hermitian_state(&mut rng, m.dim());
        let s = liouvillian(&m);
        let t = 1.0 / (1.0 + spectral_norm(s.matrix()));
        let got = apply(&propagator(&s, t).unwrap(), &rho).unwrap();
        let want = rk4(m.hamiltonian(), m.jumps(), &rho, t, 2000);
        assert!(max_abs_diff(&got, &want) <= 1e-11);
    }
}

#[test]
fn exponential_of_a_jordan_block() {
    // exp([[a, 1], [0, a]]) = e^a [[1, 1], [0, 1]]
    let a = c(-0.3, 0.7);
    let j = ComplexMatrix::from_row_major(2, 2, vec![a, c(1.0, 0.0), c(0.0, 0.0), a]).unwrap();
    let e = matrix_exp(&j).unwrap();
    let ea = a.exp();
    let want = ComplexMatrix::from_row_major(2, 2, vec![ea, ea, c(0.0, 0.0), ea]).unwrap();
    assert!(max_abs_diff(&e, &want) <= 1e-14);
    let zero = Superoperator::zero(2);
    assert_eq!(propagator(&zero, 3.0).unwrap(), Superoperator::identity(2));
}
