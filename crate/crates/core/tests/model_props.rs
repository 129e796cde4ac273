//! Cross-checks between the master equation, the steady-state routes, the
//! QFI formulas and the entanglement measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steadyqfi::entanglement::min_partial_transpose_eigenvalue;
use steadyqfi::qlinalg::{kron, pauli};
use steadyqfi::*;

/// r in linspace(0.1, 20, 5), gamma in linspace(0.01, 3, 5), g in {gamma, 2.5, 5 gamma}.
fn grid() -> Vec<ModelParams> {
    let lin = |a: f64, b: f64, k: usize| a + (b - a) * k as f64 / 4.0;
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let (r, gamma) = (lin(0.1, 20.0, i), lin(0.01, 3.0, j));
            for g in [gamma, 2.5, 5.0 * gamma] {
                out.push(ModelParams::new(r, gamma, g).unwrap());
            }
        }
    }
    out
}

fn random_hermitian(rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for i in 0..4 {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..4 {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn random_state_vector(rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..4).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn random_direction(rng: &mut impl Rng) -> Direction {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if let Ok(d) = Direction::new(v[0], v[1], v[2]) {
            return d;
        }
    }
}

fn random_unitary2(rng: &mut impl Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(2);
    h[(0, 0)] = C64::new(rng.gen_range(-3.0..3.0), 0.0);
    h[(1, 1)] = C64::new(rng.gen_range(-3.0..3.0), 0.0);
    let z = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    h[(0, 1)] = z;
    h[(1, 0)] = z.conj();
    qlinalg::hermitian_eig(&h).unwrap().reconstruct_with(|l| C64::from_polar(1.0, l))
}

fn closed(p: &ModelParams) -> DensityMatrix {
    closed_form_steady_state(p).unwrap()
}

#[test]
fn liouvillian_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = ModelParams::new(1.3, 0.7, 2.1).unwrap();
    for _ in 0..20 {
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (x, y) = (random_hermitian(&mut rng), random_hermitian(&mut rng));
        let combo = &x.scale_real(a) + &y.scale_real(b);
        let lhs = liouvillian_apply(&p, &combo).unwrap();
        let rhs = &liouvillian_apply(&p, &x).unwrap().scale_real(a) + &liouvillian_apply(&p, &y).unwrap().scale_real(b);
        assert!((&lhs - &rhs).max_abs() <= 1e-11);
    }
}

#[test]
fn liouvillian_annihilates_trace_and_keeps_hermiticity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in grid().iter().step_by(7) {
        for _ in 0..5 {
            let rho = random_hermitian(&mut rng);
            let d = liouvillian_apply(p, &rho).unwrap();
            assert!(d.trace().norm() <= 1e-12);
            assert!(d.is_hermitian(1e-12));
        }
    }
}

#[test]
fn superoperator_matches_direct_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = [ModelParams::new(1.0, 0.5, 2.5).unwrap(), ModelParams::new(14.0, 3.0, 0.2).unwrap()];
    for p in &params {
        let l = liouvillian_superoperator(p);
        for _ in 0..50 {
            let rho = random_hermitian(&mut rng);
            let direct = liouvillian_apply(p, &rho).unwrap().vectorize();
            let via_super = l.apply(&rho.vectorize());
            let diff = direct.iter().zip(&via_super).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-11, "{diff}");
        }
    }
}

#[test]
fn liouvillian_rejects_wrong_dimension() {
    let p = ModelParams::new(1.0, 0.5, 2.5).unwrap();
    assert!(matches!(liouvillian_apply(&p, &ComplexMatrix::identity(2)), Err(Error::BadDimension { .. })));
}

#[test]
fn closed_form_is_a_fixed_point_on_the_grid() {
    for p in grid() {
        let rho = closed(&p);
        assert!(liouvillian_apply(&p, rho.matrix()).unwrap().max_abs() <= 1e-10, "{p:?}");
    }
}

#[test]
fn steady_state_routes_agree_on_the_grid() {
    for p in grid() {
        let a = steady_state(&p, SteadyStateMethod::ClosedForm).unwrap();
        let b = steady_state(&p, SteadyStateMethod::Nullspace).unwrap();
        let c = steady_state(&p, SteadyStateMethod::Integrate).unwrap();
        assert!((a.matrix() - b.matrix()).max_abs() <= 1e-8, "{p:?}");
        assert!((a.matrix() - c.matrix()).max_abs() <= 1e-8, "{p:?}");
        assert!((b.matrix() - c.matrix()).max_abs() <= 1e-8, "{p:?}");
    }
}

#[test]
fn quadratic_form_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spin = collective_spin_ops(2).unwrap();
    for (r, gamma, g) in [(14.0, 0.5, 2.5), (1.0, 0.01, 0.05), (1.0, 0.5, 2.5), (2.3, 0.5, 2.5)] {
        let rho = closed(&ModelParams::new(r, gamma, g).unwrap());
        let c = c_matrix(&rho, &spin).unwrap();
        for _ in 0..100 {
            let n = random_direction(&mut rng);
            let v = n.components();
            let form: f64 = (0..3).flat_map(|k| (0..3).map(move |l| (k, l))).map(|(k, l)| v[k] * c[k][l] * v[l]).sum();
            let f = qfi_direction(&rho, &n, &spin).unwrap();
            assert!((f - form).abs() <= 1e-9);
        }
    }
}

#[test]
fn mixed_formula_reduces_to_variance_on_pure_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spin = collective_spin_ops(2).unwrap();
    for _ in 0..50 {
        let psi = random_state_vector(&mut rng);
        let n = random_direction(&mut rng);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let mixed = qfi_direction(&rho, &n, &spin).unwrap();
        let pure = qfi_pure(&psi, &n, &spin).unwrap();
        assert!((mixed - pure).abs() <= 1e-8, "{mixed} vs {pure}");
    }
}

#[test]
fn mean_qfi_bounds_and_block_structure_on_the_grid() {
    let spin = collective_spin_ops(2).unwrap();
    for p in grid() {
        let rho = closed(&p);
        let res = mean_qfi_max(&rho, &spin).unwrap();
        assert!(res.mean_f >= 0.0 && res.mean_f <= 2.0 + 1e-9);
        assert_eq!(res.mean_f, res.lambda_max / 2.0);
        classify(res.mean_f, 2).unwrap();
        let c = res.c;
        assert!(c[0][1].abs() <= 1e-9 && c[0][2].abs() <= 1e-9, "{p:?}");
        assert!((c[1][1] - c[2][2]).abs() <= 1e-9, "{p:?}");
    }
}

#[test]
fn qfi_is_convex_under_mixing() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let spin = collective_spin_ops(2).unwrap();
    let states: Vec<DensityMatrix> = grid().iter().step_by(5).map(closed).collect();
    for pair in states.windows(2) {
        let mix = DensityMatrix::new(&pair[0].matrix().scale_real(0.5) + &pair[1].matrix().scale_real(0.5)).unwrap();
        for _ in 0..10 {
            let n = random_direction(&mut rng);
            let f_mix = qfi_direction(&mix, &n, &spin).unwrap();
            let bound = 0.5 * qfi_direction(&pair[0], &n, &spin).unwrap() + 0.5 * qfi_direction(&pair[1], &n, &spin).unwrap();
            assert!(f_mix <= bound + 1e-9);
        }
    }
}

#[test]
fn qfi_is_invariant_under_its_own_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spin = collective_spin_ops(2).unwrap();
    let rho = closed(&ModelParams::new(14.0, 0.5, 2.5).unwrap());
    for _ in 0..20 {
        let n = random_direction(&mut rng);
        let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let turned = rotate(&rho, &n, phi, &spin).unwrap();
        let before = qfi_direction(&rho, &n, &spin).unwrap();
        let after = qfi_direction(&turned, &n, &spin).unwrap();
        assert!((before - after).abs() <= 1e-9);
        assert!((turned.matrix().trace() - C64::new(1.0, 0.0)).norm() <= 1e-10);
    }
}

#[test]
fn large_reset_approaches_the_product_state_oracle() {
    let spin = collective_spin_ops(2).unwrap();
    let plus_plus = [C64::new(0.5, 0.0); 4];
    let oracle = [Direction::X, Direction::Y, Direction::Z]
        .iter()
        .map(|d| qfi_pure(&plus_plus, d, &spin).unwrap())
        .fold(0.0, f64::max)
        / 2.0;
    assert!((oracle - 1.0).abs() < 1e-12);
    let mut last = f64::INFINITY;
    for r in [1e2, 1e3, 1e4, 1e5] {
        let rho = closed(&ModelParams::new(r, 0.5, 2.5).unwrap());
        let mean_f = mean_qfi_max(&rho, &spin).unwrap().mean_f;
        let gap = (mean_f - oracle).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-4);
}

#[test]
fn entanglement_measures_are_local_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (r, gamma, g) in [(14.0, 0.5, 2.5), (1.0, 0.01, 0.05), (3.0, 0.2, 1.0)] {
        let rho = closed(&ModelParams::new(r, gamma, g).unwrap());
        let (c0, n0) = (concurrence(&rho).unwrap(), negativity(&rho).unwrap());
        for _ in 0..20 {
            let u = kron(&random_unitary2(&mut rng), &random_unitary2(&mut rng));
            let moved = DensityMatrix::new((&(&u * rho.matrix()) * &u.adjoint()).hermitian_part()).unwrap();
            assert!((concurrence(&moved).unwrap() - c0).abs() <= 1e-9);
            assert!((negativity(&moved).unwrap() - n0).abs() <= 1e-9);
        }
    }
}

#[test]
fn negativity_vanishes_for_ppt_states() {
    for p in grid() {
        let rho = closed(&p);
        if min_partial_transpose_eigenvalue(&rho).unwrap() >= -1e-10 {
            assert_eq!(negativity(&rho).unwrap(), 0.0, "{p:?}");
        } else {
            assert!(negativity(&rho).unwrap() > 0.0);
        }
    }
}

#[test]
fn reported_points_show_negativity_half_of_concurrence() {
    for (r, gamma, g) in [(14.0, 0.5, 2.5), (1.0, 0.01, 0.05)] {
        let rho = closed(&ModelParams::new(r, gamma, g).unwrap());
        let (c, n) = (concurrence(&rho).unwrap(), negativity(&rho).unwrap());
        assert!((n - c / 2.0).abs() <= 5e-4);
    }
}

#[test]
fn hamiltonian_is_zz() {
    let p = ModelParams::new(0.3, 0.2, 1.7).unwrap();
    let zz = kron(&pauli::sigma_z(), &pauli::sigma_z()).scale_real(1.7);
    assert_eq!(hamiltonian(&p), zz);
}
