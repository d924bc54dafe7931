use approx::assert_relative_eq;
use nalgebra::DVector;
use proptest::prelude::*;
use wqed::model::{
    apply_annihilation, apply_creation, build_h1, build_h2, compare_sw_doublon, creation_matrix, Sector, TwoParticleBasis,
    SW_BOUND_CONSTANT,
};
use wqed::spectral::eig_hermitian;
use wqed::LatticeParams;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noninteracting_pairs_sum_single_particle_energies(n in 1usize..7, h in 0.0f64..4.0, j in 0.2f64..1.5) {
        let p = LatticeParams { n, h, j, u: 0.0, ..Default::default() };
        let e1 = eig_hermitian(&build_h1(&p).unwrap()).unwrap().values;
        let e2 = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(n)).unwrap()).unwrap().values;
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a..n {
                pairs.push(e1[a] + e1[b]);
            }
        }
        for (x, y) in sorted(pairs).iter().zip(&e2) {
            prop_assert!((x - y).abs() < 1e-10, "{x} {y}");
        }
    }

    #[test]
    fn two_particle_hamiltonian_is_real_symmetric(n in 1usize..7, h in 0.0f64..4.0, u in 0.0f64..20.0) {
        let p = LatticeParams { n, h, u, ..Default::default() };
        let m = build_h2(&p, &TwoParticleBasis::new(n)).unwrap().matrix;
        prop_assert_eq!(m.nrows(), n * (n + 1) / 2);
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                prop_assert_eq!(m[(r, c)], m[(c, r)]);
                prop_assert_eq!(m[(r, c)].im, 0.0);
            }
        }
    }

    #[test]
    fn trace_counts_onsite_and_interaction(n in 1usize..8, h in 0.0f64..4.0, u in 0.0f64..20.0) {
        let p = LatticeParams { n, h, u, ..Default::default() };
        let m = build_h2(&p, &TwoParticleBasis::new(n)).unwrap().matrix;
        let eps_sum: f64 = p.onsite_energies().iter().sum();
        let want = (n as f64 + 1.0) * eps_sum + n as f64 * u;
        prop_assert!((m.trace().re - want).abs() < 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn creation_and_annihilation_are_adjoint(n in 1usize..7, site in 0usize..7, seed in any::<u64>()) {
        let site = site % n + 1;
        let d2 = n * (n + 1) / 2;
        let f = |k: usize, s: u64| ((k as f64 + 1.0) * (s % 1000) as f64 * 0.618).sin();
        let x: Vec<num_complex::Complex64> = (0..n).map(|k| f(k, seed).into()).collect();
        let y: Vec<num_complex::Complex64> = (0..d2).map(|k| f(k + 17, seed / 7).into()).collect();
        let cx = apply_creation(n, site, Sector::One, &x);
        let ay = apply_annihilation(n, site, Sector::One, &y);
        let lhs: num_complex::Complex64 = y.iter().zip(&cx).map(|(a, b)| a.conj() * b).sum();
        let rhs: num_complex::Complex64 = ay.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn number_operator_from_creation_matrices() {
    // sum_j a_j^dagger a_j = 2 on the two-particle sector.
    let n = 5;
    let d2 = n * (n + 1) / 2;
    let mut sum = nalgebra::DMatrix::<f64>::zeros(d2, d2);
    for site in 1..=n {
        let c = creation_matrix(n, site, Sector::One);
        sum += &c * c.transpose();
    }
    assert_relative_eq!(sum, nalgebra::DMatrix::identity(d2, d2) * 2.0, epsilon = 1e-14);
}

#[test]
fn vacuum_creation_gives_single_site_states() {
    let n = 4;
    for site in 1..=n {
        let c = creation_matrix(n, site, Sector::Vacuum);
        let v = c.column(0).clone_owned();
        let mut want = DVector::zeros(n);
        want[site - 1] = 1.0;
        assert_eq!(v, want);
    }
}

#[test]
fn doublon_model_stays_within_frozen_bound() {
    for n in 2..=12 {
        let c = compare_sw_doublon(&LatticeParams { n, u: 50.0, h: 1.0, ..Default::default() }).unwrap();
        assert!(c.within_bound(), "N = {n}: {} > {}", c.max_deviation, c.bound);
        assert!((c.bound - SW_BOUND_CONSTANT / 50.0).abs() < 1e-15);
    }
}

#[test]
fn doublon_error_shrinks_with_interaction() {
    let dev = |u: f64| compare_sw_doublon(&LatticeParams { n: 8, u, h: 0.5, ..Default::default() }).unwrap().max_deviation;
    let (a, b) = (dev(25.0), dev(100.0));
    assert!(b < a / 3.0, "{a} {b}");
}
