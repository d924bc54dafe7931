use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wqed::scattering::{GreenEvaluator, PortPair, TimeDomainOracle, TwoPhotonPorts, Waveguide};
use wqed::LatticeParams;

const STEPS: usize = 1 << 14;

fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn two_point_matches_spectral_sum() {
    let p = LatticeParams { n: 2, h: 0.6, ..Default::default() };
    let ev = GreenEvaluator::new(&p).unwrap();
    let oracle = TimeDomainOracle::with_default_window(&p, STEPS).unwrap();
    for ports in [PortPair::TRANSMISSION, PortPair::REFLECTION] {
        for q in [-1.2, -0.3, 0.1, 0.8, 1.5] {
            let err = rel(oracle.g2(q, ports).unwrap(), ev.g2_reduced(q, ports));
            assert!(err < 1e-3, "{ports:?} q={q}: {err:e}");
        }
    }
}

#[test]
fn four_point_matches_spectral_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, u) in [(2, 5.0), (3, 0.0), (3, 5.0)] {
        let p = LatticeParams { n, u, h: rng.random_range(0.0..2.0), ..Default::default() };
        let ev = GreenEvaluator::new(&p).unwrap();
        let oracle = TimeDomainOracle::with_default_window(&p, STEPS).unwrap();
        for _ in 0..3 {
            let (p1, p2, q1) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let q2 = p1 + p2 - q1;
            let ports = TwoPhotonPorts { input: Waveguide::W1, first: Waveguide::WN, second: Waveguide::W1 };
            let g1 = ev.g4_g1(p1, p2, q1, q2, ports);
            let g2 = ev.g4_g2(p1, p2, q1, q2, ports);
            assert!(rel(oracle.g4_g1(p1, p2, q1, q2, ports).unwrap(), g1) < 1e-3);
            assert!(rel(oracle.g4_g2(p1, p2, q1, q2, ports).unwrap(), g2) < 1e-3);
        }
    }
}
