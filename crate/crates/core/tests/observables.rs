use wqed::observables::{
    effective_lambda2, loss_sweep, mobility_map, t2, t2_coherent, AlphaSpec, MapOptions, Quantity, ScatteringCell,
    T2Options,
};
use wqed::scattering::{PortPair, PulseShape};
use wqed::LatticeParams;

fn delta() -> T2Options {
    T2Options { pulse: PulseShape::Delta, ..Default::default() }
}

#[test]
fn sweeps_do_not_depend_on_worker_count() {
    let p = LatticeParams { n: 4, u: 2.5, ..Default::default() };
    let run = |workers| {
        let opts = MapOptions { workers: Some(workers), ..Default::default() };
        mobility_map(&p, &[0.3, 1.7, 2.9], &AlphaSpec::List(vec![1, 5, 10]), &[Quantity::T2, Quantity::LogPr], &opts)
            .unwrap()
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a, b);
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.t2.unwrap().to_bits(), y.t2.unwrap().to_bits());
    }
}

#[test]
fn transmission_stays_a_probability() {
    let p = LatticeParams { n: 4, u: 3.5, ..Default::default() };
    let r = mobility_map(&p, &[0.0, 1.0, 3.0], &AlphaSpec::All, &[Quantity::T2, Quantity::T2Coh], &MapOptions::default())
        .unwrap();
    for c in &r.records {
        assert!(c.error.is_none(), "{c:?}");
        for v in [c.t2.unwrap(), c.t2_coh.unwrap()] {
            assert!((0.0..=1.0).contains(&v), "{c:?}");
        }
    }
}

#[test]
fn coherent_input_at_zero_interaction_is_squared_single_photon() {
    let cell = ScatteringCell::new(&LatticeParams { n: 5, ..Default::default() }).unwrap();
    for alpha in [1, 8, 15] {
        let e = cell.closed2.values[alpha - 1];
        let g = cell.evaluator.g2_reduced(0.5 * e, PortPair::TRANSMISSION).norm_sqr();
        let got = t2_coherent(alpha, &cell, &delta()).unwrap().value;
        assert!((got - g * g).abs() < 1e-9, "{got} {}", g * g);
    }
}

#[test]
fn loss_suppresses_every_cell() {
    let p = LatticeParams { n: 4, u: 3.5, ..Default::default() };
    let r = loss_sweep(&p, &[0.0, 0.01, 0.1, 100.0], &[0.5, 2.5], &AlphaSpec::All, &MapOptions::default()).unwrap();
    assert!(r.records.iter().all(|c| c.error.is_none() && !c.flags.iter().any(|f| f == "non_monotone_gamma")));
    let per = r.records.len() / 4;
    let lossless_max = r.records[..per].iter().map(|c| c.t2.unwrap()).fold(0.0, f64::max);
    let strong = r.records[3 * per..].iter().map(|c| c.t2.unwrap()).fold(0.0, f64::max);
    assert!(strong < 1e-6 * lossless_max, "{strong} {lossless_max}");
}

#[test]
fn inverse_length_additivity_without_interaction() {
    // For U = 0 and delta pulses every path is a product of two one-photon
    // transmissions, so -ln T2 is bounded by the one-photon exponents.
    let cell = ScatteringCell::new(&LatticeParams { n: 8, h: 3.0, ..Default::default() }).unwrap();
    let alpha = 18;
    let value = t2(alpha, &cell, &delta()).unwrap().value;
    let set = cell.paths(alpha).unwrap();
    let max_path = set
        .paths
        .iter()
        .map(|&(a, b)| {
            (cell.evaluator.g2_reduced(a, PortPair::TRANSMISSION) * cell.evaluator.g2_reduced(b, PortPair::TRANSMISSION))
                .norm_sqr()
        })
        .fold(0.0, f64::max);
    assert!(value <= max_path && value >= max_path / 8.0);
    assert!(effective_lambda2(value, 8) > 0.0);
}
