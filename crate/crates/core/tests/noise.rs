//! Statistical checks of the trajectory noise engine.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use topocircuit::floquet::{build_u1_circuit, FloquetParams1D};
use topocircuit::noise::*;
use topocircuit::state::QuantumState;
use topocircuit::{Circuit, StateVector};

fn fig3(alpha: f64, beta: f64) -> Circuit {
    build_u1_circuit(&FloquetParams1D::new(alpha, beta, 4, 3)).unwrap()
}

fn exact(c: &Circuit, input: &StateVector) -> StateVector {
    let mut s = input.clone();
    s.apply_circuit(c).unwrap();
    s
}

fn argmax(p: &[f64]) -> usize {
    p.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap()
}

#[test]
fn noise_free_limit() {
    let c = fig3(PI, 1.9 * PI);
    let input = StateVector::excited(8, 1).unwrap();
    let rec = run_noisy(&c, &input, &NoiseModel::ideal(8192, 11)).unwrap();
    let truth = exact(&c, &input);
    let expect = truth.excitation_distribution();
    let f = rec.excitation_frequencies();
    for q in 0..8 {
        let sigma = (expect[q] * (1.0 - expect[q]) / 8192.0).sqrt().max(1.0 / 8192.0);
        assert!((f[q] - expect[q]).abs() <= 3.0 * sigma, "q={q}: {} vs {}", f[q], expect[q]);
    }
    // total variation over bitstrings
    let p = truth.probabilities();
    let mut tv = 0.0;
    for (i, pi) in p.iter().enumerate() {
        let observed = rec.counts.get(&format!("{i:08b}")).copied().unwrap_or(0) as f64 / 8192.0;
        tv += (observed - pi).abs();
    }
    assert!(tv / 2.0 < 0.05, "TV = {tv}");
}

#[test]
fn certain_flips_complement_outcomes() {
    let c = fig3(0.1 * PI, 0.7 * PI);
    let input = StateVector::excited(8, 0).unwrap();
    let ideal = NoiseModel::ideal(2000, 5);
    let flipped = NoiseModel {
        readout: Readout::Uniform(ReadoutError::symmetric(1.0)),
        ..ideal.clone()
    };
    let a = run_noisy(&c, &input, &ideal).unwrap();
    let b = run_noisy(&c, &input, &flipped).unwrap();
    let complemented: BTreeMap<String, u64> = a
        .counts
        .iter()
        .map(|(k, &v)| (k.chars().map(|ch| if ch == '0' { '1' } else { '0' }).collect(), v))
        .collect();
    assert_eq!(b.counts, complemented);
}

#[test]
fn fig3g_survives_default_noise() {
    let c = fig3(PI, 1.9 * PI);
    let input = StateVector::excited(8, 0).unwrap();
    let rec = run_noisy(&c, &input, &NoiseModel::default()).unwrap();
    assert_eq!(argmax(&rec.excitation_frequencies()), 0);
    assert_eq!(rec.counts.values().sum::<u64>(), 8192);
}

#[test]
fn mitigation_recovers_marginals() {
    let c = fig3(1.9 * PI, 0.4 * PI);
    let input = StateVector::excited(8, 1).unwrap();
    let model = NoiseModel {
        p1: 0.0,
        p2: 0.0,
        readout: Readout::Uniform(ReadoutError::symmetric(0.03)),
        shots: 8192,
        seed: 21,
    };
    let rec = run_noisy(&c, &input, &model).unwrap();
    let truth = exact(&c, &input).excitation_distribution();
    let fixed = readout_mitigate(&rec, &model).unwrap();
    for q in 0..8 {
        // binomial error of the raw frequency, scaled by the inversion
        let f = rec.excitation_frequencies()[q];
        let sigma = (f * (1.0 - f) / 8192.0).sqrt().max(1.0 / 8192.0) / 0.94;
        assert!((fixed[q] - truth[q]).abs() <= 3.0 * sigma, "q={q}: {} vs {}", fixed[q], truth[q]);
    }
}

#[test]
fn per_qubit_readout() {
    let c = Circuit::new(2);
    let input = StateVector::vacuum(2).unwrap();
    let model = NoiseModel {
        p1: 0.0,
        p2: 0.0,
        readout: Readout::PerQubit(vec![ReadoutError::IDEAL, ReadoutError { e_given_g: 1.0, g_given_e: 0.0 }]),
        shots: 10,
        seed: 0,
    };
    let rec = run_noisy(&c, &input, &model).unwrap();
    assert_eq!(rec.counts, BTreeMap::from([("10".to_string(), 10)]));
}

#[test]
fn degradation_is_monotone_in_p2() {
    let c = fig3(PI, 1.9 * PI);
    let input = StateVector::excited(8, 0).unwrap();
    let shots = 1024;
    let seeds = 32;
    let stats: Vec<(f64, f64)> = [0.0, 0.01, 0.03]
        .iter()
        .map(|&p2| {
            let samples: Vec<f64> = (0..seeds)
                .map(|seed| {
                    let model = NoiseModel {
                        p1: 1e-3,
                        p2,
                        readout: Readout::Uniform(ReadoutError::symmetric(0.03)),
                        shots,
                        seed,
                    };
                    run_noisy(&c, &input, &model).unwrap().excitation_frequencies()[0]
                })
                .collect();
            let mean = samples.iter().sum::<f64>() / seeds as f64;
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
            (mean, (var / seeds as f64).sqrt())
        })
        .collect();
    for w in stats.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let sigma = (hi.1 * hi.1 + lo.1 * lo.1).sqrt();
        assert!(lo.0 <= hi.0 + 3.0 * sigma, "{stats:?}");
    }
    assert!(stats[2].0 < stats[0].0);
}
