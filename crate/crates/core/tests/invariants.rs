//! Momentum-space invariants against real-space oracles.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use topocircuit::invariants::bloch::{axis_rotation, quasienergies, Spectrum};
use topocircuit::invariants::phase::open_grid;
use topocircuit::invariants::*;
use topocircuit::subspace::compile_single_excitation;
use topocircuit::{Circuit, Gate, C64};

const ANCHORS: [(f64, f64, i64, i64); 4] = [
    (PI, 0.9 * PI, 0, 0),
    (1.9 * PI, 0.4 * PI, 0, 1),
    (0.1 * PI, 0.7 * PI, 1, 0),
    (PI, 1.9 * PI, 1, 1),
];

/// One 1D cycle on a closed ring of `sites` sites, built gate by gate.
fn ring_cycle(alpha: f64, beta: f64, sites: usize) -> DMatrix<C64> {
    let onsite = (0..sites).map(|s| Gate::composite(alpha / 4.0, 2 * s, 2 * s + 1));
    let bonds = (0..sites).map(|s| Gate::composite(beta / 2.0, 2 * s + 1, (2 * s + 2) % (2 * sites)));
    let mut c = Circuit::new(2 * sites);
    c.push_layer(onsite.clone().collect()).unwrap();
    c.push_layer(bonds.collect()).unwrap();
    c.push_layer(onsite.collect()).unwrap();
    compile_single_excitation(&c).unwrap()
}

/// Plane wave `e^{ikx}` on spin component `spin`.
fn plane_wave(sites: usize, k: f64, spin: usize) -> Vec<C64> {
    let norm = (sites as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); 2 * sites];
    for x in 0..sites {
        v[2 * x + spin] = C64::from_polar(1.0 / norm, k * (x + 1) as f64);
    }
    v
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[test]
fn ring_projects_onto_bloch_matrix() {
    let sites = 64;
    for (alpha, beta) in [(0.1 * PI, 0.7 * PI), (1.3 * PI, 1.1 * PI)] {
        let ring = ring_cycle(alpha, beta, sites);
        for m in [0, 1, 5, 17, 32, 63] {
            let k = 2.0 * PI * m as f64 / sites as f64;
            let bloch = bloch_u1(k, alpha, beta, 1.0);
            let waves = [plane_wave(sites, k, 0), plane_wave(sites, k, 1)];
            for s in 0..2 {
                let image: Vec<C64> = (&ring * DMatrix::from_column_slice(2 * sites, 1, &waves[s]))
                    .iter()
                    .copied()
                    .collect();
                let mut rebuilt = vec![C64::new(0.0, 0.0); 2 * sites];
                for r in 0..2 {
                    let amp = dot(&waves[r], &image);
                    assert!((amp - bloch[(r, s)]).norm() < 1e-12, "m={m} ({r},{s})");
                    rebuilt.iter_mut().zip(&waves[r]).for_each(|(z, w)| *z += amp * w);
                }
                // no leakage out of the momentum-k sector
                assert!(rebuilt.iter().zip(&image).all(|(a, b)| (a - b).norm() < 1e-12));
            }
        }
    }
}

#[test]
fn ring_eigenphases_match_bands() {
    let sites = 16;
    let (alpha, beta) = (0.1 * PI, 0.7 * PI);
    let ring = ring_cycle(alpha, beta, sites);
    let ks: Vec<f64> = (0..sites).map(|m| 2.0 * PI * m as f64 / sites as f64).collect();
    let bands = quasienergy_bands(alpha, beta, &ks);
    for (i, &k) in ks.iter().enumerate() {
        // the momentum block, projected from the ring, carries the band energies
        let waves = [plane_wave(sites, k, 0), plane_wave(sites, k, 1)];
        let mut block = Mat2::zeros();
        for r in 0..2 {
            for s in 0..2 {
                let image = &ring * DMatrix::from_column_slice(2 * sites, 1, &waves[s]);
                block[(r, s)] = dot(&waves[r], image.as_slice());
            }
        }
        let e = quasienergies(&block);
        assert!((e[0] - bands.lower[i]).abs() < 1e-6 && (e[1] - bands.upper[i]).abs() < 1e-6);
    }
}

#[test]
fn bloch_limits() {
    let id = bloch_u1(0.7, 1.0, 2.0, 0.0);
    assert!((id - Mat2::identity()).norm() < 1e-15);
    let flat = bloch_u1(2.1, 1.3 * PI, 0.0, 1.0);
    assert!((flat - axis_rotation(1.3 * PI / 2.0, [1.0, 0.0, 0.0])).norm() < 1e-12);
    assert!((flat - bloch_u1(0.2, 1.3 * PI, 0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn band_examples() {
    let ks = uniform_k_grid(64);
    let zero = quasienergy_bands(0.0, 0.0, &ks);
    assert!(zero.lower.iter().chain(&zero.upper).all(|e| e.abs() < 1e-12));
    let flat = quasienergy_bands(PI, 0.0, &ks);
    assert!(flat.lower.iter().all(|e| (e + PI / 2.0).abs() < 1e-12));
    assert!(flat.upper.iter().all(|e| (e - PI / 2.0).abs() < 1e-12));
    let open = quasienergy_bands(0.1 * PI, 0.7 * PI, &ks);
    assert!(open.gap_zero > 0.1 && open.gap_pi > 0.1);
}

#[test]
fn branch_log_examples() {
    let h = branch_log_hamiltonian(&Mat2::identity(), PI).unwrap();
    assert!(h.norm() < 1e-15);
    let h = branch_log_hamiltonian(&(-Mat2::identity()), 0.0).unwrap();
    assert!((h + Mat2::identity() * C64::new(PI, 0.0)).norm() < 1e-12);
}

/// `exp(−iH)` from `H = h₀ + h·σ`: `e^{−ih₀}(cos|h| − i sin|h| ĥ·σ)`.
fn exp_minus_i(h: &Mat2) -> Mat2 {
    let h0 = 0.5 * (h[(0, 0)] + h[(1, 1)]).re;
    let v = [h[(1, 0)].re, h[(1, 0)].im, 0.5 * (h[(0, 0)] - h[(1, 1)]).re];
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let axis = if len > 0.0 { v.map(|x| x / len) } else { [0.0, 0.0, 1.0] };
    axis_rotation(len, axis) * C64::from_polar(1.0, -h0)
}

fn haar_ish(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
    // e^{id}·RZ(a)·RY(b)·RZ(c)
    let rz = |t: f64| Mat2::new(C64::from_polar(1.0, -t / 2.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, t / 2.0));
    let ry = Mat2::new(
        C64::new((b / 2.0).cos(), 0.0),
        C64::new(-(b / 2.0).sin(), 0.0),
        C64::new((b / 2.0).sin(), 0.0),
        C64::new((b / 2.0).cos(), 0.0),
    );
    rz(a) * ry * rz(c) * C64::from_polar(1.0, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn branch_log_round_trip(a in -PI..PI, b in 0.0..PI, c in -PI..PI, d in -PI..PI, pi_gap in any::<bool>()) {
        let u = haar_ish(a, b, c, d);
        let eps = if pi_gap { PI } else { 0.0 };
        match BranchLog::new(&u, eps) {
            Ok(log) => {
                let h = log.hamiltonian();
                prop_assert!((h - h.adjoint()).norm() < 1e-12);
                let back = exp_minus_i(&h);
                prop_assert!((back - u).norm() < 1e-10);
                prop_assert!(log.energies().iter().all(|&e| e > eps - 2.0 * PI - 1e-12 && e <= eps + 1e-12));
            }
            Err(_) => prop_assert!(Spectrum::of(&u).energies.iter().any(|&e| (C64::from_polar(1.0, e) - C64::from_polar(1.0, eps)).norm() < 1e-8)),
        }
    }
}

#[test]
fn anchor_windings() {
    for (alpha, beta, nu0, nupi) in ANCHORS {
        let z = winding_1d(alpha, beta, Gap::Zero, 1024).unwrap();
        let p = winding_1d(alpha, beta, Gap::Pi, 1024).unwrap();
        assert_eq!((z.value, p.value), (nu0, nupi), "α={alpha} β={beta}");
        assert!(z.residual < 1e-3 && p.residual < 1e-3);
    }
    let w = winding_1d(0.0, 0.0, Gap::Zero, 1024).unwrap();
    assert_eq!(w.value, 0);
}

#[test]
fn winding_is_grid_independent() {
    for (alpha, beta, ..) in ANCHORS {
        for gap in [Gap::Zero, Gap::Pi] {
            let values: Vec<i64> = [256, 1024, 4096]
                .iter()
                .map(|&n| winding_1d(alpha, beta, gap, n).unwrap().value)
                .collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
        }
    }
}

#[test]
fn bulk_boundary_correspondence() {
    for (alpha, beta, nu0, nupi) in ANCHORS {
        let edge = edge_analytics(alpha, beta).unwrap();
        assert_eq!(edge.exists_zero, nu0 == 1);
        assert_eq!(edge.exists_pi, nupi == 1);
        for (gap, exists) in [(Gap::Zero, edge.exists_zero), (Gap::Pi, edge.exists_pi)] {
            let r = edge_eigenstate_check(alpha, beta, 20, gap);
            if exists {
                assert!(r.unwrap() <= 1e-6);
            } else {
                assert!(r.is_err());
            }
        }
    }
}

#[test]
fn two_d_windings() {
    for gap in [Gap::Zero, Gap::Pi] {
        let w = winding_2d(0.0, 0.0, gap, 16, 12).unwrap();
        assert_eq!((w.value, w.raw_integral), (0, 0.0));
    }
    // coarse grid: still quantized, just less precisely
    let w = winding_2d(1.9 * PI, 0.8 * PI, Gap::Pi, 32, 24).unwrap();
    assert_eq!(w.value, 1);
}

#[test]
fn one_d_phase_diagram_contains_anchors() {
    let axis: Vec<f64> = [0.1, 0.4, 0.7, 0.9, 1.0, 1.9].iter().map(|x| x * PI).collect();
    let d = phase_diagram_1d(&axis, &axis, 512).unwrap();
    let find = |x: f64| axis.iter().position(|&a| (a - x).abs() < 1e-12).unwrap();
    for (alpha, beta, nu0, nupi) in ANCHORS {
        assert_eq!(
            d.cell(find(alpha), find(beta)),
            &Cell::Defined { zero: nu0, pi: nupi }
        );
    }
    // the diagonal α = β closes the zero gap
    assert!(matches!(d.cell(find(0.7 * PI), find(0.7 * PI)), Cell::Undefined { .. }));
}

#[test]
fn coarse_diagram_is_mostly_defined() {
    let axis = open_grid(0.0, 2.0 * PI, 8);
    let d = phase_diagram_1d(&axis, &axis, 256).unwrap();
    let defined = d.rows().filter(|r| matches!(r.2, Cell::Defined { .. })).count();
    assert!(defined >= 48, "{defined}");
    let kinds: std::collections::BTreeSet<(i64, i64)> = d
        .rows()
        .filter_map(|r| match r.2 {
            Cell::Defined { zero, pi } => Some((*zero, *pi)),
            _ => None,
        })
        .collect();
    assert_eq!(kinds.len(), 4, "{kinds:?}");
}
