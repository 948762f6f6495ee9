//! Winding numbers of the periodized evolution.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bloch::{phase_distance, uniform_k_grid, BranchLog, Drive, Mat2, Spectrum};
use crate::{Error, Result, C64};

/// Residual above which an integral is not accepted as quantized.
pub const QUANTIZATION_LIMIT: f64 = 0.1;

const FLAT_TOL: f64 = 1e-15;

pub const DEFAULT_K_POINTS_1D: usize = 1024;
pub const DEFAULT_K_POINTS_2D: usize = 64;
pub const DEFAULT_T_POINTS_2D: usize = 64;

/// Quasienergy gap in which an invariant is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gap {
    Zero,
    Pi,
}

impl Gap {
    pub fn epsilon(self) -> f64 {
        match self {
            Gap::Zero => 0.0,
            Gap::Pi => PI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub gap: Gap,
    pub value: i64,
    pub raw_integral: f64,
    pub k_points: usize,
    /// Time nodes per period (2D only).
    pub t_points: Option<usize>,
    pub residual: f64,
    /// Smallest eigenphase distance to the branch cut seen on the grid.
    pub min_gap: f64,
}

impl WindingResult {
    /// Result for a drive without momentum dependence: `V(k)` is constant for
    /// any branch choice, so the winding vanishes even if the gap is closed.
    fn flat(gap: Gap, u: &Mat2, k_points: usize, t_points: Option<usize>) -> Self {
        let min_gap = Spectrum::of(u)
            .energies
            .iter()
            .map(|&e| phase_distance(e, gap.epsilon()))
            .fold(f64::INFINITY, f64::min);
        WindingResult {
            gap,
            value: 0,
            raw_integral: 0.0,
            k_points,
            t_points,
            residual: 0.0,
            min_gap,
        }
    }

    fn quantize(gap: Gap, raw: f64, k_points: usize, t_points: Option<usize>, min_gap: f64) -> Result<Self> {
        let value = raw.round();
        let residual = (raw - value).abs();
        if residual > QUANTIZATION_LIMIT || !raw.is_finite() {
            return Err(Error::NotQuantized { raw, residual });
        }
        Ok(WindingResult {
            gap,
            value: value as i64,
            raw_integral: raw,
            k_points,
            t_points,
            residual,
            min_gap,
        })
    }
}

/// Fourth-order central difference on a periodic grid.
fn periodic_derivative<T>(values: &[T], i: usize, h: f64) -> T
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<C64, Output = T>,
{
    let n = values.len();
    let at = |d: isize| values[(i as isize + d).rem_euclid(n as isize) as usize];
    let near = at(1) - at(-1);
    let far = at(2) - at(-2);
    near * C64::new(8.0 / (12.0 * h), 0.0) - far * C64::new(1.0 / (12.0 * h), 0.0)
}

fn tau_z_trace(m: &Mat2) -> C64 {
    m[(0, 0)] - m[(1, 1)]
}

/// `ν_ε` of the 1D cycle.
///
/// The periodized half-period operator is `V(k) = U₁(k, T/2)·exp(+i H_ε(k) T/2)`
/// and `ν = ±(i/4π) ∮ dk tr(τ_z V⁻¹ ∂_k V)`. The raw integral for the 0 gap counts
/// spin-up edge modes with the opposite sign of the spin-down π modes; it is
/// taken with a leading minus so both invariants count left-boundary modes.
pub fn winding_1d(alpha: f64, beta: f64, gap: Gap, k_points: usize) -> Result<WindingResult> {
    if k_points < 8 {
        return Err(Error::InvalidParameter(format!("k_points = {k_points} is too coarse")));
    }
    if (beta / 2.0).sin().abs() < FLAT_TOL {
        let u = Drive::one_d(alpha, beta, 0.0).evolve(1.0);
        return Ok(WindingResult::flat(gap, &u, k_points, None));
    }
    let ks = uniform_k_grid(k_points);
    let dk = TAU / k_points as f64;
    let mut min_gap = f64::INFINITY;
    let mut vs = Vec::with_capacity(k_points);
    for &k in &ks {
        let drive = Drive::one_d(alpha, beta, k);
        let log = BranchLog::new(&drive.evolve(1.0), gap.epsilon())?;
        min_gap = min_gap.min(log.gap);
        vs.push(drive.evolve(0.5) * log.inverse_evolution(0.5));
    }
    let sum: C64 = (0..k_points)
        .map(|i| tau_z_trace(&(vs[i].adjoint() * periodic_derivative(&vs, i, dk))))
        .sum();
    let orientation = match gap {
        Gap::Zero => -1.0,
        Gap::Pi => 1.0,
    };
    let raw = orientation * (C64::new(0.0, 1.0) * sum * dk / (4.0 * PI)).re;
    WindingResult::quantize(gap, raw, k_points, None, min_gap)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Time nodes and weights over one period, Gauss–Legendre within each of the
/// three drive steps so the step discontinuities fall on node-free boundaries.
fn period_quadrature(t_points: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(t_points);
    for seg in 0..3 {
        let n = t_points / 3 + usize::from(seg < t_points % 3);
        let (x, w) = gauss_legendre(n);
        let (lo, half) = (seg as f64 / 3.0, 1.0 / 6.0);
        out.extend(x.iter().zip(&w).map(|(x, w)| (lo + half * (x + 1.0), half * w)));
    }
    out
}

fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b - b * a
}

/// Floquet winding number `W_ε` of the 2D cycle,
/// `W = (1/8π²) ∫dt d²k tr(V⁻¹∂_tV [V⁻¹∂_{kx}V, V⁻¹∂_{ky}V])`
/// with `V(k, t) = U₂(k, t)·exp(+i H_ε(k) t)`.
pub fn winding_2d(gamma: f64, delta: f64, gap: Gap, k_points: usize, t_points: usize) -> Result<WindingResult> {
    if k_points < 8 || t_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid ({k_points}², {t_points}) is too coarse"
        )));
    }
    if (gamma / 4.0).sin().abs() < FLAT_TOL && (delta / 2.0).sin().abs() < FLAT_TOL {
        let u = Drive::two_d(gamma, delta, 0.0, 0.0).evolve(1.0);
        return Ok(WindingResult::flat(gap, &u, k_points, Some(t_points)));
    }
    let ks = uniform_k_grid(k_points);
    let dk = TAU / k_points as f64;
    let mut drives = Vec::with_capacity(k_points * k_points);
    let mut logs = Vec::with_capacity(k_points * k_points);
    let mut min_gap = f64::INFINITY;
    // index = ix * k_points + iy
    for &kx in &ks {
        for &ky in &ks {
            let d = Drive::two_d(gamma, delta, kx, ky);
            let log = BranchLog::new(&d.evolve(1.0), gap.epsilon())?;
            min_gap = min_gap.min(log.gap);
            drives.push(d);
            logs.push(log);
        }
    }
    let n = k_points;
    let total: f64 = period_quadrature(t_points)
        .into_par_iter()
        .map(|(t, wt)| {
            let vs: Vec<Mat2> = drives
                .iter()
                .zip(&logs)
                .map(|(d, l)| d.evolve(t) * l.inverse_evolution(t))
                .collect();
            let mut acc = 0.0;
            let mut column = vec![Mat2::zeros(); n];
            for ix in 0..n {
                for iy in 0..n {
                    let idx = ix * n + iy;
                    let v = vs[idx];
                    let vinv = v.adjoint();
                    let h = drives[idx].hamiltonian(t);
                    let a_t = vinv * h * v * C64::new(0.0, -1.0)
                        + logs[idx].hamiltonian() * C64::new(0.0, 1.0);
                    let dy = periodic_derivative(&vs[ix * n..(ix + 1) * n], iy, dk);
                    for (j, c) in column.iter_mut().enumerate() {
                        *c = vs[j * n + iy];
                    }
                    let dx = periodic_derivative(&column, ix, dk);
                    let a_x = vinv * dx;
                    let a_y = vinv * dy;
                    acc += (a_t * commutator(&a_x, &a_y)).trace().re;
                }
            }
            acc * wt * dk * dk
        })
        .sum();
    let raw = total / (8.0 * PI * PI);
    WindingResult::quantize(gap, raw, k_points, Some(t_points), min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..8 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            // exact up to degree 2n−1
            let deg = 2 * n - 1;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn quadrature_covers_period() {
        let q = period_quadrature(64);
        assert_eq!(q.len(), 64);
        assert!((q.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-13);
        assert!(q.iter().all(|p| p.0 > 0.0 && p.0 < 1.0));
    }

    #[test]
    fn trivial_cycle_has_zero_winding() {
        let w = winding_1d(0.2, 0.1, Gap::Pi, 64).unwrap();
        assert_eq!(w.value, 0);
        // identity cycle: the 0 gap is closed but nothing depends on k
        for g in [Gap::Zero, Gap::Pi] {
            let w = winding_1d(0.0, 0.0, g, 64).unwrap();
            assert_eq!((w.value, w.raw_integral), (0, 0.0));
        }
        // α = β: bands touch at 0 for some k
        assert!(matches!(
            winding_1d(PI, PI, Gap::Zero, 64),
            Err(Error::GapClosed { .. } | Error::NotQuantized { .. })
        ));
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(winding_1d(1.0, 1.0, Gap::Pi, 4).is_err());
        assert!(winding_2d(1.0, 1.0, Gap::Pi, 4, 64).is_err());
    }
}
