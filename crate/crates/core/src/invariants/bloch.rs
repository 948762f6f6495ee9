//! Momentum-space evolution of the 1D and 2D cycles.
//!
//! Bloch spinors are ordered `(↑, ↓)` per unit cell. A spin-orbit bond between
//! `(x, ↓)` and `(x+1, ↑)` with rotation `θ` becomes `exp(−iθ (cos k σx + sin k σy))`,
//! i.e. the `↓↑` element of the generator carries `e^{+ik}`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub type Mat2 = Matrix2<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `n·σ`
pub fn pauli_dot(n: [f64; 3]) -> Mat2 {
    Mat2::new(
        C64::new(n[2], 0.0),
        C64::new(n[0], -n[1]),
        C64::new(n[0], n[1]),
        C64::new(-n[2], 0.0),
    )
}

/// `exp(−iφ n·σ)` for a unit vector `n`.
pub fn axis_rotation(phi: f64, n: [f64; 3]) -> Mat2 {
    let (s, c) = phi.sin_cos();
    Mat2::identity() * C64::new(c, 0.0) - pauli_dot(n) * (I * s)
}

/// One step of a piecewise-constant drive: rotation `angle` about `axis`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub angle: f64,
    pub axis: [f64; 3],
}

impl Segment {
    pub fn rotation(&self, fraction: f64) -> Mat2 {
        axis_rotation(fraction * self.angle, self.axis)
    }
}

/// Three equal-length steps filling one period `T = 1`; step 0 acts first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drive {
    pub segments: [Segment; 3],
}

fn in_plane(k: f64) -> [f64; 3] {
    [k.cos(), k.sin(), 0.0]
}

const X_AXIS: [f64; 3] = [1.0, 0.0, 0.0];

impl Drive {
    pub fn one_d(alpha: f64, beta: f64, k: f64) -> Self {
        let onsite = Segment {
            angle: alpha / 4.0,
            axis: X_AXIS,
        };
        Drive {
            segments: [
                onsite,
                Segment {
                    angle: beta / 2.0,
                    axis: in_plane(k),
                },
                onsite,
            ],
        }
    }

    pub fn two_d(gamma: f64, delta: f64, kx: f64, ky: f64) -> Self {
        Drive {
            segments: [
                Segment {
                    angle: FRAC_PI_4,
                    axis: X_AXIS,
                },
                Segment {
                    angle: gamma / 4.0,
                    axis: in_plane(kx),
                },
                Segment {
                    angle: delta / 2.0,
                    axis: in_plane(ky),
                },
            ],
        }
    }

    /// Segment active at time `t` and the elapsed fraction of it.
    fn locate(t: f64) -> (usize, f64) {
        let scaled = 3.0 * t.clamp(0.0, 1.0);
        let seg = (scaled.floor() as usize).min(2);
        (seg, scaled - seg as f64)
    }

    /// Time-ordered evolution from 0 to `t ∈ [0, 1]`.
    pub fn evolve(&self, t: f64) -> Mat2 {
        let (seg, frac) = Self::locate(t);
        let mut u = Mat2::identity();
        for s in &self.segments[..seg] {
            u = s.rotation(1.0) * u;
        }
        self.segments[seg].rotation(frac) * u
    }

    /// Instantaneous Hamiltonian at `t`: `∂_t U = −i H(t) U`.
    pub fn hamiltonian(&self, t: f64) -> Mat2 {
        let (seg, _) = Self::locate(t);
        let s = self.segments[seg];
        pauli_dot(s.axis) * C64::new(3.0 * s.angle, 0.0)
    }
}

/// `U₁(k, t)`: evolution of the 1D cycle up to fraction `t` of the period.
pub fn bloch_u1(k: f64, alpha: f64, beta: f64, t: f64) -> Mat2 {
    Drive::one_d(alpha, beta, k).evolve(t)
}

/// `U₂(kx, ky, t)` for the 2D cycle.
pub fn bloch_u2(kx: f64, ky: f64, gamma: f64, delta: f64, t: f64) -> Mat2 {
    Drive::two_d(gamma, delta, kx, ky).evolve(t)
}

/// Folds `e` into `(eps − 2π, eps]`.
pub fn fold_phase(e: f64, eps: f64) -> f64 {
    eps - (eps - e).rem_euclid(TAU)
}

/// Distance from `e` to the nearest point `eps + 2πm`.
pub fn phase_distance(e: f64, eps: f64) -> f64 {
    let r = (e - eps).rem_euclid(TAU);
    r.min(TAU - r)
}

/// Eigen-decomposition of a 2×2 unitary: `U = Σ_j e^{−iE_j} P_j`.
#[derive(Clone, Copy, Debug)]
pub struct Spectrum {
    pub energies: [f64; 2],
    pub projectors: [Mat2; 2],
}

impl Spectrum {
    pub fn of(u: &Mat2) -> Self {
        let det = u.determinant();
        let phi0 = -0.5 * det.arg();
        let v = u * C64::from_polar(1.0, phi0);
        // v = a0·1 − i a·σ
        let a0 = 0.5 * (v[(0, 0)].re + v[(1, 1)].re);
        let az = 0.5 * (v[(1, 1)].im - v[(0, 0)].im);
        let ax = -0.5 * (v[(0, 1)].im + v[(1, 0)].im);
        let ay = 0.5 * (v[(1, 0)].re - v[(0, 1)].re);
        let r = (ax * ax + ay * ay + az * az).sqrt();
        let theta = r.atan2(a0);
        let n = if r > 1e-300 {
            [ax / r, ay / r, az / r]
        } else {
            [0.0, 0.0, 1.0]
        };
        let half = C64::new(0.5, 0.0);
        let ns = pauli_dot(n);
        let plus = (Mat2::identity() + ns) * half;
        let minus = (Mat2::identity() - ns) * half;
        Spectrum {
            energies: [phi0 + theta, phi0 - theta],
            projectors: [plus, minus],
        }
    }

    /// `Σ_j f(E_j) P_j`
    pub fn map(&self, f: impl Fn(f64) -> C64) -> Mat2 {
        self.projectors[0] * f(self.energies[0]) + self.projectors[1] * f(self.energies[1])
    }
}

fn unitarity_defect(u: &Mat2) -> f64 {
    (u.adjoint() * u - Mat2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Smallest eigenphase distance below which a gap counts as closed.
pub const BRANCH_CUT_TOL: f64 = 1e-9;

/// Effective Hamiltonian of a period with the branch cut placed at `ε`:
/// `exp(−iH) = U` with both quasienergies in `(ε − 2π, ε)`.
#[derive(Clone, Copy, Debug)]
pub struct BranchLog {
    spectrum: Spectrum,
    pub epsilon: f64,
    /// Distance of the nearest eigenphase to the cut.
    pub gap: f64,
}

impl BranchLog {
    pub fn new(u: &Mat2, epsilon: f64) -> Result<Self> {
        let defect = unitarity_defect(u);
        if defect > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not unitary (defect {defect:e})"
            )));
        }
        let mut spectrum = Spectrum::of(u);
        let gap = spectrum
            .energies
            .iter()
            .map(|&e| phase_distance(e, epsilon))
            .fold(f64::INFINITY, f64::min);
        if gap < BRANCH_CUT_TOL {
            return Err(Error::GapClosed {
                epsilon,
                distance: gap,
            });
        }
        for e in spectrum.energies.iter_mut() {
            *e = fold_phase(*e, epsilon);
        }
        Ok(BranchLog {
            spectrum,
            epsilon,
            gap,
        })
    }

    pub fn energies(&self) -> [f64; 2] {
        self.spectrum.energies
    }

    pub fn hamiltonian(&self) -> Mat2 {
        self.spectrum.map(|e| C64::new(e, 0.0))
    }

    /// `exp(+iHt)`
    pub fn inverse_evolution(&self, t: f64) -> Mat2 {
        self.spectrum.map(|e| C64::from_polar(1.0, e * t))
    }
}

/// Hermitian `H` with `exp(−iH) = U` (period `T = 1`) and eigenphases in `(ε − 2π, ε)`.
pub fn branch_log_hamiltonian(u: &Mat2, epsilon: f64) -> Result<Mat2> {
    Ok(BranchLog::new(u, epsilon)?.hamiltonian())
}

/// Quasienergy bands `E±(k) ∈ (−π, π]` of the 1D cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub alpha: f64,
    pub beta: f64,
    pub k: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Smallest `|E|` on the grid.
    pub gap_zero: f64,
    /// Smallest `π − |E|` on the grid.
    pub gap_pi: f64,
}

pub fn quasienergies(u: &Mat2) -> [f64; 2] {
    let s = Spectrum::of(u);
    let mut e = s.energies.map(|e| fold_phase(e, PI));
    if e[0] > e[1] {
        e.swap(0, 1);
    }
    e
}

pub fn quasienergy_bands(alpha: f64, beta: f64, k_grid: &[f64]) -> BandStructure {
    let mut lower = Vec::with_capacity(k_grid.len());
    let mut upper = Vec::with_capacity(k_grid.len());
    let (mut gap_zero, mut gap_pi) = (f64::INFINITY, f64::INFINITY);
    for &k in k_grid {
        let e = quasienergies(&bloch_u1(k, alpha, beta, 1.0));
        for x in e {
            gap_zero = gap_zero.min(phase_distance(x, 0.0));
            gap_pi = gap_pi.min(phase_distance(x, PI));
        }
        lower.push(e[0]);
        upper.push(e[1]);
    }
    BandStructure {
        alpha,
        beta,
        k: k_grid.to_vec(),
        lower,
        upper,
        gap_zero,
        gap_pi,
    }
}

/// `n` equally spaced momenta `−π + 2πj/n`.
pub fn uniform_k_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + TAU * j as f64 / n as f64).collect()
}
