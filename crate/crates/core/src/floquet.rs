//! Floquet circuit builders and the mean-displacement protocol.
//!
//! Each step of a cycle is one layer of parallel composite gates `U(θ)` whose
//! rotation angle is the coupling times the step duration, `θ = J·T/3`:
//!
//! | step                 | coupling      | rotation |
//! |----------------------|---------------|----------|
//! | 1D on-site           | `J_o = 3α/4T` | `α/4`    |
//! | 1D spin-orbit        | `J_s = 3β/2T` | `β/2`    |
//! | 2D on-site           | `J_os = 3π/4T`| `π/4`    |
//! | 2D x spin-orbit      | `J_sx = 3γ/4T`| `γ/4`    |
//! | 2D y spin-orbit      | `J_sy = 3δ/2T`| `δ/2`    |
//!
//! The gate labels `U(α/2)`, `U(β)`, `U(π/2)`, `U(γ/2)`, `U(δ)` commonly used for
//! these circuits are twice the rotation angles above.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::lattice::{LatticeMap1D, LatticeMap2D, Spin};
use crate::state::{QuantumState, SingleExcitationState};
use crate::{Error, Result};

/// Probability on the end sites above which the displacement run is rejected.
pub const BOUNDARY_GUARD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams1D {
    /// On-site rotation parameter α (radians).
    pub alpha: f64,
    /// Spin-orbit parameter β (radians).
    pub beta: f64,
    pub sites: usize,
    pub cycles: usize,
}

impl FloquetParams1D {
    pub fn new(alpha: f64, beta: f64, sites: usize, cycles: usize) -> Self {
        FloquetParams1D {
            alpha,
            beta,
            sites,
            cycles,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 sites, got {}",
                self.sites
            )));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        Ok(())
    }

    pub fn lattice(&self) -> LatticeMap1D {
        LatticeMap1D::new(self.sites)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams2D {
    pub gamma: f64,
    pub delta: f64,
    pub nx: usize,
    pub ny: usize,
    pub cycles: usize,
}

impl FloquetParams2D {
    pub fn new(gamma: f64, delta: f64, nx: usize, ny: usize, cycles: usize) -> Self {
        FloquetParams2D {
            gamma,
            delta,
            nx,
            ny,
            cycles,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2×2 sites, got {}×{}",
                self.nx, self.ny
            )));
        }
        if !self.gamma.is_finite() || !self.delta.is_finite() {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        Ok(())
    }

    pub fn lattice(&self) -> LatticeMap2D {
        LatticeMap2D::new(self.nx, self.ny)
    }
}

fn onsite_layer(sites: usize, theta: f64) -> Vec<Gate> {
    (0..sites).map(|s| Gate::composite(theta, 2 * s, 2 * s + 1)).collect()
}

/// Couples `(x, ↓)` with `(x+1, ↑)`.
fn soc_layer(sites: usize, theta: f64) -> Vec<Gate> {
    (0..sites - 1)
        .map(|s| Gate::composite(theta, 2 * s + 1, 2 * s + 2))
        .collect()
}

/// One period of `U₁`: on-site `α/4`, spin-orbit `β/2`, on-site `α/4`.
pub fn build_u1_cycle(params: &FloquetParams1D) -> Result<Circuit> {
    params.validate()?;
    let n = params.sites;
    let mut c = Circuit::new(2 * n);
    c.push_layer(onsite_layer(n, params.alpha / 4.0))?;
    c.push_layer(soc_layer(n, params.beta / 2.0))?;
    c.push_layer(onsite_layer(n, params.alpha / 4.0))?;
    Ok(c)
}

/// `(U₁)ⁿ` with `n = params.cycles`.
pub fn build_u1_circuit(params: &FloquetParams1D) -> Result<Circuit> {
    Ok(build_u1_cycle(params)?.repeat(params.cycles))
}

/// One period of `U₁′`, the second chirally symmetric time frame: spin-orbit
/// half step `β/4`, on-site `α/2`, spin-orbit half step `β/4`.
///
/// `U₁′` is a cyclic shift of `U₁` and has the same quasienergies.
pub fn build_u1_prime_cycle(params: &FloquetParams1D) -> Result<Circuit> {
    params.validate()?;
    let n = params.sites;
    let mut c = Circuit::new(2 * n);
    c.push_layer(soc_layer(n, params.beta / 4.0))?;
    c.push_layer(onsite_layer(n, params.alpha / 2.0))?;
    c.push_layer(soc_layer(n, params.beta / 4.0))?;
    Ok(c)
}

pub fn build_u1_prime_circuit(params: &FloquetParams1D) -> Result<Circuit> {
    Ok(build_u1_prime_cycle(params)?.repeat(params.cycles))
}

/// One period of `U₂` with open boundaries: on-site `π/4`, then
/// `(Q^D_{x,y}, Q^U_{x+1,y})` at `γ/4`, then `(Q^D_{x,y}, Q^U_{x,y+1})` at `δ/2`.
pub fn build_u2_cycle(params: &FloquetParams2D) -> Result<Circuit> {
    params.validate()?;
    let map = params.lattice();
    let mut c = Circuit::new(map.num_qubits());
    let mut onsite = Vec::new();
    let mut xbonds = Vec::new();
    let mut ybonds = Vec::new();
    for y in 1..=params.ny {
        for x in 1..=params.nx {
            let up = map.qubit(x, y, Spin::Up)?;
            let down = map.qubit(x, y, Spin::Down)?;
            onsite.push(Gate::composite(std::f64::consts::FRAC_PI_4, up, down));
            if x < params.nx {
                xbonds.push(Gate::composite(params.gamma / 4.0, down, map.qubit(x + 1, y, Spin::Up)?));
            }
            if y < params.ny {
                ybonds.push(Gate::composite(params.delta / 2.0, down, map.qubit(x, y + 1, Spin::Up)?));
            }
        }
    }
    c.push_layer(onsite)?;
    c.push_layer(xbonds)?;
    c.push_layer(ybonds)?;
    Ok(c)
}

pub fn build_u2_circuit(params: &FloquetParams2D) -> Result<Circuit> {
    Ok(build_u2_cycle(params)?.repeat(params.cycles))
}

/// Applies `cycle` to `state` `n` times.
pub fn run_cycles<S: QuantumState>(cycle: &Circuit, mut state: S, n: usize) -> Result<S> {
    for _ in 0..n {
        state.apply_circuit(cycle)?;
    }
    Ok(state)
}

/// Displacement of the spin-down excitation weight under `U₁` and `U₁′`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSeries {
    pub alpha: f64,
    pub beta: f64,
    pub sites: usize,
    pub initial_site: usize,
    /// `P̄(n)` for n = 1..=n_max, from `(U₁)ⁿ`.
    pub p: Vec<f64>,
    /// `P̄′(n)`, from `(U₁′)ⁿ`.
    pub p_prime: Vec<f64>,
    /// `−P̄ − P̄′`
    pub p0: Vec<f64>,
    /// `P̄ − P̄′`
    pub p_pi: Vec<f64>,
    /// Running means of `p0` / `p_pi` over n = 1..=m.
    pub running_center0: Vec<f64>,
    pub running_center_pi: Vec<f64>,
    pub center0: f64,
    pub center_pi: f64,
}

fn running_mean(xs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            acc += x;
            acc / (i + 1) as f64
        })
        .collect()
}

/// Mean-displacement detection of `(ν₀, ν_π)`.
///
/// The excitation starts on the spin-up qubit of the central site
/// `x₀ = (N+1)/2`; after each cycle the displacement of the spin-down weight,
/// `Σ_x (x − x₀)·P(Q_{2x} excited)`, is recorded for both time frames. The time
/// averages of `P̄₀ = −P̄ − P̄′` and `P̄_π = P̄ − P̄′` approach the winding numbers.
pub fn mean_displacement(alpha: f64, beta: f64, sites: usize, n_max: usize) -> Result<DisplacementSeries> {
    if sites.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("chain length {sites} must be odd")));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    if sites < 4 * n_max + 1 {
        return Err(Error::InvalidParameter(format!(
            "chain of {sites} sites is shorter than 4·n_max + 1 = {}",
            4 * n_max + 1
        )));
    }
    let params = FloquetParams1D::new(alpha, beta, sites, 1);
    let u1 = build_u1_cycle(&params)?;
    let u1p = build_u1_prime_cycle(&params)?;
    let x0 = sites.div_ceil(2);
    let start = params.lattice().qubit(x0, Spin::Up)?;

    let displacement = |s: &SingleExcitationState| -> Result<f64> {
        let prob = s.excitation_distribution();
        let ends = prob[0] + prob[1] + prob[2 * sites - 2] + prob[2 * sites - 1];
        if ends > BOUNDARY_GUARD {
            return Err(Error::BoundaryReached(ends));
        }
        Ok((1..=sites)
            .map(|x| (x as f64 - x0 as f64) * prob[2 * x - 1])
            .sum())
    };

    let mut s = SingleExcitationState::excited(2 * sites, start)?;
    let mut sp = s.clone();
    let mut p = Vec::with_capacity(n_max);
    let mut p_prime = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        s.apply_circuit(&u1)?;
        sp.apply_circuit(&u1p)?;
        p.push(displacement(&s)?);
        p_prime.push(displacement(&sp)?);
    }
    let p0: Vec<f64> = p.iter().zip(&p_prime).map(|(a, b)| -a - b).collect();
    let p_pi: Vec<f64> = p.iter().zip(&p_prime).map(|(a, b)| a - b).collect();
    let running_center0 = running_mean(&p0);
    let running_center_pi = running_mean(&p_pi);
    Ok(DisplacementSeries {
        alpha,
        beta,
        sites,
        initial_site: x0,
        center0: *running_center0.last().expect("n_max > 0"),
        center_pi: *running_center_pi.last().expect("n_max > 0"),
        p,
        p_prime,
        p0,
        p_pi,
        running_center0,
        running_center_pi,
    })
}
