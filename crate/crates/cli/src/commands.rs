//! Subcommand implementations.

use std::f64::consts::PI;

use anyhow::{Context as _, Result};
use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use topocircuit::codegen::{emit, Dialect};
use topocircuit::floquet::{self, FloquetParams1D, FloquetParams2D};
use topocircuit::gate::{composite_u_matrix, composite_u_target};
use topocircuit::invariants::{self as inv, phase::open_grid, Cell, Gap};
use topocircuit::lattice::{LatticeMap1D, LatticeMap2D, Spin};
use topocircuit::noise::{self, NoiseModel, Readout, ReadoutError};
use topocircuit::state::QuantumState;
use topocircuit::{Circuit, SingleExcitationState, StateVector};

use crate::output::{usage, Context};

/// Angles are accepted in units of π within one full period of the gates.
const MAX_ANGLE_PI: f64 = 4.0;

fn radians(name: &str, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > MAX_ANGLE_PI {
        return Err(usage(format!("--{name} {x} must lie in [-{MAX_ANGLE_PI}, {MAX_ANGLE_PI}] (units of π)")));
    }
    Ok(x * PI)
}

fn positive(name: &str, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(usage(format!("--{name} must be positive")));
    }
    Ok(n)
}

fn argmax(p: &[f64]) -> usize {
    p.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(i, _)| i)
}

#[derive(Args, Debug, Serialize)]
pub struct Chain1D {
    /// On-site angle α (units of π).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Spin-orbit angle β (units of π).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 4)]
    pub sites: usize,
    #[arg(long, default_value_t = 3)]
    pub cycles: usize,
}

impl Chain1D {
    fn params(&self) -> Result<FloquetParams1D> {
        Ok(FloquetParams1D::new(
            radians("alpha", self.alpha)?,
            radians("beta", self.beta)?,
            positive("sites", self.sites)?,
            self.cycles,
        ))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct Lattice2D {
    /// x spin-orbit angle γ (units of π).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// y spin-orbit angle δ (units of π).
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 5)]
    pub nx: usize,
    #[arg(long, default_value_t = 5)]
    pub ny: usize,
    #[arg(long, default_value_t = 10)]
    pub cycles: usize,
}

impl Lattice2D {
    fn params(&self) -> Result<FloquetParams2D> {
        Ok(FloquetParams2D::new(
            radians("gamma", self.gamma)?,
            radians("delta", self.delta)?,
            positive("nx", self.nx)?,
            positive("ny", self.ny)?,
            self.cycles,
        ))
    }
}

/// `odd:x` / `even:x` → qubit `Q_{2x−1}` / `Q_{2x}` (0-based `2x−2` / `2x−1`).
fn input_1d(spec: &str, map: &LatticeMap1D) -> Result<usize> {
    let bad = || usage(format!("input `{spec}` must be odd:x or even:x"));
    let (kind, x) = spec.split_once(':').ok_or_else(bad)?;
    let x: usize = x.trim().parse().map_err(|_| bad())?;
    let spin = match kind.trim() {
        "odd" => Spin::Up,
        "even" => Spin::Down,
        _ => return Err(bad()),
    };
    map.qubit(x, spin).map_err(|e| usage(e.to_string()))
}

/// `U:x,y` / `D:x,y`.
fn input_2d(spec: &str, map: &LatticeMap2D) -> Result<usize> {
    let bad = || usage(format!("input `{spec}` must be U:x,y or D:x,y"));
    let (kind, xy) = spec.split_once(':').ok_or_else(bad)?;
    let (x, y) = xy.split_once(',').ok_or_else(bad)?;
    let x: usize = x.trim().parse().map_err(|_| bad())?;
    let y: usize = y.trim().parse().map_err(|_| bad())?;
    let spin = match kind.trim() {
        "U" | "u" => Spin::Up,
        "D" | "d" => Spin::Down,
        _ => return Err(bad()),
    };
    map.qubit(x, y, spin).map_err(|e| usage(e.to_string()))
}

// ---------------------------------------------------------------- check-u

#[derive(Args, Debug, Serialize)]
pub struct CheckUArgs {
    /// Number of random angles.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn check_u(ctx: &Context, a: CheckUArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut worst = 0.0f64;
    for _ in 0..positive("samples", a.samples)? {
        let theta = rng.gen_range(-2.0 * PI..2.0 * PI);
        let diff = composite_u_matrix(theta) - composite_u_target(theta);
        worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let passed = worst < 1e-12;
    ctx.emit_json(
        &a,
        json!({
            "max_deviation": worst,
            "tolerance": 1e-12,
            "passed": passed,
            "expansion": ["cx a,b", "rz(3π/2) a", "ry(-θ) a", "cx b,a", "ry(θ) a", "cx b,a", "rz(-3π/2) a", "cx a,b"],
        }),
    )?;
    anyhow::ensure!(passed, "composite expansion deviates by {worst:e}");
    Ok(())
}

// ------------------------------------------------------------ simulations

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Subspace,
    Statevector,
}

#[derive(Args, Debug, Serialize)]
pub struct Simulate1dArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: Chain1D,
    /// Initially excited qubit: odd:x or even:x.
    #[arg(long, default_value = "odd:1")]
    pub input: String,
    #[arg(long, value_enum, default_value_t = Engine::Subspace)]
    pub engine: Engine,
}

fn propagate(c: &Circuit, q: usize, engine: Engine) -> Result<Vec<f64>> {
    Ok(match engine {
        Engine::Subspace => {
            let mut s = SingleExcitationState::excited(c.num_qubits(), q)?;
            s.apply_circuit(c)?;
            s.excitation_distribution()
        }
        Engine::Statevector => {
            let mut s = StateVector::excited(c.num_qubits(), q)?;
            s.apply_circuit(&c.expanded())?;
            s.excitation_distribution()
        }
    })
}

pub fn simulate_1d(ctx: &Context, a: Simulate1dArgs) -> Result<()> {
    let params = a.chain.params()?;
    let q = input_1d(&a.input, &params.lattice())?;
    let c = floquet::build_u1_circuit(&params)?;
    let p = propagate(&c, q, a.engine)?;
    let peak = argmax(&p);
    ctx.emit_json(
        &a,
        json!({
            "input_qubit": q,
            "distribution": p,
            "argmax": peak,
            "argmax_label": format!("Q{}", peak + 1),
            "total_probability": p.iter().sum::<f64>(),
            "macro_gates": c.gate_count(),
        }),
    )
}

#[derive(Args, Debug, Serialize)]
pub struct Simulate2dArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: Lattice2D,
    /// Initially excited qubit: U:x,y or D:x,y.
    #[arg(long, default_value = "U:1,1")]
    pub input: String,
    #[arg(long, value_enum, default_value_t = Engine::Subspace)]
    pub engine: Engine,
}

pub fn simulate_2d(ctx: &Context, a: Simulate2dArgs) -> Result<()> {
    let params = a.lattice.params()?;
    let map = params.lattice();
    let q = input_2d(&a.input, &map)?;
    let c = floquet::build_u2_circuit(&params)?;
    let p = propagate(&c, q, a.engine)?;
    let peak = argmax(&p);
    ctx.emit_json(
        &a,
        json!({
            "input_qubit": q,
            "distribution": p,
            "site_weights": map.site_weights(&p),
            "boundary_weight": map.boundary_weight(&p),
            "argmax": peak,
            "total_probability": p.iter().sum::<f64>(),
        }),
    )
}

// -------------------------------------------------------------- invariants

#[derive(Args, Debug, Serialize)]
pub struct Winding1dArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = inv::winding::DEFAULT_K_POINTS_1D)]
    pub k_points: usize,
}

pub fn winding_1d(ctx: &Context, a: Winding1dArgs) -> Result<()> {
    let (alpha, beta) = (radians("alpha", a.alpha)?, radians("beta", a.beta)?);
    let z = inv::winding_1d(alpha, beta, Gap::Zero, a.k_points).context("ν₀")?;
    let p = inv::winding_1d(alpha, beta, Gap::Pi, a.k_points).context("ν_π")?;
    ctx.emit_json(
        &a,
        json!({
            "nu0": z.value,
            "nu_pi": p.value,
            "raw": { "zero": z.raw_integral, "pi": p.raw_integral },
            "residuals": { "zero": z.residual, "pi": p.residual },
            "min_gap": { "zero": z.min_gap, "pi": p.min_gap },
        }),
    )
}

#[derive(Args, Debug, Serialize)]
pub struct Winding2dArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value_t = inv::winding::DEFAULT_K_POINTS_2D)]
    pub k_points: usize,
    #[arg(long, default_value_t = inv::winding::DEFAULT_T_POINTS_2D)]
    pub t_points: usize,
}

pub fn winding_2d(ctx: &Context, a: Winding2dArgs) -> Result<()> {
    let (g, d) = (radians("gamma", a.gamma)?, radians("delta", a.delta)?);
    let z = inv::winding_2d(g, d, Gap::Zero, a.k_points, a.t_points).context("W₀")?;
    let p = inv::winding_2d(g, d, Gap::Pi, a.k_points, a.t_points).context("W_π")?;
    ctx.emit_json(
        &a,
        json!({
            "w0": z.value,
            "w_pi": p.value,
            "raw": { "zero": z.raw_integral, "pi": p.raw_integral },
            "residuals": { "zero": z.residual, "pi": p.residual },
            "min_gap": { "zero": z.min_gap, "pi": p.min_gap },
        }),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, ValueEnum)]
pub enum Kind {
    #[value(name = "1d")]
    #[serde(rename = "1d")]
    OneD,
    #[value(name = "2d")]
    #[serde(rename = "2d")]
    TwoD,
}

fn range(spec: &str) -> Result<(f64, f64)> {
    let bad = || usage(format!("range `{spec}` must be lo,hi in units of π"));
    let (lo, hi) = spec.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(bad());
    }
    Ok((radians("range", lo)?, radians("range", hi)?))
}

#[derive(Args, Debug, Serialize)]
pub struct PhaseDiagramArgs {
    #[arg(long, value_enum, default_value_t = Kind::OneD)]
    pub kind: Kind,
    /// Cells along each axis (cell centres of the ranges).
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    /// First axis (α or γ) as lo,hi in units of π.
    #[arg(long, default_value = "0,2")]
    pub a_range: String,
    /// Second axis (β or δ) as lo,hi in units of π.
    #[arg(long, default_value = "0,2")]
    pub b_range: String,
    /// Momentum points per axis; default 1024 (1d) or 32 (2d).
    #[arg(long)]
    pub k_points: Option<usize>,
    /// Time nodes per period (2d only).
    #[arg(long, default_value_t = 32)]
    pub t_points: usize,
}

pub fn phase_diagram(ctx: &Context, a: PhaseDiagramArgs) -> Result<()> {
    let n = positive("points", a.points)?;
    let (alo, ahi) = range(&a.a_range)?;
    let (blo, bhi) = range(&a.b_range)?;
    let (xs, ys) = (open_grid(alo, ahi, n), open_grid(blo, bhi, n));
    let d = match a.kind {
        Kind::OneD => inv::phase_diagram_1d(&xs, &ys, a.k_points.unwrap_or(1024))?,
        Kind::TwoD => inv::phase_diagram_2d(&xs, &ys, a.k_points.unwrap_or(32), a.t_points)?,
    };
    if ctx.wants_csv() {
        let rows = d
            .rows()
            .map(|(x, y, cell)| {
                let (status, z, p) = match cell {
                    Cell::Defined { zero, pi } => ("defined", zero.to_string(), pi.to_string()),
                    Cell::Undefined { .. } => ("undefined", String::new(), String::new()),
                };
                vec![(x / PI).to_string(), (y / PI).to_string(), z, p, status.to_string()]
            })
            .collect();
        ctx.emit_csv(&a, &["a_pi", "b_pi", "zero", "pi", "status"], rows)
    } else {
        ctx.emit_json(
            &a,
            json!({
                "axis_a_pi": xs.iter().map(|x| x / PI).collect::<Vec<_>>(),
                "axis_b_pi": ys.iter().map(|y| y / PI).collect::<Vec<_>>(),
                "cells": d.cells,
            }),
        )
    }
}

#[derive(Args, Debug, Serialize)]
pub struct MeanDisplacementArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// β (units of π); omit when sweeping with --beta-points.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "beta_points")]
    pub beta: Option<f64>,
    /// Sweep β over this many cell centres of (0, 2π) instead.
    #[arg(long)]
    pub beta_points: Option<usize>,
    #[arg(long, default_value_t = 81)]
    pub sites: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
}

pub fn mean_displacement(ctx: &Context, a: MeanDisplacementArgs) -> Result<()> {
    let alpha = radians("alpha", a.alpha)?;
    if let Some(points) = a.beta_points {
        use rayon::prelude::*;
        let betas = open_grid(0.0, 2.0 * PI, positive("beta-points", points)?);
        let series = betas
            .par_iter()
            .map(|&b| floquet::mean_displacement(alpha, b, a.sites, a.n_max))
            .collect::<topocircuit::Result<Vec<_>>>()?;
        if ctx.wants_csv() {
            let rows = series
                .iter()
                .map(|s| vec![(s.beta / PI).to_string(), s.center0.to_string(), s.center_pi.to_string()])
                .collect();
            return ctx.emit_csv(&a, &["beta_pi", "center0", "center_pi"], rows);
        }
        let centers: Vec<Value> = series
            .iter()
            .map(|s| json!({ "beta_pi": s.beta / PI, "center0": s.center0, "center_pi": s.center_pi }))
            .collect();
        return ctx.emit_json(&a, json!({ "sweep": centers }));
    }
    let beta = radians("beta", a.beta.expect("required by clap"))?;
    let s = floquet::mean_displacement(alpha, beta, a.sites, a.n_max)?;
    if ctx.wants_csv() {
        let rows = (0..s.p.len())
            .map(|i| {
                [i as f64 + 1.0, s.p[i], s.p_prime[i], s.p0[i], s.p_pi[i], s.running_center0[i], s.running_center_pi[i]]
                    .iter()
                    .map(f64::to_string)
                    .collect()
            })
            .collect();
        return ctx.emit_csv(&a, &["n", "p", "p_prime", "p0", "p_pi", "center0", "center_pi"], rows);
    }
    ctx.emit_json(&a, json!({ "series": s }))
}

#[derive(Args, Debug, Serialize)]
pub struct EdgeStateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 20)]
    pub sites: usize,
}

pub fn edge_state(ctx: &Context, a: EdgeStateArgs) -> Result<()> {
    let (alpha, beta) = (radians("alpha", a.alpha)?, radians("beta", a.beta)?);
    let e = inv::edge_analytics(alpha, beta)?;
    let mut states = serde_json::Map::new();
    for (key, gap) in [("zero", Gap::Zero), ("pi", Gap::Pi)] {
        let entry = if e.exists(gap) {
            let residual = inv::edge_eigenstate_check(alpha, beta, a.sites, gap)?;
            let profile = e.state(a.sites, gap)?.excitation_distribution();
            json!({ "exists": true, "residual": residual, "profile": profile })
        } else {
            json!({ "exists": false })
        };
        states.insert(key.into(), entry);
    }
    ctx.emit_json(
        &a,
        json!({ "lambda1": e.lambda1, "lambda2": e.lambda2, "states": states }),
    )
}

// ------------------------------------------------------------------ noise

#[derive(Args, Debug, Serialize)]
pub struct NoisyRunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: Chain1D,
    #[arg(long, default_value = "odd:1")]
    pub input: String,
    /// Depolarizing probability per single-qubit gate.
    #[arg(long, default_value_t = 1e-3)]
    pub p1: f64,
    /// Depolarizing probability per CNOT qubit.
    #[arg(long, default_value_t = 1e-2)]
    pub p2: f64,
    /// Symmetric readout flip probability.
    #[arg(long, default_value_t = 0.03)]
    pub readout: f64,
    /// Per-qubit readout errors `e|g:g|e,...`, overriding --readout.
    #[arg(long)]
    pub readout_per_qubit: Option<String>,
    #[arg(long, default_value_t = 8192)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also report readout-mitigated frequencies.
    #[arg(long)]
    pub mitigate: bool,
}

fn readout_model(a: &NoisyRunArgs, qubits: usize) -> Result<Readout> {
    let Some(spec) = &a.readout_per_qubit else {
        return Ok(Readout::Uniform(ReadoutError::symmetric(a.readout)));
    };
    let bad = || usage(format!("--readout-per-qubit `{spec}` must list {qubits} pairs e|g:g|e"));
    let pairs = spec
        .split(',')
        .map(|p| {
            let (eg, ge) = p.split_once(':').ok_or_else(bad)?;
            Ok(ReadoutError {
                e_given_g: eg.trim().parse().map_err(|_| bad())?,
                g_given_e: ge.trim().parse().map_err(|_| bad())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if pairs.len() != qubits {
        return Err(bad());
    }
    Ok(Readout::PerQubit(pairs))
}

pub fn noisy_run(ctx: &Context, a: NoisyRunArgs) -> Result<()> {
    let params = a.chain.params()?;
    let q = input_1d(&a.input, &params.lattice())?;
    let c = floquet::build_u1_circuit(&params)?;
    let model = NoiseModel {
        p1: a.p1,
        p2: a.p2,
        readout: readout_model(&a, c.num_qubits())?,
        shots: a.shots,
        seed: a.seed,
    };
    model.validate(c.num_qubits()).map_err(|e| usage(e.to_string()))?;
    let input = StateVector::excited(c.num_qubits(), q)?;
    let record = noise::run_noisy(&c, &input, &model)?;
    let f = record.excitation_frequencies();
    let mut exact = SingleExcitationState::excited(c.num_qubits(), q)?;
    exact.apply_circuit(&c)?;
    let mut result = json!({
        "noise_model": model,
        "counts": record.counts,
        "frequencies": f,
        "standard_errors": record.standard_errors(),
        "argmax": argmax(&f),
        "noiseless": exact.excitation_distribution(),
    });
    if a.mitigate {
        result["mitigated"] = json!(noise::readout_mitigate(&record, &model)?);
    }
    ctx.emit_json(&a, result)
}

// ----------------------------------------------------------------- export

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DialectArg {
    Qasm2,
    Quil,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[arg(long, value_enum, default_value_t = DialectArg::Qasm2)]
    pub dialect: DialectArg,
    #[arg(long, value_enum, default_value_t = Kind::OneD)]
    pub lattice: Kind,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub sites: usize,
    #[arg(long, default_value_t = 5)]
    pub nx: usize,
    #[arg(long, default_value_t = 5)]
    pub ny: usize,
    #[arg(long, default_value_t = 3)]
    pub cycles: usize,
}

pub fn export(ctx: &Context, a: ExportArgs) -> Result<()> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required for this lattice")));
    let circuit = match a.lattice {
        Kind::OneD => {
            let chain = Chain1D {
                alpha: need(a.alpha, "alpha")?,
                beta: need(a.beta, "beta")?,
                sites: a.sites,
                cycles: a.cycles,
            };
            floquet::build_u1_circuit(&chain.params()?)?
        }
        Kind::TwoD => {
            let lattice = Lattice2D {
                gamma: need(a.gamma, "gamma")?,
                delta: need(a.delta, "delta")?,
                nx: a.nx,
                ny: a.ny,
                cycles: a.cycles,
            };
            floquet::build_u2_circuit(&lattice.params()?)?
        }
    };
    let (dialect, comment) = match a.dialect {
        DialectArg::Qasm2 => (Dialect::Qasm2, "//"),
        DialectArg::Quil => (Dialect::Quil, "#"),
    };
    let program = emit(&circuit.expanded(), dialect)?;
    let summary = json!({
        "dialect": program.dialect,
        "gate_count": program.gate_count,
        "qubit_count": program.qubit_count,
        "macro_gates": circuit.gate_count(),
    });
    ctx.emit_text(&a, comment, &program.text, summary)
}
