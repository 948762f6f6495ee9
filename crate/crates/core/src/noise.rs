//! Pauli-trajectory noise with classical readout error.
//!
//! Each shot is one trajectory: after every elementary gate each touched qubit
//! independently suffers a uniformly random Pauli (X, Y or Z) with probability
//! `p1` (single-qubit gates) or `p2` (each qubit of a CNOT). The final state is
//! sampled once in the computational basis and each bit is then flipped
//! according to the readout confusion probabilities.
//!
//! Every shot draws from its own ChaCha stream (`seed`, stream = shot index), so
//! the record does not depend on how shots are scheduled across threads.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::gate::{composite_u_matrix, expand_composite_u, Gate};
use crate::state::{Pauli, QuantumState, StateVector};
use crate::{Error, Result};

/// Largest register simulated by trajectories.
pub const MAX_NOISY_QUBITS: usize = 24;

/// Budget for caching noiseless intermediate states, in amplitudes.
const PREFIX_CACHE_AMPLITUDES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError {
    /// P(read e | g).
    pub e_given_g: f64,
    /// P(read g | e).
    pub g_given_e: f64,
}

impl ReadoutError {
    pub const IDEAL: ReadoutError = ReadoutError {
        e_given_g: 0.0,
        g_given_e: 0.0,
    };

    pub fn symmetric(p: f64) -> Self {
        ReadoutError {
            e_given_g: p,
            g_given_e: p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    Uniform(ReadoutError),
    PerQubit(Vec<ReadoutError>),
}

impl Readout {
    pub fn for_qubit(&self, q: usize) -> ReadoutError {
        match self {
            Readout::Uniform(r) => *r,
            Readout::PerQubit(v) => v[q],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout: Readout,
    pub shots: usize,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 1e-3,
            p2: 1e-2,
            readout: Readout::Uniform(ReadoutError::symmetric(0.03)),
            shots: 8192,
            seed: 0,
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")))
    }
}

impl NoiseModel {
    pub fn ideal(shots: usize, seed: u64) -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            readout: Readout::Uniform(ReadoutError::IDEAL),
            shots,
            seed,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)?;
        if self.shots == 0 {
            return Err(Error::InvalidParameter("shots must be ≥ 1".into()));
        }
        if let Readout::PerQubit(v) = &self.readout {
            if v.len() != num_qubits {
                return Err(Error::SizeMismatch {
                    expected: num_qubits,
                    found: v.len(),
                });
            }
        }
        for q in 0..num_qubits {
            let r = self.readout.for_qubit(q);
            check_probability("P(read e|g)", r.e_given_g)?;
            check_probability("P(read g|e)", r.g_given_e)?;
        }
        Ok(())
    }
}

/// Shot counts keyed by bitstring, qubit 0 rightmost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub num_qubits: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl MeasurementRecord {
    fn from_outcomes(num_qubits: usize, outcomes: &[usize]) -> Self {
        let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
        for &o in outcomes {
            *tally.entry(o).or_default() += 1;
        }
        let counts = tally
            .into_iter()
            .map(|(o, c)| (format!("{o:0num_qubits$b}"), c))
            .collect();
        MeasurementRecord {
            num_qubits,
            shots: outcomes.len() as u64,
            counts,
        }
    }

    /// Fraction of shots reading `e` on each qubit.
    pub fn excitation_frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; self.num_qubits];
        for (bits, &c) in &self.counts {
            for (q, b) in bits.bytes().rev().enumerate() {
                if b == b'1' {
                    f[q] += c as f64;
                }
            }
        }
        f.iter_mut().for_each(|x| *x /= self.shots as f64);
        f
    }

    /// Binomial standard error of each frequency.
    pub fn standard_errors(&self) -> Vec<f64> {
        self.excitation_frequencies()
            .iter()
            .map(|f| (f * (1.0 - f) / self.shots as f64).sqrt())
            .collect()
    }
}

/// Elementary gates of one macro, plus the fused matrix when it is a composite.
struct Block {
    gates: Vec<Gate>,
    fused: Option<(Matrix4<crate::C64>, usize, usize)>,
    first: usize,
}

fn blocks(circuit: &Circuit) -> Vec<Block> {
    let mut out = Vec::new();
    let mut first = 0;
    for gate in circuit.gates() {
        let block = match *gate {
            Gate::CompositeU { theta, a, b } => Block {
                gates: expand_composite_u(theta, a, b).expect("validated circuit").to_vec(),
                fused: Some((composite_u_matrix(theta), a, b)),
                first,
            },
            g => Block {
                gates: vec![g],
                fused: None,
                first,
            },
        };
        first += block.gates.len();
        out.push(block);
    }
    out
}

#[derive(Clone, Copy)]
struct Fault {
    gate: usize,
    qubit: usize,
    pauli: Pauli,
}

fn sample_faults(blocks: &[Block], model: &NoiseModel, rng: &mut ChaCha8Rng, out: &mut Vec<Fault>) {
    out.clear();
    const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    for block in blocks {
        for (i, gate) in block.gates.iter().enumerate() {
            let (q0, q1) = gate.support();
            let p = if q1.is_some() { model.p2 } else { model.p1 };
            if p == 0.0 {
                continue;
            }
            for q in std::iter::once(q0).chain(q1) {
                if rng.gen::<f64>() < p {
                    out.push(Fault {
                        gate: block.first + i,
                        qubit: q,
                        pauli: PAULIS[rng.gen_range(0..3)],
                    });
                }
            }
        }
    }
}

fn sample_index(probabilities: impl Iterator<Item = f64>, r: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probabilities.enumerate() {
        acc += p;
        last = i;
        if r < acc {
            return i;
        }
    }
    // rounding left r above the total; return the last populated outcome
    last
}

/// Runs `model.shots` noisy trajectories of `circuit` on `input`.
///
/// Composite gates are expanded internally so noise acts after each of their
/// elementary gates; a composite with no fault is applied as one fused 4×4 step.
pub fn run_noisy(circuit: &Circuit, input: &StateVector, model: &NoiseModel) -> Result<MeasurementRecord> {
    let n = circuit.num_qubits();
    if n > MAX_NOISY_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_NOISY_QUBITS));
    }
    if input.num_qubits() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: input.num_qubits(),
        });
    }
    model.validate(n)?;
    for g in circuit.gates() {
        g.validate(n)?;
    }
    let blocks = blocks(circuit);
    let apply_block = |state: &mut StateVector, block: &Block| match block.fused {
        Some((ref m, a, b)) => state.apply_pair(m, a, b),
        None => state.apply_gate(&block.gates[0]).expect("validated gate"),
    };

    // noiseless states before each block, while they fit the budget
    let dim = 1usize << n;
    let cached = (PREFIX_CACHE_AMPLITUDES / dim).min(blocks.len() + 1);
    let mut prefix = Vec::with_capacity(cached);
    let mut state = input.clone();
    for (i, block) in blocks.iter().enumerate() {
        if i < cached {
            prefix.push(state.clone());
        }
        apply_block(&mut state, block);
    }
    if prefix.len() < cached {
        prefix.push(state.clone());
    }
    let noiseless = state.probabilities();

    let readout: Vec<ReadoutError> = (0..n).map(|q| model.readout.for_qubit(q)).collect();
    let outcomes: Vec<usize> = (0..model.shots)
        .into_par_iter()
        .map_init(Vec::new, |faults, shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            rng.set_stream(shot as u64);
            sample_faults(&blocks, model, &mut rng, faults);
            let r = rng.gen::<f64>();
            let mut outcome = if faults.is_empty() {
                sample_index(noiseless.iter().copied(), r)
            } else {
                let start = blocks
                    .partition_point(|b| b.first + b.gates.len() <= faults[0].gate)
                    .min(prefix.len() - 1);
                let mut s = prefix[start].clone();
                let mut next = faults.iter().peekable();
                for block in &blocks[start..] {
                    let end = block.first + block.gates.len();
                    if next.peek().is_none_or(|f| f.gate >= end) {
                        apply_block(&mut s, block);
                        continue;
                    }
                    for (i, g) in block.gates.iter().enumerate() {
                        s.apply_gate(g).expect("validated gate");
                        while let Some(f) = next.next_if(|f| f.gate == block.first + i) {
                            s.apply_pauli(f.pauli, f.qubit);
                        }
                    }
                }
                sample_index(s.amplitudes().iter().map(|z| z.norm_sqr()), r)
            };
            for (q, ro) in readout.iter().enumerate() {
                let p = if outcome >> q & 1 == 1 { ro.g_given_e } else { ro.e_given_g };
                if p > 0.0 && rng.gen::<f64>() < p {
                    outcome ^= 1 << q;
                }
            }
            outcome
        })
        .collect();
    Ok(MeasurementRecord::from_outcomes(n, &outcomes))
}

/// Per-qubit inversion of the readout confusion matrix on the marginal
/// frequencies: `p = (f − P(e|g)) / (1 − P(e|g) − P(g|e))`, clipped to `[0, 1]`.
pub fn readout_mitigate(record: &MeasurementRecord, model: &NoiseModel) -> Result<Vec<f64>> {
    model.validate(record.num_qubits)?;
    record
        .excitation_frequencies()
        .iter()
        .enumerate()
        .map(|(q, f)| {
            let r = model.readout.for_qubit(q);
            let det = 1.0 - r.e_given_g - r.g_given_e;
            if det.abs() < 1e-12 {
                return Err(Error::SingularConfusion(q));
            }
            Ok(((f - r.e_given_g) / det).clamp(0.0, 1.0))
        })
        .collect()
}
