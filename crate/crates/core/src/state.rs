//! Quantum register states and the two propagation engines.
//!
//! [`StateVector`] stores all `2^Q` amplitudes with little-endian indexing
//! (qubit `q` is bit `q` of the basis index). [`SingleExcitationState`] keeps
//! only the `Q` amplitudes of the Hamming-weight-one states; it accepts the
//! gates that map that subspace to itself.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::gate::{expand_composite_u, hopping_block, ry_matrix, rz_matrix, Gate};
use crate::{Error, Result, C64};

/// Largest register the dense statevector engine will allocate.
pub const MAX_STATEVECTOR_QUBITS: usize = 28;

const NORM_TOL: f64 = 1e-10;

pub trait QuantumState {
    fn num_qubits(&self) -> usize;

    fn apply_gate(&mut self, gate: &Gate) -> Result<()>;

    /// Probability that each qubit is found excited.
    fn excitation_distribution(&self) -> Vec<f64>;

    fn norm_sqr(&self) -> f64;

    fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits() {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits(),
                found: circuit.num_qubits(),
            });
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }
}

fn check_norm(amps: &[C64]) -> Result<()> {
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (n - 1.0).abs() > NORM_TOL || amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Computational basis state with the given little-endian index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::TooManyQubits(num_qubits, MAX_STATEVECTOR_QUBITS));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// All qubits in `|g⟩`.
    pub fn vacuum(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Only `qubit` excited.
    pub fn excited(num_qubits: usize, qubit: usize) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits,
            });
        }
        Self::basis(num_qubits, 1 << qubit)
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        check_norm(&amplitudes)?;
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn apply_single(&mut self, m: &Matrix2<C64>, qubit: usize) {
        let stride = 1usize << qubit;
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        for block in self.amplitudes.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = m00 * a + m01 * b;
                *y = m10 * a + m11 * b;
            }
        }
    }

    pub(crate) fn apply_rz(&mut self, phi: f64, qubit: usize) {
        let lo = C64::from_polar(1.0, -0.5 * phi);
        let hi = C64::from_polar(1.0, 0.5 * phi);
        let mask = 1usize << qubit;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & mask == 0 { lo } else { hi };
        }
    }

    pub(crate) fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
    }

    /// Applies a 4×4 matrix to qubits `(a, b)`, basis `{gg, ge, eg, ee}` with
    /// the first letter on `a`.
    pub(crate) fn apply_pair(&mut self, m: &nalgebra::Matrix4<C64>, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        let dim = self.amplitudes.len();
        for base in 0..dim {
            if base & (ma | mb) != 0 {
                continue;
            }
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let v = idx.map(|i| self.amplitudes[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amplitudes[i] = (0..4).map(|c| m[(r, c)] * v[c]).sum();
            }
        }
    }

    pub(crate) fn apply_pauli(&mut self, pauli: Pauli, qubit: usize) {
        let mask = 1usize << qubit;
        match pauli {
            Pauli::X => {
                for i in 0..self.amplitudes.len() {
                    if i & mask == 0 {
                        self.amplitudes.swap(i, i | mask);
                    }
                }
            }
            Pauli::Y => {
                // Y|g⟩ = i|e⟩, Y|e⟩ = −i|g⟩
                for i in 0..self.amplitudes.len() {
                    if i & mask == 0 {
                        let (g, e) = (self.amplitudes[i], self.amplitudes[i | mask]);
                        self.amplitudes[i] = C64::new(0.0, -1.0) * e;
                        self.amplitudes[i | mask] = C64::new(0.0, 1.0) * g;
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }
}

/// Non-identity Pauli operator, used for error insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            Gate::Ry { theta, qubit } => self.apply_single(&ry_matrix(theta), qubit),
            Gate::Rz { phi, qubit } => self.apply_rz(phi, qubit),
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::CompositeU { theta, a, b } => {
                // gate-level synthesis, so this engine checks the decomposition
                for g in expand_composite_u(theta, a, b)? {
                    self.apply_gate(&g)?;
                }
            }
        }
        Ok(())
    }

    fn excitation_distribution(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.num_qubits];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let w = a.norm_sqr();
            if w == 0.0 {
                continue;
            }
            let mut bits = i;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                p[q] += w;
                bits &= bits - 1;
            }
        }
        p
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// State confined to the single-excitation subspace: `amplitudes[q]` is the
/// amplitude of the basis state with only qubit `q` excited.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleExcitationState {
    amplitudes: Vec<C64>,
}

impl SingleExcitationState {
    pub fn excited(num_qubits: usize, qubit: usize) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); num_qubits];
        amplitudes[qubit] = C64::new(1.0, 0.0);
        Ok(SingleExcitationState { amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        check_norm(&amplitudes)?;
        Ok(SingleExcitationState { amplitudes })
    }

    /// Restriction of a full state to the weight-one basis states.
    pub fn restrict(state: &StateVector) -> Self {
        let amplitudes = (0..state.num_qubits())
            .map(|q| state.amplitudes()[1 << q])
            .collect();
        SingleExcitationState { amplitudes }
    }

    /// Embedding into the full register.
    pub fn to_state_vector(&self) -> Result<StateVector> {
        let q = self.amplitudes.len();
        if q > MAX_STATEVECTOR_QUBITS {
            return Err(Error::TooManyQubits(q, MAX_STATEVECTOR_QUBITS));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << q];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amps[1 << i] = *a;
        }
        Ok(StateVector {
            num_qubits: q,
            amplitudes: amps,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn rotate_pair(&mut self, theta: f64, a: usize, b: usize) {
        let m = hopping_block(theta);
        let (x, y) = (self.amplitudes[a], self.amplitudes[b]);
        self.amplitudes[a] = m[(0, 0)] * x + m[(0, 1)] * y;
        self.amplitudes[b] = m[(1, 0)] * x + m[(1, 1)] * y;
    }
}

impl QuantumState for SingleExcitationState {
    fn num_qubits(&self) -> usize {
        self.amplitudes.len()
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.amplitudes.len())?;
        match *gate {
            Gate::CompositeU { theta, a, b } => self.rotate_pair(theta, a, b),
            Gate::Rz { phi, qubit } => {
                // every other qubit sits in |g⟩ and contributes e^{−iφ/2}
                let d = rz_matrix(phi);
                for (q, amp) in self.amplitudes.iter_mut().enumerate() {
                    *amp *= if q == qubit { d[(1, 1)] } else { d[(0, 0)] };
                }
            }
            g @ (Gate::Ry { .. } | Gate::Cnot { .. }) => {
                return Err(Error::NonConserving(format!("{g:?}")));
            }
        }
        Ok(())
    }

    fn excitation_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_1_SQRT_2};

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn rz_on_vacuum_is_global_phase() {
        let mut s = StateVector::vacuum(2).unwrap();
        s.apply_gate(&Gate::rz(0.8, 1)).unwrap();
        assert!(close(s.amplitudes()[0], C64::from_polar(1.0, -0.4)));
    }

    #[test]
    fn cnot_truth_table() {
        let mut s = StateVector::excited(2, 0).unwrap();
        s.apply_gate(&Gate::cnot(0, 1)).unwrap();
        assert!(close(s.amplitudes()[0b11], C64::new(1.0, 0.0)));
        let mut s = StateVector::excited(2, 1).unwrap();
        s.apply_gate(&Gate::cnot(0, 1)).unwrap();
        assert!(close(s.amplitudes()[0b10], C64::new(1.0, 0.0)));
    }

    #[test]
    fn composite_half_pi_moves_excitation_with_minus_i() {
        // |eg⟩ on (0, 1): qubit 0 excited
        let mut s = StateVector::excited(2, 0).unwrap();
        s.apply_gate(&Gate::composite(FRAC_PI_2, 0, 1)).unwrap();
        assert!(close(s.amplitudes()[0b10], C64::new(0.0, -1.0)));
        assert!(s.amplitudes()[0b01].norm() < 1e-12);

        let mut sub = SingleExcitationState::excited(2, 0).unwrap();
        sub.apply_gate(&Gate::composite(FRAC_PI_2, 0, 1)).unwrap();
        assert!(close(sub.amplitudes()[1], C64::new(0.0, -1.0)));
    }

    #[test]
    fn subspace_rejects_non_conserving_gates() {
        let mut s = SingleExcitationState::excited(3, 0).unwrap();
        assert!(matches!(s.apply_gate(&Gate::ry(0.1, 0)), Err(Error::NonConserving(_))));
        assert!(matches!(s.apply_gate(&Gate::cnot(0, 1)), Err(Error::NonConserving(_))));
        assert!(matches!(
            s.apply_gate(&Gate::composite(0.1, 0, 3)),
            Err(Error::QubitOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn subspace_rz_matches_full() {
        let amps = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let mut sub = SingleExcitationState::from_amplitudes(amps).unwrap();
        let mut full = sub.to_state_vector().unwrap();
        for g in [Gate::rz(0.7, 1), Gate::rz(-1.3, 0), Gate::composite(0.4, 1, 2)] {
            sub.apply_gate(&g).unwrap();
            full.apply_gate(&g).unwrap();
        }
        let r = SingleExcitationState::restrict(&full);
        for (a, b) in r.amplitudes().iter().zip(sub.amplitudes()) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn excitation_distributions() {
        let s = StateVector::excited(3, 0).unwrap();
        assert_eq!(s.excitation_distribution(), vec![1.0, 0.0, 0.0]);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let sub = SingleExcitationState::from_amplitudes(vec![h, h]).unwrap();
        let p = sub.excitation_distribution();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let full = sub.to_state_vector().unwrap();
        let q = full.excitation_distribution();
        assert!((q[0] - 0.5).abs() < 1e-12 && (q[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_matches_matrix() {
        let mut s = StateVector::vacuum(1).unwrap();
        s.apply_pauli(Pauli::Y, 0);
        assert!(close(s.amplitudes()[1], C64::new(0.0, 1.0)));
        s.apply_pauli(Pauli::Y, 0);
        assert!(close(s.amplitudes()[0], C64::new(1.0, 0.0)));
    }

    #[test]
    fn constructors_validate() {
        assert!(StateVector::from_amplitudes(vec![C64::new(1.0, 0.0); 3]).is_err());
        assert!(StateVector::from_amplitudes(vec![C64::new(1.0, 0.0); 2]).is_err());
        assert!(SingleExcitationState::excited(2, 2).is_err());
        assert!(StateVector::vacuum(40).is_err());
    }
}
