//! Elementary gates and the composite excitation-hopping gate.
//!
//! The composite gate `U(θ)` acts on a qubit pair `(a, b)` as
//!
//! ```text
//! U(θ) = cosθ (|ge⟩⟨ge| + |eg⟩⟨eg|) − i sinθ (|ge⟩⟨eg| + |eg⟩⟨ge|)
//! ```
//!
//! on the single-excitation block and as the identity on `{|gg⟩, |ee⟩}`. It is
//! synthesized from four CNOTs and four rotations on qubit `a`; see
//! [`expand_composite_u`] for the canonical time order.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Rotation angle of the `Z±` gates: `Z± = exp(∓i (3π/4) σz) = RZ(±3π/2)`.
pub const Z_PHASE_ANGLE: f64 = 1.5 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    /// `RY(θ) = exp(−i θ σy / 2)`.
    Ry { theta: f64, qubit: usize },
    /// `RZ(φ) = diag(e^{−iφ/2}, e^{+iφ/2})` in `(|g⟩, |e⟩)`.
    Rz { phi: f64, qubit: usize },
    Cnot { control: usize, target: usize },
    /// Composite hopping gate `U(θ)` on the pair `(a, b)`; rotations land on `a`.
    CompositeU { theta: f64, a: usize, b: usize },
}

impl Gate {
    pub fn ry(theta: f64, qubit: usize) -> Self {
        Gate::Ry { theta, qubit }
    }

    pub fn rz(phi: f64, qubit: usize) -> Self {
        Gate::Rz { phi, qubit }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn composite(theta: f64, a: usize, b: usize) -> Self {
        Gate::CompositeU { theta, a, b }
    }

    /// Qubits touched by the gate; the second slot is `None` for one-qubit gates.
    pub fn support(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::CompositeU { a, b, .. } => (a, Some(b)),
        }
    }

    pub fn is_elementary(&self) -> bool {
        !matches!(self, Gate::CompositeU { .. })
    }

    /// Checks index range and distinctness against a register of `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let (p, q) = self.support();
        for index in std::iter::once(p).chain(q) {
            if index >= num_qubits {
                return Err(Error::QubitOutOfRange { index, num_qubits });
            }
        }
        if q == Some(p) {
            return Err(Error::RepeatedQubit(p));
        }
        if let Gate::Ry { theta: x, .. } | Gate::Rz { phi: x, .. } | Gate::CompositeU { theta: x, .. } = *self {
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite angle in {self:?}")));
            }
        }
        Ok(())
    }

    /// Number of elementary gates this gate stands for.
    pub fn elementary_count(&self) -> usize {
        if self.is_elementary() {
            1
        } else {
            8
        }
    }
}

/// The canonical eight-gate realization of `U(θ)` on `(a, b)`, in time order.
///
/// Read as a circuit diagram (first gate acts first):
/// `CNOT(a→b) · Z⁺_a · Y⁻_a(θ) · CNOT(b→a) · Y⁺_a(θ) · CNOT(b→a) · Z⁻_a · CNOT(a→b)`
/// with `Y±(θ) = RY(±θ)` and `Z± = RZ(±3π/2)`.
pub fn expand_composite_u(theta: f64, a: usize, b: usize) -> Result<[Gate; 8]> {
    if a == b {
        return Err(Error::RepeatedQubit(a));
    }
    Ok([
        Gate::cnot(a, b),
        Gate::rz(Z_PHASE_ANGLE, a),
        Gate::ry(-theta, a),
        Gate::cnot(b, a),
        Gate::ry(theta, a),
        Gate::cnot(b, a),
        Gate::rz(-Z_PHASE_ANGLE, a),
        Gate::cnot(a, b),
    ])
}

pub fn ry_matrix(theta: f64) -> Matrix2<C64> {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix2::new(
        C64::new(c, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    )
}

pub fn rz_matrix(phi: f64) -> Matrix2<C64> {
    Matrix2::new(
        C64::from_polar(1.0, -0.5 * phi),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, 0.5 * phi),
    )
}

/// Single-excitation block of `U(θ)`: `[[cosθ, −i sinθ], [−i sinθ, cosθ]]`.
pub fn hopping_block(theta: f64) -> Matrix2<C64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(
        C64::new(c, 0.0),
        C64::new(0.0, -s),
        C64::new(0.0, -s),
        C64::new(c, 0.0),
    )
}

/// Index of a two-qubit basis state in the `{gg, ge, eg, ee}` ordering, where
/// the first letter is qubit `a`.
fn pair_index(bit_a: usize, bit_b: usize) -> usize {
    2 * bit_a + bit_b
}

fn embed_on(gate: Matrix2<C64>, on_a: bool) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let v = if on_a {
                        if b == b2 { gate[(a, a2)] } else { C64::new(0.0, 0.0) }
                    } else if a == a2 {
                        gate[(b, b2)]
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    m[(pair_index(a, b), pair_index(a2, b2))] = v;
                }
            }
        }
    }
    m
}

fn cnot_matrix(control_is_a: bool) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let (a2, b2) = if control_is_a { (a, b ^ a) } else { (a ^ b, b) };
            m[(pair_index(a2, b2), pair_index(a, b))] = C64::new(1.0, 0.0);
        }
    }
    m
}

/// 4×4 matrix of a gate restricted to the pair `(a, b)`, basis `{gg, ge, eg, ee}`.
fn pair_matrix(gate: &Gate, a: usize) -> Matrix4<C64> {
    match *gate {
        Gate::Ry { theta, qubit } => embed_on(ry_matrix(theta), qubit == a),
        Gate::Rz { phi, qubit } => embed_on(rz_matrix(phi), qubit == a),
        Gate::Cnot { control, .. } => cnot_matrix(control == a),
        Gate::CompositeU { theta, .. } => composite_u_matrix(theta),
    }
}

/// Product of the eight gate matrices of the canonical expansion, in the basis
/// `{|gg⟩, |ge⟩, |eg⟩, |ee⟩}` (first letter: qubit `a`).
pub fn composite_u_matrix(theta: f64) -> Matrix4<C64> {
    let gates = expand_composite_u(theta, 0, 1).expect("distinct qubits");
    gates
        .iter()
        .fold(Matrix4::identity(), |acc, g| pair_matrix(g, 0) * acc)
}

/// The block form `U(θ)` should take: hopping block on `{ge, eg}`, identity elsewhere.
pub fn composite_u_target(theta: f64) -> Matrix4<C64> {
    let mut m = Matrix4::identity();
    let block = hopping_block(theta);
    let idx = [pair_index(0, 1), pair_index(1, 0)];
    for (i, &r) in idx.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            m[(r, c)] = block[(i, j)];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &Matrix4<C64>, b: &Matrix4<C64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn expansion_is_four_cnots_four_rotations() {
        let gates = expand_composite_u(0.3, 2, 5).unwrap();
        let cnots = gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
        assert_eq!(cnots, 4);
        assert!(gates.iter().all(|g| g.support().0 == 2 || g.support().1 == Some(2)));
        assert_eq!(expand_composite_u(0.3, 1, 1), Err(Error::RepeatedQubit(1)));
    }

    #[test]
    fn matrix_matches_block_form() {
        for &theta in &[0.0, 0.37, std::f64::consts::FRAC_PI_2, 2.9, -1.1] {
            let m = composite_u_matrix(theta);
            assert!(max_abs_diff(&m, &composite_u_target(theta)) < 1e-12, "θ={theta}");
        }
    }

    #[test]
    fn half_pi_swaps_with_minus_i() {
        let m = composite_u_matrix(std::f64::consts::FRAC_PI_2);
        let ge = pair_index(0, 1);
        let eg = pair_index(1, 0);
        assert!((m[(ge, eg)] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((m[(eg, ge)] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(m[(ge, ge)].norm() < 1e-12);
    }

    #[test]
    fn complement_block_is_exact_identity() {
        // golden: the canonical order leaves |gg⟩ and |ee⟩ with phase +1
        let m = composite_u_matrix(1.234);
        assert!((m[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((m[(3, 3)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn operator_product_reading_has_opposite_sign() {
        // Multiplying the gates in the order they are written (rightmost acts
        // first) yields +i sinθ off-diagonals instead.
        let theta = 0.37;
        let gates = expand_composite_u(theta, 0, 1).unwrap();
        let written = gates
            .iter()
            .fold(Matrix4::<C64>::identity(), |acc, g| acc * pair_matrix(g, 0));
        let ge = pair_index(0, 1);
        let eg = pair_index(1, 0);
        assert!((written[(ge, eg)] - C64::new(0.0, theta.sin())).norm() < 1e-12);
    }

    #[test]
    fn validate_rejects_bad_indices() {
        assert!(Gate::cnot(0, 0).validate(2).is_err());
        assert_eq!(
            Gate::ry(0.1, 3).validate(3),
            Err(Error::QubitOutOfRange { index: 3, num_qubits: 3 })
        );
        assert!(Gate::composite(f64::NAN, 0, 1).validate(2).is_err());
        assert!(Gate::composite(0.2, 0, 1).validate(2).is_ok());
    }
}
