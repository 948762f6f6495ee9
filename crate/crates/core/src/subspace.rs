//! Unitary induced by a circuit on the single-excitation subspace.

use nalgebra::DMatrix;

use crate::circuit::Circuit;
use crate::gate::{hopping_block, Gate};
use crate::{Error, Result, C64};

/// Q×Q unitary the circuit induces on the span of `{|e⟩_q}`; column `j` is the
/// image of the state with qubit `j` excited.
///
/// Only composite gates and `RZ` are accepted. Each gate updates two rows (or
/// rescales rows, for `RZ`), so compiling costs O(Q) per gate.
pub fn compile_single_excitation(circuit: &Circuit) -> Result<DMatrix<C64>> {
    let q = circuit.num_qubits();
    let mut m = DMatrix::<C64>::identity(q, q);
    for gate in circuit.gates() {
        gate.validate(q)?;
        match *gate {
            Gate::CompositeU { theta, a, b } => {
                let h = hopping_block(theta);
                for col in 0..q {
                    let (x, y) = (m[(a, col)], m[(b, col)]);
                    m[(a, col)] = h[(0, 0)] * x + h[(0, 1)] * y;
                    m[(b, col)] = h[(1, 0)] * x + h[(1, 1)] * y;
                }
            }
            Gate::Rz { phi, qubit } => {
                let rest = C64::from_polar(1.0, -0.5 * phi);
                let own = C64::from_polar(1.0, 0.5 * phi);
                for row in 0..q {
                    let f = if row == qubit { own } else { rest };
                    m.row_mut(row).iter_mut().for_each(|z| *z *= f);
                }
            }
            g => return Err(Error::NonConserving(format!("{g:?}"))),
        }
    }
    Ok(m)
}

/// Largest elementwise deviation of `U†U` from the identity.
pub fn unitarity_error(m: &DMatrix<C64>) -> f64 {
    let p = m.adjoint() * m;
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (p - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
