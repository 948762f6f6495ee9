use serde::{Deserialize, Serialize};

use crate::gate::{expand_composite_u, Gate};
use crate::{Error, Result};

/// Layered circuit. Layer 0 acts first; gates within one layer touch disjoint qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            layers: Vec::new(),
        }
    }

    /// Packs gates into layers as early as possible, preserving the order of
    /// gates that share a qubit.
    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits);
        // first layer index at which each qubit is free
        let mut free_at = vec![0usize; num_qubits];
        for gate in gates {
            gate.validate(num_qubits)?;
            let (p, q) = gate.support();
            let slot = q.map_or(free_at[p], |q| free_at[p].max(free_at[q]));
            if slot == circuit.layers.len() {
                circuit.layers.push(Vec::new());
            }
            circuit.layers[slot].push(gate);
            free_at[p] = slot + 1;
            if let Some(q) = q {
                free_at[q] = slot + 1;
            }
        }
        Ok(circuit)
    }

    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.num_qubits];
        for gate in &layer {
            gate.validate(self.num_qubits)?;
            let (p, q) = gate.support();
            for idx in std::iter::once(p).chain(q) {
                if std::mem::replace(&mut used[idx], true) {
                    return Err(Error::LayerOverlap(idx));
                }
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    /// All gates in time order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn elementary_gate_count(&self) -> usize {
        self.gates().map(Gate::elementary_count).sum()
    }

    pub fn is_expanded(&self) -> bool {
        self.gates().all(Gate::is_elementary)
    }

    /// Replaces every composite gate by its eight-gate realization. A layer of
    /// parallel composites becomes eight layers of parallel elementary gates.
    pub fn expanded(&self) -> Circuit {
        let mut out = Circuit::new(self.num_qubits);
        for layer in &self.layers {
            if layer.iter().all(Gate::is_elementary) {
                out.layers.push(layer.clone());
                continue;
            }
            let mut sub: [Vec<Gate>; 8] = Default::default();
            for gate in layer {
                match *gate {
                    Gate::CompositeU { theta, a, b } => {
                        let seq = expand_composite_u(theta, a, b).expect("validated on insertion");
                        for (slot, g) in sub.iter_mut().zip(seq) {
                            slot.push(g);
                        }
                    }
                    g => sub[0].push(g),
                }
            }
            out.layers.extend(sub);
        }
        out
    }

    /// The circuit followed by `other`.
    pub fn then(mut self, other: &Circuit) -> Result<Circuit> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(self)
    }

    /// `n` back-to-back copies.
    pub fn repeat(&self, n: usize) -> Circuit {
        let mut out = Circuit::new(self.num_qubits);
        out.layers.reserve(self.layers.len() * n);
        for _ in 0..n {
            out.layers.extend(self.layers.iter().cloned());
        }
        out
    }
}
