//! Classical simulation of digitally synthesized topological matter.
//!
//! A spinful lattice is encoded in a qubit register (two qubits per site, one
//! per spin) and driven by circuits of composite two-qubit gates that realize
//! on-site spin rotations and spin-orbit hopping. The crate provides
//!
//! * gate/state types with a full statevector engine and a single-excitation
//!   engine ([`gate`], [`circuit`], [`state`], [`subspace`]),
//! * builders for the 1D and 2D Floquet circuits and the mean-displacement
//!   protocol ([`lattice`], [`floquet`]),
//! * momentum-space invariants, edge-state analytics and phase diagrams
//!   ([`invariants`]),
//! * Pauli-trajectory noise with readout error ([`noise`]),
//! * OpenQASM 2.0 / Quil emission and a QASM reader ([`codegen`]).
//!
//! Conventions: `|g⟩ ≡ |0⟩`, `|e⟩ ≡ |1⟩`, and statevector indices are
//! little-endian (qubit 0 is the least significant bit).

pub mod circuit;
pub mod codegen;
mod error;
pub mod floquet;
pub mod gate;
pub mod invariants;
pub mod lattice;
pub mod noise;
pub mod state;
pub mod subspace;

pub use circuit::Circuit;
pub use error::{Error, Result};
pub use gate::Gate;
pub use state::{QuantumState, SingleExcitationState, StateVector};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
