//! Momentum-space invariants, edge-state analytics and phase diagrams.

pub mod bloch;
pub mod edge;
pub mod phase;
pub mod winding;

pub use bloch::{
    bloch_u1, bloch_u2, branch_log_hamiltonian, quasienergy_bands, uniform_k_grid, BandStructure, BranchLog, Mat2,
};
pub use edge::{edge_analytics, edge_eigenstate_check, EdgeStateAnalytics};
pub use phase::{phase_diagram_1d, phase_diagram_2d, Cell, DiagramKind, PhaseDiagram};
pub use winding::{winding_1d, winding_2d, Gap, WindingResult};
