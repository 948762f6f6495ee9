//! Phase diagrams over two angle axes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::winding::{winding_1d, winding_2d, Gap, WindingResult};
use crate::{Error, Result};

/// Minimum eigenphase distance to ε below which a cell is left undefined.
pub const GAP_CLOSING_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramKind {
    /// Axes (α, β), invariants (ν₀, ν_π).
    OneD,
    /// Axes (γ, δ), invariants (W₀, W_π).
    TwoD,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Defined { zero: i64, pi: i64 },
    Undefined { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub kind: DiagramKind,
    pub axis_a: Vec<f64>,
    pub axis_b: Vec<f64>,
    pub k_points: usize,
    pub t_points: Option<usize>,
    /// `cells[i][j]` belongs to `(axis_a[i], axis_b[j])`.
    pub cells: Vec<Vec<Cell>>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i][j]
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, &Cell)> + '_ {
        self.axis_a.iter().enumerate().flat_map(move |(i, &a)| {
            self.axis_b
                .iter()
                .enumerate()
                .map(move |(j, &b)| (a, b, &self.cells[i][j]))
        })
    }
}

fn classify(zero: Result<WindingResult>, pi: Result<WindingResult>) -> Cell {
    match (zero, pi) {
        (Ok(z), Ok(p)) => {
            if z.min_gap < GAP_CLOSING_TOL || p.min_gap < GAP_CLOSING_TOL {
                // flat drives report an exact zero even with a closed gap
                if z.raw_integral == 0.0 && p.raw_integral == 0.0 && z.residual == 0.0 {
                    return Cell::Defined { zero: 0, pi: 0 };
                }
                return Cell::Undefined {
                    reason: format!("gap below {GAP_CLOSING_TOL:e}"),
                };
            }
            Cell::Defined {
                zero: z.value,
                pi: p.value,
            }
        }
        (Err(e), _) | (_, Err(e)) => Cell::Undefined {
            reason: e.to_string(),
        },
    }
}

fn sweep(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> Cell + Sync) -> Result<Vec<Vec<Cell>>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("phase diagram axes must be nonempty".into()));
    }
    let flat: Vec<Cell> = (0..a.len() * b.len())
        .into_par_iter()
        .map(|idx| f(a[idx / b.len()], b[idx % b.len()]))
        .collect();
    Ok(flat.chunks(b.len()).map(<[Cell]>::to_vec).collect())
}

pub fn phase_diagram_1d(alphas: &[f64], betas: &[f64], k_points: usize) -> Result<PhaseDiagram> {
    let cells = sweep(alphas, betas, |a, b| {
        classify(
            winding_1d(a, b, Gap::Zero, k_points),
            winding_1d(a, b, Gap::Pi, k_points),
        )
    })?;
    Ok(PhaseDiagram {
        kind: DiagramKind::OneD,
        axis_a: alphas.to_vec(),
        axis_b: betas.to_vec(),
        k_points,
        t_points: None,
        cells,
    })
}

pub fn phase_diagram_2d(gammas: &[f64], deltas: &[f64], k_points: usize, t_points: usize) -> Result<PhaseDiagram> {
    let cells = sweep(gammas, deltas, |g, d| {
        classify(
            winding_2d(g, d, Gap::Zero, k_points, t_points),
            winding_2d(g, d, Gap::Pi, k_points, t_points),
        )
    })?;
    Ok(PhaseDiagram {
        kind: DiagramKind::TwoD,
        axis_a: gammas.to_vec(),
        axis_b: deltas.to_vec(),
        k_points,
        t_points: Some(t_points),
        cells,
    })
}

/// `n` points strictly inside `(lo, hi)`, at cell centres.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_axes_rejected() {
        assert!(phase_diagram_1d(&[], &[1.0], 64).is_err());
    }

    #[test]
    fn gap_closing_cell_is_undefined() {
        // α = β = π: bands touch at E = 0
        let d = phase_diagram_1d(&[PI], &[PI, 1.9 * PI], 128).unwrap();
        assert!(matches!(d.cell(0, 0), Cell::Undefined { .. }));
        assert_eq!(d.cell(0, 1), &Cell::Defined { zero: 1, pi: 1 });
        assert_eq!(d.rows().count(), 2);
    }

    #[test]
    fn open_grid_avoids_endpoints() {
        let g = open_grid(0.0, 2.0 * PI, 4);
        assert!((g[0] - PI / 4.0).abs() < 1e-15);
        assert!((g[3] - 7.0 * PI / 4.0).abs() < 1e-15);
    }
}
