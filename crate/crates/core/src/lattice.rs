//! Lattice ↔ qubit maps. Sites are 1-based, qubits 0-based.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Chain of `sites` spinful sites: `(x, ↑) → 2x − 2`, `(x, ↓) → 2x − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap1D {
    pub sites: usize,
}

impl LatticeMap1D {
    pub fn new(sites: usize) -> Self {
        LatticeMap1D { sites }
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.sites
    }

    pub fn qubit(&self, x: usize, spin: Spin) -> Result<usize> {
        if x == 0 || x > self.sites {
            return Err(Error::InvalidParameter(format!(
                "site {x} outside 1..={}",
                self.sites
            )));
        }
        Ok(2 * (x - 1) + spin.offset())
    }

    pub fn site(&self, qubit: usize) -> Result<(usize, Spin)> {
        if qubit >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits(),
            });
        }
        let spin = if qubit.is_multiple_of(2) { Spin::Up } else { Spin::Down };
        Ok((qubit / 2 + 1, spin))
    }
}

/// `nx × ny` lattice, row-major: site `(x, y)` has index `s = (y−1)·nx + (x−1)`,
/// `Q^U_{x,y} = 2s`, `Q^D_{x,y} = 2s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap2D {
    pub nx: usize,
    pub ny: usize,
}

impl LatticeMap2D {
    pub fn new(nx: usize, ny: usize) -> Self {
        LatticeMap2D { nx, ny }
    }

    pub fn num_sites(&self) -> usize {
        self.nx * self.ny
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.num_sites()
    }

    pub fn qubit(&self, x: usize, y: usize, spin: Spin) -> Result<usize> {
        if x == 0 || x > self.nx || y == 0 || y > self.ny {
            return Err(Error::InvalidParameter(format!(
                "site ({x}, {y}) outside {}×{} lattice",
                self.nx, self.ny
            )));
        }
        Ok(2 * ((y - 1) * self.nx + (x - 1)) + spin.offset())
    }

    pub fn site(&self, qubit: usize) -> Result<(usize, usize, Spin)> {
        if qubit >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits(),
            });
        }
        let s = qubit / 2;
        let spin = if qubit.is_multiple_of(2) { Spin::Up } else { Spin::Down };
        Ok((s % self.nx + 1, s / self.nx + 1, spin))
    }

    pub fn is_boundary(&self, x: usize, y: usize) -> bool {
        x == 1 || y == 1 || x == self.nx || y == self.ny
    }

    /// Excitation probability per site (both spins), indexed `[y−1][x−1]`.
    pub fn site_weights(&self, distribution: &[f64]) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.nx]; self.ny];
        for (q, p) in distribution.iter().enumerate().take(self.num_qubits()) {
            let s = q / 2;
            w[s / self.nx][s % self.nx] += p;
        }
        w
    }

    /// Total excitation probability on boundary sites.
    pub fn boundary_weight(&self, distribution: &[f64]) -> f64 {
        let w = self.site_weights(distribution);
        let mut total = 0.0;
        for (iy, row) in w.iter().enumerate() {
            for (ix, p) in row.iter().enumerate() {
                if self.is_boundary(ix + 1, iy + 1) {
                    total += p;
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_d_map_is_bijective() {
        let m = LatticeMap1D::new(5);
        let mut seen = vec![false; m.num_qubits()];
        for x in 1..=5 {
            for spin in [Spin::Up, Spin::Down] {
                let q = m.qubit(x, spin).unwrap();
                assert!(!seen[q]);
                seen[q] = true;
                assert_eq!(m.site(q).unwrap(), (x, spin));
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(m.qubit(1, Spin::Up).unwrap(), 0);
        assert_eq!(m.qubit(1, Spin::Down).unwrap(), 1);
        assert!(m.qubit(0, Spin::Up).is_err());
        assert!(m.qubit(6, Spin::Up).is_err());
    }

    #[test]
    fn two_d_map_is_bijective_row_major() {
        let m = LatticeMap2D::new(3, 2);
        let mut seen = vec![false; m.num_qubits()];
        for y in 1..=2 {
            for x in 1..=3 {
                for spin in [Spin::Up, Spin::Down] {
                    let q = m.qubit(x, y, spin).unwrap();
                    assert!(!seen[q]);
                    seen[q] = true;
                    assert_eq!(m.site(q).unwrap(), (x, y, spin));
                }
            }
        }
        assert_eq!(m.qubit(2, 1, Spin::Up).unwrap(), 2);
        assert_eq!(m.qubit(1, 2, Spin::Down).unwrap(), 7);
    }

    #[test]
    fn boundary_weight_counts_rim() {
        let m = LatticeMap2D::new(3, 3);
        let mut p = vec![0.0; 18];
        let centre = m.qubit(2, 2, Spin::Up).unwrap();
        p[centre] = 0.25;
        p[0] = 0.75;
        assert!((m.boundary_weight(&p) - 0.75).abs() < 1e-15);
    }
}
