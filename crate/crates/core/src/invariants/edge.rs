//! Closed-form left-edge states of the 1D cycle.
//!
//! The 0-energy state lives on the spin-up qubits with amplitudes
//! `λ₁^{x−1}`, `λ₁ = −tan(α/4)·cot(β/4)`; the π-energy state lives on the
//! spin-down qubits with `λ̃₂^{x−1}`, `λ̃₂ = cot(α/4)·cot(β/4)`. A state exists
//! (is normalizable on a half-infinite chain) when its ratio has modulus below 1.

use serde::{Deserialize, Serialize};

use super::winding::Gap;
use crate::floquet::{build_u1_cycle, FloquetParams1D};
use crate::state::{QuantumState, SingleExcitationState};
use crate::{Error, Result, C64};

const SINGULAR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeStateAnalytics {
    pub alpha: f64,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub exists_zero: bool,
    pub exists_pi: bool,
}

impl EdgeStateAnalytics {
    pub fn ratio(&self, gap: Gap) -> f64 {
        match gap {
            Gap::Zero => self.lambda1,
            Gap::Pi => self.lambda2,
        }
    }

    pub fn exists(&self, gap: Gap) -> bool {
        match gap {
            Gap::Zero => self.exists_zero,
            Gap::Pi => self.exists_pi,
        }
    }

    /// Normalized edge state on an open chain of `sites` sites.
    pub fn state(&self, sites: usize, gap: Gap) -> Result<SingleExcitationState> {
        if !self.exists(gap) {
            return Err(Error::NoEdgeState(gap.epsilon()));
        }
        let lambda = self.ratio(gap);
        let offset = match gap {
            Gap::Zero => 0,
            Gap::Pi => 1,
        };
        let mut amps = vec![C64::new(0.0, 0.0); 2 * sites];
        let mut a = 1.0;
        for x in 0..sites {
            amps[2 * x + offset] = C64::new(a, 0.0);
            a *= lambda;
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= norm);
        SingleExcitationState::from_amplitudes(amps)
    }
}

pub fn edge_analytics(alpha: f64, beta: f64) -> Result<EdgeStateAnalytics> {
    let (sa, ca) = (alpha / 4.0).sin_cos();
    let sb = (beta / 4.0).sin();
    let cb = (beta / 4.0).cos();
    if ca.abs() < SINGULAR_TOL {
        return Err(Error::SingularAngle(format!("tan(α/4) diverges at α = {alpha}")));
    }
    if sa.abs() < SINGULAR_TOL {
        return Err(Error::SingularAngle(format!("cot(α/4) diverges at α = {alpha}")));
    }
    if sb.abs() < SINGULAR_TOL {
        return Err(Error::SingularAngle(format!("cot(β/4) diverges at β = {beta}")));
    }
    let cot_b = cb / sb;
    let lambda1 = -(sa / ca) * cot_b;
    let lambda2 = (ca / sa) * cot_b;
    Ok(EdgeStateAnalytics {
        alpha,
        beta,
        lambda1,
        lambda2,
        exists_zero: lambda1.abs() < 1.0,
        exists_pi: lambda2.abs() < 1.0,
    })
}

/// `‖U₁|ψ⟩ − e^{−iε}|ψ⟩‖` for the analytic edge state on an open `sites`-site chain.
pub fn edge_eigenstate_check(alpha: f64, beta: f64, sites: usize, gap: Gap) -> Result<f64> {
    let analytics = edge_analytics(alpha, beta)?;
    let psi = analytics.state(sites, gap)?;
    let cycle = build_u1_cycle(&FloquetParams1D::new(alpha, beta, sites, 1))?;
    let mut out = psi.clone();
    out.apply_circuit(&cycle)?;
    let phase = C64::from_polar(1.0, -gap.epsilon());
    Ok(out
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(u, p)| (u - phase * p).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn equal_angles_are_marginal() {
        let a = edge_analytics(0.7, 0.7).unwrap();
        assert!((a.lambda1 + 1.0).abs() < 1e-12);
        assert!(!a.exists_zero);
    }

    #[test]
    fn closed_form_values() {
        let a = edge_analytics(PI, 1.9 * PI).unwrap();
        let expected = -(0.475 * PI).cos() / (0.475 * PI).sin();
        assert!((a.lambda1 - expected).abs() < 1e-12);
        assert!((a.lambda1 + 0.0787017068246).abs() < 1e-10);
        assert!(a.exists_zero && a.exists_pi);

        let b = edge_analytics(0.1 * PI, 0.7 * PI).unwrap();
        assert!(b.exists_zero && !b.exists_pi);
    }

    #[test]
    fn singular_angles_rejected() {
        assert!(matches!(edge_analytics(0.0, 1.0), Err(Error::SingularAngle(_))));
        assert!(matches!(edge_analytics(2.0 * PI, 1.0), Err(Error::SingularAngle(_))));
        assert!(matches!(edge_analytics(1.0, 4.0 * PI), Err(Error::SingularAngle(_))));
    }

    #[test]
    fn missing_state_is_an_error() {
        assert_eq!(
            edge_eigenstate_check(PI, 0.9 * PI, 20, Gap::Zero),
            Err(Error::NoEdgeState(0.0))
        );
    }

    #[test]
    fn state_is_normalized_on_its_sublattice() {
        let a = edge_analytics(1.9 * PI, 0.4 * PI).unwrap();
        let s = a.state(6, Gap::Pi).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(s.amplitudes().iter().step_by(2).all(|z| z.norm() == 0.0));
    }
}
