//! Optimality certificate for a given measurement.
//!
//! With `σ_j` the optimal ordering of outcome `j`'s posterior, a measurement
//! attains the minimum guesswork iff `Γ = Σ_j R_{σ_j} π_j` satisfies
//! `Γ ⪯ R_σ` for every σ. Outcomes of an m-outcome POVM are used as they
//! are; orderings with no outcome simply contribute nothing.

use super::{lazy, strategy_operator};
use crate::ensemble::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::guesswork::GuessStrategy;
use crate::hermitian::{CMatrix, HermitianOperator, C64};
use crate::par;

pub const HERMITICITY_TOL: f64 = 1e-7;
pub const VIOLATION_TOL: f64 = 1e-7;
/// Above this many states only the separation heuristic is used.
pub const CERTIFY_ENUMERATION_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateStatus {
    Passed,
    Failed,
    /// No violation found, but not every ordering was examined.
    PassedIncomplete,
}

impl CertificateStatus {
    pub fn label(self) -> &'static str {
        match self {
            CertificateStatus::Passed => "passed",
            CertificateStatus::Failed => "failed",
            CertificateStatus::PassedIncomplete => "sound-but-incomplete",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// `(Γ + Γ†)/2`.
    pub gamma: HermitianOperator,
    /// `‖Γ − Γ†‖_F / (2 max(1, ‖Γ‖_F))`.
    pub hermiticity_residual: f64,
    /// `min_σ λ_min(R_σ − (Γ + Γ†)/2)`.
    pub worst_violation: f64,
    pub worst_strategy: Option<GuessStrategy>,
    pub strategies_checked: usize,
    pub status: CertificateStatus,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.status != CertificateStatus::Failed
    }
}

/// Certificate with the default enumeration cap.
pub fn certify(e: &Ensemble, m: &Povm) -> Result<Certificate> {
    certify_with(e, m, CERTIFY_ENUMERATION_CAP)
}

pub fn certify_with(e: &Ensemble, m: &Povm, enumeration_cap: usize) -> Result<Certificate> {
    Error::check_dim(e.dim(), m.dim())?;
    let n = e.len();
    let d = e.dim();
    let weighted = e.weighted_states();

    let mut gamma = CMatrix::zeros(d, d);
    for pi in m.ops() {
        let q = e.joint_weights(pi)?;
        let s = GuessStrategy::for_weights(&q);
        gamma += strategy_operator(&weighted, &s).matrix() * pi.matrix();
    }
    let gamma_norm = gamma.norm();
    let hermiticity_residual = (&gamma - gamma.adjoint()).norm() / (2.0 * gamma_norm.max(1.0));
    let sym = HermitianOperator::new_unchecked((&gamma + gamma.adjoint()) * C64::new(0.5, 0.0));

    let (worst_violation, worst_strategy, strategies_checked, complete) = if n <= enumeration_cap {
        let all: Vec<GuessStrategy> = GuessStrategy::all(n).collect();
        let mins = par::map(&all, |s| (&strategy_operator(&weighted, s) - &sym).eig().map(|sp| sp.min()));
        let mut worst = f64::INFINITY;
        let mut arg = None;
        for (s, m) in all.iter().zip(mins) {
            let m = m?;
            if m < worst {
                worst = m;
                arg = Some(s.clone());
            }
        }
        (worst, arg, all.len(), true)
    } else {
        let starts = lazy::starting_vectors(e, std::slice::from_ref(&sym))?;
        let found = lazy::separate(&weighted, &sym, &starts);
        let checked = found.len();
        match found.into_iter().next() {
            Some((s, m)) => (m, Some(s), checked, false),
            None => (f64::INFINITY, None, 0, false),
        }
    };

    let ok = hermiticity_residual <= HERMITICITY_TOL && worst_violation >= -VIOLATION_TOL;
    let status = match (ok, complete) {
        (false, _) => CertificateStatus::Failed,
        (true, true) => CertificateStatus::Passed,
        (true, false) => CertificateStatus::PassedIncomplete,
    };
    Ok(Certificate { gamma: sym, hermiticity_residual, worst_violation, worst_strategy, strategies_checked, status })
}
