//! Exact minimum-guesswork and minimum-error values by semidefinite
//! programming, optimality certificates and optimal-measurement recovery.
//!
//! Minimum guesswork is `max Tr(A)` subject to `A ⪯ R_σ` for every guessing
//! order σ, where `R_σ = Σ_i σ(i) p(x_i) ρ_{x_i}`. Minimum error uses the same
//! engine with blocks `−p(x_i)ρ_{x_i}`.

mod barrier;
mod certify;
mod lazy;
mod recover;

pub use barrier::StageRecord;
pub use certify::{certify, certify_with, Certificate, CertificateStatus};
pub use recover::recover_povm;

use crate::ensemble::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::guesswork::{conditional_guesswork, merge_equivalent_outcomes, GuessStrategy};
use crate::hermitian::HermitianOperator;
use crate::par;

/// Largest supported number of states.
pub const MAX_STATES: usize = 8;
/// Constraints with `λ_min(R_σ − A)` at most this are reported as active.
pub const EPS_ACTIVE: f64 = 1e-6;
/// Post-solve slack floor.
pub const FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Accuracy target for the optimal value. Solutions whose duality-gap
    /// estimate exceeds it are flagged unconverged.
    pub tol: f64,
    pub max_newton_steps: usize,
    pub mu_factor: f64,
    /// Up to this many states every ordering is a constraint; above it the
    /// constraint set is grown lazily.
    pub enumeration_cap: usize,
    pub mu_initial: f64,
    pub mu_min: f64,
    /// Centering stops when half the squared Newton decrement drops below this.
    pub newton_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_newton_steps: 200,
            mu_factor: 0.25,
            enumeration_cap: 6,
            mu_initial: 1.0,
            mu_min: 1e-10,
            newton_tol: 1e-10,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.mu_factor > 0.0 && self.mu_factor < 1.0) || !(self.mu_min > 0.0) {
            return Err(Error::validation(format!("invalid solver options {self:?}")));
        }
        if self.max_newton_steps == 0 || !(self.mu_initial > self.mu_min) {
            return Err(Error::validation(format!("invalid solver options {self:?}")));
        }
        Ok(())
    }
}

/// `R_σ = Σ_i σ(i) W_i` for weighted states `W_i = p(x_i)ρ_{x_i}`.
pub fn strategy_operator(weighted: &[HermitianOperator], s: &GuessStrategy) -> HermitianOperator {
    assert_eq!(weighted.len(), s.len(), "strategy length must match the ensemble");
    let d = weighted[0].dim();
    let mut acc = HermitianOperator::zeros(d);
    for (w, &r) in weighted.iter().zip(s.ranks()) {
        acc = &acc + &w.scale(r as f64);
    }
    acc
}

/// How the post-solve feasibility audit was carried out.
#[derive(Clone, Debug, PartialEq)]
pub enum Audit {
    /// Every ordering was checked.
    Full { min_slack: f64, checked: usize },
    /// Only the separation heuristic was run (sound but incomplete).
    Heuristic { min_slack: f64 },
}

impl Audit {
    pub fn min_slack(&self) -> f64 {
        match *self {
            Audit::Full { min_slack, .. } | Audit::Heuristic { min_slack } => min_slack,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Audit::Full { .. })
    }
}

/// Result of the minimum-guesswork program.
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub a: HermitianOperator,
    /// `Tr(A)`, the optimal guesswork.
    pub objective: f64,
    /// Orderings whose slack has `λ_min ≤ EPS_ACTIVE`, lexicographic.
    pub active_set: Vec<GuessStrategy>,
    /// Newton steps over all stages (and lazy rounds).
    pub iterations: usize,
    /// `G(X|Π_dual) − Tr(A)` for the measurement read off the barrier's dual
    /// iterate, or `μ·m·d` when no dual measurement could be formed.
    pub duality_gap_estimate: f64,
    pub converged: bool,
    pub stages: Vec<StageRecord>,
    pub audit: Audit,
    pub dual_povm: Option<Povm>,
    /// Number of constraint blocks in the final barrier problem.
    pub constraints: usize,
}

/// Result of the minimum-error program `min Tr(Y) s.t. Y ⪰ p(x_i)ρ_{x_i}`.
#[derive(Clone, Debug)]
pub struct MedSolution {
    pub y: HermitianOperator,
    /// `1 − Tr(Y)`.
    pub p_err: f64,
    pub iterations: usize,
    pub duality_gap_estimate: f64,
    pub converged: bool,
    pub stages: Vec<StageRecord>,
    pub povm: Option<Povm>,
}

pub(crate) fn min_slack_over(
    weighted: &[HermitianOperator],
    a: &HermitianOperator,
    strategies: &[GuessStrategy],
) -> Result<(f64, Vec<f64>)> {
    let mins = par::map(strategies, |s| (&strategy_operator(weighted, s) - a).eig().map(|sp| sp.min()));
    let mins = mins.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((mins.iter().copied().fold(f64::INFINITY, f64::min), mins))
}

fn dual_measurement(duals: &[HermitianOperator]) -> Option<Povm> {
    let d = duals[0].dim();
    let floor = 1e-12 * d as f64;
    let kept: Vec<HermitianOperator> = duals.iter().filter(|z| z.trace() > floor).cloned().collect();
    Povm::normalized(kept).ok()
}

/// Minimum guesswork `G_opt(E)`.
pub fn solve_mgd(e: &Ensemble, opts: &SolverOptions) -> Result<SdpSolution> {
    opts.validate()?;
    let n = e.len();
    if n > MAX_STATES {
        return Err(Error::TooManyStates { n, cap: MAX_STATES });
    }
    let weighted = e.weighted_states();
    let full = n <= opts.enumeration_cap;

    let (outcome, working) = if full {
        let all: Vec<GuessStrategy> = GuessStrategy::all(n).collect();
        let blocks = par::map(&all, |s| strategy_operator(&weighted, s));
        let start = barrier::initial_point(&blocks)?;
        (barrier::maximize_trace(&blocks, start, opts)?, all)
    } else {
        lazy::solve(e, &weighted, opts)?
    };
    let iterations = outcome.iterations;
    let mut a = outcome.a;

    let audit = if n <= 6 {
        let all: Vec<GuessStrategy> = GuessStrategy::all(n).collect();
        let (min_slack, _) = min_slack_over(&weighted, &a, &all)?;
        Audit::Full { min_slack, checked: all.len() }
    } else {
        let worst = lazy::worst_violation(e, &weighted, &a, &working)?;
        Audit::Heuristic { min_slack: worst }
    };
    // Feasibility restoration: shift down by the worst violation.
    if audit.min_slack() < 0.0 {
        a = &a - &HermitianOperator::identity(e.dim()).scale(-audit.min_slack());
    }
    let objective = a.trace();
    if !objective.is_finite() {
        return Err(Error::SolverFailure { message: "non-finite objective".into(), residual: f64::NAN });
    }

    let (_, slacks) = min_slack_over(&weighted, &a, &working)?;
    let mut active_set: Vec<GuessStrategy> = working
        .iter()
        .zip(&slacks)
        .filter(|(_, &m)| m <= EPS_ACTIVE)
        .map(|(s, _)| s.clone())
        .collect();
    active_set.sort();

    let dual_povm = dual_measurement(&outcome.dual).and_then(|p| merge_equivalent_outcomes(e, &p).ok());
    let final_mu = outcome.stages.last().map(|s| s.mu).unwrap_or(opts.mu_initial);
    let duality_gap_estimate = match &dual_povm {
        Some(p) => conditional_guesswork(e, p)?.guesswork - objective,
        None => final_mu * (working.len() * e.dim()) as f64,
    };
    let converged = outcome.converged && duality_gap_estimate <= opts.tol;
    if !converged {
        tracing::warn!(gap = duality_gap_estimate, "minimum-guesswork solve did not reach tolerance");
    }
    Ok(SdpSolution {
        a,
        objective,
        active_set,
        iterations,
        duality_gap_estimate,
        converged,
        stages: outcome.stages,
        audit,
        dual_povm,
        constraints: working.len(),
    })
}

/// Minimum error probability `P_err_opt(E)`.
pub fn solve_med(e: &Ensemble, opts: &SolverOptions) -> Result<MedSolution> {
    opts.validate()?;
    let blocks: Vec<HermitianOperator> = e.weighted_states().iter().map(|w| -w).collect();
    let start = barrier::initial_point(&blocks)?;
    let outcome = barrier::maximize_trace(&blocks, start, opts)?;
    let y = -&outcome.a;
    let p_err = 1.0 - y.trace();
    let povm = Povm::normalized(outcome.dual.clone()).ok();
    let final_mu = outcome.stages.last().map(|s| s.mu).unwrap_or(opts.mu_initial);
    let duality_gap_estimate = match &povm {
        Some(p) => {
            // P_err of the dual measurement with the labelled decision rule.
            let success: f64 = e
                .weighted_states()
                .iter()
                .zip(p.ops())
                .map(|(w, pi)| crate::hermitian::trace_product_unchecked(w, pi))
                .sum();
            (1.0 - success) - p_err
        }
        None => final_mu * (e.len() * e.dim()) as f64,
    };
    Ok(MedSolution {
        y,
        p_err,
        iterations: outcome.iterations,
        converged: outcome.converged && duality_gap_estimate <= opts.tol,
        duality_gap_estimate,
        stages: outcome.stages,
        povm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn strategy_operators_are_deterministic() {
        let e = fixtures::trine();
        let w = e.weighted_states();
        let s = GuessStrategy::new(vec![2, 3, 1]).unwrap();
        assert_eq!(strategy_operator(&w, &s), strategy_operator(&w, &s));
        let expected = &(&w[0].scale(2.0) + &w[1].scale(3.0)) + &w[2];
        assert!(strategy_operator(&w, &s).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn trine_minimum_guesswork() {
        let sol = solve_mgd(&fixtures::trine(), &SolverOptions::default()).unwrap();
        assert!((sol.objective - (2.0 - 3f64.sqrt() / 3.0)).abs() < 1e-7, "{}", sol.objective);
        assert!(sol.converged);
        assert!(sol.audit.min_slack() >= -FEASIBILITY_TOL);
    }

    #[test]
    fn trine_minimum_error() {
        let sol = solve_med(&fixtures::trine(), &SolverOptions::default()).unwrap();
        assert!((sol.p_err - 1.0 / 3.0).abs() < 1e-7, "{}", sol.p_err);
    }

    #[test]
    fn med_trivial_cases() {
        let opts = SolverOptions::default();
        let sol = solve_med(&fixtures::orthogonal_basis(3), &opts).unwrap();
        assert!(sol.p_err.abs() < 1e-7);
        let same = fixtures::identical_states(&[0.7, 0.3], &HermitianOperator::diag(&[0.6, 0.4]));
        assert!((solve_med(&same, &opts).unwrap().p_err - 0.3).abs() < 1e-7);
    }

    #[test]
    fn identical_states_need_no_measurement() {
        let e = fixtures::identical_default();
        let sol = solve_mgd(&e, &SolverOptions::default()).unwrap();
        let g = crate::guesswork::guesswork(&e.prior());
        assert!((sol.objective - g).abs() < 1e-7);
    }

    #[test]
    fn too_many_states_refused() {
        let e = fixtures::identical_states(&[0.1; 10], &HermitianOperator::diag(&[1.0, 0.0]));
        assert!(matches!(solve_mgd(&e, &SolverOptions::default()), Err(Error::TooManyStates { .. })));
    }
}
