//! Closed-form reference values with the tolerance each must meet.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::bounds::{entropy_lower, holevo_chi, precondition_entropy_floor, shannon_entropy};
use crate::error::Result;
use crate::fixtures;
use crate::geo_uniform::{check_theorem5, rotation_y, trine_spec};
use crate::guesswork::{conditional_error, conditional_guesswork};
use crate::hermitian::HermitianOperator;
use crate::sdp::{certify, solve_med, solve_mgd, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct ReproCheck {
    pub name: &'static str,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ReproCheck {
    fn close(name: &'static str, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self { name, expected, observed, tolerance, passed: (expected - observed).abs() <= tolerance }
    }

    fn at_least(name: &'static str, floor: f64, observed: f64, tolerance: f64) -> Self {
        Self { name, expected: floor, observed, tolerance, passed: observed >= floor - tolerance }
    }

    fn flag(name: &'static str, expected: bool, observed: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Self { name, expected: f(expected), observed: f(observed), tolerance: 0.0, passed: expected == observed }
    }
}

/// Number of terms kept from the infinite diagonal-qubit example.
pub const DIAGONAL_QUBIT_TERMS: usize = 30;

/// Evaluates every reference value. Precondition sampling uses `samples`
/// rank-one operators from `seed`.
pub fn run_checks(samples: usize, seed: u64) -> Result<Vec<ReproCheck>> {
    let sqrt3 = 3f64.sqrt();
    let opts = SolverOptions::default();
    let mut out = Vec::new();

    let trine = fixtures::trine();
    let pi_e = fixtures::trine_pi_e();
    let pi_g = fixtures::trine_pi_g();
    let g_opt = 2.0 - sqrt3 / 3.0;
    out.push(ReproCheck::close("trine.g_opt", g_opt, solve_mgd(&trine, &opts)?.objective, 1e-6));
    out.push(ReproCheck::close("trine.p_err_opt", 1.0 / 3.0, solve_med(&trine, &opts)?.p_err, 1e-6));
    out.push(ReproCheck::close("trine.g_square_root", 1.5, conditional_guesswork(&trine, &pi_e)?.guesswork, 1e-9));
    out.push(ReproCheck::close("trine.p_err_square_root", 1.0 / 3.0, conditional_error(&trine, &pi_e)?, 1e-9));
    out.push(ReproCheck::close("trine.g_rotated", g_opt, conditional_guesswork(&trine, &pi_g)?.guesswork, 1e-9));
    out.push(ReproCheck::close("trine.p_err_rotated", 2.0 / 3.0 - sqrt3 / 6.0, conditional_error(&trine, &pi_g)?, 1e-9));
    out.push(ReproCheck::flag("trine.certify_rotated", true, certify(&trine, &pi_g)?.passes()));
    out.push(ReproCheck::flag("trine.certify_square_root", false, certify(&trine, &pi_e)?.passes()));

    let spec = trine_spec();
    let pi0 = HermitianOperator::diag(&[2.0 / 3.0, 0.0]);
    let report = check_theorem5(&trine, &spec, &pi0, &rotation_y(std::f64::consts::PI / 6.0))?;
    out.push(ReproCheck::flag("trine.group_sufficient_condition", true, report.optimal));
    out.push(ReproCheck::close("trine.group_optimum", g_opt, report.g_opt.unwrap_or(f64::NAN), 1e-6));

    let pair = fixtures::helstrom_pair();
    let med = solve_med(&pair, &opts)?.p_err;
    out.push(ReproCheck::close("two_state.helstrom", (1.0 - FRAC_1_SQRT_2) / 2.0, med, 1e-7));
    out.push(ReproCheck::close("two_state.g_opt_is_p_err_plus_one", med + 1.0, solve_mgd(&pair, &opts)?.objective, 1e-6));

    let diag = fixtures::diagonal_qubit(DIAGONAL_QUBIT_TERMS);
    let log3 = 3f64.log2();
    let h = shannon_entropy(&diag.prior());
    let chi = holevo_chi(&diag)?;
    let g_basis = conditional_guesswork(&diag, &fixtures::computational_basis(2))?.guesswork;
    out.push(ReproCheck::close("diagonal_qubit.entropy", 13.0 / 4.0 - 0.75 * log3, h, 1e-6));
    out.push(ReproCheck::close("diagonal_qubit.holevo", 5.0 / 4.0 - 0.75 * log3, chi, 1e-6));
    out.push(ReproCheck::close("diagonal_qubit.g_basis", 2.0, g_basis, 1e-5));
    out.push(ReproCheck::close("diagonal_qubit.holevo_bound_tight", g_basis, entropy_lower(h - chi), 1e-5));

    let floor = precondition_entropy_floor(&fixtures::remark2(), samples, seed);
    out.push(ReproCheck::at_least("remark2.min_posterior_entropy", 2.0, floor.min_entropy, 1e-9));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_values_reproduce() {
        for c in run_checks(2000, 7).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
