//! Reading an optimal measurement off an optimal `A`.
//!
//! By complementary slackness an outcome assigned ordering σ must live in
//! the kernel of `R_σ − A`. Any nonnegative combination of kernel projectors
//! that sums to the identity is optimal, so the completion is a nonnegative
//! least-squares fit of the identity over those projectors.

use nalgebra::{DMatrix, DVector};

use super::{certify, strategy_operator, SdpSolution};
use crate::ensemble::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::guesswork::{conditional_guesswork, merge_equivalent_outcomes};
use crate::hermitian::{CMatrix, HermitianOperator, C64};
use crate::optim::nnls;
use crate::par;

pub const KERNEL_TOL: f64 = 1e-5;
const GAP_TOL: f64 = 1e-6;
const VALUE_TOL: f64 = 1e-5;
const COMPLETION_TOL: f64 = 1e-6;

/// d² real coordinates in an orthonormal Hermitian basis.
fn real_coords(h: &HermitianOperator) -> Vec<f64> {
    let d = h.dim();
    let r = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(h.get(k, k).re);
    }
    for k in 0..d {
        for l in (k + 1)..d {
            let z = h.get(k, l);
            out.push(r * z.re);
            out.push(r * z.im);
        }
    }
    out
}

fn projector(vectors: &[Vec<C64>]) -> HermitianOperator {
    let d = vectors[0].len();
    let mut m = CMatrix::zeros(d, d);
    for v in vectors {
        let col = DVector::from_column_slice(v);
        m += &col * col.adjoint();
    }
    HermitianOperator::new_unchecked(m)
}

pub fn recover_povm(e: &Ensemble, sol: &SdpSolution) -> Result<Povm> {
    Error::check_dim(e.dim(), sol.a.dim())?;
    if sol.duality_gap_estimate.abs() > GAP_TOL {
        return Err(Error::RecoveryFailed(format!(
            "duality gap estimate {:e} exceeds {GAP_TOL:e}",
            sol.duality_gap_estimate
        )));
    }
    if sol.active_set.is_empty() {
        return Err(Error::RecoveryFailed("no active constraints".into()));
    }
    let d = e.dim();
    let weighted = e.weighted_states();

    let kernels = par::map(&sol.active_set, |s| -> Result<Vec<Vec<C64>>> {
        let spec = (&strategy_operator(&weighted, s) - &sol.a).eig()?;
        Ok((0..d).filter(|&k| spec.eigenvalues[k] <= KERNEL_TOL).map(|k| spec.vector(k)).collect())
    });
    let mut generators: Vec<HermitianOperator> = Vec::new();
    for kernel in kernels {
        let kernel = kernel?;
        if kernel.is_empty() {
            continue;
        }
        generators.push(projector(&kernel));
        if kernel.len() > 1 {
            generators.extend(kernel.iter().map(|v| projector(std::slice::from_ref(v))));
        }
    }
    if generators.is_empty() {
        return Err(Error::RecoveryFailed("active constraints have empty kernels".into()));
    }

    let cols: Vec<Vec<f64>> = generators.iter().map(real_coords).collect();
    let a = DMatrix::from_fn(d * d, cols.len(), |i, j| cols[j][i]);
    let b = DVector::from_vec(real_coords(&HermitianOperator::identity(d)));
    let w = nnls(&a, &b);
    let residual = (&a * &w - &b).norm();
    if residual > COMPLETION_TOL {
        return Err(Error::RecoveryFailed(format!(
            "kernel projectors complete the identity only to {residual:e}"
        )));
    }
    let ops: Vec<HermitianOperator> = generators
        .iter()
        .zip(w.iter())
        .filter(|(_, &wi)| wi > 1e-12)
        .map(|(g, &wi)| g.scale(wi))
        .collect();
    let povm = Povm::normalized(ops).map_err(|err| Error::RecoveryFailed(err.to_string()))?;
    let povm = merge_equivalent_outcomes(e, &povm)?;

    let value = conditional_guesswork(e, &povm)?.guesswork;
    if (value - sol.objective).abs() > VALUE_TOL {
        return Err(Error::RecoveryFailed(format!(
            "recovered measurement gives {value} but the optimum is {}",
            sol.objective
        )));
    }
    let cert = certify(e, &povm)?;
    if !cert.passes() {
        return Err(Error::RecoveryFailed(format!(
            "certificate fails (worst violation {:e})",
            cert.worst_violation
        )));
    }
    Ok(povm)
}
