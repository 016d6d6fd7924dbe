//! Log-det barrier path following for `max Tr(A) s.t. A ⪯ C_k` over a list
//! of Hermitian blocks `C_k`.
//!
//! The variable lives in the d² real coordinates of a Hermitian matrix with
//! respect to the orthonormal basis `E_kk`, `(E_kl + E_lk)/√2`,
//! `i(E_kl − E_lk)/√2`. For every μ the centering function
//! `φ(A) = Tr(A)/μ + Σ_k log det(C_k − A)` is maximized by damped Newton.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::SolverOptions;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianOperator, CMatrix, C64};
use crate::par;

/// One entry of a basis element: `coef · E_{row,col}`.
type Term = (usize, usize, C64);

pub(crate) struct Basis {
    dim: usize,
    elems: Vec<Vec<Term>>,
    diag: Vec<usize>,
}

impl Basis {
    pub(crate) fn new(dim: usize) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut elems = Vec::with_capacity(dim * dim);
        let mut diag = Vec::with_capacity(dim);
        for k in 0..dim {
            diag.push(elems.len());
            elems.push(vec![(k, k, C64::new(1.0, 0.0))]);
        }
        for k in 0..dim {
            for l in (k + 1)..dim {
                elems.push(vec![(k, l, C64::new(r, 0.0)), (l, k, C64::new(r, 0.0))]);
                elems.push(vec![(k, l, C64::new(0.0, r)), (l, k, C64::new(0.0, -r))]);
            }
        }
        Self { dim, elems, diag }
    }

    pub(crate) fn len(&self) -> usize {
        self.elems.len()
    }

    /// `Re Tr(W B_a)` for every basis element.
    fn coords(&self, w: &CMatrix) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.elems.iter().map(|terms| terms.iter().map(|&(r, c, a)| (a * w[(c, r)]).re).sum::<f64>()),
        )
    }

    fn to_matrix(&self, x: &DVector<f64>) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (terms, &xa) in self.elems.iter().zip(x.iter()) {
            for &(r, c, a) in terms {
                m[(r, c)] += a * xa;
            }
        }
        m
    }

    /// `K_ab = Re Tr(M B_a M B_b)` for Hermitian `M`.
    fn hessian(&self, m: &CMatrix) -> DMatrix<f64> {
        let n = self.len();
        let mut k = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = C64::new(0.0, 0.0);
                for &(r, c, x) in &self.elems[a] {
                    for &(s, t, y) in &self.elems[b] {
                        acc += x * y * m[(t, r)] * m[(c, s)];
                    }
                }
                k[(a, b)] = acc.re;
                k[(b, a)] = acc.re;
            }
        }
        k
    }
}

/// Summary of one centering stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageRecord {
    pub mu: f64,
    pub newton_steps: usize,
    pub objective: f64,
    pub min_slack: f64,
    pub centered: bool,
}

pub(crate) struct BarrierOutcome {
    pub a: HermitianOperator,
    pub iterations: usize,
    pub stages: Vec<StageRecord>,
    pub converged: bool,
    /// `μ (C_k − A)^{-1}` at the final iterate; sums to roughly the identity.
    pub dual: Vec<HermitianOperator>,
}

struct BlockEval {
    inverse: CMatrix,
    logdet: f64,
}

fn factor(s: CMatrix) -> Option<BlockEval> {
    let chol = Cholesky::new(s)?;
    let logdet = 2.0 * chol.l_dirty().diagonal().iter().map(|z| z.re.ln()).sum::<f64>();
    if !logdet.is_finite() {
        return None;
    }
    Some(BlockEval { inverse: chol.inverse(), logdet })
}

fn evaluate(blocks: &[HermitianOperator], a: &CMatrix) -> Option<Vec<BlockEval>> {
    let evals = par::map(blocks, |c| factor(c.matrix() - a));
    evals.into_iter().collect()
}

fn phi(blocks: &[HermitianOperator], a: &CMatrix, mu: f64) -> Option<f64> {
    let logdets = par::map(blocks, |c| factor(c.matrix() - a).map(|e| e.logdet));
    let mut total = 0.0;
    for l in logdets {
        total += l?;
    }
    Some(trace(a) / mu + total)
}

fn trace(a: &CMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

fn min_slack(blocks: &[HermitianOperator], a: &HermitianOperator) -> f64 {
    par::map(blocks, |c| (c - a).eig().map(|s| s.min()).unwrap_or(f64::NAN))
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Solves `K x = g` for symmetric positive definite `K` after diagonal
/// scaling, adding a growing ridge when the factorization breaks down.
fn newton_direction(k: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    let n = k.nrows();
    let scale: Vec<f64> = (0..n).map(|i| 1.0 / k[(i, i)].max(f64::MIN_POSITIVE).sqrt()).collect();
    let mut ks = k.clone();
    for i in 0..n {
        for j in 0..n {
            ks[(i, j)] *= scale[i] * scale[j];
        }
    }
    let gs = DVector::from_iterator(n, g.iter().zip(&scale).map(|(gi, si)| gi * si));
    let mut ridge = 0.0;
    for _ in 0..12 {
        let mut m = ks.clone();
        for i in 0..n {
            m[(i, i)] += ridge;
        }
        if let Some(ch) = Cholesky::new(m) {
            let y = ch.solve(&gs);
            if y.iter().all(|v| v.is_finite()) {
                return Some(DVector::from_iterator(n, y.iter().zip(&scale).map(|(yi, si)| yi * si)));
            }
        }
        ridge = if ridge == 0.0 { 1e-14 } else { ridge * 100.0 };
    }
    None
}

/// Strictly feasible start `(min_k λ_min(C_k) − 1)·I`.
pub(crate) fn initial_point(blocks: &[HermitianOperator]) -> Result<HermitianOperator> {
    let d = blocks[0].dim();
    let mins = par::map(blocks, |c| c.eig().map(|s| s.min()));
    let mut lo = f64::INFINITY;
    for m in mins {
        lo = lo.min(m?);
    }
    Ok(HermitianOperator::identity(d).scale(lo - 1.0))
}

/// Runs the barrier method from the strictly feasible `start`.
pub(crate) fn maximize_trace(
    blocks: &[HermitianOperator],
    start: HermitianOperator,
    opts: &SolverOptions,
) -> Result<BarrierOutcome> {
    if blocks.is_empty() {
        return Err(Error::validation("barrier problem has no constraint blocks"));
    }
    let d = blocks[0].dim();
    let basis = Basis::new(d);
    let n = basis.len();
    let mut a = start.matrix().clone();
    if evaluate(blocks, &a).is_none() {
        return Err(Error::validation("starting point is not strictly feasible"));
    }

    let mut unit = DVector::zeros(n);
    for &i in &basis.diag {
        unit[i] = 1.0;
    }

    let mut mu = opts.mu_initial;
    let mut iterations = 0usize;
    let mut stages = Vec::new();
    let mut converged = true;
    loop {
        let mut steps = 0usize;
        let mut centered = false;
        while steps < opts.max_newton_steps {
            let evals = match evaluate(blocks, &a) {
                Some(e) => e,
                None => break,
            };
            let parts = par::map(&evals, |e| (basis.coords(&e.inverse), basis.hessian(&e.inverse)));
            let mut g = &unit / mu;
            let mut k = DMatrix::zeros(n, n);
            for (gc, hk) in &parts {
                g -= gc;
                k += hk;
            }
            let delta = match newton_direction(&k, &g) {
                Some(x) => x,
                None => break,
            };
            let decrement = g.dot(&delta);
            if decrement / 2.0 <= opts.newton_tol {
                centered = true;
                break;
            }
            let step = basis.to_matrix(&delta);
            let current: f64 = trace(&a) / mu + evals.iter().map(|e| e.logdet).sum::<f64>();
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-14 {
                let trial = &a + &step * C64::new(t, 0.0);
                if let Some(v) = phi(blocks, &trial, mu) {
                    // At small μ the Armijo increment can fall below the
                    // rounding of φ, so demand a strict increase as well.
                    if v > current && v >= current + 0.25 * t * decrement {
                        a = trial;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            steps += 1;
            if !accepted {
                // No ascent left at machine precision: treat as centered.
                centered = decrement < 1e-6;
                break;
            }
        }
        iterations += steps;
        converged &= centered;

        let a_op = HermitianOperator::new_unchecked(a.clone());
        let record = StageRecord {
            mu,
            newton_steps: steps,
            objective: trace(&a),
            min_slack: min_slack(blocks, &a_op),
            centered,
        };
        tracing::debug!(
            iteration = iterations,
            mu = record.mu,
            objective = record.objective,
            min_slack = record.min_slack,
            centered = record.centered,
            "barrier stage"
        );
        stages.push(record);
        if mu < opts.mu_min {
            break;
        }
        mu *= opts.mu_factor;
    }

    let evals = evaluate(blocks, &a).ok_or_else(|| Error::SolverFailure {
        message: "iterate left the feasible region".into(),
        residual: min_slack(blocks, &HermitianOperator::new_unchecked(a.clone())),
    })?;
    let dual = evals
        .iter()
        .map(|e| HermitianOperator::new_unchecked(&e.inverse * C64::new(mu, 0.0)))
        .collect();
    Ok(BarrierOutcome { a: HermitianOperator::new_unchecked(a), iterations, stages, converged, dual })
}
