//! Quantum encodings, POVMs, the Born-rule channel and posteriors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{Error, Result};
use crate::hermitian::{self, trace_product_unchecked, CMatrix, HermitianOperator, C64, DEFAULT_TOL};

/// Probabilities below this (in absolute value) are treated as round-off and
/// clamped to zero; anything more negative is rejected.
pub const NEGATIVE_PROB_SLACK: f64 = 1e-10;
/// Allowed deviation of a probability vector's sum (or a trace) from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Outcomes whose total weight is below this contribute nothing.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

fn clean_probabilities(probs: &[f64], what: &str) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::validation(format!("{what}: empty probability vector")));
    }
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::validation(format!("{what}[{i}]: probability {p} is not finite")));
        }
        if p < -NEGATIVE_PROB_SLACK {
            return Err(Error::validation(format!("{what}[{i}]: probability {p} is negative")));
        }
        out.push(p.max(0.0));
    }
    let total: f64 = out.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::validation(format!("{what}: probabilities sum to {total}, expected 1")));
    }
    Ok(out)
}

/// A finite probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Ok(Self { probs: clean_probabilities(&probs, "p")? })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::validation(format!("weights sum to {total}; cannot normalize")));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn point(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }
}

/// Quantum encoding `{(p(x_i), ρ_{x_i})}` on a common Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<HermitianOperator>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<HermitianOperator>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::validation(format!(
                "{} probabilities but {} states",
                probs.len(),
                states.len()
            )));
        }
        let probs = clean_probabilities(&probs, "states.p")?;
        let dim = states[0].dim();
        for (i, rho) in states.iter().enumerate() {
            if rho.dim() != dim {
                return Err(Error::validation(format!(
                    "states[{i}]: dimension {} differs from {dim}",
                    rho.dim()
                )));
            }
            validate_density(rho).map_err(|e| Error::validation(format!("states[{i}]: {e}")))?;
        }
        Ok(Self { probs, states })
    }

    /// Ensemble of pure states given by (unnormalized) amplitude vectors.
    pub fn from_pure_states(probs: Vec<f64>, amplitudes: &[Vec<C64>]) -> Result<Self> {
        let states = amplitudes
            .iter()
            .map(|v| HermitianOperator::pure_state(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(probs, states)
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[HermitianOperator] {
        &self.states
    }

    pub fn prior(&self) -> Distribution {
        Distribution { probs: self.probs.clone() }
    }

    /// The operators `p(x_i) ρ_{x_i}`.
    pub fn weighted_states(&self) -> Vec<HermitianOperator> {
        self.probs.iter().zip(&self.states).map(|(&p, r)| r.scale(p)).collect()
    }

    /// `ρ̄ = Σ p(x_i) ρ_{x_i}`.
    pub fn average_state(&self) -> HermitianOperator {
        hermitian::sum(&self.weighted_states()).expect("non-empty ensemble")
    }

    /// Joint weights `p(x_i) Tr(ρ_{x_i} π)` for a single measurement operator.
    pub fn joint_weights(&self, pi: &HermitianOperator) -> Result<Vec<f64>> {
        Error::check_dim(self.dim(), pi.dim())?;
        Ok(self
            .probs
            .iter()
            .zip(&self.states)
            .map(|(&p, rho)| p * trace_product_unchecked(rho, pi))
            .collect())
    }

    /// Joint weights `p(x_i) ⟨v|ρ_{x_i}|v⟩` for the rank-one operator `|v⟩⟨v|`.
    pub fn joint_weights_vector(&self, v: &[C64]) -> Vec<f64> {
        self.probs
            .iter()
            .zip(&self.states)
            .map(|(&p, rho)| p * rho.expectation(v))
            .collect()
    }
}

fn validate_density(rho: &HermitianOperator) -> Result<()> {
    let check = hermitian::is_psd(rho, DEFAULT_TOL)?;
    if !check.psd {
        return Err(Error::validation(format!(
            "not positive semidefinite (min eigenvalue {:e})",
            check.min_eigenvalue
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::validation(format!("trace {tr} differs from 1")));
    }
    Ok(())
}

/// A positive operator-valued measure: PSD operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    ops: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(ops: Vec<HermitianOperator>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::validation("POVM needs at least one element"));
        }
        let dim = ops[0].dim();
        for (j, op) in ops.iter().enumerate() {
            if op.dim() != dim {
                return Err(Error::validation(format!(
                    "povm[{j}]: dimension {} differs from {dim}",
                    op.dim()
                )));
            }
            let check = hermitian::is_psd(op, DEFAULT_TOL)?;
            if !check.psd {
                return Err(Error::validation(format!(
                    "povm[{j}]: not positive semidefinite (min eigenvalue {:e})",
                    check.min_eigenvalue
                )));
            }
        }
        let total = hermitian::sum(&ops).expect("non-empty");
        let dev = total.max_abs_diff(&HermitianOperator::identity(dim));
        if dev > NORMALIZATION_TOL {
            return Err(Error::validation(format!(
                "povm: elements sum to identity only within {dev:e}"
            )));
        }
        Ok(Self { ops })
    }

    /// The trivial measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self { ops: vec![HermitianOperator::identity(dim)] }
    }

    /// Rescales PSD operators to an exact POVM: `π_j ← T^{-1/2} π_j T^{-1/2}`
    /// with `T = Σ π_j`. Fails when `T` is singular.
    pub fn normalized(ops: Vec<HermitianOperator>) -> Result<Self> {
        let total = hermitian::sum(&ops)
            .ok_or_else(|| Error::validation("POVM needs at least one element"))?;
        let spec = total.eig()?;
        if spec.min() <= 1e-12 * spec.max().max(1e-300) {
            return Err(Error::validation(format!(
                "operators do not span the space (min eigenvalue of the sum {:e})",
                spec.min()
            )));
        }
        let inv_sqrt = total.map_spectrum(|l| 1.0 / l.sqrt())?;
        let ops = ops
            .iter()
            .map(|op| HermitianOperator::new_unchecked(inv_sqrt.matrix() * op.matrix() * inv_sqrt.matrix()))
            .collect();
        Self::new(ops)
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    /// Conjugates every element by a unitary `V`.
    pub fn conjugate_by(&self, v: &CMatrix) -> Result<Self> {
        let ops = self.ops.iter().map(|op| op.conjugate_by(v)).collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

/// Born-rule channel matrix `p(y_j|x_i) = Tr(ρ_{x_i} π_{y_j})`, indexed `[i][j]`.
pub fn channel(e: &Ensemble, m: &Povm) -> Result<Vec<Vec<f64>>> {
    Error::check_dim(e.dim(), m.dim())?;
    Ok(e.states()
        .iter()
        .map(|rho| {
            m.ops()
                .iter()
                .map(|pi| {
                    let v = trace_product_unchecked(rho, pi);
                    if v < 0.0 && v >= -1e-10 {
                        0.0
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect())
}

/// Posterior distribution of `X_π` and the outcome weight `Σ p(x_i)Tr(ρ_{x_i}π)`.
pub fn posterior(e: &Ensemble, pi: &HermitianOperator) -> Result<(Distribution, f64)> {
    let joint = e.joint_weights(pi)?;
    let weight: f64 = joint.iter().sum();
    let scale = pi.trace().abs().max(pi.frobenius_norm());
    if !(weight > 1e-14 * scale) {
        return Err(Error::DegenerateOutcome { weight });
    }
    let probs = joint.iter().map(|w| (w / weight).max(0.0)).collect::<Vec<_>>();
    let total: f64 = probs.iter().sum();
    Ok((Distribution { probs: probs.iter().map(|p| p / total).collect() }, weight))
}

fn complex_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// Random density matrix `GG†/Tr(GG†)` with `G` a `dim × rank` complex Gaussian.
pub fn random_density(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let g = complex_gaussian(dim, rank.max(1), rng);
    let w = HermitianOperator::new_unchecked(&g * g.adjoint());
    let tr = w.trace();
    w.scale(1.0 / tr)
}

/// Random probability vector, uniform on the simplex.
pub fn random_probs(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// Deterministic random ensemble of full-rank Wishart states.
pub fn random_ensemble(dim: usize, n: usize, seed: u64) -> Ensemble {
    random_ensemble_with_rank(dim, n, dim, seed)
}

/// Deterministic random ensemble whose states have the given rank
/// (rank 1 gives pure states).
pub fn random_ensemble_with_rank(dim: usize, n: usize, rank: usize, seed: u64) -> Ensemble {
    assert!(dim >= 1 && n >= 1, "dim and n must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = if n == 1 { vec![1.0] } else { random_probs(n, &mut rng) };
    let states = (0..n).map(|_| random_density(dim, rank, &mut rng)).collect();
    Ensemble::new(probs, states).expect("random ensemble satisfies invariants")
}

/// Deterministic random POVM: random PSD operators normalized by the
/// symmetric square root of their sum.
pub fn random_povm(dim: usize, m: usize, seed: u64) -> Povm {
    assert!(dim >= 1 && m >= 1, "dim and m must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let raw: Vec<HermitianOperator> = (0..m)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            let g = complex_gaussian(dim, rank, &mut rng);
            HermitianOperator::new_unchecked(&g * g.adjoint())
        })
        .collect();
    match Povm::normalized(raw) {
        Ok(p) => p,
        // rank-deficient sum: fall back to full-rank elements
        Err(_) => {
            let raw = (0..m)
                .map(|_| {
                    let g = complex_gaussian(dim, dim, &mut rng);
                    HermitianOperator::new_unchecked(&g * g.adjoint())
                })
                .collect();
            Povm::normalized(raw).expect("full-rank sum")
        }
    }
}
