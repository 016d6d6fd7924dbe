//! Constraint generation for ensembles with too many orderings to enumerate.
//!
//! A working set of orderings is grown until the separation heuristic finds
//! no violated constraint. Separation alternates between the two easy
//! subproblems of `min_{v,σ} v†(R_σ − A)v`: for fixed `v` the best σ sorts
//! `v†W_i v` descending, for fixed σ the best `v` is the lowest eigenvector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::barrier::{self, BarrierOutcome};
use super::{strategy_operator, SolverOptions};
use crate::ensemble::Ensemble;
use crate::error::Result;
use crate::guesswork::GuessStrategy;
use crate::hermitian::{HermitianOperator, C64};
use crate::par;

const MAX_ROUNDS: usize = 40;
const MAX_WALK: usize = 32;
const SEPARATION_TOL: f64 = 1e-9;
const RANDOM_STARTS_PER_DIM: usize = 4;
const START_SEED: u64 = 0x5eed_0f5e_9a7a_7e11;

fn spectrum_vectors(op: &HermitianOperator, out: &mut Vec<Vec<C64>>) -> Result<()> {
    let spec = op.eig()?;
    out.extend((0..spec.dim()).map(|k| spec.vector(k)));
    Ok(())
}

/// Eigenvectors of `ρ̄`, of every state and of `extra`, the standard basis,
/// and a fixed pseudo-random set.
pub(crate) fn starting_vectors(e: &Ensemble, extra: &[HermitianOperator]) -> Result<Vec<Vec<C64>>> {
    let d = e.dim();
    let mut out = Vec::new();
    spectrum_vectors(&e.average_state(), &mut out)?;
    for rho in e.states().iter().chain(extra) {
        spectrum_vectors(rho, &mut out)?;
    }
    for k in 0..d {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        out.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    for _ in 0..RANDOM_STARTS_PER_DIM * d {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        out.push(v);
    }
    Ok(out)
}

fn strategy_for(weighted: &[HermitianOperator], v: &[C64]) -> GuessStrategy {
    let q: Vec<f64> = weighted.iter().map(|w| w.expectation(v)).collect();
    GuessStrategy::for_weights(&q)
}

/// Alternating descent from `v0`; returns the most negative slack seen.
fn walk(weighted: &[HermitianOperator], a: &HermitianOperator, v0: &[C64]) -> Option<(GuessStrategy, f64)> {
    let d = a.dim();
    let mut v = v0.to_vec();
    let mut seen: Vec<GuessStrategy> = Vec::new();
    let mut best: Option<(GuessStrategy, f64)> = None;
    for _ in 0..MAX_WALK {
        let s = strategy_for(weighted, &v);
        if seen.contains(&s) {
            break;
        }
        let spec = (&strategy_operator(weighted, &s) - a).eig().ok()?;
        let m = spec.min();
        if best.as_ref().is_none_or(|(_, b)| m < *b) {
            best = Some((s.clone(), m));
        }
        seen.push(s);
        v = spec.vector(d - 1);
    }
    best
}

/// Distinct orderings reached by the walks, most violated first.
pub(crate) fn separate(
    weighted: &[HermitianOperator],
    a: &HermitianOperator,
    starts: &[Vec<C64>],
) -> Vec<(GuessStrategy, f64)> {
    let mut found: Vec<(GuessStrategy, f64)> = par::map(starts, |v| walk(weighted, a, v)).into_iter().flatten().collect();
    found.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    let mut unique: Vec<(GuessStrategy, f64)> = Vec::new();
    for (s, m) in found {
        if !unique.iter().any(|(t, _)| *t == s) {
            unique.push((s, m));
        }
    }
    unique
}

fn lowest_slack_vectors(
    weighted: &[HermitianOperator],
    a: &HermitianOperator,
    working: &[GuessStrategy],
) -> Result<Vec<Vec<C64>>> {
    let d = a.dim();
    par::map(working, |s| (&strategy_operator(weighted, s) - a).eig().map(|sp| sp.vector(d - 1)))
        .into_iter()
        .collect()
}

pub(crate) fn solve(
    e: &Ensemble,
    weighted: &[HermitianOperator],
    opts: &SolverOptions,
) -> Result<(BarrierOutcome, Vec<GuessStrategy>)> {
    let n = e.len();
    let base = starting_vectors(e, &[])?;
    let mut working: Vec<GuessStrategy> = base.iter().map(|v| strategy_for(weighted, v)).collect();
    working.push(GuessStrategy::for_weights(e.probs()));
    working.sort();
    working.dedup();

    let mut total_steps = 0usize;
    let mut round = 0usize;
    loop {
        round += 1;
        let blocks = par::map(&working, |s| strategy_operator(weighted, s));
        let start = barrier::initial_point(&blocks)?;
        let mut outcome = barrier::maximize_trace(&blocks, start, opts)?;
        total_steps += outcome.iterations;
        outcome.iterations = total_steps;

        let mut starts = base.clone();
        starts.extend(lowest_slack_vectors(weighted, &outcome.a, &working)?);
        spectrum_vectors(&outcome.a, &mut starts)?;
        let mut new: Vec<GuessStrategy> = separate(weighted, &outcome.a, &starts)
            .into_iter()
            .filter(|(s, m)| *m < -SEPARATION_TOL && !working.contains(s))
            .map(|(s, _)| s)
            .collect();
        if n <= 6 {
            let all: Vec<GuessStrategy> = GuessStrategy::all(n).filter(|s| !working.contains(s)).collect();
            let (_, mins) = super::min_slack_over(weighted, &outcome.a, &all)?;
            new.extend(all.into_iter().zip(mins).filter(|(_, m)| *m < -SEPARATION_TOL).map(|(s, _)| s));
        }
        new.sort();
        new.dedup();
        tracing::debug!(round, working = working.len(), added = new.len(), "constraint generation");
        if new.is_empty() {
            return Ok((outcome, working));
        }
        if round >= MAX_ROUNDS {
            outcome.converged = false;
            return Ok((outcome, working));
        }
        working.extend(new);
        working.sort();
    }
}

/// Most negative slack found over the working set and the separation walks.
pub(crate) fn worst_violation(
    e: &Ensemble,
    weighted: &[HermitianOperator],
    a: &HermitianOperator,
    working: &[GuessStrategy],
) -> Result<f64> {
    let (mut worst, _) = super::min_slack_over(weighted, a, working)?;
    let mut starts = starting_vectors(e, &[a.clone()])?;
    starts.extend(lowest_slack_vectors(weighted, a, working)?);
    if let Some((_, m)) = separate(weighted, a, &starts).first() {
        worst = worst.min(*m);
    }
    Ok(worst)
}
