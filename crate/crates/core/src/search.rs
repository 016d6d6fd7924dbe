//! Direct numerical search over measurements.
//!
//! Independent of the SDP: used to cross-check it and as a fallback oracle.
//! Every reported value is re-evaluated on the returned measurement.

use std::f64::consts::PI;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::Serialize;

use crate::ensemble::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::guesswork::{conditional_guesswork, guesswork_of_weights, merge_equivalent_outcomes};
use crate::hermitian::{HermitianOperator, C64};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Grid,
    RandomRestart,
    Refined,
}

impl SearchMethod {
    pub fn label(self) -> &'static str {
        match self {
            SearchMethod::Grid => "grid",
            SearchMethod::RandomRestart => "random-restart",
            SearchMethod::Refined => "refined",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_povm: Povm,
    /// `G(X|best_povm)`, recomputed from the measurement itself.
    pub best_value: f64,
    pub evaluations: usize,
    pub method: SearchMethod,
}

fn finish(e: &Ensemble, povm: Povm, evaluations: usize, method: SearchMethod) -> Result<SearchResult> {
    let povm = merge_equivalent_outcomes(e, &povm)?;
    let best_value = conditional_guesswork(e, &povm)?.guesswork;
    Ok(SearchResult { best_povm: povm, best_value, evaluations, method })
}

#[derive(Clone, Copy, Debug)]
pub struct QubitSearchOptions {
    /// Azimuthal grid points; the polar angle gets half as many steps.
    pub resolution: usize,
    /// Zoom rounds around the directions the grid optimum uses.
    pub refine_rounds: usize,
    pub seed: u64,
}

impl QubitSearchOptions {
    pub fn new(resolution: usize, seed: u64) -> Self {
        Self { resolution, refine_rounds: 6, seed }
    }
}

/// `(cos(α/2), e^{iβ} sin(α/2))`: the Bloch direction at polar angle α.
fn direction(alpha: f64, beta: f64) -> Vec<C64> {
    vec![C64::new((alpha / 2.0).cos(), 0.0), C64::from_polar((alpha / 2.0).sin(), beta)]
}

/// Coordinates of `|v⟩⟨v|`: diagonal, then real and imaginary parts of the
/// upper triangle.
fn outer_coords(v: &[C64]) -> Vec<f64> {
    let d = v.len();
    let mut out: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    for k in 0..d {
        for l in (k + 1)..d {
            let z = v[k] * v[l].conj();
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

/// Cheapest completion `Σ w_k |v_k⟩⟨v_k| = I`, `w ≥ 0`, of unit directions.
///
/// For fixed directions `G(X|Π)` is linear in `w`, so this is a linear
/// program. Returns the weights and the optimal value, or `None` when the
/// directions cannot complete the identity.
fn best_completion(dirs: &[Vec<C64>], costs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let d = dirs.first()?.len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = costs.iter().map(|&c| lp.add_var(c, (0.0, f64::INFINITY))).collect();
    let coords: Vec<Vec<f64>> = dirs.iter().map(|v| outer_coords(v)).collect();
    for row in 0..d * d {
        let b = if row < d { 1.0 } else { 0.0 };
        let expr: Vec<_> = vars.iter().zip(&coords).map(|(&v, c)| (v, c[row])).collect();
        lp.add_constraint(expr.as_slice(), ComparisonOp::Eq, b);
    }
    let sol = lp.solve().ok()?;
    Some((vars.iter().map(|&v| sol[v]).collect(), sol.objective()))
}

fn cost_of(e: &Ensemble, v: &[C64]) -> f64 {
    guesswork_of_weights(&e.joint_weights_vector(v))
}

fn povm_of(dirs: &[Vec<C64>], weights: &[f64]) -> Result<Povm> {
    let ops: Vec<HermitianOperator> = dirs
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 1e-12)
        .map(|(v, &w)| HermitianOperator::outer(v).scale(w))
        .collect();
    Povm::normalized(ops)
}

/// Grid search over complete qubit measurements made of rank-one outcomes.
///
/// Each direction set is completed optimally by [`best_completion`]. The grid
/// for resolution `r` contains the grid for every even divisor of `r` (same
/// seed). Refinement re-solves on finer local grids around the directions
/// in use.
pub fn search_qubit(e: &Ensemble, resolution: usize, seed: u64) -> Result<SearchResult> {
    search_qubit_with(e, QubitSearchOptions::new(resolution, seed))
}

pub fn search_qubit_with(e: &Ensemble, opts: QubitSearchOptions) -> Result<SearchResult> {
    if e.dim() != 2 {
        return Err(Error::validation(format!("qubit search needs dimension 2, got {}", e.dim())));
    }
    if opts.resolution < 4 {
        return Err(Error::validation("resolution must be at least 4"));
    }
    let cost = |v: &Vec<C64>| cost_of(e, v);
    // seed 0 keeps the lattice aligned with the real axis
    let offset = if opts.seed == 0 { 0.0 } else { ChaCha8Rng::seed_from_u64(opts.seed).random::<f64>() };
    let r = opts.resolution;
    let polar = r / 2;
    let mut angles: Vec<(f64, f64)> = vec![(0.0, 0.0), (PI, 0.0)];
    for a in 1..polar {
        for b in 0..r {
            angles.push((PI * a as f64 / polar as f64, 2.0 * PI * (b as f64 + offset) / r as f64));
        }
    }
    let mut dirs: Vec<Vec<C64>> = angles.iter().map(|&(a, b)| direction(a, b)).collect();
    let costs = par::map(&dirs, cost);
    let mut evaluations = dirs.len();
    let (mut weights, _) = best_completion(&dirs, &costs)
        .ok_or_else(|| Error::SolverFailure { message: "grid completion LP failed".into(), residual: f64::NAN })?;

    let mut step_a = PI / polar as f64;
    let mut step_b = 2.0 * PI / r as f64;
    for _ in 0..opts.refine_rounds {
        let used: Vec<usize> = (0..dirs.len()).filter(|&k| weights[k] > 1e-12).collect();
        let mut new_angles: Vec<(f64, f64)> = used.iter().map(|&k| angles[k]).collect();
        for &k in &used {
            let (a0, b0) = angles[k];
            for i in -4i32..=4 {
                for j in -4i32..=4 {
                    if i != 0 || j != 0 {
                        let a = (a0 + step_a * i as f64 / 4.0).clamp(0.0, PI);
                        new_angles.push((a, b0 + step_b * j as f64 / 4.0));
                    }
                }
            }
        }
        step_a /= 4.0;
        step_b /= 4.0;
        let new_dirs: Vec<Vec<C64>> = new_angles.iter().map(|&(a, b)| direction(a, b)).collect();
        let new_costs = par::map(&new_dirs, cost);
        evaluations += new_dirs.len();
        // The previous optimum stays feasible, so the value never increases.
        match best_completion(&new_dirs, &new_costs) {
            Some((w, _)) => {
                angles = new_angles;
                dirs = new_dirs;
                weights = w;
            }
            None => break,
        }
    }
    let povm = povm_of(&dirs, &weights)?;
    let method = if opts.refine_rounds > 0 { SearchMethod::Refined } else { SearchMethod::Grid };
    finish(e, povm, evaluations, method)
}

#[derive(Clone, Copy, Debug)]
pub struct GeneralSearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Random directions drawn per restart, per dimension.
    pub pool_per_dim: usize,
    /// Local perturbation rounds per restart.
    pub rounds: usize,
}

impl GeneralSearchOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self { restarts, seed, pool_per_dim: 128, rounds: 40 }
    }
}

fn unit(v: Vec<C64>) -> Vec<C64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn gaussian_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..d).map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect()
}

struct Descent {
    dirs: Vec<Vec<C64>>,
    weights: Vec<f64>,
    value: f64,
    evaluations: usize,
}

/// One restart: optimal completion over a random pool, then rounds of
/// local perturbation of the directions in use. The directions in use are
/// always kept, so each round's value is no larger than the last.
fn descend(e: &Ensemble, opts: &GeneralSearchOptions, restart: usize) -> Option<Descent> {
    let d = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut dirs: Vec<Vec<C64>> = (0..d)
        .map(|k| (0..d).map(|l| C64::new(if k == l { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    dirs.extend((0..opts.pool_per_dim * d).map(|_| unit(gaussian_vector(d, &mut rng))));
    let costs = par::map(&dirs, |v| cost_of(e, v));
    let mut evaluations = dirs.len();
    let (mut weights, mut value) = best_completion(&dirs, &costs)?;

    let mut radius = 0.5;
    for _ in 0..opts.rounds {
        let used: Vec<Vec<C64>> =
            dirs.iter().zip(&weights).filter(|(_, &w)| w > 1e-12).map(|(v, _)| v.clone()).collect();
        let mut trial = used.clone();
        for v in &used {
            for _ in 0..8 * d {
                let noise = gaussian_vector(d, &mut rng);
                trial.push(unit(v.iter().zip(&noise).map(|(a, b)| a + b * radius).collect()));
            }
        }
        let costs = par::map(&trial, |v| cost_of(e, v));
        evaluations += trial.len();
        if let Some((w, v)) = best_completion(&trial, &costs) {
            if v < value - 1e-13 {
                value = v;
                dirs = trial;
                weights = w;
                continue;
            }
        }
        radius *= 0.5;
        if radius < 1e-7 {
            break;
        }
    }
    Some(Descent { dirs, weights, value, evaluations })
}

/// Random-restart search over measurements with rank-one outcomes, which
/// suffice for the minimum.
///
/// Restart `r` draws from its own stream of the seeded generator, and
/// results are merged by `(value, restart)`, so the outcome is
/// deterministic and never worsens with more restarts.
pub fn search_general(e: &Ensemble, restarts: usize, seed: u64) -> Result<SearchResult> {
    search_general_with(e, GeneralSearchOptions::new(restarts, seed))
}

pub fn search_general_with(e: &Ensemble, opts: GeneralSearchOptions) -> Result<SearchResult> {
    if opts.restarts == 0 {
        return Err(Error::validation("restarts must be at least 1"));
    }
    let runs = par::map_range(opts.restarts, |r| descend(e, &opts, r));
    let evaluations = runs.iter().flatten().map(|r| r.evaluations).sum();
    let best = runs
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r)))
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, r)| r)
        .ok_or_else(|| Error::SolverFailure { message: "no restart produced a measurement".into(), residual: f64::NAN })?;
    finish(e, povm_of(&best.dirs, &best.weights)?, evaluations, SearchMethod::RandomRestart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::guesswork::guesswork;

    #[test]
    fn trine_grid() {
        let r = search_qubit(&fixtures::trine(), 360, 0).unwrap();
        assert!((r.best_value - (2.0 - 3f64.sqrt() / 3.0)).abs() < 1e-6, "{}", r.best_value);
        assert_eq!(r.method, SearchMethod::Refined);
    }

    #[test]
    fn helstrom_grid() {
        let e = fixtures::helstrom_pair();
        let p = (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let r = search_qubit(&e, 60, 3).unwrap();
        assert!((r.best_value - (1.0 + p)).abs() < 1e-4, "{}", r.best_value);
    }

    #[test]
    fn identical_states_gain_nothing() {
        let e = fixtures::identical_default();
        let g = guesswork(&e.prior());
        assert!((search_qubit(&e, 36, 0).unwrap().best_value - g).abs() < 1e-9);
        assert!((search_general(&e, 2, 0).unwrap().best_value - g).abs() < 1e-9);
    }

    #[test]
    fn grid_refinement_is_monotone() {
        let e = crate::ensemble::random_ensemble(2, 4, 11);
        let mut last = f64::INFINITY;
        for res in [8, 16, 32, 64] {
            let opts = QubitSearchOptions { resolution: res, refine_rounds: 0, seed: 5 };
            let v = search_qubit_with(&e, opts).unwrap().best_value;
            assert!(v <= last + 1e-9);
            last = v;
        }
    }

    #[test]
    fn single_state() {
        let e = Ensemble::new(vec![1.0], vec![HermitianOperator::identity(3).scale(1.0 / 3.0)]).unwrap();
        let r = search_general(&e, 1, 0).unwrap();
        assert!((r.best_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_is_deterministic() {
        let e = crate::ensemble::random_ensemble(2, 3, 2);
        let a = search_general(&e, 3, 9).unwrap();
        let b = search_general(&e, 3, 9).unwrap();
        assert_eq!(a.best_value, b.best_value);
        assert!(search_general(&e, 0, 9).is_err());
    }
}
