//! Classical and conditional guesswork, error probabilities, and outcome
//! merging.

use std::fmt;

use itertools::Itertools;

use crate::ensemble::{Distribution, Ensemble, Povm, NEGLIGIBLE_WEIGHT};
use crate::error::{Error, Result};
use crate::hermitian::{self, HermitianOperator};

/// A guessing order: `rank(i)` is the (1-based) query at which `x_i` is tried.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuessStrategy {
    ranks: Vec<usize>,
}

impl GuessStrategy {
    /// Validates that `ranks` is a bijection onto `1..=n`.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n];
        for (i, &r) in ranks.iter().enumerate() {
            if r == 0 || r > n || seen[r - 1] {
                return Err(Error::validation(format!(
                    "rank {r} at index {i} does not form a permutation of 1..={n}"
                )));
            }
            seen[r - 1] = true;
        }
        Ok(Self { ranks })
    }

    pub fn identity(n: usize) -> Self {
        Self { ranks: (1..=n).collect() }
    }

    /// The order that guesses larger weights first, ties by ascending index.
    pub fn for_weights(weights: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap_or(std::cmp::Ordering::Equal));
        let mut ranks = vec![0; weights.len()];
        for (pos, &i) in order.iter().enumerate() {
            ranks[i] = pos + 1;
        }
        Self { ranks }
    }

    /// All `n!` strategies in lexicographic order of their rank vectors.
    pub fn all(n: usize) -> impl Iterator<Item = GuessStrategy> {
        (1..=n).permutations(n).map(|ranks| GuessStrategy { ranks })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// Indices in the order they are queried.
    pub fn query_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.ranks.len()];
        for (i, &r) in self.ranks.iter().enumerate() {
            order[r - 1] = i;
        }
        order
    }

    /// `Σ rank(i)·w_i`.
    pub fn cost(&self, weights: &[f64]) -> f64 {
        self.ranks.iter().zip(weights).map(|(&r, &w)| r as f64 * w).sum()
    }
}

impl fmt::Display for GuessStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.ranks.iter().join(","))
    }
}

/// Descending-probability guessing order with ascending-index tie-break.
pub fn optimal_strategy(d: &Distribution) -> GuessStrategy {
    GuessStrategy::for_weights(d.probs())
}

/// `G(X) = Σ σ(i) p(x_i)` under the optimal order.
pub fn guesswork(d: &Distribution) -> f64 {
    guesswork_of_weights(d.probs())
}

/// Minimum of `Σ σ(i) w_i` over orders, for nonnegative weights that need not
/// sum to one.
pub fn guesswork_of_weights(w: &[f64]) -> f64 {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sorted.iter().enumerate().map(|(k, &p)| (k + 1) as f64 * p).sum()
}

/// `P_err(X) = 1 − max p(x_i)`.
pub fn error_probability(d: &Distribution) -> f64 {
    1.0 - d.max()
}

#[derive(Clone, Debug)]
pub struct OutcomeEval {
    pub weight: f64,
    /// `None` when the outcome's weight is negligible.
    pub posterior_guesswork: Option<f64>,
    pub posterior_error: Option<f64>,
    pub strategy: Option<GuessStrategy>,
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub guesswork: f64,
    pub error_prob: f64,
    pub per_outcome: Vec<OutcomeEval>,
}

fn joint_table(e: &Ensemble, m: &Povm) -> Result<Vec<Vec<f64>>> {
    Error::check_dim(e.dim(), m.dim())?;
    m.ops().iter().map(|pi| e.joint_weights(pi)).collect()
}

/// `G(X|Π)` and `P_err(X|Π)` with per-outcome breakdown.
///
/// Both are accumulated from joint weights `p(x_i)Tr(ρ_{x_i}π_j)` in
/// ascending outcome order.
pub fn conditional_guesswork(e: &Ensemble, m: &Povm) -> Result<EvalReport> {
    let joint = joint_table(e, m)?;
    let mut g = 0.0;
    let mut success = 0.0;
    let mut per_outcome = Vec::with_capacity(joint.len());
    for q in &joint {
        let weight: f64 = q.iter().sum();
        let top = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        success += top;
        if weight < NEGLIGIBLE_WEIGHT {
            per_outcome.push(OutcomeEval {
                weight,
                posterior_guesswork: None,
                posterior_error: None,
                strategy: None,
            });
            continue;
        }
        let strategy = GuessStrategy::for_weights(q);
        let contrib = strategy.cost(q);
        g += contrib;
        per_outcome.push(OutcomeEval {
            weight,
            posterior_guesswork: Some(contrib / weight),
            posterior_error: Some(1.0 - top / weight),
            strategy: Some(strategy),
        });
    }
    Ok(EvalReport { guesswork: g, error_prob: 1.0 - success, per_outcome })
}

/// `P_err(X|Π) = 1 − Σ_j max_i p(x_i)Tr(ρ_{x_i}π_j)`.
pub fn conditional_error(e: &Ensemble, m: &Povm) -> Result<f64> {
    let joint = joint_table(e, m)?;
    Ok(1.0
        - joint
            .iter()
            .map(|q| q.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .sum::<f64>())
}

/// Sums outcomes whose posteriors share the same optimal strategy.
///
/// Negligible-weight outcomes are folded into the first group. Groups keep
/// the order of their first member.
pub fn merge_equivalent_outcomes(e: &Ensemble, m: &Povm) -> Result<Povm> {
    let joint = joint_table(e, m)?;
    let mut groups: Vec<(GuessStrategy, HermitianOperator)> = Vec::new();
    let mut stray: Vec<&HermitianOperator> = Vec::new();
    for (q, pi) in joint.iter().zip(m.ops()) {
        if q.iter().sum::<f64>() < NEGLIGIBLE_WEIGHT {
            stray.push(pi);
            continue;
        }
        let s = GuessStrategy::for_weights(q);
        match groups.iter_mut().find(|(t, _)| *t == s) {
            Some((_, acc)) => *acc = &*acc + pi,
            None => groups.push((s, pi.clone())),
        }
    }
    let mut ops: Vec<HermitianOperator> = groups.into_iter().map(|(_, op)| op).collect();
    if let Some(extra) = hermitian::sum(stray.iter().copied()) {
        match ops.first_mut() {
            Some(first) => *first = &*first + &extra,
            None => ops.push(extra),
        }
    }
    Povm::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_ensemble, random_povm, random_probs};
    use crate::fixtures;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn strategy_examples() {
        assert_eq!(optimal_strategy(&dist(&[0.5, 0.3, 0.2])).ranks(), &[1, 2, 3]);
        assert_eq!(optimal_strategy(&dist(&[0.2, 0.3, 0.5])).ranks(), &[3, 2, 1]);
        assert_eq!(optimal_strategy(&Distribution::uniform(3)).ranks(), &[1, 2, 3]);
        assert_eq!(optimal_strategy(&dist(&[0.2, 0.4, 0.4])).ranks(), &[3, 1, 2]);
    }

    #[test]
    fn strategy_validation() {
        assert!(GuessStrategy::new(vec![1, 1]).is_err());
        assert!(GuessStrategy::new(vec![0, 1]).is_err());
        let s = GuessStrategy::new(vec![2, 3, 1]).unwrap();
        assert_eq!(s.query_order(), vec![2, 0, 1]);
        assert_eq!(s.to_string(), "(2,3,1)");
        assert_eq!(GuessStrategy::all(4).count(), 24);
    }

    #[test]
    fn guesswork_examples() {
        assert_eq!(guesswork(&Distribution::point(4, 2)), 1.0);
        for n in 1..10 {
            assert_abs_diff_eq!(guesswork(&Distribution::uniform(n)), (n as f64 + 1.0) / 2.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(guesswork(&dist(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0])), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn conditional_examples() {
        let e = random_ensemble(3, 4, 8);
        let r = conditional_guesswork(&e, &Povm::trivial(3)).unwrap();
        assert_abs_diff_eq!(r.guesswork, guesswork(&e.prior()), epsilon = 1e-12);

        let trine = fixtures::trine();
        let re = conditional_guesswork(&trine, &fixtures::trine_pi_e()).unwrap();
        assert_abs_diff_eq!(re.guesswork, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(re.error_prob, 1.0 / 3.0, epsilon = 1e-12);
        let rg = conditional_guesswork(&trine, &fixtures::trine_pi_g()).unwrap();
        assert_abs_diff_eq!(rg.guesswork, 2.0 - 3f64.sqrt() / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rg.error_prob, 2.0 / 3.0 - 3f64.sqrt() / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            conditional_error(&trine, &fixtures::trine_pi_g()).unwrap(),
            rg.error_prob,
            epsilon = 1e-15
        );
    }

    #[test]
    fn error_examples() {
        assert_eq!(error_probability(&Distribution::point(3, 0)), 0.0);
        assert_abs_diff_eq!(error_probability(&Distribution::uniform(4)), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn merge_examples() {
        let e = random_ensemble(2, 3, 2);
        let halves = Povm::new(vec![HermitianOperator::identity(2).scale(0.5); 2]).unwrap();
        let merged = merge_equivalent_outcomes(&e, &halves).unwrap();
        assert_eq!(merged.len(), 1);
        assert!(merged.ops()[0].max_abs_diff(&HermitianOperator::identity(2)) < 1e-15);

        let trine = fixtures::trine();
        let g = fixtures::trine_pi_g();
        let merged = merge_equivalent_outcomes(&trine, &g).unwrap();
        assert_eq!(merged, g);
    }

    #[test]
    fn merge_caps_at_factorial_and_preserves_value() {
        for seed in 0..50u64 {
            let n = 2 + (seed % 2) as usize;
            let e = random_ensemble(3, n, seed);
            let m = random_povm(3, 12, seed + 100);
            let merged = merge_equivalent_outcomes(&e, &m).unwrap();
            let fact: usize = (1..=n).product();
            assert!(merged.len() <= fact);
            let a = conditional_guesswork(&e, &m).unwrap().guesswork;
            let b = conditional_guesswork(&e, &merged).unwrap().guesswork;
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn n_two_identity_with_error() {
        for seed in 0..200u64 {
            let e = random_ensemble(1 + (seed % 4) as usize, 2, seed);
            let m = random_povm(e.dim(), 1 + (seed % 5) as usize, seed);
            let r = conditional_guesswork(&e, &m).unwrap();
            assert!((r.guesswork - (r.error_prob + 1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn brute_force_strategy_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 1..=6 {
            for _ in 0..20 {
                let d = dist(&random_probs(n, &mut rng));
                let best = GuessStrategy::all(n).map(|s| s.cost(d.probs())).fold(f64::INFINITY, f64::min);
                assert!((guesswork(&d) - best).abs() <= 1e-14);
                assert!((optimal_strategy(&d).cost(d.probs()) - best).abs() <= 1e-14);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn data_processing(seed in any::<u64>(), dim in 1usize..=4, n in 1usize..=5, m in 1usize..=6) {
            let e = random_ensemble(dim, n, seed);
            let povm = random_povm(dim, m, seed ^ 0xdead);
            let g = conditional_guesswork(&e, &povm).unwrap().guesswork;
            prop_assert!(g <= guesswork(&e.prior()) + 1e-12);
        }

        #[test]
        fn guesswork_range(seed in any::<u64>(), n in 1usize..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = dist(&random_probs(n, &mut rng));
            let g = guesswork(&d);
            prop_assert!(g >= 1.0 - 1e-12 && g <= (n as f64 + 1.0) / 2.0 + 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn refinement_never_increases(seed in any::<u64>(), dim in 1usize..=4, n in 1usize..=5) {
            let e = random_ensemble(dim, n, seed);
            let povm = random_povm(dim, 3, seed ^ 0xbeef);
            let split = random_povm(dim, 2, seed ^ 0xf00d);
            // π_0 = π_0^{1/2} S π_0^{1/2} + π_0^{1/2} (I − S) π_0^{1/2}
            let root = povm.ops()[0].map_spectrum(|l| l.max(0.0).sqrt()).unwrap();
            let a = HermitianOperator::new(root.matrix() * split.ops()[0].matrix() * root.matrix()).unwrap();
            let b = &povm.ops()[0] - &a;
            let mut refined = vec![a, b];
            refined.extend(povm.ops()[1..].iter().cloned());
            let refined = Povm::new(refined).unwrap();
            let before = conditional_guesswork(&e, &povm).unwrap().guesswork;
            let after = conditional_guesswork(&e, &refined).unwrap().guesswork;
            prop_assert!(after <= before + 1e-12);
        }
    }
}
