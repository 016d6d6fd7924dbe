//! When is making no measurement optimal?
//!
//! `G_opt(E) = G(X)` exactly when `p_i ≥ p_j` implies `p_iρ_i ⪰ p_jρ_j` for
//! every pair. Pairs with equal probability must satisfy the order both
//! ways, so their weighted states coincide.

use serde::Serialize;

use crate::ensemble::Ensemble;
use crate::guesswork::guesswork;
use crate::hermitian::loewner_leq;
use crate::par;

pub const LOEWNER_TOL: f64 = 1e-9;
pub const EQUAL_PROB_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoMeasurementVerdict {
    pub holds: bool,
    /// `(i, j)` with `p_i ≥ p_j` but `p_jρ_j ⋠ p_iρ_i`. Lowest pair first.
    pub witness: Option<(usize, usize)>,
    pub prior_guesswork: f64,
}

/// Pairs `i < j` whose probabilities agree within `EQUAL_PROB_TOL`.
pub fn equal_probability_pairs(e: &Ensemble) -> Vec<(usize, usize)> {
    let p = e.probs();
    let n = p.len();
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (p[i] - p[j]).abs() <= EQUAL_PROB_TOL)
        .collect()
}

pub fn check_no_measurement(e: &Ensemble) -> NoMeasurementVerdict {
    let p = e.probs();
    let n = p.len();
    let weighted = e.weighted_states();
    let ordered: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && (p[i] > p[j] || (p[i] - p[j]).abs() <= EQUAL_PROB_TOL))
        .collect();
    // Every pair is tested so the witness does not depend on scheduling.
    let ok = par::map(&ordered, |&(i, j)| loewner_leq(&weighted[j], &weighted[i], LOEWNER_TOL).unwrap_or(false));
    let witness = ordered.iter().zip(ok).find(|(_, ok)| !ok).map(|(&pair, _)| pair);
    NoMeasurementVerdict { holds: witness.is_none(), witness, prior_guesswork: guesswork(&e.prior()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::Ensemble;
    use crate::fixtures;
    use crate::hermitian::HermitianOperator;

    #[test]
    fn identical_states_hold() {
        let v = check_no_measurement(&fixtures::identical_default());
        assert!(v.holds && v.witness.is_none());
    }

    #[test]
    fn trine_fails() {
        let v = check_no_measurement(&fixtures::trine());
        assert!(!v.holds);
        assert!((v.prior_guesswork - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_distinct_states_fail() {
        let e = Ensemble::new(
            vec![0.5, 0.5],
            vec![HermitianOperator::diag(&[0.7, 0.3]), HermitianOperator::diag(&[0.3, 0.7])],
        )
        .unwrap();
        assert_eq!(check_no_measurement(&e).witness, Some((0, 1)));
    }

    #[test]
    fn dominated_states_hold() {
        // p_1ρ_1 = diag(.4,.3) ⪰ p_2ρ_2 = diag(.2,.1)
        let e = Ensemble::new(
            vec![0.7, 0.3],
            vec![HermitianOperator::diag(&[4.0 / 7.0, 3.0 / 7.0]), HermitianOperator::diag(&[2.0 / 3.0, 1.0 / 3.0])],
        )
        .unwrap();
        assert!(check_no_measurement(&e).holds);
    }

    #[test]
    fn equal_pairs() {
        let rho = HermitianOperator::identity(2).scale(0.5);
        let pairs = |p: &[f64]| equal_probability_pairs(&fixtures::identical_states(p, &rho));
        assert_eq!(pairs(&[1.0 / 3.0; 3]), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(pairs(&[0.5, 0.3, 0.2]).is_empty());
        assert_eq!(pairs(&[0.4, 0.4, 0.2]), vec![(0, 1)]);
    }
}
