//! Bundled ensembles and measurements with known closed-form answers.

use std::f64::consts::PI;

use crate::ensemble::{Ensemble, Povm};
use crate::hermitian::{HermitianOperator, C64};

fn real_state(a: f64, b: f64) -> HermitianOperator {
    HermitianOperator::pure_state_real(&[a, b]).expect("nonzero amplitudes")
}

fn trine_vectors() -> [[f64; 2]; 3] {
    let h = 3f64.sqrt() / 2.0;
    [[1.0, 0.0], [-0.5, h], [-0.5, -h]]
}

/// Three equiprobable pure qubit states 120° apart on the Bloch sphere's x–z
/// great circle.
pub fn trine() -> Ensemble {
    let states = trine_vectors().iter().map(|v| real_state(v[0], v[1])).collect();
    Ensemble::new(vec![1.0 / 3.0; 3], states).expect("trine is valid")
}

/// Square-root measurement `π_i = (2/3)ρ_i` for the trine.
pub fn trine_pi_e() -> Povm {
    let ops = trine().states().iter().map(|r| r.scale(2.0 / 3.0)).collect();
    Povm::new(ops).expect("square-root measurement is a POVM")
}

/// Minimum-guesswork measurement for the trine:
/// `(2/3)|ψ_k⟩⟨ψ_k|` with `ψ_k = cos(2kπ/3 − 7π/12)|0⟩ + sin(2kπ/3 − 7π/12)|1⟩`.
pub fn trine_pi_g() -> Povm {
    let ops = (1..=3)
        .map(|k| {
            let t = 2.0 * k as f64 * PI / 3.0 - 7.0 * PI / 12.0;
            real_state(t.cos(), t.sin()).scale(2.0 / 3.0)
        })
        .collect();
    Povm::new(ops).expect("Π^G is a POVM")
}

/// Five equiprobable states `ρ_i = (I − |i⟩⟨i|)/4` on a 5-dimensional space.
pub fn remark2() -> Ensemble {
    let states = (0..5)
        .map(|i| {
            let mut d = [0.25; 5];
            d[i] = 0.0;
            HermitianOperator::diag(&d)
        })
        .collect();
    Ensemble::new(vec![0.2; 5], states).expect("valid")
}

/// Diagonal qubit encoding with prior `(3/8, 3/8, 1/2³, 1/2⁴, …)` truncated
/// to `terms` symbols and renormalized.
///
/// `ρ_1 = diag(2/3, 1/3)`, `ρ_2 = diag(1/3, 2/3)`, the rest `I/2`.
pub fn diagonal_qubit(terms: usize) -> Ensemble {
    assert!(terms >= 3, "need at least three symbols");
    let mut probs = vec![3.0 / 8.0, 3.0 / 8.0];
    probs.extend((3..=terms).map(|i| 0.5f64.powi(i as i32)));
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let mut states = vec![
        HermitianOperator::diag(&[2.0 / 3.0, 1.0 / 3.0]),
        HermitianOperator::diag(&[1.0 / 3.0, 2.0 / 3.0]),
    ];
    states.extend((3..=terms).map(|_| HermitianOperator::diag(&[0.5, 0.5])));
    Ensemble::new(probs, states).expect("valid")
}

/// Computational-basis measurement `{|0⟩⟨0|, …}`.
pub fn computational_basis(dim: usize) -> Povm {
    let ops = (0..dim)
        .map(|i| {
            let mut d = vec![0.0; dim];
            d[i] = 1.0;
            HermitianOperator::diag(&d)
        })
        .collect();
    Povm::new(ops).expect("valid")
}

/// Equiprobable `|0⟩` and `(|0⟩ + |1⟩)/√2`.
pub fn helstrom_pair() -> Ensemble {
    Ensemble::new(vec![0.5, 0.5], vec![real_state(1.0, 0.0), real_state(1.0, 1.0)]).expect("valid")
}

/// Every symbol encoded into the same state.
pub fn identical_states(prior: &[f64], rho: &HermitianOperator) -> Ensemble {
    Ensemble::new(prior.to_vec(), vec![rho.clone(); prior.len()]).expect("valid")
}

/// Default identical-states fixture: prior `(1/2, 1/3, 1/6)` on `diag(0.7, 0.3)`.
pub fn identical_default() -> Ensemble {
    identical_states(&[0.5, 1.0 / 3.0, 1.0 / 6.0], &HermitianOperator::diag(&[0.7, 0.3]))
}

/// Uniform prior over the computational basis states.
pub fn orthogonal_basis(dim: usize) -> Ensemble {
    let states = (0..dim)
        .map(|i| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[i] = C64::new(1.0, 0.0);
            HermitianOperator::outer(&v)
        })
        .collect();
    Ensemble::new(vec![1.0 / dim as f64; dim], states).expect("valid")
}
