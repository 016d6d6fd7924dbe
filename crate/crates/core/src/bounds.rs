//! Entropic quantities and closed-form bounds on guesswork.
//!
//! All logarithms are base 2.

use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::Serialize;

use crate::ensemble::{Distribution, Ensemble, Povm, NEGLIGIBLE_WEIGHT};
use crate::error::{Error, Result};
use crate::guesswork::{conditional_guesswork, error_probability, guesswork, guesswork_of_weights};
use crate::hermitian::{HermitianOperator, C64};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::par;

/// Eigenvalues closer than this are treated as one.
pub const COALESCE_TOL: f64 = 1e-9;
/// Eigenvalues at or below this count as zero.
const ZERO_EIGENVALUE: f64 = 1e-14;
/// Samples whose entropy falls below `2 − PRECONDITION_SLACK` break the
/// precondition of the Holevo-based lower bound.
pub const PRECONDITION_SLACK: f64 = 1e-9;
/// Slack used when checking a bound against a reference value.
pub const CHECK_SLACK: f64 = 1e-9;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// `H = −Σ p log p` of nonnegative weights (not necessarily normalized).
pub fn entropy_of(probs: &[f64]) -> f64 {
    (-probs.iter().map(|&p| plogp(p)).sum::<f64>()).max(0.0)
}

pub fn shannon_entropy(d: &Distribution) -> f64 {
    entropy_of(d.probs())
}

fn nonzero_eigenvalues(rho: &HermitianOperator) -> Result<Vec<f64>> {
    Ok(rho.eig()?.eigenvalues.into_iter().filter(|&l| l > ZERO_EIGENVALUE).collect())
}

pub fn von_neumann_entropy(rho: &HermitianOperator) -> Result<f64> {
    Ok(entropy_of(&nonzero_eigenvalues(rho)?))
}

/// `χ = S(ρ̄) − Σ p(x_i) S(ρ_{x_i})`, clamped at zero.
pub fn holevo_chi(e: &Ensemble) -> Result<f64> {
    let mut chi = von_neumann_entropy(&e.average_state())?;
    for (p, rho) in e.probs().iter().zip(e.states()) {
        chi -= p * von_neumann_entropy(rho)?;
    }
    Ok(chi.max(0.0))
}

/// `q`-th Taylor coefficient `g^{(q)}(c)/q!` of `g(x) = x^m ln x`.
fn taylor_coefficient(m: usize, q: usize, c: f64) -> f64 {
    let harmonic = |k: usize| (1..=k).map(|j| 1.0 / j as f64).sum::<f64>();
    if q <= m {
        binomial(m, q) * c.powi((m - q) as i32) * (c.ln() + harmonic(m) - harmonic(m - q))
    } else {
        let sign = if (q - m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        sign * c.powi(m as i32 - q as i32) / ((q - m) as f64 * binomial(q, m))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `g[x_0, …, x_k]` for a tight cluster by expansion about its mean:
/// `Σ_r g^{(k+r)}(c)/(k+r)! · h_r(x − c)`, with `h_r` the complete
/// homogeneous symmetric polynomials.
fn cluster_divided_difference(m: usize, xs: &[f64]) -> f64 {
    const TERMS: usize = 60;
    let k = xs.len() - 1;
    let c = xs.iter().sum::<f64>() / xs.len() as f64;
    let mut h = vec![0.0; TERMS];
    h[0] = 1.0;
    for &x in xs {
        let y = x - c;
        for r in 1..TERMS {
            h[r] += y * h[r - 1];
        }
    }
    let mut total = 0.0;
    for (r, hr) in h.iter().enumerate() {
        let term = taylor_coefficient(m, k + r, c) * hr;
        total += term;
        if r > 2 && term.abs() <= 1e-18 * total.abs() {
            break;
        }
    }
    total
}

/// Divided difference of `x^m ln x` over sorted positive points.
fn divided_difference(m: usize, xs: &[f64]) -> f64 {
    let n = xs.len();
    // table[i] holds g[x_i .. x_{i+len-1}] for the current length
    let mut table: Vec<f64> = xs.iter().map(|&x| x.powi(m as i32) * x.ln()).collect();
    for len in 2..=n {
        let mut next = Vec::with_capacity(n - len + 1);
        for i in 0..=(n - len) {
            let window = &xs[i..i + len];
            let spread = window[len - 1] - window[0];
            let center = window.iter().sum::<f64>() / len as f64;
            next.push(if spread <= 0.1 * center {
                cluster_divided_difference(m, window)
            } else {
                (table[i + 1] - table[i]) / spread
            });
        }
        table = next;
    }
    table[0]
}

fn coalesce(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[start] > COALESCE_TOL {
            let mean = values[start..i].iter().sum::<f64>() / (i - start) as f64;
            out.extend(std::iter::repeat_n(mean, i - start));
            start = i;
        }
    }
    out
}

/// Subentropy `Q(ρ) = −Σ_k Π_{l≠k} λ_k/(λ_k − λ_l) · λ_k log λ_k`.
///
/// Over the m nonzero eigenvalues this is `−g[λ_1, …, λ_m]/ln 2` with
/// `g(x) = x^m ln x`, which stays finite when eigenvalues coincide.
pub fn subentropy(rho: &HermitianOperator) -> Result<f64> {
    let lambdas = coalesce(nonzero_eigenvalues(rho)?);
    if lambdas.len() <= 1 {
        return Ok(0.0);
    }
    Ok((-divided_difference(lambdas.len(), &lambdas) / LN_2).max(0.0))
}

/// `Λ = Q(ρ̄) − Σ p(x_i) Q(ρ_{x_i})`.
pub fn lambda_lower(e: &Ensemble) -> Result<f64> {
    let mut value = subentropy(&e.average_state())?;
    for (p, rho) in e.probs().iter().zip(e.states()) {
        value -= p * subentropy(rho)?;
    }
    Ok(value)
}

/// `H(X|Y)` for the outcome distribution of `m`.
pub fn conditional_entropy(e: &Ensemble, m: &Povm) -> Result<f64> {
    let mut h = 0.0;
    for pi in m.ops() {
        let q = e.joint_weights(pi)?;
        let w: f64 = q.iter().sum();
        if w < NEGLIGIBLE_WEIGHT {
            continue;
        }
        h += w * entropy_of(&q.iter().map(|x| (x / w).max(0.0)).collect::<Vec<_>>());
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyPack {
    pub shannon_h: f64,
    /// `S(ρ̄)`.
    pub von_neumann_s: f64,
    pub holevo_chi: f64,
    /// `Q(ρ̄)`.
    pub subentropy_q: f64,
    pub lambda_lower: f64,
}

pub fn entropy_pack(e: &Ensemble) -> Result<EntropyPack> {
    let avg = e.average_state();
    Ok(EntropyPack {
        shannon_h: shannon_entropy(&e.prior()),
        von_neumann_s: von_neumann_entropy(&avg)?,
        holevo_chi: holevo_chi(e)?,
        subentropy_q: subentropy(&avg)?,
        lambda_lower: lambda_lower(e)?,
    })
}

/// `(n − 1)/(2 log n)`, taken as 0 for a single symbol.
pub fn entropy_slope(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        (n as f64 - 1.0) / (2.0 * (n as f64).log2())
    }
}

/// `G(X) ≤ (n/2)·P_err(X) + 1`.
pub fn error_upper(n: usize, p_err: f64) -> f64 {
    n as f64 / 2.0 * p_err + 1.0
}

/// `G(X) ≥ 1/(2(1 − P_err(X))) + 1/2`.
pub fn error_lower(p_err: f64) -> f64 {
    1.0 / (2.0 * (1.0 - p_err)) + 0.5
}

/// `G(X) ≥ 2^H/4 + 1`, valid when `H ≥ 2`.
pub fn entropy_lower(h: f64) -> f64 {
    0.25 * h.exp2() + 1.0
}

/// `G(X) ≤ (n − 1)/(2 log n)·H + 1`.
pub fn entropy_upper(n: usize, h: f64) -> f64 {
    entropy_slope(n) * h + 1.0
}

/// `G_opt ≤ 1 + (n − 1)/2 · p_inc` for an unambiguous scheme with
/// inconclusive probability `p_inc`.
pub fn unambiguous_upper_bound(n: usize, p_inc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_inc) {
        return Err(Error::validation(format!("p_inc must lie in [0, 1], got {p_inc}")));
    }
    Ok(1.0 + (n as f64 - 1.0) / 2.0 * p_inc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// The quantity a bound applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bounded {
    /// `G(X)` without measurement.
    PriorGuesswork,
    /// `G(X|Π)` for the supplied measurement.
    ConditionalGuesswork,
    /// `G_opt(E)`.
    OptimalGuesswork,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub value: f64,
    pub side: Side,
    pub bounds: Bounded,
    pub precondition_met: bool,
    pub precondition_note: String,
    /// The bounded quantity, when known.
    pub reference: Option<f64>,
    /// Whether the bound holds against `reference` (within `CHECK_SLACK`).
    pub holds: Option<bool>,
}

impl BoundReport {
    fn new(name: &'static str, value: f64, side: Side, bounds: Bounded, reference: Option<f64>) -> Self {
        let holds = reference.map(|r| match side {
            Side::Lower => value <= r + CHECK_SLACK,
            Side::Upper => value >= r - CHECK_SLACK,
        });
        Self {
            name,
            value,
            side,
            bounds,
            precondition_met: true,
            precondition_note: String::new(),
            reference,
            holds,
        }
    }

    fn precondition(mut self, met: bool, note: impl Into<String>) -> Self {
        self.precondition_met = met;
        self.precondition_note = note.into();
        self
    }
}

/// Optional reference values for [`bound_suite`].
#[derive(Clone, Debug, Default)]
pub struct BoundInputs {
    pub p_err_opt: Option<f64>,
    pub g_opt: Option<f64>,
    pub p_inc: Option<f64>,
    /// Measurement for the conditional bounds.
    pub povm: Option<Povm>,
    /// Samples for the sampled precondition check; 0 skips the check.
    pub precondition_samples: usize,
    pub seed: u64,
}

impl BoundInputs {
    pub fn new() -> Self {
        Self { precondition_samples: 10_000, ..Self::default() }
    }
}

/// Every applicable bound for `e`, in a fixed order.
pub fn bound_suite(e: &Ensemble, inputs: &BoundInputs) -> Result<Vec<BoundReport>> {
    let n = e.len();
    let prior = e.prior();
    let g_prior = guesswork(&prior);
    let p_err_prior = error_probability(&prior);
    let h = shannon_entropy(&prior);
    let chi = holevo_chi(e)?;
    let lambda = lambda_lower(e)?;
    let mut out = Vec::new();

    out.push(BoundReport::new("error-upper", error_upper(n, p_err_prior), Side::Upper, Bounded::PriorGuesswork, Some(g_prior)));
    out.push(BoundReport::new("error-lower", error_lower(p_err_prior), Side::Lower, Bounded::PriorGuesswork, Some(g_prior)));
    out.push(
        BoundReport::new("entropy-lower", entropy_lower(h), Side::Lower, Bounded::PriorGuesswork, Some(g_prior))
            .precondition(h >= 2.0, format!("H(X) = {h:.6} (needs ≥ 2)")),
    );
    out.push(BoundReport::new("entropy-upper", entropy_upper(n, h), Side::Upper, Bounded::PriorGuesswork, Some(g_prior)));

    if let Some(m) = &inputs.povm {
        let report = conditional_guesswork(e, m)?;
        let g = report.guesswork;
        let hc = conditional_entropy(e, m)?;
        let min_post = report
            .per_outcome
            .iter()
            .zip(m.ops())
            .filter(|(o, _)| o.weight >= NEGLIGIBLE_WEIGHT)
            .map(|(_, pi)| {
                let q = e.joint_weights(pi).expect("dimension checked");
                let w: f64 = q.iter().sum();
                entropy_of(&q.iter().map(|x| (x / w).max(0.0)).collect::<Vec<_>>())
            })
            .fold(f64::INFINITY, f64::min);
        out.push(BoundReport::new(
            "conditional-error-upper",
            error_upper(n, report.error_prob),
            Side::Upper,
            Bounded::ConditionalGuesswork,
            Some(g),
        ));
        out.push(BoundReport::new(
            "conditional-error-lower",
            error_lower(report.error_prob),
            Side::Lower,
            Bounded::ConditionalGuesswork,
            Some(g),
        ));
        out.push(
            BoundReport::new("conditional-entropy-lower", entropy_lower(hc), Side::Lower, Bounded::ConditionalGuesswork, Some(g))
                .precondition(min_post >= 2.0, format!("smallest posterior entropy {min_post:.6} (needs ≥ 2)")),
        );
        out.push(BoundReport::new(
            "conditional-entropy-upper",
            entropy_upper(n, hc),
            Side::Upper,
            Bounded::ConditionalGuesswork,
            Some(g),
        ));
    }

    if let Some(p) = inputs.p_err_opt {
        out.push(BoundReport::new("optimal-error-lower", error_lower(p), Side::Lower, Bounded::OptimalGuesswork, inputs.g_opt));
        out.push(BoundReport::new("optimal-error-upper", error_upper(n, p), Side::Upper, Bounded::OptimalGuesswork, inputs.g_opt));
        if n == 2 {
            out.push(
                BoundReport::new("two-state-identity", p + 1.0, Side::Upper, Bounded::OptimalGuesswork, inputs.g_opt)
                    .precondition(true, "exact for two states: G_opt = P_err_opt + 1"),
            );
        }
    }

    let holevo = {
        let r = BoundReport::new("holevo-lower", entropy_lower(h - chi), Side::Lower, Bounded::OptimalGuesswork, inputs.g_opt);
        if inputs.precondition_samples > 0 {
            let check = precondition_entropy_floor(e, inputs.precondition_samples, inputs.seed);
            r.precondition(
                check.holds,
                format!(
                    "sampled min H(X_π) = {:.9} over {} rank-one π (advisory)",
                    check.min_entropy, check.samples
                ),
            )
        } else {
            r.precondition(false, "precondition not checked")
        }
    };
    out.push(holevo);
    out.push(BoundReport::new(
        "subentropy-upper",
        entropy_upper(n, h - lambda),
        Side::Upper,
        Bounded::OptimalGuesswork,
        inputs.g_opt,
    ));
    if let Some(p_inc) = inputs.p_inc {
        out.push(BoundReport::new(
            "unambiguous-upper",
            unambiguous_upper_bound(n, p_inc)?,
            Side::Upper,
            Bounded::OptimalGuesswork,
            inputs.g_opt,
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreconditionCheck {
    /// No sampled or refined π fell below entropy 2. Advisory: sampling
    /// cannot prove the universal statement.
    pub holds: bool,
    pub min_entropy: f64,
    pub argmin: Vec<C64>,
    pub samples: usize,
}

/// `H(X_π)` for `π = |v⟩⟨v|`, or `None` when the outcome has zero weight.
pub fn rank_one_entropy(e: &Ensemble, v: &[C64]) -> Option<f64> {
    let q = e.joint_weights_vector(v);
    let w: f64 = q.iter().sum();
    if w <= 1e-14 {
        return None;
    }
    Some(entropy_of(&q.iter().map(|x| (x / w).max(0.0)).collect::<Vec<_>>()))
}

fn unit_from(x: &[f64]) -> Vec<C64> {
    let d = x.len() / 2;
    let z: Vec<C64> = (0..d).map(|k| C64::new(x[2 * k], x[2 * k + 1])).collect();
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    z.into_iter().map(|c| c / norm).collect()
}

/// Sampled check of `H(X_π) ≥ 2` for every PSD `π`.
///
/// Rank-one operators suffice: the posterior of a sum of operators is a
/// mixture of their posteriors and entropy is concave. Samples are
/// Gaussian directions from a seeded generator plus the states'
/// eigenvectors and the standard basis; the worst few are refined by
/// Nelder–Mead.
pub fn precondition_entropy_floor(e: &Ensemble, samples: usize, seed: u64) -> PreconditionCheck {
    let d = e.dim();
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(samples + d * (e.len() + 1));
    for k in 0..d {
        let mut x = vec![0.0; 2 * d];
        x[2 * k] = 1.0;
        points.push(x);
    }
    for rho in e.states() {
        if let Ok(spec) = rho.eig() {
            for k in 0..d {
                points.push(spec.vector(k).iter().flat_map(|z| [z.re, z.im]).collect());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples.max(1) {
        points.push((0..2 * d).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let f = |x: &[f64]| rank_one_entropy(e, &unit_from(x)).unwrap_or(f64::INFINITY);
    let values = par::map(&points, |x| f(x));
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let picks: Vec<usize> = order.iter().take(3).copied().collect();
    let opts = NelderMeadOptions { max_iter: 5000, ftol: 1e-14, xtol: 1e-10 };
    let refined = par::map(&picks, |&i| nelder_mead(f, &points[i], 0.05, opts));

    let mut best = (values[order[0]], points[order[0]].clone());
    for m in refined {
        if m.value < best.0 {
            best = (m.value, m.x);
        }
    }
    PreconditionCheck {
        holds: best.0 >= 2.0 - PRECONDITION_SLACK,
        min_entropy: best.0,
        argmin: unit_from(&best.1),
        samples: points.len(),
    }
}

/// Precondition of the Holevo-based lower bound, with the spec's default
/// interface: boolean plus minimum observed entropy.
pub fn precondition_theorem3(e: &Ensemble, samples: usize, seed: u64) -> Result<(bool, f64)> {
    if samples == 0 {
        return Err(Error::validation("samples must be at least 1"));
    }
    let c = precondition_entropy_floor(e, samples, seed);
    Ok((c.holds, c.min_entropy))
}

/// `G(X_π)` for a rank-one `π`, used by tests of the posterior bounds.
pub fn rank_one_guesswork(e: &Ensemble, v: &[C64]) -> Option<f64> {
    let q = e.joint_weights_vector(v);
    let w: f64 = q.iter().sum();
    (w > 1e-14).then(|| guesswork_of_weights(&q) / w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_density, random_ensemble, random_probs};
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&Distribution::point(4, 2)), 0.0);
        assert!((shannon_entropy(&Distribution::uniform(4)) - 2.0).abs() < 1e-15);
        let e = fixtures::diagonal_qubit(30);
        let expected = 13.0 / 4.0 - 0.75 * 3f64.log2();
        assert!((shannon_entropy(&e.prior()) - expected).abs() < 1e-6);
        let chi = holevo_chi(&e).unwrap();
        assert!((chi - (1.25 - 0.75 * 3f64.log2())).abs() < 1e-6);
    }

    #[test]
    fn holevo_examples() {
        assert_eq!(holevo_chi(&fixtures::identical_default()).unwrap(), 0.0);
        assert!((holevo_chi(&fixtures::orthogonal_basis(2)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subentropy_examples() {
        assert_eq!(subentropy(&HermitianOperator::diag(&[1.0, 0.0])).unwrap(), 0.0);
        let half = subentropy(&HermitianOperator::diag(&[0.5, 0.5])).unwrap();
        assert!((half - (1.0 - 1.0 / (2.0 * LN_2))).abs() < 1e-12, "{half}");
        let q = subentropy(&HermitianOperator::diag(&[0.75, 0.25])).unwrap();
        assert!((q - (2.0 - 9.0 / 8.0 * 3f64.log2())).abs() < 1e-12);
        // perturbed evaluation agrees with the degenerate limit
        let eps = 1e-6;
        let near = subentropy(&HermitianOperator::diag(&[0.5 + eps, 0.5 - eps])).unwrap();
        assert!((near - half).abs() < 1e-4);
    }

    #[test]
    fn subentropy_maximally_mixed_closed_form() {
        // Q(I/d) = log d − log e · (1/2 + … + 1/d)
        for d in 2..=8 {
            let q = subentropy(&HermitianOperator::diag(&vec![1.0 / d as f64; d])).unwrap();
            let harmonic: f64 = (2..=d).map(|k| 1.0 / k as f64).sum();
            assert!((q - (d as f64).log2() + harmonic / LN_2).abs() < 1e-10, "d = {d}");
        }
    }

    fn direct_subentropy(l: &[f64]) -> f64 {
        let mut q = 0.0;
        for k in 0..l.len() {
            let mut prod = 1.0;
            for j in 0..l.len() {
                if j != k {
                    prod *= l[k] / (l[k] - l[j]);
                }
            }
            q -= prod * l[k] * l[k].log2();
        }
        q
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn subentropy_matches_direct_formula(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density(d, d, &mut rng);
            let l = rho.eig().unwrap().eigenvalues;
            let gap = l.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
            prop_assume!(gap > 1e-2);
            prop_assert!((subentropy(&rho).unwrap() - direct_subentropy(&l)).abs() < 1e-9);
        }

        #[test]
        fn subentropy_is_continuous(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = HermitianOperator::identity(d).scale(1.0 / d as f64);
            let pert = random_density(d, d, &mut rng);
            let q0 = subentropy(&base).unwrap();
            let mut last = f64::INFINITY;
            for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
                let rho = &base.scale(1.0 - eps) + &pert.scale(eps);
                let diff = (subentropy(&rho).unwrap() - q0).abs();
                prop_assert!(diff <= last + 1e-12);
                last = diff;
            }
            prop_assert!(last < 1e-6);
        }

        #[test]
        fn lambda_below_chi(seed in any::<u64>(), d in 2usize..4, n in 2usize..5) {
            let e = random_ensemble(d, n, seed);
            let chi = holevo_chi(&e).unwrap();
            prop_assert!(chi >= 0.0);
            prop_assert!(lambda_lower(&e).unwrap() <= chi + 1e-10);
            prop_assert!(subentropy(&e.average_state()).unwrap() >= 0.0);
        }

        #[test]
        fn classical_bounds(seed in any::<u64>(), n in 1usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = Distribution::new(random_probs(n, &mut rng)).unwrap();
            let g = guesswork(&d);
            let p = error_probability(&d);
            let h = shannon_entropy(&d);
            prop_assert!(g <= error_upper(n, p) + 1e-12);
            prop_assert!(g >= error_lower(p) - 1e-12);
            prop_assert!(g <= entropy_upper(n, h) + 1e-12);
            if h >= 2.0 {
                prop_assert!(g >= entropy_lower(h) - 1e-12);
            }
        }
    }

    #[test]
    fn equality_fixtures() {
        for k in 1..=6 {
            let mut p = vec![1.0 / k as f64; k];
            p.extend([0.0, 0.0]);
            let d = Distribution::new(p).unwrap();
            assert!((guesswork(&d) - error_lower(error_probability(&d))).abs() < 1e-12);
        }
        for n in 1..=8 {
            let u = Distribution::uniform(n);
            assert!((guesswork(&u) - entropy_upper(n, shannon_entropy(&u))).abs() < 1e-12);
            let pt = Distribution::point(n, n - 1);
            assert!((guesswork(&pt) - entropy_upper(n, shannon_entropy(&pt))).abs() < 1e-12);
        }
    }

    #[test]
    fn unambiguous_examples() {
        assert_eq!(unambiguous_upper_bound(3, 0.0).unwrap(), 1.0);
        assert_eq!(unambiguous_upper_bound(3, 1.0).unwrap(), 2.0);
        assert_eq!(unambiguous_upper_bound(3, 0.5).unwrap(), 1.5);
        assert!(unambiguous_upper_bound(3, 1.5).is_err());
        assert!(unambiguous_upper_bound(3, -0.1).is_err());
    }

    #[test]
    fn precondition_examples() {
        let (ok, min) = precondition_theorem3(&fixtures::remark2(), 2000, 1).unwrap();
        assert!(ok && min >= 2.0 - 1e-9, "{min}");
        let (ok, min) = precondition_theorem3(&fixtures::orthogonal_basis(2), 100, 1).unwrap();
        assert!(!ok && min < 1e-9);
        let prior = [0.25, 0.25, 0.25, 0.125, 0.125];
        let e = fixtures::identical_states(&prior, &HermitianOperator::diag(&[0.6, 0.4]));
        let h = entropy_of(&prior);
        let (ok, min) = precondition_theorem3(&e, 500, 3).unwrap();
        assert!(ok && (min - h).abs() < 1e-12);
        assert!(precondition_theorem3(&e, 0, 3).is_err());
    }

    #[test]
    fn suite_two_state_collapse() {
        let e = fixtures::helstrom_pair();
        let p = (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let inputs = BoundInputs { p_err_opt: Some(p), g_opt: Some(1.0 + p), ..BoundInputs::new() };
        let suite = bound_suite(&e, &inputs).unwrap();
        for r in &suite {
            if r.precondition_met {
                assert_ne!(r.holds, Some(false), "{r:?}");
            }
        }
        let lo = suite.iter().find(|r| r.name == "optimal-error-lower").unwrap().value;
        let hi = suite.iter().find(|r| r.name == "optimal-error-upper").unwrap().value;
        // n = 2: upper side equals P_err + 1 exactly
        assert!((hi - (1.0 + p)).abs() < 1e-15 && lo <= 1.0 + p);
    }

    #[test]
    fn trine_subentropy_bound_above_optimum() {
        let e = fixtures::trine();
        let g_opt = 2.0 - 3f64.sqrt() / 3.0;
        let inputs = BoundInputs { g_opt: Some(g_opt), precondition_samples: 0, ..BoundInputs::new() };
        let suite = bound_suite(&e, &inputs).unwrap();
        let r = suite.iter().find(|r| r.name == "subentropy-upper").unwrap();
        assert!(r.value >= g_opt && r.holds == Some(true));
    }
}
