//! Geometrically uniform ensembles and measurements, the symmetry-based
//! optimality check, and rank-one minimization of `G(X_π)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::guesswork::{conditional_guesswork, guesswork_of_weights};
use crate::hermitian::{CMatrix, HermitianOperator, C64};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::par;

pub const UNITARY_TOL: f64 = 1e-10;
pub const CLOSURE_TOL: f64 = 1e-8;
pub const COMMUTE_TOL: f64 = 1e-10;
pub const MATCH_TOL: f64 = 1e-6;

const GRID: usize = 720;
const REFINE_FROM: usize = 5;
const SPHERE_SAMPLES_PER_DIM: usize = 2000;
const SPHERE_SEED: u64 = 0x0b10_c4a1_5eed;

/// `R_y(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
///
/// This is a spin-½ rotation, so `R_y(α)R_y(β) = R_y(α + β)` holds exactly
/// while reducing the angle mod 2π flips the sign.
pub fn rotation_y(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)])
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `min_φ ‖P − e^{iφ}E‖_F`.
fn distance_up_to_phase(p: &CMatrix, e: &CMatrix) -> f64 {
    let overlap = (e.adjoint() * p).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    (p - e * phase).norm()
}

/// A finite group of unitaries, closed under products up to a global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGroup {
    elements: Vec<CMatrix>,
}

impl UnitaryGroup {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::validation("group needs at least one element"));
        }
        let d = elements[0].nrows();
        let eye = CMatrix::identity(d, d);
        for (i, u) in elements.iter().enumerate() {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::validation(format!("group[{i}]: expected a {d}×{d} matrix")));
            }
            let dev = max_abs(&(u * u.adjoint() - &eye));
            if dev > UNITARY_TOL {
                return Err(Error::validation(format!("group[{i}]: not unitary (deviation {dev:e})")));
            }
        }
        let find = |m: &CMatrix| elements.iter().position(|e| distance_up_to_phase(m, e) <= CLOSURE_TOL);
        if find(&eye).is_none() {
            return Err(Error::validation("group does not contain the identity"));
        }
        for (i, u) in elements.iter().enumerate() {
            if find(&u.adjoint()).is_none() {
                return Err(Error::validation(format!("group[{i}]: inverse missing")));
            }
            for (j, v) in elements.iter().enumerate() {
                if find(&(u * v)).is_none() {
                    return Err(Error::validation(format!("group[{i}]·group[{j}] is not in the group")));
                }
            }
        }
        Ok(Self { elements })
    }

    pub fn trivial(dim: usize) -> Self {
        Self { elements: vec![CMatrix::identity(dim, dim)] }
    }

    /// `{R_y(0), R_y(4π/3), R_y(8π/3)}`.
    pub fn trine() -> Self {
        Self::new((0..3).map(|k| rotation_y(4.0 * PI * k as f64 / 3.0)).collect()).expect("cyclic group of order 3")
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn orbit(&self, op: &HermitianOperator) -> Result<Vec<HermitianOperator>> {
        Error::check_dim(self.dim(), op.dim())?;
        self.elements.iter().map(|u| op.conjugate_by(u)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct GeoUniformSpec {
    pub rho0: HermitianOperator,
    pub group: UnitaryGroup,
    pub intertwiner: Option<CMatrix>,
}

/// `ρ_{x_i} = U_i ρ_0 U_i†` with uniform prior.
pub fn generate_ensemble(spec: &GeoUniformSpec) -> Result<Ensemble> {
    let states = spec.group.orbit(&spec.rho0)?;
    let n = states.len();
    Ensemble::new(vec![1.0 / n as f64; n], states)
}

/// `π_{y_i} = U_i π_0 U_i†`; the orbit must sum to the identity.
pub fn generate_povm(pi0: &HermitianOperator, group: &UnitaryGroup) -> Result<Povm> {
    let ops = group.orbit(pi0)?;
    let total = crate::hermitian::sum(&ops).expect("non-empty group");
    let dev = total.max_abs_diff(&HermitianOperator::identity(group.dim()));
    if dev > CLOSURE_TOL {
        return Err(Error::validation(format!("orbit of π_0 sums to the identity only within {dev:e}")));
    }
    Povm::new(ops)
}

/// `G(X_π)` for `π = |v⟩⟨v|`; infinite when the outcome has zero weight.
pub fn rank_one_guesswork(e: &Ensemble, v: &[C64]) -> f64 {
    let q = e.joint_weights_vector(v);
    let w: f64 = q.iter().sum();
    if w <= 1e-14 {
        return f64::INFINITY;
    }
    guesswork_of_weights(&q) / w
}

/// `cos α|0⟩ + e^{iβ} sin α|1⟩`.
pub fn bloch_vector(alpha: f64, beta: f64) -> Vec<C64> {
    vec![C64::new(alpha.cos(), 0.0), C64::from_polar(alpha.sin(), beta)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankOneCandidate {
    pub value: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug)]
pub struct RankOneMinimum {
    pub value: f64,
    pub vector: Vec<C64>,
    /// Bloch angles of the minimizer (qubits only).
    pub angles: Option<(f64, f64)>,
    /// Refined local minima, best first (qubits only).
    pub candidates: Vec<RankOneCandidate>,
    /// No global guarantee (dimension above two).
    pub heuristic: bool,
    pub evaluations: usize,
}

fn normalize_angles(alpha: f64, beta: f64) -> (f64, f64) {
    // |w(α, β)⟩ is π-periodic in α up to sign; α ↦ −α is β ↦ β + π.
    let mut a = alpha.rem_euclid(PI);
    let mut b = beta;
    if a > PI / 2.0 {
        a = PI - a;
        b += PI;
    }
    (a, b.rem_euclid(2.0 * PI))
}

/// `min_{π rank one} G(X_π)`.
///
/// For qubits the Bloch angles are scanned on a 720×720 grid and the five
/// best cells refined by Nelder–Mead. Above dimension two a seeded sphere
/// sample plus local refinement is used and the result is flagged heuristic.
pub fn minimize_rank_one(e: &Ensemble) -> RankOneMinimum {
    match e.dim() {
        1 => RankOneMinimum {
            value: rank_one_guesswork(e, &[C64::new(1.0, 0.0)]),
            vector: vec![C64::new(1.0, 0.0)],
            angles: None,
            candidates: Vec::new(),
            heuristic: false,
            evaluations: 1,
        },
        2 => minimize_qubit(e),
        _ => minimize_sphere(e),
    }
}

fn minimize_qubit(e: &Ensemble) -> RankOneMinimum {
    let da = (PI / 2.0) / GRID as f64;
    let db = 2.0 * PI / GRID as f64;
    let f = |alpha: f64, beta: f64| rank_one_guesswork(e, &bloch_vector(alpha, beta));
    let rows = par::map_range(GRID + 1, |k| {
        let alpha = k as f64 * da;
        (0..GRID).map(|l| f(alpha, l as f64 * db)).collect::<Vec<f64>>()
    });
    let mut cells: Vec<(f64, usize, usize)> = Vec::with_capacity((GRID + 1) * GRID);
    for (k, row) in rows.iter().enumerate() {
        for (l, &v) in row.iter().enumerate() {
            cells.push((v, k, l));
        }
    }
    let mut evaluations = cells.len();
    cells.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let opts = NelderMeadOptions { max_iter: 4000, ftol: 1e-15, xtol: 1e-10 };
    let seeds: Vec<(usize, usize)> = cells.iter().take(REFINE_FROM).map(|c| (c.1, c.2)).collect();
    let refined = par::map(&seeds, |&(k, l)| {
        nelder_mead(|x| f(x[0], x[1]), &[k as f64 * da, l as f64 * db], da.max(db), opts)
    });
    let mut candidates: Vec<RankOneCandidate> = refined
        .iter()
        .map(|m| {
            let (alpha, beta) = normalize_angles(m.x[0], m.x[1]);
            RankOneCandidate { value: m.value, alpha, beta }
        })
        .collect();
    evaluations += refined.iter().map(|m| m.evaluations).sum::<usize>();
    candidates.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.alpha.total_cmp(&y.alpha)));
    let best = candidates[0].clone();
    let (value, alpha, beta) = if best.value <= cells[0].0 {
        (best.value, best.alpha, best.beta)
    } else {
        (cells[0].0, cells[0].1 as f64 * da, cells[0].2 as f64 * db)
    };
    RankOneMinimum {
        value,
        vector: bloch_vector(alpha, beta),
        angles: Some((alpha, beta)),
        candidates,
        heuristic: false,
        evaluations,
    }
}

fn unit(v: &[f64]) -> Vec<C64> {
    let d = v.len() / 2;
    let z: Vec<C64> = (0..d).map(|k| C64::new(v[2 * k], v[2 * k + 1])).collect();
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    z.into_iter().map(|c| c / norm.max(1e-300)).collect()
}

fn minimize_sphere(e: &Ensemble) -> RankOneMinimum {
    let d = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_SEED);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for rho in e.states() {
        if let Ok(spec) = rho.eig() {
            for k in 0..d {
                starts.push(spec.vector(k).iter().flat_map(|z| [z.re, z.im]).collect());
            }
        }
    }
    for _ in 0..SPHERE_SAMPLES_PER_DIM * d {
        starts.push((0..2 * d).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let f = |x: &[f64]| rank_one_guesswork(e, &unit(x));
    let values = par::map(&starts, |x| f(x));
    let mut order: Vec<usize> = (0..starts.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let opts = NelderMeadOptions { max_iter: 20_000, ftol: 1e-15, xtol: 1e-10 };
    let picks: Vec<usize> = order.iter().take(REFINE_FROM).copied().collect();
    let refined = par::map(&picks, |&i| {
        let x0: Vec<f64> = {
            let u = unit(&starts[i]);
            u.iter().flat_map(|z| [z.re, z.im]).collect()
        };
        nelder_mead(f, &x0, 0.1, opts)
    });
    let evaluations = starts.len() + refined.iter().map(|m| m.evaluations).sum::<usize>();
    let best = refined
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    let mut v = nalgebra::DVector::from_vec(unit(&best.x));
    crate::hermitian::fix_phase(&mut v);
    RankOneMinimum {
        value: best.value.min(values[order[0]]),
        vector: v.iter().copied().collect(),
        angles: None,
        candidates: Vec::new(),
        heuristic: true,
        evaluations,
    }
}

#[derive(Clone, Debug)]
pub struct Theorem5Report {
    /// `V U_i = U_i V` for every group element.
    pub commutes: bool,
    pub rank_one_min: f64,
    /// `G(X_{Vπ_0V†})`.
    pub candidate_value: f64,
    /// `G(X|VΠV†)` for the generated measurement.
    pub povm_value: f64,
    pub optimal: bool,
    /// The rank-one minimum came from a heuristic search, so `optimal` is
    /// only as reliable as that search.
    pub heuristic: bool,
    /// `G(X|VΠV†)` when the sufficient conditions hold.
    pub g_opt: Option<f64>,
}

/// Sufficient optimality conditions for the rotated measurement `VΠV†`
/// generated by `π_0`: `V` commutes with the group and `Vπ_0V†` attains the
/// rank-one minimum of `G(X_π)`.
pub fn check_theorem5(e: &Ensemble, spec: &GeoUniformSpec, pi0: &HermitianOperator, v: &CMatrix) -> Result<Theorem5Report> {
    let d = e.dim();
    Error::check_dim(d, spec.group.dim())?;
    Error::check_dim(d, pi0.dim())?;
    Error::check_dim(d, v.nrows())?;
    Error::check_dim(d, v.ncols())?;
    let dev = max_abs(&(v * v.adjoint() - CMatrix::identity(d, d)));
    if dev > UNITARY_TOL {
        return Err(Error::validation(format!("V is not unitary (deviation {dev:e})")));
    }
    let generated = generate_ensemble(spec)?;
    let matches = generated.len() == e.len()
        && generated.probs().iter().zip(e.probs()).all(|(a, b)| (a - b).abs() <= 1e-9)
        && generated.states().iter().zip(e.states()).all(|(a, b)| a.max_abs_diff(b) <= CLOSURE_TOL);
    if !matches {
        return Err(Error::validation("ensemble is not the one generated by the group specification"));
    }

    let commutes = spec.group.elements().iter().all(|u| max_abs(&(v * u - u * v)) <= COMMUTE_TOL);
    let rank_one = minimize_rank_one(e);
    let rotated = pi0.conjugate_by(v)?;
    let candidate_value = {
        let q = e.joint_weights(&rotated)?;
        let w: f64 = q.iter().sum();
        if w <= 1e-14 {
            return Err(Error::DegenerateOutcome { weight: w });
        }
        guesswork_of_weights(&q) / w
    };
    let povm = generate_povm(&rotated, &spec.group)?;
    let povm_value = conditional_guesswork(e, &povm)?.guesswork;
    let optimal = commutes && (candidate_value - rank_one.value).abs() <= MATCH_TOL;
    Ok(Theorem5Report {
        commutes,
        rank_one_min: rank_one.value,
        candidate_value,
        povm_value,
        optimal,
        heuristic: rank_one.heuristic,
        g_opt: optimal.then_some(povm_value),
    })
}

/// The trine's group specification with `ρ_0 = |0⟩⟨0|`.
pub fn trine_spec() -> GeoUniformSpec {
    GeoUniformSpec {
        rho0: HermitianOperator::diag(&[1.0, 0.0]),
        group: UnitaryGroup::trine(),
        intertwiner: Some(rotation_y(PI / 6.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    const G_TRINE: f64 = 2.0 - 0.577_350_269_189_625_8;

    #[test]
    fn rotation_basics() {
        assert!(max_abs(&(rotation_y(0.0) - CMatrix::identity(2, 2))) == 0.0);
        let eps = 1e-9;
        // continuity at the top of the range, up to the spin-½ sign
        assert!(max_abs(&(rotation_y(2.0 * PI - eps) + CMatrix::identity(2, 2))) < 1e-8);
    }

    proptest! {
        #[test]
        fn rotation_group_law(a in 0.0..2.0 * PI, b in 0.0..2.0 * PI) {
            let ab = rotation_y(a) * rotation_y(b);
            prop_assert!(max_abs(&(&ab - rotation_y(a + b))) < 1e-12);
            prop_assert!(max_abs(&(&ab - rotation_y(b) * rotation_y(a))) < 1e-12);
            // reduced angle agrees up to the global sign
            prop_assert!(distance_up_to_phase(&ab, &rotation_y((a + b).rem_euclid(2.0 * PI))) < 1e-12);
        }
    }

    #[test]
    fn trine_generation() {
        let spec = trine_spec();
        let e = generate_ensemble(&spec).unwrap();
        let fixture = fixtures::trine();
        for (a, b) in e.states().iter().zip(fixture.states()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let pi_e = generate_povm(&HermitianOperator::diag(&[2.0 / 3.0, 0.0]), &spec.group).unwrap();
        for (a, b) in pi_e.ops().iter().zip(fixtures::trine_pi_e().ops()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let r = rotation_y(PI / 6.0);
        let pi_g = fixtures::trine_pi_g();
        for (a, b) in pi_e.conjugate_by(&r).unwrap().ops().iter().zip(pi_g.ops()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        assert!(generate_povm(&HermitianOperator::diag(&[0.5, 0.0]), &spec.group).is_err());
    }

    #[test]
    fn trivial_group() {
        let spec = GeoUniformSpec {
            rho0: HermitianOperator::diag(&[0.6, 0.4]),
            group: UnitaryGroup::trivial(2),
            intertwiner: None,
        };
        let e = generate_ensemble(&spec).unwrap();
        assert_eq!(e.len(), 1);
        let r = check_theorem5(&e, &spec, &HermitianOperator::identity(2), &CMatrix::identity(2, 2)).unwrap();
        assert!(r.optimal);
        assert!((r.rank_one_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_validation() {
        assert!(UnitaryGroup::new(vec![rotation_y(1.0)]).is_err());
        assert!(UnitaryGroup::new(vec![CMatrix::identity(2, 2) * C64::new(1.1, 0.0)]).is_err());
        assert!(UnitaryGroup::new(vec![CMatrix::identity(2, 2), rotation_y(4.0 * PI / 3.0)]).is_err());
    }

    #[test]
    fn trine_posterior_closed_forms() {
        let e = fixtures::trine();
        let s3 = 3f64.sqrt();
        for k in 0..100 {
            for l in 0..100 {
                let (a, b) = (k as f64 * PI / 99.0, l as f64 * 2.0 * PI / 99.0);
                let pi = HermitianOperator::outer(&bloch_vector(a, b));
                let (post, _) = crate::ensemble::posterior(&e, &pi).unwrap();
                let c = (2.0 * a).cos();
                let s = (2.0 * a).sin() * b.cos();
                let expected = [(1.0 + c) / 3.0, (2.0 - c - s3 * s) / 6.0, (2.0 - c + s3 * s) / 6.0];
                for (p, q) in post.probs().iter().zip(expected) {
                    assert!((p - q).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn trine_rank_one_minimum() {
        let e = fixtures::trine();
        let m = minimize_rank_one(&e);
        assert!((m.value - G_TRINE).abs() < 1e-10, "{}", m.value);
        assert!(!m.heuristic);
        for alpha in [PI / 12.0, PI / 4.0] {
            assert!((rank_one_guesswork(&e, &bloch_vector(alpha, 0.0)) - G_TRINE).abs() < 1e-12);
        }
        // the reported argmin lies on the minimizing family α ≡ π/12 (mod π/6), β ∈ {0, π}
        let (a, _) = m.angles.unwrap();
        let offset = ((a - PI / 12.0) / (PI / 6.0)).round();
        assert!((a - PI / 12.0 - offset * PI / 6.0).abs() < 1e-6, "{a}");
    }

    #[test]
    fn trine_theorem5() {
        let e = fixtures::trine();
        let spec = trine_spec();
        let pi0 = HermitianOperator::diag(&[2.0 / 3.0, 0.0]);
        let r = check_theorem5(&e, &spec, &pi0, &rotation_y(PI / 6.0)).unwrap();
        assert!(r.commutes && r.optimal);
        assert!((r.g_opt.unwrap() - G_TRINE).abs() < 1e-10);
        let r = check_theorem5(&e, &spec, &pi0, &CMatrix::identity(2, 2)).unwrap();
        assert!(!r.optimal);
        assert!((r.povm_value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn qutrit_search_is_heuristic() {
        let e = crate::ensemble::random_ensemble(3, 3, 4);
        let m = minimize_rank_one(&e);
        assert!(m.heuristic);
        assert!(m.value >= 1.0 && m.value.is_finite());
    }
}
