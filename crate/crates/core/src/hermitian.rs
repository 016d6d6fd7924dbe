//! Small dense Hermitian operators: construction, arithmetic, spectral
//! decomposition and Loewner-order tests.
//!
//! Everything here is sized for desk-scale quantum problems (dimension up to
//! a few dozen). Storage is a row-major `nalgebra` matrix; the eigensolver is
//! a cyclic complex Jacobi iteration.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default relative tolerance used by PSD and Loewner tests.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-14;

/// A d×d complex Hermitian matrix.
///
/// Stored entries satisfy `m[i][j] == conj(m[j][i])` exactly: every
/// constructor symmetrizes its input as `(M + M†)/2`.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

/// Full spectral decomposition, eigenvalues in descending order.
///
/// Column `k` of `eigenvectors` belongs to `eigenvalues[k]`. Each column has
/// its first non-negligible amplitude made real and nonnegative.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let mut out = m.clone();
    for i in 0..d {
        out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..d {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

impl HermitianOperator {
    /// Builds an operator from a square matrix, symmetrizing it.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::validation(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some((k, _)) = m.iter().enumerate().find(|(_, z)| !z.re.is_finite() || !z.im.is_finite()) {
            let d = m.nrows();
            // nalgebra iterates column-major
            return Err(Error::validation(format!(
                "non-finite entry at ({}, {})",
                k % d,
                k / d
            )));
        }
        Ok(Self { m: symmetrize(&m) })
    }

    /// Builds an operator from row-major complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::validation(format!(
                "row {i} has {} entries, expected {d}",
                r.len()
            )));
        }
        Self::new(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// Builds an operator from a row-major real matrix.
    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::validation(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_fn(d, d, |i, j| C64::new(entries[i * d + j], 0.0)))
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        Self {
            m: CMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self { m: CMatrix::identity(d, d) }
    }

    pub fn zeros(d: usize) -> Self {
        Self { m: CMatrix::zeros(d, d) }
    }

    /// `|v⟩⟨v|` without normalization.
    pub fn outer(v: &[C64]) -> Self {
        let d = v.len();
        Self::new_unchecked(CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()))
    }

    /// The density matrix `|ψ⟩⟨ψ|/⟨ψ|ψ⟩` of a pure state given by amplitudes.
    pub fn pure_state(amplitudes: &[C64]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::validation("pure state needs a nonzero finite amplitude vector"));
        }
        Ok(Self::outer(amplitudes).scale(1.0 / norm2))
    }

    /// Real-amplitude convenience form of [`pure_state`](Self::pure_state).
    pub fn pure_state_real(amplitudes: &[f64]) -> Result<Self> {
        let v: Vec<C64> = amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::pure_state(&v)
    }

    /// Symmetrizes without the finiteness and shape checks.
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self { m: symmetrize(&m) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max(1, ‖M‖_F)`, the scale all relative tolerances are measured against.
    pub fn tol_scale(&self) -> f64 {
        self.frobenius_norm().max(1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.map(|z| z * s) }
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..d {
                row += self.m[(i, j)] * v[j];
            }
            acc += (v[i].conj() * row).re;
        }
        acc
    }

    /// `U M U†` for a square matrix `U` of matching dimension.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        Error::check_dim(self.dim(), u.nrows())?;
        Error::check_dim(self.dim(), u.ncols())?;
        Ok(Self::new_unchecked(u * &self.m * u.adjoint()))
    }

    /// Largest entrywise modulus of `M − N`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig(self)
    }

    /// Applies a real function to the spectrum: `Σ f(λ_k) v_k v_k†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let spec = self.eig()?;
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (k, &lam) in spec.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let v = spec.eigenvectors.column(k);
            out += (&v * v.adjoint()) * C64::new(w, 0.0);
        }
        Ok(Self::new_unchecked(out))
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.m[(i, j)]).collect()).collect()
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianOperator{:?}", self.to_rows())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in add");
        HermitianOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sub");
        HermitianOperator { m: &self.m - &rhs.m }
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        HermitianOperator { m: -&self.m }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, s: f64) -> HermitianOperator {
        self.scale(s)
    }
}

/// Sum of operators; `None` for an empty slice.
pub fn sum<'a>(ops: impl IntoIterator<Item = &'a HermitianOperator>) -> Option<HermitianOperator> {
    let mut it = ops.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, op| &acc + op))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let d = a.nrows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Spectral decomposition by cyclic complex Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// `1e-14·‖M‖_F`; fails after 100 sweeps.
pub fn eig(op: &HermitianOperator) -> Result<Spectrum> {
    let d = op.dim();
    let mut a = op.m.clone();
    let mut v = CMatrix::identity(d, d);
    let target = JACOBI_REL_TOL * op.frobenius_norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase-rotate so the pivot is real, then a real Jacobi rotation.
                let phase_conj = (apq / mag).conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = phase_conj * (-s);
                let u_qq = phase_conj * c;

                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged {
        let residual = off_diagonal_norm(&a);
        if residual > target {
            return Err(Error::SolverFailure {
                message: format!("Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"),
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    // stable sort keeps algorithm order among ties
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = CMatrix::zeros(d, d);
    for (col, &src) in order.iter().enumerate() {
        let mut column = v.column(src).into_owned();
        fix_phase(&mut column);
        vecs.set_column(col, &column);
    }
    Ok(Spectrum { eigenvalues, eigenvectors: vecs })
}

/// Rotates a vector's global phase so its first non-negligible amplitude is
/// real and nonnegative.
pub fn fix_phase(v: &mut CVector) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-10 * norm).copied() {
        let rot = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> HermitianOperator {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(k);
            out += (&v * v.adjoint()) * C64::new(lam, 0.0);
        }
        HermitianOperator::new_unchecked(out)
    }
}

/// `λ_min(M) ≥ −tol·max(1, ‖M‖_F)`.
pub fn is_psd(m: &HermitianOperator, tol: f64) -> Result<PsdCheck> {
    if !(tol >= 0.0) {
        return Err(Error::validation(format!("tolerance must be nonnegative, got {tol}")));
    }
    let min_eigenvalue = eig(m)?.min();
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol * m.tol_scale(),
        min_eigenvalue,
    })
}

/// Loewner order `lhs ≤ rhs`, i.e. `rhs − lhs` is PSD within `tol`.
pub fn loewner_leq(lhs: &HermitianOperator, rhs: &HermitianOperator, tol: f64) -> Result<bool> {
    Error::check_dim(lhs.dim(), rhs.dim())?;
    Ok(is_psd(&(rhs - lhs), tol)?.psd)
}

/// `Re Tr(MN)`.
pub fn trace_product(m: &HermitianOperator, n: &HermitianOperator) -> Result<f64> {
    Error::check_dim(m.dim(), n.dim())?;
    Ok(trace_product_unchecked(m, n))
}

pub(crate) fn trace_product_unchecked(m: &HermitianOperator, n: &HermitianOperator) -> f64 {
    let d = m.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += m.m[(i, j)] * n.m[(j, i)];
        }
    }
    debug_assert!(
        acc.im.abs() <= 1e-10 * m.tol_scale() * n.tol_scale(),
        "trace of a Hermitian product has imaginary part {}",
        acc.im
    );
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_hermitian(d: usize, seed: u64) -> HermitianOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = CMatrix::from_fn(d, d, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        HermitianOperator::new(m).unwrap()
    }

    fn random_psd(d: usize, seed: u64) -> HermitianOperator {
        let h = random_hermitian(d, seed);
        HermitianOperator::new(h.matrix() * h.matrix().adjoint()).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let s = eig(&HermitianOperator::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum() {
        let s = eig(&HermitianOperator::diag(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvectors[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvectors[(1, 1)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[a, b], [b, a]] are a ± b
        let m = HermitianOperator::from_real(2, &[0.5, 0.25, 0.25, 0.5]).unwrap();
        let s = eig(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.25, epsilon = 1e-14);
    }

    #[test]
    fn complex_offdiagonal() {
        // σ_y has eigenvalues ±1
        let m = HermitianOperator::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let s = eig(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-14);
        assert!(s.eigenvectors[(0, 0)].im.abs() < 1e-15 && s.eigenvectors[(0, 0)].re >= 0.0);
    }

    #[test]
    fn constructor_symmetrizes() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, j as f64));
        let h = HermitianOperator::new(m).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
        assert_eq!(h.get(1, 1).im, 0.0);
    }

    #[test]
    fn rejects_non_finite_and_non_square() {
        let mut m = CMatrix::identity(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(HermitianOperator::new(m).is_err());
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
        assert!(HermitianOperator::new(CMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn psd_examples() {
        let z = is_psd(&HermitianOperator::zeros(3), 1e-9).unwrap();
        assert!(z.psd);
        assert_eq!(z.min_eigenvalue, 0.0);
        let n = is_psd(&HermitianOperator::diag(&[1.0, -0.5]), 1e-9).unwrap();
        assert!(!n.psd);
        assert_abs_diff_eq!(n.min_eigenvalue, -0.5, epsilon = 1e-15);
        assert!(is_psd(&HermitianOperator::zeros(1), -1.0).is_err());
    }

    #[test]
    fn loewner_examples() {
        let a = random_psd(3, 7);
        assert!(loewner_leq(&a, &a, 1e-9).unwrap());
        let e0 = HermitianOperator::diag(&[1.0, 0.0]);
        let e1 = HermitianOperator::diag(&[0.0, 1.0]);
        assert!(!loewner_leq(&e0, &e1, 1e-9).unwrap());
        assert!(!loewner_leq(&e1, &e0, 1e-9).unwrap());
        let rho = a.scale(1.0 / a.trace());
        assert!(loewner_leq(&rho.scale(1.0 / 3.0), &rho.scale(2.0 / 3.0), 1e-9).unwrap());
        assert!(matches!(
            loewner_leq(&e0, &HermitianOperator::identity(3), 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_product_examples() {
        let m = random_hermitian(4, 3);
        assert_abs_diff_eq!(
            trace_product(&HermitianOperator::identity(4), &m).unwrap(),
            m.trace(),
            epsilon = 1e-12
        );
        let k0 = HermitianOperator::diag(&[1.0, 0.0]);
        let k1 = HermitianOperator::diag(&[0.0, 1.0]);
        assert_eq!(trace_product(&k0, &k1).unwrap(), 0.0);
        // trine: Tr(ρ₁ · (2/3)ρ₁) = 2/3
        let rho1 = HermitianOperator::pure_state_real(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            trace_product(&rho1, &rho1.scale(2.0 / 3.0)).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn map_spectrum_inverse_sqrt() {
        let a = random_psd(3, 11);
        let isq = a.map_spectrum(|l| 1.0 / l.sqrt()).unwrap();
        let prod = isq.matrix() * a.matrix() * isq.matrix();
        let id = CMatrix::identity(3, 3);
        assert!((prod - id).norm() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eig_reconstructs(seed in any::<u64>(), d in 1usize..=16) {
            let m = random_hermitian(d, seed);
            let s = eig(&m).unwrap();
            let scale = m.tol_scale();
            let err = (s.reconstruct().matrix() - m.matrix()).norm();
            prop_assert!(err <= 1e-9 * scale, "reconstruction error {err}");
            for w in s.eigenvalues.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            let gram = s.eigenvectors.adjoint() * &s.eigenvectors;
            prop_assert!((gram - CMatrix::identity(d, d)).norm() <= 1e-10 * d as f64);
            for k in 0..d {
                let v = s.eigenvectors.column(k);
                let r = m.matrix() * v - v * C64::new(s.eigenvalues[k], 0.0);
                prop_assert!(r.norm() <= 1e-10 * scale);
            }
        }

        #[test]
        fn trace_product_commutes(seed in any::<u64>(), d in 1usize..=8) {
            let m = random_hermitian(d, seed);
            let n = random_hermitian(d, seed.wrapping_add(1));
            let a = trace_product(&m, &n).unwrap();
            let b = trace_product(&n, &m).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn loewner_chain_transitive(seed in any::<u64>(), d in 1usize..=6) {
            let a = random_hermitian(d, seed);
            let p = random_psd(d, seed ^ 0x55);
            let q = random_psd(d, seed ^ 0xaa);
            let b = &a + &p;
            let c = &b + &q;
            prop_assert!(loewner_leq(&a, &a, 1e-9).unwrap());
            prop_assert!(loewner_leq(&a, &b, 1e-9).unwrap());
            prop_assert!(loewner_leq(&b, &c, 1e-9).unwrap());
            prop_assert!(loewner_leq(&a, &c, 1e-9).unwrap());
        }

        #[test]
        fn psd_min_matches_spectrum(seed in any::<u64>(), d in 1usize..=8) {
            let m = random_hermitian(d, seed);
            let check = is_psd(&m, 1e-9).unwrap();
            let s = eig(&m).unwrap();
            prop_assert!((check.min_eigenvalue - s.min()).abs() <= 1e-10);
        }
    }
}
