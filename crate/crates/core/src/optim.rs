//! Small derivative-free and constrained least-squares routines used by the
//! rank-one minimization, the precondition sampler and POVM recovery.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the simplex's function values spread less than this.
    pub ftol: f64,
    /// and its vertices lie within this distance of the best one.
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iter: 5000, ftol: 1e-12, xtol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Nelder–Mead simplex minimization from `x0` with an axis-aligned initial
/// simplex of edge `step`.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, opts: NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64]| {
        evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= opts.ftol && size <= opts.xtol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };

        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let xs: Vec<f64> = x0.iter().zip(&vertex.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                    let fs = eval(&xs);
                    *vertex = (xs, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations: evals }
}

/// Nonnegative least squares `min ‖Aw − b‖ s.t. w ≥ 0` (Lawson–Hanson).
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut w = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * a.norm().max(1.0) * b.norm().max(1.0);
    let max_outer = 3 * n + 10;

    for _ in 0..max_outer {
        let grad = a.transpose() * (b - a * &w);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| grad[i].partial_cmp(&grad[j]).unwrap());
        match candidate {
            Some(j) if grad[j] > tol => passive[j] = true,
            _ => break,
        }
        loop {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub = a.select_columns(&idx);
            let z_sub = match sub.clone().svd(true, true).solve(b, 1e-14) {
                Ok(z) => z,
                Err(_) => return w,
            };
            if z_sub.iter().all(|&z| z > 0.0) {
                for (k, &j) in idx.iter().enumerate() {
                    w[j] = z_sub[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &j) in idx.iter().enumerate() {
                if z_sub[k] <= 0.0 {
                    let denom = w[j] - z_sub[k];
                    if denom > 0.0 {
                        alpha = alpha.min(w[j] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (k, &j) in idx.iter().enumerate() {
                w[j] += alpha * (z_sub[k] - w[j]);
                if w[j] <= 1e-15 {
                    w[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], 0.5, NelderMeadOptions::default());
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{:?}", m.x);
    }

    #[test]
    fn nnls_matches_unconstrained_when_interior() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_row_slice(&[1.0, 2.0, 3.0]);
        let w = nnls(&a, &b);
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nnls_clamps_negative_direction() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_row_slice(&[-1.0, 2.0]);
        let w = nnls(&a, &b);
        assert_eq!(w[0], 0.0);
        assert!((w[1] - 2.0).abs() < 1e-12);
    }
}
