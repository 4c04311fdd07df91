//! Dense symmetric generalized eigensolver `A x = λ B x`.
//!
//! `B = L Lᵀ` (Cholesky), the reduced matrix `C = L⁻¹ A L⁻ᵀ` is
//! diagonalised by cyclic Jacobi rotations and eigenvectors are mapped back
//! with `x = L⁻ᵀ y`, which makes them B-orthonormal.

use serde::Serialize;

use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 50;
/// Convergence when `off(C)_F <= JACOBI_TOL * ||C||_F`.
pub const JACOBI_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    #[serde(skip)]
    pub eigenvectors: DenseMatrix,
    /// `||A x - λ B x|| / (||A||_F ||x||)` per pair.
    pub residual_norms: Vec<f64>,
    pub sweeps: usize,
}

/// Lower-triangular Cholesky factor.
pub fn cholesky(b: &DenseMatrix) -> Result<DenseMatrix> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch(format!("B is {}x{}", b.nrows(), b.ncols())));
    }
    let n = b.nrows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = b[(i, j)];
            let (ri, rj) = (l.row(i), l.row(j));
            for k in 0..j {
                s -= ri[k] * rj[k];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L X = R` in place for lower-triangular `L`, column by column of `R`.
fn forward_solve_rows(l: &DenseMatrix, r: &mut DenseMatrix) {
    let n = l.nrows();
    for i in 0..n {
        let d = l[(i, i)];
        for k in 0..i {
            let lik = l[(i, k)];
            if lik == 0.0 {
                continue;
            }
            let (head, tail) = r.row_pair_mut(k, i);
            for (t, h) in tail.iter_mut().zip(head) {
                *t -= lik * h;
            }
        }
        for v in r.row_mut(i) {
            *v /= d;
        }
    }
}

/// Solves `Lᵀ x = y`.
fn backward_solve_transpose(l: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let n = l.nrows();
    let mut x = y.to_vec();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Cyclic Jacobi on a symmetric matrix. Returns unsorted eigenvalues, the
/// orthogonal eigenvector matrix (columns), and the sweep count.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix, usize)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("matrix is {}x{}", a.nrows(), a.ncols())));
    }
    let n = a.nrows();
    let mut a = a.clone();
    // rows of `vt` are eigenvectors; rotating rows keeps memory access contiguous
    let mut vt = DenseMatrix::identity(n);
    let total = a.frobenius_norm();
    let off_norm = |a: &DenseMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for (j, x) in a.row(i).iter().enumerate() {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= JACOBI_TOL * total || total == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // skip negligible elements (relative to the diagonal pair)
                if apq.abs() <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s);
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                rotate_rows(&mut vt, p, q, c, s);
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok((values, vt.transpose(), sweeps))
}

/// `A <- Jᵀ A J` for the rotation in the `(p, q)` plane, off-pivot entries only.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    rotate_rows(a, p, q, c, s);
    for k in (0..n).filter(|&k| k != p && k != q) {
        a[(k, p)] = a[(p, k)];
        a[(k, q)] = a[(q, k)];
    }
}

fn rotate_rows(m: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let (rp, rq) = m.rows_mut(p, q);
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (mp, mq) = (*x, *y);
        *x = c * mp - s * mq;
        *y = s * mp + c * mq;
    }
}

/// Lowest `n_lowest` eigenpairs of the pencil `(A, B)`.
pub fn solve_generalized(a: &DenseMatrix, b: &DenseMatrix, n_lowest: usize) -> Result<EigenResult> {
    if !a.is_square() || a.nrows() != b.nrows() || b.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let n = a.nrows();
    let n_lowest = n_lowest.min(n);
    let l = cholesky(b)?;

    // C = L⁻¹ A L⁻ᵀ = L⁻¹ (L⁻¹ A)ᵀ since A is symmetric
    let mut x = a.clone();
    forward_solve_rows(&l, &mut x);
    let mut c = x.transpose();
    forward_solve_rows(&l, &mut c);
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }

    let (values, vectors, sweeps) = jacobi_eigen(&c)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));

    let a_norm = a.frobenius_norm();
    let mut eigenvalues = Vec::with_capacity(n_lowest);
    let mut eigenvectors = DenseMatrix::zeros(n, n_lowest);
    let mut residual_norms = Vec::with_capacity(n_lowest);
    for (col, &k) in order.iter().take(n_lowest).enumerate() {
        let lambda = values[k];
        let mut xk = backward_solve_transpose(&l, &vectors.column(k));
        // deterministic sign: largest-magnitude component positive
        let pivot = xk.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if pivot < 0.0 {
            xk.iter_mut().for_each(|v| *v = -*v);
        }
        let ax = a.mul_vec(&xk);
        let bx = b.mul_vec(&xk);
        let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - lambda * q).collect();
        let denom = a_norm * norm2(&xk);
        residual_norms.push(if denom == 0.0 { 0.0 } else { norm2(&r) / denom });
        for (i, v) in xk.into_iter().enumerate() {
            eigenvectors[(i, col)] = v;
        }
        eigenvalues.push(lambda);
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        residual_norms,
        sweeps,
    })
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (mut v, _, _) = jacobi_eigen(a)?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Singular values, descending, by one-sided Jacobi rotations on the
/// columns (accurate for small singular values, unlike `eig(AᵀA)`).
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    // work on rows of aᵀ so rotations touch contiguous memory
    let mut w = a.transpose();
    let n = w.nrows();
    // pairs below this scale are roundoff and would keep rotating forever
    let floor = (f64::EPSILON * a.frobenius_norm()).powi(2);
    for sweep in 0..=MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (rp, rq) = w.rows_mut(p, q);
                let alpha: f64 = rp.iter().map(|x| x * x).sum();
                let beta: f64 = rq.iter().map(|x| x * x).sum();
                let gamma: f64 = rp.iter().zip(rq.iter()).map(|(x, y)| x * y).sum();
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.abs() <= floor {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            let mut sv: Vec<f64> = (0..n).map(|i| norm2(w.row(i))).collect();
            sv.sort_by(|x, y| y.total_cmp(x));
            return Ok(sv);
        }
        if sweep == MAX_SWEEPS {
            break;
        }
    }
    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
        off_norm: f64::NAN,
    })
}
