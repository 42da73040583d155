//! One-sided (Hestenes) Jacobi SVD and a cyclic Jacobi symmetric eigensolver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{dot, norm2, DenseMatrix};
use super::qr::{cpqr_truncated, qr_thin};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;
/// A column pair is rotated while `|aᵢ·aⱼ| > tol · ‖aᵢ‖ ‖aⱼ‖`, unless one of
/// the two has norm below `ε_mach · ‖A‖_F`.
pub const ORTHOGONALITY_TOL: f64 = 1e-14;

/// Thin SVD `A = U · diag(sigma) · Vᵀ`, singular values nonincreasing.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// `rows × k` with `k = min(rows, cols)`.
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    /// `cols × k`.
    pub v: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        us.scale_cols(&self.sigma);
        us.matmul(&self.v.transpose())
    }
}

pub fn svd(a: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    if n == 0 {
        return Ok(SvdResult {
            u: DenseMatrix::zeros(m, 0),
            sigma: Vec::new(),
            v: DenseMatrix::zeros(0, 0),
        });
    }
    if m > n {
        // rotations then act on n-vectors instead of m-vectors
        let (q, r) = qr_thin(a);
        let inner = jacobi(&r)?;
        return Ok(SvdResult {
            u: q.matmul(&inner.u),
            sigma: inner.sigma,
            v: inner.v,
        });
    }
    jacobi(a)
}

/// Singular values of `a` above a relative floor: a pivoted QR first drops a
/// trailing block of Frobenius norm `≤ rel_floor · ‖a‖_F`, then the Jacobi
/// SVD runs on the small triangular factor. Each returned value is within
/// that dropped norm of the exact one.
pub fn singular_values_truncated(a: &DenseMatrix, rel_floor: f64) -> Result<Vec<f64>> {
    let qr = cpqr_truncated(a, rel_floor, usize::MAX);
    Ok(svd(&qr.r_factor)?.sigma)
}

fn jacobi(a: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    // columns below this are rounding noise and cannot be rotated into orthogonality
    let floor = (f64::EPSILON * a.fro_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(w.col(p), w.col(p));
                let beta = dot(w.col(q), w.col(q));
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(w.col(p), w.col(q));
                if gamma.abs() <= ORTHOGONALITY_TOL * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = (0..n).map(|j| norm2(w.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = v.select_cols(&order);
    let mut u = w.select_cols(&order);
    for (j, &s) in sigma.iter().enumerate() {
        if s > 0.0 {
            u.col_mut(j).iter_mut().for_each(|x| *x /= s);
        }
    }
    complete_orthonormal(&mut u, &sigma, floor.sqrt());
    Ok(SvdResult { u, sigma, v })
}

#[inline]
fn rotate(w: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let (wp, wq) = w.col_pair_mut(p, q);
    for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Replaces the columns of `u` whose singular values are at most `floor`
/// with an orthonormal completion of the others.
fn complete_orthonormal(u: &mut DenseMatrix, sigma: &[f64], floor: f64) {
    let m = u.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for j in 0..sigma.len() {
        if sigma[j] > floor {
            continue;
        }
        loop {
            let mut e: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let before = norm2(&e);
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for k in 0..u.cols() {
                    if k == j || (sigma[k] <= floor && k > j) {
                        continue;
                    }
                    let c = dot(u.col(k), &e);
                    for (ei, uk) in e.iter_mut().zip(u.col(k)) {
                        *ei -= c * uk;
                    }
                }
            }
            let nrm = norm2(&e);
            if nrm > 1e-3 * before {
                for (dst, x) in u.col_mut(j).iter_mut().zip(&e) {
                    *dst = x / nrm;
                }
                break;
            }
        }
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues come back in descending order, eigenvectors as columns.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eigen needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut s = a.clone();
    let mut v = DenseMatrix::identity(n);
    let scale = a.fro_norm();
    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS * 2 {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[(i, j)] * s[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[(q, q)] - s[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                // S ← Jᵀ S J with J the (p, q) rotation
                for k in 0..n {
                    let skp = s[(k, p)];
                    let skq = s[(k, q)];
                    s[(k, p)] = c * skp - sn * skq;
                    s[(k, q)] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[(p, k)];
                    let sqk = s[(q, k)];
                    s[(p, k)] = c * spk - sn * sqk;
                    s[(q, k)] = sn * spk + c * sqk;
                }
                rotate(&mut v, p, q, c, sn);
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            sweeps: MAX_SWEEPS * 2,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[(j, j)].total_cmp(&s[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| s[(i, i)]).collect();
    Ok((values, v.select_cols(&order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_util::{orthogonality_defect, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_values() {
        let s = svd(&DenseMatrix::diagonal(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn orthogonal_matrix_has_unit_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (q, _) = qr_thin(&random_matrix(&mut rng, 6, 6));
        for s in svd(&q).unwrap().sigma {
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_all_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (m, n) in [(1, 1), (5, 3), (3, 5), (8, 8), (40, 25), (25, 40)] {
            let a = random_matrix(&mut rng, m, n);
            let s = svd(&a).unwrap();
            assert!(s.reconstruct().sub(&a).fro_norm() <= 1e-12 * a.fro_norm());
            assert!(orthogonality_defect(&s.u) <= 1e-12);
            assert!(orthogonality_defect(&s.v) <= 1e-12);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_gets_orthonormal_completion() {
        let a = DenseMatrix::from_fn(5, 4, |i, j| ((i + 1) * (j + 1)) as f64);
        let s = svd(&a).unwrap();
        assert!(s.sigma[1] <= 1e-12 * s.sigma[0]);
        assert!(orthogonality_defect(&s.u) <= 1e-12);
        assert!(s.reconstruct().sub(&a).fro_norm() <= 1e-12 * a.fro_norm());
        let z = svd(&DenseMatrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigma, vec![0.0, 0.0]);
        assert!(orthogonality_defect(&z.u) <= 1e-14);
    }

    #[test]
    fn truncated_values_track_full_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = random_matrix(&mut rng, 60, 6);
        let y = random_matrix(&mut rng, 6, 50);
        let a = x.matmul(&y);
        let full = svd(&a).unwrap().sigma;
        let trunc = singular_values_truncated(&a, 1e-14).unwrap();
        assert!(trunc.len() >= 6 && trunc.len() < 50);
        for (t, f) in trunc.iter().zip(&full) {
            assert!((t - f).abs() <= 1e-13 * full[0]);
        }
    }

    #[test]
    fn symmetric_eigen_small() {
        let a = DenseMatrix::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        for (v, e) in vals.iter().zip([5.0, 3.0, 1.0]) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!(orthogonality_defect(&vecs) < 1e-14);
        let mut av = a.matmul(&vecs);
        av.scale_cols(&vals.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
        assert!(av.sub(&vecs).fro_norm() < 1e-13);
    }
}
