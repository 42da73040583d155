//! Dense linear algebra: the matrix container and the factorizations the
//! skeletonization needs. All tolerances are relative to a reference
//! Frobenius norm.

mod lu;
mod matrix;
mod qr;
mod svd;

pub use lu::{lu_partial, LuResult};
pub use matrix::DenseMatrix;
pub use qr::{cpqr_truncated, cpqr_with_rule, qr_thin, CpqrResult, Truncation};
pub use svd::{
    singular_values_truncated, svd, symmetric_eigen, SvdResult, MAX_SWEEPS, ORTHOGONALITY_TOL,
};

use crate::error::{Error, Result};

pub fn fro_norm(a: &DenseMatrix) -> f64 {
    a.fro_norm()
}

/// `‖a − b‖_F / ‖a‖_F`.
pub fn rel_fro_error(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let denom = a.fro_norm();
    if denom == 0.0 {
        return Err(Error::DivisionByZeroNorm);
    }
    Ok(a.sub(b).fro_norm() / denom)
}

/// Smallest `k` such that `sqrt(Σ_{i ≥ k} σᵢ²) ≤ eps · ref_norm`, for
/// nonincreasing `sigma`.
pub fn eps_rank(sigma: &[f64], eps: f64, ref_norm: f64) -> usize {
    let threshold = eps * ref_norm;
    // tail[k] = ‖σ[k..]‖, summed from the small end
    let mut tail_sq = vec![0.0; sigma.len() + 1];
    for k in (0..sigma.len()).rev() {
        tail_sq[k] = tail_sq[k + 1] + sigma[k] * sigma[k];
    }
    (0..=sigma.len())
        .find(|&k| tail_sq[k].sqrt() <= threshold)
        .unwrap_or(sigma.len())
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_rank_cases() {
        let s = [1.0, 0.0, 0.0];
        assert_eq!(eps_rank(&s, 0.5, 1.0), 1);
        assert_eq!(eps_rank(&[0.1, 0.05], 1.0, 1.0), 0);
        assert_eq!(eps_rank(&[3.0, 2.0, 1e-20, 0.0], 0.0, 1.0), 3);
        assert_eq!(eps_rank(&[], 0.1, 1.0), 0);
    }

    #[test]
    fn eps_rank_geometric_against_tail_scan() {
        let sigma: Vec<f64> = (0..40).map(|i| 2f64.powi(-i)).collect();
        let total = sigma.iter().map(|s| s * s).sum::<f64>().sqrt();
        for eps in [1e-1, 1e-3, 1e-6, 1e-9] {
            // brute force: for each k sum the tail afresh
            let brute = (0..=sigma.len())
                .find(|&k| sigma[k..].iter().map(|s| s * s).sum::<f64>().sqrt() <= eps * total)
                .unwrap();
            assert_eq!(eps_rank(&sigma, eps, total), brute);
        }
    }

    #[test]
    fn norms_and_errors() {
        assert!((fro_norm(&DenseMatrix::identity(3)) - 3f64.sqrt()).abs() < 1e-15);
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(rel_fro_error(&a, &a).unwrap(), 0.0);
        let b = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 5.0]]);
        let brute = 1.0 / (1.0f64 + 4.0 + 9.0 + 16.0).sqrt();
        assert!((rel_fro_error(&a, &b).unwrap() - brute).abs() < 1e-15);
        assert!(matches!(
            rel_fro_error(&DenseMatrix::zeros(2, 2), &a),
            Err(Error::DivisionByZeroNorm)
        ));
    }
}
