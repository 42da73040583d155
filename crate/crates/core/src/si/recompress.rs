//! Rank reduction of a skeleton factorization through a small SVD.

use super::factor::SIFactorization;
use crate::error::Result;
use crate::linalg::{eps_rank, qr_thin, svd, DenseMatrix};

/// `left · right` of rank `r2`, with orthonormal columns in `left` scaled
/// by the kept singular values.
#[derive(Clone, Debug)]
pub struct LowRank {
    pub left: DenseMatrix,
    pub right: DenseMatrix,
    /// All singular values of the core, nonincreasing.
    pub sigma: Vec<f64>,
    pub r2: usize,
}

impl LowRank {
    pub fn reconstruct(&self) -> DenseMatrix {
        self.left.matmul(&self.right)
    }
}

/// With `K[X, Ŷ] = Q_α R_α` and `K[X̂, Y]ᵀ = Q_β R_β`, the product
/// `K[X, Ŷ] K̂⁻¹ K[X̂, Y]` equals `Q_α (R_α K̂⁻¹ R_βᵀ) Q_βᵀ`. The core is
/// factored by SVD and truncated at `‖tail‖_F ≤ eps·‖core‖_F`.
pub fn recompress(fact: &SIFactorization, eps: f64) -> Result<LowRank> {
    let (qa, ra) = qr_thin(&fact.k_x_yhat);
    let (qb, rb) = qr_thin(&fact.k_xhat_y.transpose());
    let core = ra.matmul(&fact.pivot_lu.solve(&rb.transpose())?);
    let s = svd(&core)?;
    let total = s.sigma.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r2 = eps_rank(&s.sigma, eps.max(0.0), total);
    let keep: Vec<usize> = (0..r2).collect();
    let mut us = s.u.select_cols(&keep);
    us.scale_cols(&s.sigma[..r2]);
    let left = qa.matmul(&us);
    let right = qb.matmul(&s.v.select_cols(&keep)).transpose();
    Ok(LowRank {
        left,
        right,
        sigma: s.sigma,
        r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cluster, Point};
    use crate::initsel::Strategy;
    use crate::kernels::{KernelKind, KernelSpec};
    use crate::linalg::{singular_values_truncated, svd};
    use crate::si::{adaptive_si, build_factorization, skeletonize_with, AdaptiveConfig, Scaling};

    fn coil(n: usize, x0: f64) -> Vec<Point> {
        (0..n)
            .map(|i| {
                let t = i as f64 * 0.2;
                [x0 + 0.5 * t.cos(), 0.5 * t.sin(), 0.02 * i as f64]
            })
            .collect()
    }

    fn fact(eps_star: f64) -> (SIFactorization, KernelSpec, Vec<Point>, Vec<Point>) {
        let k = KernelSpec::new(KernelKind::InverseR);
        let x = coil(150, 0.0);
        let y = coil(140, 3.0);
        let cx = Cluster::from_points(3, x.clone()).unwrap();
        let cy = Cluster::from_points(3, y.clone()).unwrap();
        let out = adaptive_si(
            &k,
            &cx,
            &cy,
            Strategy::Mdv,
            &AdaptiveConfig::new(eps_star),
            2,
        )
        .unwrap();
        (out.factorization, k, x, y)
    }

    #[test]
    fn lossless_at_zero_eps() {
        let (f, _, _, _) = fact(1e-8);
        let lr = recompress(&f, 0.0).unwrap();
        let uv = f.reconstruct();
        assert!(lr.reconstruct().sub(&uv).fro_norm() <= 1e-10 * uv.fro_norm());
        assert!(lr.r2 <= f.rank());
    }

    #[test]
    fn rank_one_stays_rank_one() {
        let k = KernelSpec::new(KernelKind::InverseR);
        let x = coil(20, 0.0);
        let y = coil(20, 4.0);
        let init = |p: &[Point]| crate::initsel::random_subset(p, 10, 1);
        let s = skeletonize_with(&k, &init(&x), &init(&y), 0.0, 1, Scaling::Sqrt).unwrap();
        let f = build_factorization(&k, &x, &y, &s).unwrap();
        assert_eq!(recompress(&f, 1e-12).unwrap().r2, 1);
    }

    #[test]
    fn tail_bound_and_svd_rank() {
        let eps = 1e-8;
        let (f, k, x, y) = fact(eps);
        let lr = recompress(&f, eps).unwrap();
        let uv = f.reconstruct();
        assert!(lr.reconstruct().sub(&uv).fro_norm() <= eps * uv.fro_norm() * (1.0 + 1e-6));
        let kmat = k.assemble(&x, &y).unwrap();
        let sigma = singular_values_truncated(&kmat, 1e-12).unwrap();
        let rank = eps_rank(&sigma, eps, kmat.fro_norm());
        assert!(lr.r2 <= rank + 2, "r2 {} svd rank {rank}", lr.r2);
    }

    #[test]
    fn core_values_shadow_block_values() {
        // σ_k(core) = σ_k(UV), which is within ‖K − UV‖₂ of σ_k(K)
        let (f, k, x, y) = fact(1e-6);
        let kmat = k.assemble(&x, &y).unwrap();
        let lr = recompress(&f, 0.0).unwrap();
        let sk = svd(&kmat).unwrap().sigma;
        let e2 = svd(&kmat.sub(&f.reconstruct())).unwrap().sigma[0];
        for (a, b) in lr.sigma.iter().zip(&sk) {
            assert!((a - b).abs() <= e2 + 1e-9, "{a} vs {b}, ‖E‖₂ = {e2}");
        }
    }
}
