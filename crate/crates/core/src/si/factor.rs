//! Skeleton selection and the stable three-term factorization.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::initsel::InitSet;
use crate::kernels::KernelSpec;
use crate::linalg::{cpqr_truncated, lu_partial, DenseMatrix, LuResult};

/// How the candidate weights enter the block handed to pivoted QR.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scaling {
    /// `W^{1/2} K W^{1/2}`
    #[default]
    Sqrt,
    /// `W K W`
    Full,
}

impl FromStr for Scaling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sqrt" => Ok(Self::Sqrt),
            "full" => Ok(Self::Full),
            _ => Err(format!("unknown scaling `{s}` (expected sqrt or full)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonPair {
    pub x_hat: Vec<Point>,
    pub y_hat: Vec<Point>,
    /// Positions of the skeleton points in the candidate sets, pivot order.
    pub x_pos: Vec<usize>,
    pub y_pos: Vec<usize>,
    /// Cluster vertex indices, when the candidates were vertices.
    pub x_vertices: Option<Vec<usize>>,
    pub y_vertices: Option<Vec<usize>>,
    /// Ranks of the row and column pivoted QRs.
    pub rank_rows: usize,
    pub rank_cols: usize,
    pub r1: usize,
}

impl SkeletonPair {
    /// Drops the last `r1 − k` pivots from both sides.
    pub fn truncate(&mut self, k: usize) {
        self.x_hat.truncate(k);
        self.y_hat.truncate(k);
        self.x_pos.truncate(k);
        self.y_pos.truncate(k);
        if let Some(v) = &mut self.x_vertices {
            v.truncate(k);
        }
        if let Some(v) = &mut self.y_vertices {
            v.truncate(k);
        }
        self.r1 = self.r1.min(k);
    }
}

/// `K ≈ left · right` with `left = K[X, Ŷ]·U⁻¹` and `right = L⁻¹·P·K[X̂, Y]`
/// where `P·K[X̂, Ŷ] = L·U`.
#[derive(Clone, Debug)]
pub struct SIFactorization {
    pub skeleton: SkeletonPair,
    pub left: DenseMatrix,
    pub right: DenseMatrix,
    pub k_x_yhat: DenseMatrix,
    pub k_xhat_y: DenseMatrix,
    pub pivot_lu: LuResult,
}

impl SIFactorization {
    pub fn rank(&self) -> usize {
        self.skeleton.r1
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.left.matmul(&self.right)
    }
}

/// Skeletons at relative tolerance `eps` (see [`skeletonize_with`]).
pub fn skeletonize(
    k: &KernelSpec,
    init_x: &InitSet,
    init_y: &InitSet,
    eps: f64,
    scaling: Scaling,
) -> Result<SkeletonPair> {
    skeletonize_with(k, init_x, init_y, eps, usize::MAX, scaling)
}

/// Builds `T = W_X K[X_init, Y_init] W_Y` (weights square-rooted in
/// [`Scaling::Sqrt`]), runs pivoted QR on `T` and `Tᵀ` truncated at
/// `eps·‖T‖_F` or `max_rank` pivots, and keeps the leading
/// `min(rank_rows, rank_cols)` pivots of each.
pub fn skeletonize_with(
    k: &KernelSpec,
    init_x: &InitSet,
    init_y: &InitSet,
    eps: f64,
    max_rank: usize,
    scaling: Scaling,
) -> Result<SkeletonPair> {
    if init_x.is_empty() || init_y.is_empty() {
        return Err(Error::EmptySkeleton);
    }
    let mut t = k.assemble(&init_x.points, &init_y.points)?;
    let scale = |w: &[f64]| -> Vec<f64> {
        match scaling {
            Scaling::Sqrt => w.iter().map(|v| v.sqrt()).collect(),
            Scaling::Full => w.to_vec(),
        }
    };
    t.scale_rows(&scale(&init_x.weights));
    t.scale_cols(&scale(&init_y.weights));

    let cols = cpqr_truncated(&t, eps, max_rank);
    let rows = cpqr_truncated(&t.transpose(), eps, max_rank);
    let r1 = cols.rank.min(rows.rank);
    if r1 == 0 {
        return Err(Error::EmptySkeleton);
    }
    let x_pos = rows.perm[..r1].to_vec();
    let y_pos = cols.perm[..r1].to_vec();
    let pick = |set: &InitSet, pos: &[usize]| -> (Vec<Point>, Option<Vec<usize>>) {
        (
            pos.iter().map(|&i| set.points[i]).collect(),
            set.vertices
                .as_ref()
                .map(|v| pos.iter().map(|&i| v[i]).collect()),
        )
    };
    let (x_hat, x_vertices) = pick(init_x, &x_pos);
    let (y_hat, y_vertices) = pick(init_y, &y_pos);
    Ok(SkeletonPair {
        x_hat,
        y_hat,
        x_pos,
        y_pos,
        x_vertices,
        y_vertices,
        rank_rows: rows.rank,
        rank_cols: cols.rank,
        r1,
    })
}

/// Assembles the three blocks and factors the pivot block. A singular pivot
/// block, or factors that overflow, drop the last skeleton pair and retry.
pub fn build_factorization(
    k: &KernelSpec,
    xs: &[Point],
    ys: &[Point],
    skel: &SkeletonPair,
) -> Result<SIFactorization> {
    let mut skel = skel.clone();
    let k_x_yhat_full = k.assemble(xs, &skel.y_hat)?;
    let k_xhat_y_full = k.assemble(&skel.x_hat, ys)?;
    let pivot_full = k.assemble(&skel.x_hat, &skel.y_hat)?;
    let mut r = skel.r1;
    while r > 0 {
        let idx: Vec<usize> = (0..r).collect();
        let pivot = pivot_full.select_rows(&idx).leading_cols(r);
        let k_x_yhat = k_x_yhat_full.leading_cols(r);
        let k_xhat_y = k_xhat_y_full.leading_rows(r);
        let attempt = lu_partial(&pivot).and_then(|lu| {
            let left = lu.right_solve_upper(&k_x_yhat)?;
            let right = lu.solve_lower(&k_xhat_y)?;
            Ok((lu, left, right))
        });
        match attempt {
            Ok((lu, left, right))
                if left
                    .as_slice()
                    .iter()
                    .chain(right.as_slice())
                    .all(|v| v.is_finite()) =>
            {
                skel.truncate(r);
                return Ok(SIFactorization {
                    skeleton: skel,
                    left,
                    right,
                    k_x_yhat,
                    k_xhat_y,
                    pivot_lu: lu,
                });
            }
            Ok(_) | Err(Error::SingularPivot { .. }) => {
                log::debug!("pivot block singular at rank {r}, shrinking");
                r -= 1;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::FactorizationFailure)
}

/// `‖K − U·V‖_F / ‖K‖_F` against a freshly assembled `K`.
pub fn rel_error(
    fact: &SIFactorization,
    k: &KernelSpec,
    xs: &[Point],
    ys: &[Point],
) -> Result<f64> {
    rel_error_against(fact, &k.assemble(xs, ys)?)
}

/// `‖K − U·V‖_F / ‖K‖_F` for a given `K`.
pub fn rel_error_against(fact: &SIFactorization, kmat: &DenseMatrix) -> Result<f64> {
    crate::linalg::rel_fro_error(kmat, &fact.reconstruct())
}
