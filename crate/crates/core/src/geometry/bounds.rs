//! Bounding volumes that carry the exo candidate points.

use super::{dot3, sub3, Cluster, Point};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, DenseMatrix};

/// Relative inflation of box half-lengths.
pub const BOX_MARGIN: f64 = 1.02;
/// Relative inflation of sphere radii.
pub const SPHERE_MARGIN: f64 = 1.02;
/// Flat directions get this fraction of the largest half-length.
pub const DEGENERATE_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct OrientedBox {
    pub center: Point,
    /// `dim` orthonormal axes, by decreasing point spread.
    pub axes: Vec<Point>,
    pub half_lengths: Vec<f64>,
}

impl OrientedBox {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Point at box coordinates `t` (each in `[-1, 1]` inside the box).
    pub fn map(&self, t: &[f64]) -> Point {
        let mut p = self.center;
        for ((a, h), s) in self.axes.iter().zip(&self.half_lengths).zip(t) {
            for d in 0..3 {
                p[d] += a[d] * h * s;
            }
        }
        p
    }

    pub fn contains(&self, p: &Point) -> bool {
        let rel = sub3(p, &self.center);
        self.axes
            .iter()
            .zip(&self.half_lengths)
            .all(|(a, &h)| dot3(&rel, a).abs() <= h * (1.0 + 1e-12))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundingSphere {
    pub center: Point,
    pub radius: f64,
    pub dim: usize,
}

impl BoundingSphere {
    pub fn contains(&self, p: &Point) -> bool {
        super::dist(p, &self.center) <= self.radius * (1.0 + 1e-12)
    }
}

/// PCA-oriented box of `points` in `dim` dimensions. The box is centered at
/// the midrange of the projections on each axis, which is never looser than
/// centering at the mean.
pub fn pca_obb(points: &[Point], dim: usize) -> Result<OrientedBox> {
    if points.is_empty() {
        return Err(Error::InvalidCluster("bounding box of no points".into()));
    }
    let n = points.len() as f64;
    let mut mean = [0.0; 3];
    for p in points {
        for d in 0..dim {
            mean[d] += p[d] / n;
        }
    }
    let cov = DenseMatrix::from_fn(dim, dim, |a, b| {
        points
            .iter()
            .map(|p| (p[a] - mean[a]) * (p[b] - mean[b]))
            .sum::<f64>()
            / n
    });
    let (_, vecs) = symmetric_eigen(&cov)?;
    let axes: Vec<Point> = (0..dim)
        .map(|j| {
            let mut a = [0.0; 3];
            a[..dim].copy_from_slice(&vecs.col(j)[..dim]);
            a
        })
        .collect();

    let mut center = mean;
    let mut half = Vec::with_capacity(dim);
    for a in &axes {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                let t = dot3(&sub3(p, &mean), a);
                (lo.min(t), hi.max(t))
            });
        let mid = 0.5 * (lo + hi);
        for d in 0..3 {
            center[d] += mid * a[d];
        }
        half.push(0.5 * (hi - lo) * BOX_MARGIN);
    }
    let hmax = half.iter().copied().fold(0.0, f64::max);
    let floor = if hmax > 0.0 {
        DEGENERATE_FLOOR * hmax
    } else {
        DEGENERATE_FLOOR
    };
    half.iter_mut().for_each(|h| *h = h.max(floor));
    Ok(OrientedBox {
        center,
        axes,
        half_lengths: half,
    })
}

/// Sphere at the cluster centroid, radius inflated by [`SPHERE_MARGIN`].
pub fn bounding_sphere(cluster: &Cluster) -> Result<BoundingSphere> {
    if cluster.radius <= 0.0 {
        return Err(Error::DegenerateCluster(
            "bounding sphere of zero radius".into(),
        ));
    }
    Ok(BoundingSphere {
        center: cluster.centroid,
        radius: cluster.radius * SPHERE_MARGIN,
        dim: cluster.dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn segment_box() {
        let pts: Vec<Point> = (0..=8).map(|i| [i as f64 * 0.5, 0.0, 0.0]).collect();
        let b = pca_obb(&pts, 3).unwrap();
        assert!((b.axes[0][0].abs() - 1.0).abs() < 1e-12);
        assert!(b.half_lengths[0] >= 2.0);
        assert!((b.center[0] - 2.0).abs() < 1e-12);
        for h in &b.half_lengths[1..] {
            assert!((h - DEGENERATE_FLOOR * b.half_lengths[0]).abs() < 1e-18);
        }
        assert!(pts.iter().all(|p| b.contains(p)));
    }

    #[test]
    fn unit_cube_axes() {
        // an anisotropic grid so the covariance eigenvalues are distinct
        let mut pts = Vec::new();
        for i in 0..5 {
            for j in 0..4 {
                for k in 0..3 {
                    pts.push([i as f64 / 4.0 * 3.0, j as f64 / 3.0 * 2.0, k as f64 / 2.0]);
                }
            }
        }
        let b = pca_obb(&pts, 3).unwrap();
        // eigen oracle: axis-aligned extents 3, 2, 1 give axes e_x, e_y, e_z
        for (j, expect) in [1.5, 1.0, 0.5].iter().enumerate() {
            assert!((b.axes[j][j].abs() - 1.0).abs() < 1e-12);
            assert!((b.half_lengths[j] - expect * BOX_MARGIN).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_extent_box() {
        let b = pca_obb(&[[1.0, 1.0, 1.0]], 3).unwrap();
        assert_eq!(b.center, [1.0, 1.0, 1.0]);
        assert_eq!(b.half_lengths, vec![DEGENERATE_FLOOR; 3]);
        assert!(pca_obb(&[], 3).is_err());
    }

    #[test]
    fn sphere_of_pair() {
        let c = Cluster::from_points(3, vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]).unwrap();
        let s = bounding_sphere(&c).unwrap();
        assert_eq!(s.center, [0.0; 3]);
        assert_eq!(s.radius, SPHERE_MARGIN);
        let p = Cluster::from_points(3, vec![[1.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            bounding_sphere(&p),
            Err(Error::DegenerateCluster(_))
        ));
    }

    #[test]
    fn concentric_shells_track_outer() {
        let mut pts = Vec::new();
        for (r, n) in [(1.0, 10), (3.0, 20)] {
            for i in 0..n {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                pts.push([r * t.cos(), r * t.sin(), 0.0]);
            }
        }
        let c = Cluster::from_points(3, pts).unwrap();
        let s = bounding_sphere(&c).unwrap();
        assert!((s.radius - 3.0 * SPHERE_MARGIN).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn volumes_contain_points(
            pts in prop::collection::vec(prop::array::uniform3(-5.0..5.0f64), 2..80),
            flat in any::<bool>(),
        ) {
            let pts: Vec<Point> = if flat {
                // rotated plane through the origin
                pts.iter().map(|p| [p[0], p[1], 0.3 * p[0] - 0.7 * p[1]]).collect()
            } else {
                pts
            };
            let b = pca_obb(&pts, 3).unwrap();
            prop_assert!(pts.iter().all(|p| b.contains(p)));
            for i in 0..3 {
                for j in 0..3 {
                    let e = dot3(&b.axes[i], &b.axes[j]) - if i == j { 1.0 } else { 0.0 };
                    prop_assert!(e.abs() < 1e-12);
                }
            }
            if flat && pts.iter().any(|p| p != &pts[0]) {
                let hmax = b.half_lengths.iter().copied().fold(0.0, f64::max);
                prop_assert!(b.half_lengths[2] <= DEGENERATE_FLOOR * hmax * (1.0 + 1e-6));
            }
            let c = Cluster::from_points(3, pts.clone()).unwrap();
            if c.radius > 0.0 {
                let s = bounding_sphere(&c).unwrap();
                prop_assert!(pts.iter().all(|p| s.contains(p)));
            }
        }
    }
}
