//! Point clouds, clusters and the statistics the compression relies on.
//!
//! Points are stored as `[f64; 3]`; two-dimensional clouds keep `z = 0` and
//! carry `dim = 2` so generators and writers can tell them apart.

mod bounds;
mod generate;
mod io;
mod partition;

pub use bounds::{
    bounding_sphere, pca_obb, BoundingSphere, OrientedBox, BOX_MARGIN, DEGENERATE_FLOOR,
    SPHERE_MARGIN,
};
pub use generate::{
    generate_disk_pair, generate_facing_cubes, generate_torus, DEFAULT_DISK_POINTS,
    DEFAULT_DISK_SEPARATION, DEFAULT_TORUS_MAJOR, DEFAULT_TORUS_MINOR,
};
pub use io::{load_point_cloud, save_point_cloud};
pub use partition::partition;

use crate::error::{Error, Result};

pub type Point = [f64; 3];

#[inline]
pub fn dist(a: &Point, b: &Point) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[inline]
pub(crate) fn dot3(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn sub3(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<Point>,
    labels: Option<Vec<usize>>,
}

impl PointCloud {
    /// Validates dimension, finiteness, nonemptiness and label count. For
    /// `dim = 2` the third coordinate must be zero.
    pub fn new(dim: usize, coords: Vec<Point>, labels: Option<Vec<usize>>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGeometry(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if coords.is_empty() {
            return Err(Error::InvalidGeometry("point cloud is empty".into()));
        }
        if let Some(i) = coords.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidGeometry(format!("point {i} is not finite")));
        }
        if dim == 2 {
            if let Some(i) = coords.iter().position(|p| p[2] != 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "2D point {i} has nonzero z"
                )));
            }
        }
        if let Some(l) = &labels {
            if l.len() != coords.len() {
                return Err(Error::InvalidGeometry(format!(
                    "{} labels for {} points",
                    l.len(),
                    coords.len()
                )));
            }
        }
        Ok(Self {
            dim,
            coords,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.coords[i]
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn with_labels(self, labels: Vec<usize>) -> Result<Self> {
        Self::new(self.dim, self.coords, Some(labels))
    }

    /// Appends `other`; both clouds must share dimension and label presence.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidGeometry(
                "cannot join clouds of different dimension".into(),
            ));
        }
        let coords = self.coords.iter().chain(&other.coords).copied().collect();
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            (None, None) => None,
            _ => return Err(Error::InvalidGeometry("only one cloud has labels".into())),
        };
        Self::new(self.dim, coords, labels)
    }

    /// Member indices per label, by ascending label. Labels absent from the
    /// cloud are skipped. Errors when the cloud has no labels.
    pub fn label_groups(&self) -> Result<Vec<(usize, Vec<usize>)>> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidCluster("point cloud carries no cluster labels".into()))?;
        let mut groups = std::collections::BTreeMap::<usize, Vec<usize>>::new();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        Ok(groups.into_iter().collect())
    }

    /// Clusters built from the label groups, in ascending label order.
    pub fn clusters(&self) -> Result<Vec<Cluster>> {
        self.label_groups()?
            .into_iter()
            .map(|(_, idx)| cluster_stats(self, &idx))
            .collect()
    }
}

/// A subset of a cloud with cached centroid and radius. The member
/// coordinates are copied so the cluster is usable on its own.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub indices: Vec<usize>,
    pub points: Vec<Point>,
    pub centroid: Point,
    pub radius: f64,
    pub dim: usize,
}

impl Cluster {
    /// A cluster holding every point of `points` (indices `0..n`).
    pub fn from_points(dim: usize, points: Vec<Point>) -> Result<Self> {
        let cloud = PointCloud::new(dim, points, None)?;
        let idx: Vec<usize> = (0..cloud.len()).collect();
        cluster_stats(&cloud, &idx)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn cluster_stats(cloud: &PointCloud, indices: &[usize]) -> Result<Cluster> {
    if indices.is_empty() {
        return Err(Error::InvalidCluster("empty index set".into()));
    }
    let mut seen = vec![false; cloud.len()];
    for &i in indices {
        if i >= cloud.len() {
            return Err(Error::InvalidCluster(format!(
                "index {i} out of range for {} points",
                cloud.len()
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidCluster(format!("duplicate index {i}")));
        }
    }
    let points: Vec<Point> = indices.iter().map(|&i| *cloud.point(i)).collect();
    let n = points.len() as f64;
    let mut centroid = [0.0; 3];
    for p in &points {
        for d in 0..3 {
            centroid[d] += p[d];
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n);
    let radius = points
        .iter()
        .map(|p| dist(p, &centroid))
        .fold(0.0, f64::max);
    Ok(Cluster {
        indices: indices.to_vec(),
        points,
        centroid,
        radius,
        dim: cloud.dim(),
    })
}

/// `dist(c_a, c_b) / min(r_a, r_b)`.
pub fn distance_ratio(a: &Cluster, b: &Cluster) -> Result<f64> {
    let rmin = a.radius.min(b.radius);
    if rmin <= 0.0 {
        return Err(Error::DegenerateCluster(
            "distance ratio needs both radii positive".into(),
        ));
    }
    Ok(dist(&a.centroid, &b.centroid) / rmin)
}
