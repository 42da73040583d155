//! Candidate interpolation sets and their diagonal weights.
//!
//! Exo strategies place new points around a cluster (a Chebyshev tensor
//! grid on its PCA box, or Fibonacci points on its bounding sphere); endo
//! strategies pick cluster vertices (maximally dispersed, or random).

mod chebyshev;
mod sphere;
mod vertices;

use std::fmt;
use std::str::FromStr;

pub use chebyshev::{chebyshev_grid, chebyshev_nodes, grid_dims};
pub use sphere::sphere_points;
pub use vertices::{area_weights, mdv, mdv_from_vertex, mdv_order, random_subset, AREA_TIE_TOL};

use crate::error::Result;
use crate::geometry::{bounding_sphere, pca_obb, BoundingSphere, Cluster, OrientedBox, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Chebyshev,
    Sphere,
    Mdv,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Self::Chebyshev, Self::Sphere, Self::Mdv, Self::Random];

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            Self::Chebyshev => "chebyshev",
            Self::Sphere => "sphere",
            Self::Mdv => "mdv",
            Self::Random => "random",
        }
    }

    /// Column label in sweep tables.
    pub fn label(self) -> &'static str {
        match self {
            Self::Chebyshev => "Chebyshev",
            Self::Sphere => "sphere",
            Self::Mdv => "MDV",
            Self::Random => "random",
        }
    }

    pub fn is_endo(self) -> bool {
        matches!(self, Self::Mdv | Self::Random)
    }

    pub fn provenance(self) -> Provenance {
        match self {
            Self::Chebyshev => Provenance::Chebyshev,
            Self::Sphere => Provenance::Sphere,
            Self::Mdv => Provenance::Mdv,
            Self::Random => Provenance::Random,
        }
    }

    /// Starting size of the adaptive loop.
    pub fn default_r0_init(self) -> usize {
        match self {
            Self::Chebyshev => 8,
            _ => 1,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("unknown strategy `{s}` (expected chebyshev, sphere, mdv or random)")
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Chebyshev,
    Sphere,
    Mdv,
    Random,
}

impl Provenance {
    pub fn is_endo(self) -> bool {
        matches!(self, Self::Mdv | Self::Random)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Chebyshev => "chebyshev",
            Self::Sphere => "sphere",
            Self::Mdv => "mdv",
            Self::Random => "random",
        }
    }
}

/// Weights used by endo strategies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightMode {
    #[default]
    Identity,
    Area,
}

impl FromStr for WeightMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "identity" => Ok(Self::Identity),
            "area" => Ok(Self::Area),
            _ => Err(format!("unknown weights `{s}` (expected identity or area)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitSet {
    pub points: Vec<Point>,
    /// Cluster-local vertex indices, for endo sets.
    pub vertices: Option<Vec<usize>>,
    /// Diagonal of `W`, all positive.
    pub weights: Vec<f64>,
    pub provenance: Provenance,
    pub requested_r0: usize,
    /// Set when an endo request exceeded the cluster size.
    pub truncated: bool,
    /// Per-axis node counts of a Chebyshev grid.
    pub grid: Option<Vec<usize>>,
}

impl InitSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Restriction to positions `idx`.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            points: idx.iter().map(|&i| self.points[i]).collect(),
            vertices: self
                .vertices
                .as_ref()
                .map(|v| idx.iter().map(|&i| v[i]).collect()),
            weights: idx.iter().map(|&i| self.weights[i]).collect(),
            provenance: self.provenance,
            requested_r0: self.requested_r0,
            truncated: self.truncated,
            grid: None,
        }
    }
}

/// Per-cluster state for generating sets of growing size: the bounding
/// volume or the full vertex ordering is computed once.
#[derive(Clone, Debug)]
pub struct InitGenerator {
    strategy: Strategy,
    weights: WeightMode,
    points: Vec<Point>,
    source: Source,
}

#[derive(Clone, Debug)]
enum Source {
    Box(OrientedBox),
    Sphere(BoundingSphere),
    Order(Vec<usize>),
}

impl InitGenerator {
    /// `weights` only affects endo strategies.
    pub fn new(
        strategy: Strategy,
        cluster: &Cluster,
        seed: u64,
        weights: WeightMode,
    ) -> Result<Self> {
        let n = cluster.len();
        let source = match strategy {
            Strategy::Chebyshev => Source::Box(pca_obb(&cluster.points, cluster.dim)?),
            Strategy::Sphere => Source::Sphere(bounding_sphere(cluster)?),
            Strategy::Mdv => {
                let start = vertices::seed_vertex(n, seed);
                Source::Order(mdv_order(&cluster.points, n, start))
            }
            Strategy::Random => Source::Order(vertices::permutation(n, seed)),
        };
        Ok(Self {
            strategy,
            weights,
            points: cluster.points.clone(),
            source,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Largest set an endo strategy can return.
    pub fn max_size(&self) -> Option<usize> {
        matches!(self.source, Source::Order(_)).then_some(self.points.len())
    }

    pub fn generate(&self, r0: usize) -> Result<InitSet> {
        let r0 = r0.max(1);
        let set = match &self.source {
            Source::Box(b) => chebyshev_grid(b, r0),
            Source::Sphere(s) => sphere_points(s, r0),
            Source::Order(order) => {
                let k = r0.min(order.len());
                let idx = order[..k].to_vec();
                vertices::endo_set(&self.points, idx, self.strategy.provenance(), r0)
            }
        };
        match (self.weights, set.provenance.is_endo()) {
            (WeightMode::Area, true) => {
                let w = area_weights(&self.points, &set)?;
                Ok(InitSet { weights: w, ..set })
            }
            _ => Ok(set),
        }
    }
}
