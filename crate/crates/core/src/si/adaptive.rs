//! Growing the candidate sets until the target error is met.

use super::factor::{
    build_factorization, rel_error_against, skeletonize, SIFactorization, Scaling,
};
use crate::error::{Error, Result};
use crate::geometry::Cluster;
use crate::initsel::{InitGenerator, Strategy, WeightMode};
use crate::kernels::KernelSpec;
use crate::linalg::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Target relative Frobenius error `ε*`.
    pub eps_star: f64,
    /// Pivoted-QR tolerance `ε`; `None` means `0.1·ε*`.
    pub eps: Option<f64>,
    /// Growth factor `ω` for `r0`.
    pub omega: f64,
    /// `None` means the strategy default (8 for Chebyshev, else 1).
    pub r0_init: Option<usize>,
    /// `None` means four times the larger cluster.
    pub r0_cap: Option<usize>,
}

impl ToleranceConfig {
    pub fn new(eps_star: f64) -> Self {
        Self {
            eps_star,
            eps: None,
            omega: 1.1,
            r0_init: None,
            r0_cap: None,
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps.unwrap_or(0.1 * self.eps_star)
    }

    pub fn validate(&self) -> Result<()> {
        let eps = self.eps();
        if !(self.eps_star > 0.0 && eps > 0.0 && eps <= self.eps_star) {
            return Err(Error::InvalidConfig(format!(
                "tolerances need 0 < eps <= eps_star, got eps = {eps}, eps_star = {}",
                self.eps_star
            )));
        }
        if !(self.omega > 1.0 && self.omega.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "omega must exceed 1, got {}",
                self.omega
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveConfig {
    pub tolerance: ToleranceConfig,
    pub scaling: Scaling,
    pub weights: WeightMode,
}

impl AdaptiveConfig {
    pub fn new(eps_star: f64) -> Self {
        Self {
            tolerance: ToleranceConfig::new(eps_star),
            scaling: Scaling::default(),
            weights: WeightMode::default(),
        }
    }
}

/// One pass of the adaptive loop. `r1 = 0` and `error = 1` record a pass
/// whose skeleton came out empty or whose pivot block could not be factored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    pub r0_requested: usize,
    /// Larger of the two candidate set sizes actually generated.
    pub r0_achieved: usize,
    pub r1: usize,
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct SiOutcome {
    pub factorization: SIFactorization,
    pub trace: Vec<TraceEntry>,
    pub error: f64,
}

impl SiOutcome {
    pub fn last(&self) -> &TraceEntry {
        self.trace
            .last()
            .expect("a converged run has at least one pass")
    }
}

/// Independent seeds for the two sides of a pair.
pub fn seed_pair(seed: u64) -> (u64, u64) {
    let mix = |mut z: u64| {
        // splitmix64 finalizer
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (
        mix(seed.wrapping_mul(2)),
        mix(seed.wrapping_mul(2).wrapping_add(1)),
    )
}

/// Runs skeletonization with candidate sets of size `r0`, growing
/// `r0 ← max(r0 + 1, ⌈ω·r0⌉)` until `‖K − UV‖_F ≤ ε*‖K‖_F`. The last pass
/// is clamped to the cap. Endo strategies stop once both candidate sets
/// hold every cluster vertex.
pub fn adaptive_si(
    k: &KernelSpec,
    cx: &Cluster,
    cy: &Cluster,
    strategy: Strategy,
    cfg: &AdaptiveConfig,
    seed: u64,
) -> Result<SiOutcome> {
    let kmat = k.assemble(&cx.points, &cy.points)?;
    adaptive_si_with_block(k, cx, cy, &kmat, strategy, cfg, seed)
}

/// As [`adaptive_si`] with the block `K[X, Y]` supplied by the caller.
pub(crate) fn adaptive_si_with_block(
    k: &KernelSpec,
    cx: &Cluster,
    cy: &Cluster,
    kmat: &DenseMatrix,
    strategy: Strategy,
    cfg: &AdaptiveConfig,
    seed: u64,
) -> Result<SiOutcome> {
    let tol = &cfg.tolerance;
    tol.validate()?;
    let (sx, sy) = seed_pair(seed);
    let gx = InitGenerator::new(strategy, cx, sx, cfg.weights)?;
    let gy = InitGenerator::new(strategy, cy, sy, cfg.weights)?;
    let cap = tol.r0_cap.unwrap_or(4 * cx.len().max(cy.len())).max(1);
    let mut r0 = tol
        .r0_init
        .unwrap_or(strategy.default_r0_init())
        .clamp(1, cap);
    let mut trace = Vec::new();
    loop {
        let ix = gx.generate(r0)?;
        let iy = gy.generate(r0)?;
        let attempt = skeletonize(k, &ix, &iy, tol.eps(), cfg.scaling)
            .and_then(|s| build_factorization(k, &cx.points, &cy.points, &s))
            .and_then(|f| Ok((rel_error_against(&f, kmat)?, f)));
        let entry = |r1, error| TraceEntry {
            r0_requested: r0,
            r0_achieved: ix.len().max(iy.len()),
            r1,
            error,
        };
        let last_error = match attempt {
            Ok((error, f)) => {
                trace.push(entry(f.rank(), error));
                log::trace!("{strategy} r0={r0} r1={} err={error:.3e}", f.rank());
                if error <= tol.eps_star {
                    return Ok(SiOutcome {
                        factorization: f,
                        trace,
                        error,
                    });
                }
                error
            }
            Err(Error::EmptySkeleton | Error::FactorizationFailure) => {
                trace.push(entry(0, 1.0));
                1.0
            }
            Err(e) => return Err(e),
        };
        let exhausted = ix.len() == cx.len()
            && iy.len() == cy.len()
            && gx.max_size().is_some()
            && gy.max_size().is_some();
        if r0 >= cap || exhausted {
            return Err(Error::NoConvergence {
                r0_cap: cap,
                last_error,
                trace,
            });
        }
        let grown = (tol.omega * r0 as f64).ceil() as usize;
        r0 = grown.max(r0 + 1).min(cap);
    }
}
