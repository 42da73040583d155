//! Running every (pair, strategy, tolerance) combination.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{enumerate_pairs, tercile_split, PairJob, Tercile, DEFAULT_DR_MIN};
use crate::error::{Error, Result};
use crate::geometry::Cluster;
use crate::initsel::{Strategy, WeightMode};
use crate::kernels::{KernelKind, KernelSpec};
use crate::linalg::{eps_rank, singular_values_truncated};
use crate::si::{adaptive_si_with_block, recompress, AdaptiveConfig, Scaling, ToleranceConfig};

/// Pairs sampled from each tercile unless told otherwise.
pub const DEFAULT_SAMPLE: usize = 30;

/// The SVD oracle drops a trailing block this far below the tightest target.
const ORACLE_FLOOR_FACTOR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kernel: KernelSpec,
    pub strategies: Vec<Strategy>,
    pub eps_list: Vec<f64>,
    pub omega: f64,
    /// `None` means the per-strategy default.
    pub r0_init: Option<usize>,
    pub r0_cap: Option<usize>,
    pub scaling: Scaling,
    pub weights: WeightMode,
    pub dr_min: f64,
    /// Pairs per tercile; `None` keeps every admissible pair.
    pub sample: Option<usize>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(kernel: KernelSpec) -> Self {
        Self {
            kernel,
            strategies: Strategy::ALL.to_vec(),
            eps_list: (3..=10).map(|e| 10f64.powi(-e)).collect(),
            omega: 1.1,
            r0_init: None,
            r0_cap: None,
            scaling: Scaling::default(),
            weights: WeightMode::default(),
            dr_min: DEFAULT_DR_MIN,
            sample: Some(DEFAULT_SAMPLE),
            jobs: 0,
            seed: 0,
        }
    }

    fn adaptive(&self, eps_star: f64) -> AdaptiveConfig {
        AdaptiveConfig {
            tolerance: ToleranceConfig {
                eps_star,
                eps: None,
                omega: self.omega,
                r0_init: self.r0_init,
                r0_cap: self.r0_cap,
            },
            scaling: self.scaling,
            weights: self.weights,
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self::new(KernelSpec::new(KernelKind::InverseR))
    }
}

/// One (pair, strategy, tolerance) measurement. For runs that did not
/// converge the ranks and error come from the last pass of the loop and
/// there is no recompression.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub i: usize,
    pub j: usize,
    pub dr: f64,
    pub tercile: Tercile,
    pub strategy: Strategy,
    pub eps_star: f64,
    pub r0_requested: usize,
    pub r0_achieved: usize,
    pub r1: usize,
    pub r2: Option<usize>,
    pub svd_rank: usize,
    pub achieved_error: f64,
    pub recompressed_error: Option<f64>,
    pub passes: usize,
    pub converged: bool,
}

/// Compresses each sampled pair with every strategy at every tolerance.
/// Output is ordered by tercile, pair, strategy, then tolerance, whatever
/// the number of workers.
pub fn run_sweep(clusters: &[Cluster], cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    for &e in &cfg.eps_list {
        cfg.adaptive(e).tolerance.validate()?;
    }
    let jobs = sample_jobs(
        &enumerate_pairs(clusters, cfg.dr_min)?,
        cfg.sample,
        cfg.seed,
    );
    log::info!(
        "sweep: {} pairs, {} strategies, {} tolerances",
        jobs.len(),
        cfg.strategies.len(),
        cfg.eps_list.len()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let per_pair: Vec<Result<Vec<SweepRecord>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(tercile, job)| run_pair(clusters, cfg, tercile, job))
            .collect()
    });
    let mut out = Vec::new();
    for r in per_pair {
        out.extend(r?);
    }
    Ok(out)
}

fn sample_jobs(all: &[PairJob], sample: Option<usize>, seed: u64) -> Vec<(Tercile, PairJob)> {
    let mut out = Vec::new();
    for (t, bin) in Tercile::ALL.into_iter().zip(tercile_split(all)) {
        let mut keep: Vec<usize> = (0..bin.len()).collect();
        if let Some(s) = sample {
            if s < bin.len() {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    seed ^ (t as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                );
                keep.shuffle(&mut rng);
                keep.truncate(s);
                keep.sort_unstable();
            }
        }
        out.extend(keep.into_iter().map(|k| (t, bin[k])));
    }
    out
}

fn pair_seed(seed: u64, job: &PairJob) -> u64 {
    seed ^ ((job.i as u64) << 32 | job.j as u64)
}

fn run_pair(
    clusters: &[Cluster],
    cfg: &SweepConfig,
    tercile: Tercile,
    job: PairJob,
) -> Result<Vec<SweepRecord>> {
    let (cx, cy) = (&clusters[job.i], &clusters[job.j]);
    let kmat = cfg.kernel.assemble(&cx.points, &cy.points)?;
    let tightest = cfg.eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    let sigma = singular_values_truncated(&kmat, ORACLE_FLOOR_FACTOR * tightest)?;
    let knorm = kmat.fro_norm();
    let seed = pair_seed(cfg.seed, &job);
    let mut out = Vec::with_capacity(cfg.strategies.len() * cfg.eps_list.len());
    for &strategy in &cfg.strategies {
        for &eps_star in &cfg.eps_list {
            let mut rec = SweepRecord {
                i: job.i,
                j: job.j,
                dr: job.dr,
                tercile,
                strategy,
                eps_star,
                r0_requested: 0,
                r0_achieved: 0,
                r1: 0,
                r2: None,
                svd_rank: eps_rank(&sigma, eps_star, knorm),
                achieved_error: 1.0,
                recompressed_error: None,
                passes: 0,
                converged: false,
            };
            match adaptive_si_with_block(
                &cfg.kernel,
                cx,
                cy,
                &kmat,
                strategy,
                &cfg.adaptive(eps_star),
                seed,
            ) {
                Ok(outcome) => {
                    let last = outcome.last();
                    rec.r0_requested = last.r0_requested;
                    rec.r0_achieved = last.r0_achieved;
                    rec.r1 = outcome.factorization.rank();
                    rec.achieved_error = outcome.error;
                    rec.passes = outcome.trace.len();
                    rec.converged = true;
                    let low = recompress(&outcome.factorization, eps_star)?;
                    rec.recompressed_error = Some(kmat.sub(&low.reconstruct()).fro_norm() / knorm);
                    rec.r2 = Some(low.r2);
                }
                Err(Error::NoConvergence {
                    last_error, trace, ..
                }) => {
                    if let Some(last) = trace.last() {
                        rec.r0_requested = last.r0_requested;
                        rec.r0_achieved = last.r0_achieved;
                        rec.r1 = last.r1;
                    }
                    rec.achieved_error = last_error;
                    rec.passes = trace.len();
                }
                Err(e) => {
                    log::warn!(
                        "pair ({}, {}) {strategy} eps*={eps_star:e}: {e}",
                        job.i,
                        job.j
                    );
                }
            }
            log::debug!(
                "pair ({}, {}) {strategy} eps*={eps_star:e}: r0={} r1={} converged={}",
                job.i,
                job.j,
                rec.r0_achieved,
                rec.r1,
                rec.converged
            );
            out.push(rec);
        }
    }
    Ok(out)
}
