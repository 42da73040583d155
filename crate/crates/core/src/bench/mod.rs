//! Pair sweep harness.
//!
//! Cluster pairs are enumerated by distance ratio, split into near, mid and
//! far terciles, optionally subsampled per tercile, and every sampled pair
//! is compressed with each strategy at each target tolerance. Records are
//! averaged per (tercile, strategy, tolerance) and written as CSV tables.

mod report;
mod sweep;

use std::fmt;

pub use report::{
    aggregate_means, format_sig6, write_csv, write_records_csv, write_tercile_csvs, Aggregate,
};
pub use sweep::{run_sweep, SweepConfig, SweepRecord, DEFAULT_SAMPLE};

use crate::error::Result;
use crate::geometry::{distance_ratio, Cluster};

/// Pairs closer than this are not admissible.
pub const DEFAULT_DR_MIN: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairJob {
    pub i: usize,
    pub j: usize,
    pub dr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tercile {
    Near,
    Mid,
    Far,
}

impl Tercile {
    pub const ALL: [Tercile; 3] = [Self::Near, Self::Mid, Self::Far];

    pub fn name(self) -> &'static str {
        match self {
            Self::Near => "near",
            Self::Mid => "mid",
            Self::Far => "far",
        }
    }
}

impl fmt::Display for Tercile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All pairs `i < j` with `dr ≥ dr_min`, sorted by `dr` ascending (ties by
/// index).
pub fn enumerate_pairs(clusters: &[Cluster], dr_min: f64) -> Result<Vec<PairJob>> {
    let mut jobs = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let dr = distance_ratio(&clusters[i], &clusters[j])?;
            if dr >= dr_min {
                jobs.push(PairJob { i, j, dr });
            }
        }
    }
    jobs.sort_by(|a, b| a.dr.total_cmp(&b.dr).then((a.i, a.j).cmp(&(b.i, b.j))));
    Ok(jobs)
}

/// Splits by `dr` into three contiguous bins whose sizes differ by at most
/// one, larger bins first. Fewer than three jobs all land in the near bin.
pub fn tercile_split(jobs: &[PairJob]) -> [Vec<PairJob>; 3] {
    let mut sorted = jobs.to_vec();
    sorted.sort_by(|a, b| a.dr.total_cmp(&b.dr).then((a.i, a.j).cmp(&(b.i, b.j))));
    if sorted.len() < 3 {
        if !sorted.is_empty() {
            log::warn!("only {} admissible pairs, no tercile split", sorted.len());
        }
        return [sorted, Vec::new(), Vec::new()];
    }
    let n = sorted.len();
    let sizes = [n.div_ceil(3), (n + 1) / 3, n / 3];
    let far = sorted.split_off(sizes[0] + sizes[1]);
    let mid = sorted.split_off(sizes[0]);
    [sorted, mid, far]
}
