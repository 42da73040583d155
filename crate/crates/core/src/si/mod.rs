//! Skeletonized interpolation.
//!
//! [`skeletonize`] picks skeleton points from two candidate sets by
//! pivoted QR of the weighted candidate block, [`build_factorization`]
//! turns them into stable factors `K ≈ U·V`, [`adaptive_si`] grows the
//! candidate sets until a target relative error is met, and
//! [`recompress`] trims the rank with a small SVD.

mod adaptive;
mod factor;
mod recompress;

pub(crate) use adaptive::adaptive_si_with_block;
pub use adaptive::{
    adaptive_si, seed_pair, AdaptiveConfig, SiOutcome, ToleranceConfig, TraceEntry,
};
pub use factor::{
    build_factorization, rel_error, rel_error_against, skeletonize, skeletonize_with,
    SIFactorization, Scaling, SkeletonPair,
};
pub use recompress::{recompress, LowRank};
