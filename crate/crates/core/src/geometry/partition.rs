//! Recursive median bisection.

use super::{bounds::pca_obb, dot3, PointCloud};
use crate::error::{Error, Result};

/// Splits `cloud` into `k` labelled parts by repeatedly cutting a part at
/// the median of its projection on the PCA axis of largest extent. A part
/// of `k` labels goes `⌊k/2⌋ : ⌈k/2⌉`, with point counts in proportion.
pub fn partition(cloud: &PointCloud, k: usize) -> Result<Vec<usize>> {
    let n = cloud.len();
    if k == 0 || k > n {
        return Err(Error::InvalidPartition(format!(
            "cannot split {n} points into {k} parts"
        )));
    }
    let mut labels = vec![0; n];
    let all: Vec<usize> = (0..n).collect();
    split(cloud, all, k, 0, &mut labels)?;
    Ok(labels)
}

fn split(
    cloud: &PointCloud,
    mut idx: Vec<usize>,
    k: usize,
    base: usize,
    labels: &mut [usize],
) -> Result<()> {
    if k == 1 {
        for i in idx {
            labels[i] = base;
        }
        return Ok(());
    }
    let pts: Vec<_> = idx.iter().map(|&i| *cloud.point(i)).collect();
    let b = pca_obb(&pts, cloud.dim())?;
    let axis = (0..b.dim())
        .max_by(|&i, &j| {
            b.half_lengths[i]
                .total_cmp(&b.half_lengths[j])
                .then(j.cmp(&i))
        })
        .unwrap_or(0);
    let a = b.axes[axis];
    let key: Vec<(f64, usize)> = idx.iter().map(|&i| (dot3(cloud.point(i), &a), i)).collect();
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by(|&p, &q| key[p].0.total_cmp(&key[q].0).then(key[p].1.cmp(&key[q].1)));
    idx = order.iter().map(|&p| key[p].1).collect();

    let k_lo = k / 2;
    let n = idx.len();
    let n_lo = (n * k_lo / k).clamp(k_lo, n - (k - k_lo));
    let hi = idx.split_off(n_lo);
    split(cloud, idx, k_lo, base, labels)?;
    split(cloud, hi, k - k_lo, base + k_lo, labels)
}
