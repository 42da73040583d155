//! Tensor Chebyshev grids on an oriented box.

use std::f64::consts::PI;

use super::{InitSet, Provenance};
use crate::geometry::OrientedBox;

/// First-kind Chebyshev nodes `cos((2k−1)π/2m)` on `[-1, 1]` with weights
/// `(π/m)·sin((2k−1)π/2m)`, for `k = 1..m`.
pub fn chebyshev_nodes(m: usize) -> (Vec<f64>, Vec<f64>) {
    (1..=m)
        .map(|k| {
            let t = (2 * k - 1) as f64 * PI / (2 * m) as f64;
            (t.cos(), PI / m as f64 * t.sin())
        })
        .unzip()
}

/// Per-axis node counts for side lengths `lengths` whose product does not
/// exceed `r0`. Counts start at `max(1, round(r0^(1/d)·ℓᵢ/geomean(ℓ)))`;
/// the axis with the largest `nᵢ/ℓᵢ` (lowest index on ties) is then
/// decremented until the product fits.
pub fn grid_dims(lengths: &[f64], r0: usize) -> Vec<usize> {
    let d = lengths.len();
    let r0 = r0.max(1);
    let geo = lengths.iter().map(|l| l.ln()).sum::<f64>() / d as f64;
    let base = (r0 as f64).powf(1.0 / d as f64);
    let mut n: Vec<usize> = lengths
        .iter()
        .map(|l| ((base * (l.ln() - geo).exp()).round() as usize).clamp(1, r0))
        .collect();
    let density = |n: &[usize], i: usize| n[i] as f64 / lengths[i];
    let product = |n: &[usize]| n.iter().try_fold(1usize, |p, &x| p.checked_mul(x));
    while product(&n).is_none_or(|p| p > r0) {
        let i = (0..d)
            .filter(|&i| n[i] > 1)
            .max_by(|&i, &j| density(&n, i).total_cmp(&density(&n, j)).then(j.cmp(&i)))
            .expect("product of ones fits");
        n[i] -= 1;
    }
    n
}

/// Tensor grid of at most `r0` Chebyshev nodes mapped through `b`. Each node
/// weight is the product of its 1D weights times the half-lengths.
pub fn chebyshev_grid(b: &OrientedBox, r0: usize) -> InitSet {
    let d = b.dim();
    let dims = grid_dims(&b.half_lengths, r0);
    let rules: Vec<(Vec<f64>, Vec<f64>)> = dims.iter().map(|&m| chebyshev_nodes(m)).collect();
    let total: usize = dims.iter().product();
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    let mut t = vec![0.0; d];
    for _ in 0..total {
        let mut w = 1.0;
        for a in 0..d {
            t[a] = rules[a].0[idx[a]];
            w *= rules[a].1[idx[a]] * b.half_lengths[a];
        }
        points.push(b.map(&t));
        weights.push(w);
        // odometer, last axis fastest
        for a in (0..d).rev() {
            idx[a] += 1;
            if idx[a] < dims[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    InitSet {
        points,
        vertices: None,
        weights,
        provenance: Provenance::Chebyshev,
        requested_r0: r0,
        truncated: false,
        grid: Some(dims),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn unit_box(h: [f64; 3]) -> OrientedBox {
        OrientedBox {
            center: [0.0; 3],
            axes: vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            half_lengths: h.to_vec(),
        }
    }

    #[test]
    fn single_node_at_center() {
        let b = unit_box([0.5, 2.0, 3.0]);
        let s = chebyshev_grid(&b, 1);
        assert_eq!(s.len(), 1);
        for c in s.points[0] {
            assert!(c.abs() < 1e-15);
        }
        // one-node rule has weight π per axis
        let expect = PI.powi(3) * 0.5 * 2.0 * 3.0;
        assert!((s.weights[0] - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn cube_of_eight() {
        let s = chebyshev_grid(&unit_box([1.0; 3]), 8);
        assert_eq!(s.grid, Some(vec![2, 2, 2]));
        let h = 0.5f64.sqrt();
        for p in &s.points {
            for c in p {
                assert!((c.abs() - h).abs() < 1e-15);
            }
        }
        let distinct: std::collections::BTreeSet<_> = s
            .points
            .iter()
            .map(|p: &Point| p.map(|c| (c > 0.0) as u8))
            .collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn weight_sums_converge_to_two() {
        let err = |m: usize| (chebyshev_nodes(m).1.iter().sum::<f64>() - 2.0).abs();
        assert!(err(16) < 0.02);
        let errs: Vec<f64> = (8..=32).map(err).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn dims_follow_side_lengths() {
        assert_eq!(grid_dims(&[1.0, 1.0, 1.0], 27), vec![3, 3, 3]);
        assert_eq!(grid_dims(&[1.0, 1.0, 1.0], 26), vec![2, 3, 3]);
        let n = grid_dims(&[4.0, 2.0, 1.0], 64);
        assert_eq!(n, vec![8, 4, 2]);
        let flat = grid_dims(&[1.0, 1.0, 1e-6], 100);
        assert_eq!(flat[2], 1);
        assert_eq!(flat[0] * flat[1], 100);
        for r0 in 1..300 {
            let n = grid_dims(&[3.0, 1.5, 0.7], r0);
            assert!(n.iter().product::<usize>() <= r0);
        }
    }

    #[test]
    fn oriented_mapping() {
        let s2 = 0.5f64.sqrt();
        let b = OrientedBox {
            center: [1.0, 2.0, 3.0],
            axes: vec![[s2, s2, 0.0], [-s2, s2, 0.0], [0.0, 0.0, 1.0]],
            half_lengths: vec![2.0, 1.0, 0.5],
        };
        let s = chebyshev_grid(&b, 30);
        assert!(s.points.iter().all(|p| b.contains(p)));
    }
}
