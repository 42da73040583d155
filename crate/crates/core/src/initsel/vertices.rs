//! Endo strategies: maximally dispersed vertices, random vertices, and
//! nearest-point area weights.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{InitSet, Provenance};
use crate::error::{Error, Result};
use crate::geometry::{dist, Point};

/// Distances within this of the nearest one count as ties.
pub const AREA_TIE_TOL: f64 = 1e-12;

pub(super) fn seed_vertex(n: usize, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed).random_range(0..n.max(1))
}

pub(super) fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

pub(super) fn endo_set(
    points: &[Point],
    idx: Vec<usize>,
    provenance: Provenance,
    r0: usize,
) -> InitSet {
    InitSet {
        points: idx.iter().map(|&i| points[i]).collect(),
        weights: vec![1.0; idx.len()],
        truncated: r0 > points.len(),
        vertices: Some(idx),
        provenance,
        requested_r0: r0,
        grid: None,
    }
}

/// First `k` maximally dispersed vertices: the farthest vertex from `start`,
/// then repeatedly the vertex whose distance to the chosen set is largest.
/// Ties go to the lowest index.
pub fn mdv_order(points: &[Point], k: usize, start: usize) -> Vec<usize> {
    let n = points.len();
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }
    let first = argmax_dist(
        points,
        |i| dist(&points[i], &points[start]),
        &vec![false; n],
    );
    let mut chosen = vec![false; n];
    let mut order = Vec::with_capacity(k);
    let mut gap: Vec<f64> = vec![f64::INFINITY; n];
    let mut next = first;
    for _ in 0..k {
        chosen[next] = true;
        order.push(next);
        for (i, g) in gap.iter_mut().enumerate() {
            *g = g.min(dist(&points[i], &points[next]));
        }
        if order.len() == k {
            break;
        }
        next = argmax_dist(points, |i| gap[i], &chosen);
    }
    order
}

fn argmax_dist(points: &[Point], f: impl Fn(usize) -> f64, skip: &[bool]) -> usize {
    let mut best = usize::MAX;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..points.len() {
        if skip[i] {
            continue;
        }
        let v = f(i);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Maximally dispersed set of `min(r0, n)` vertices seeded from the vertex
/// drawn by `seed`. Identity weights.
pub fn mdv(points: &[Point], r0: usize, seed: u64) -> InitSet {
    mdv_from_vertex(points, r0, seed_vertex(points.len(), seed))
}

pub fn mdv_from_vertex(points: &[Point], r0: usize, start: usize) -> InitSet {
    let idx = mdv_order(points, r0, start);
    endo_set(points, idx, Provenance::Mdv, r0)
}

/// `min(r0, n)` vertices drawn without replacement; the prefix of a seeded
/// permutation, so sets for growing `r0` are nested. Identity weights.
pub fn random_subset(points: &[Point], r0: usize, seed: u64) -> InitSet {
    let mut p = permutation(points.len(), seed);
    p.truncate(r0);
    endo_set(points, p, Provenance::Random, r0)
}

/// Each vertex gives unit mass to its nearest init point, split equally
/// between points tied within [`AREA_TIE_TOL`].
pub fn area_weights(points: &[Point], init: &InitSet) -> Result<Vec<f64>> {
    if !init.provenance.is_endo() {
        return Err(Error::UnsupportedProvenance(init.provenance.name()));
    }
    let mut w = vec![0.0; init.len()];
    let mut near = Vec::new();
    for v in points {
        let d: Vec<f64> = init.points.iter().map(|p| dist(v, p)).collect();
        let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
        near.clear();
        near.extend((0..d.len()).filter(|&j| d[j] - dmin <= AREA_TIE_TOL));
        let share = 1.0 / near.len() as f64;
        for &j in &near {
            w[j] += share;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingSphere;
    use crate::initsel::sphere_points;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| [x, 0.0, 0.0]).collect()
    }

    #[test]
    fn hand_checked_maximin() {
        let pts = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(mdv_order(&pts, 4, 0), vec![3, 0, 1, 2]);
        let s = mdv_from_vertex(&pts, 10, 0);
        assert!(s.truncated);
        assert_eq!(s.len(), 4);
        assert_eq!(s.weights, vec![1.0; 4]);
    }

    #[test]
    fn full_request_is_permutation() {
        let pts: Vec<Point> = (0..30)
            .map(|i| [(i * 7 % 11) as f64, (i % 5) as f64, 0.0])
            .collect();
        for set in [mdv(&pts, 30, 4), random_subset(&pts, 30, 4)] {
            let mut v = set.vertices.clone().unwrap();
            v.sort();
            assert_eq!(v, (0..30).collect::<Vec<_>>());
            assert!(!set.truncated);
        }
    }

    #[test]
    fn random_is_deterministic() {
        let pts = line(&(0..100).map(f64::from).collect::<Vec<_>>());
        assert_eq!(random_subset(&pts, 10, 9), random_subset(&pts, 10, 9));
        assert_ne!(
            random_subset(&pts, 10, 9).vertices,
            random_subset(&pts, 10, 10).vertices
        );
        assert_eq!(mdv(&pts, 5, 2), mdv(&pts, 5, 2));
    }

    #[test]
    fn random_single_draw_is_uniform() {
        // chi-square over 10 cells, 9 dof: the 0.999 quantile is 27.9
        let pts = line(&(0..10).map(f64::from).collect::<Vec<_>>());
        let draws = 10_000;
        let mut counts = [0usize; 10];
        for seed in 0..draws {
            counts[random_subset(&pts, 1, seed).vertices.unwrap()[0]] += 1;
        }
        let e = draws as f64 / 10.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi2 < 27.9, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn area_weight_cases() {
        let pts = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let all = mdv(&pts, 5, 0);
        assert_eq!(area_weights(&pts, &all).unwrap(), vec![1.0; 5]);
        let one = mdv(&pts, 1, 0);
        assert_eq!(area_weights(&pts, &one).unwrap(), vec![5.0]);
        // vertices 0 and 4 chosen: vertex 2 is equidistant
        let two = mdv_from_vertex(&pts, 2, 0);
        assert_eq!(two.vertices.as_ref().unwrap(), &vec![4, 0]);
        assert_eq!(area_weights(&pts, &two).unwrap(), vec![2.5, 2.5]);
        let sph = sphere_points(
            &BoundingSphere {
                center: [0.0; 3],
                radius: 1.0,
                dim: 3,
            },
            4,
        );
        assert!(matches!(
            area_weights(&pts, &sph),
            Err(Error::UnsupportedProvenance("sphere"))
        ));
    }

    fn brute_maximin_ok(pts: &[Point], order: &[usize]) -> bool {
        // each new vertex attains the max over the rest of the min distance to the prefix
        for k in 1..order.len() {
            let gap = |v: usize| {
                order[..k]
                    .iter()
                    .map(|&c| dist(&pts[v], &pts[c]))
                    .fold(f64::INFINITY, f64::min)
            };
            let best = (0..pts.len())
                .filter(|v| !order[..k].contains(v))
                .map(gap)
                .fold(f64::NEG_INFINITY, f64::max);
            if gap(order[k]) != best {
                return false;
            }
        }
        true
    }

    proptest! {
        #[test]
        fn mdv_prefixes_are_maximin(
            pts in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 2..200),
            k in 1usize..25,
            seed in any::<u64>(),
        ) {
            let order = mdv(&pts, k, seed).vertices.unwrap();
            prop_assert_eq!(order.len(), k.min(pts.len()));
            let start = seed_vertex(pts.len(), seed);
            let far = (0..pts.len()).map(|i| dist(&pts[i], &pts[start])).fold(0.0, f64::max);
            prop_assert_eq!(dist(&pts[order[0]], &pts[start]), far);
            prop_assert!(brute_maximin_ok(&pts, &order));
        }

        #[test]
        fn area_mass_is_conserved(
            pts in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 1..150),
            k in 1usize..40,
            seed in any::<u64>(),
        ) {
            let set = random_subset(&pts, k, seed);
            let w = area_weights(&pts, &set).unwrap();
            prop_assert_eq!(w.iter().sum::<f64>(), pts.len() as f64);
        }
    }
}
