//! Synthetic test geometries.

use std::f64::consts::PI;

use super::{Point, PointCloud};
use crate::error::{Error, Result};

pub const DEFAULT_TORUS_MAJOR: f64 = 8.0;
pub const DEFAULT_TORUS_MINOR: f64 = 3.0;
pub const DEFAULT_DISK_POINTS: usize = 833;
/// Center-to-center distance of the unit disks, i.e. a gap of half a diameter.
pub const DEFAULT_DISK_SEPARATION: f64 = 2.5;

/// `n` points on the torus with major radius `big_r` and minor radius
/// `small_r` about the z axis. Point `i` sits at angles
/// `u = 2πi/n` (around the axis) and `v = 2π·frac(i/φ)` (around the tube).
pub fn generate_torus(n: usize, big_r: f64, small_r: f64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidGeometry(
            "torus needs at least one point".into(),
        ));
    }
    if !(small_r > 0.0 && small_r < big_r && big_r.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "torus needs 0 < r < R, got r = {small_r}, R = {big_r}"
        )));
    }
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let coords = (0..n)
        .map(|i| {
            let u = 2.0 * PI * i as f64 / n as f64;
            let v = 2.0 * PI * (i as f64 / phi).fract();
            let rho = big_r + small_r * v.cos();
            [rho * u.cos(), rho * u.sin(), small_r * v.sin()]
        })
        .collect();
    PointCloud::new(3, coords, None)
}

/// Two `m × m × m` grids on unit cubes facing each other across `gap` along
/// x: `X = [-1, 0] × [0, 1]²`, `Y = [gap, 1 + gap] × [0, 1]²`. Labels 0 and 1.
pub fn generate_facing_cubes(m: usize, gap: f64) -> Result<(PointCloud, PointCloud)> {
    if m < 2 {
        return Err(Error::InvalidGeometry(format!(
            "cube grid needs m >= 2, got {m}"
        )));
    }
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "cube gap must be positive, got {gap}"
        )));
    }
    let h = 1.0 / (m - 1) as f64;
    let grid = |x0: f64| -> Vec<Point> {
        let mut pts = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    pts.push([x0 + i as f64 * h, j as f64 * h, k as f64 * h]);
                }
            }
        }
        pts
    };
    let n = m * m * m;
    Ok((
        PointCloud::new(3, grid(-1.0), Some(vec![0; n]))?,
        PointCloud::new(3, grid(gap), Some(vec![1; n]))?,
    ))
}

/// Two unit disks of `n` sunflower-arranged points each, centers at the
/// origin and at `(separation, 0)`. Labels 0 and 1.
pub fn generate_disk_pair(n: usize, separation: f64) -> Result<(PointCloud, PointCloud)> {
    if n == 0 {
        return Err(Error::InvalidGeometry(
            "disk needs at least one point".into(),
        ));
    }
    if !separation.is_finite() {
        return Err(Error::InvalidGeometry(
            "disk separation must be finite".into(),
        ));
    }
    let golden = PI * (3.0 - 5f64.sqrt());
    let disk = |cx: f64| -> Vec<Point> {
        (0..n)
            .map(|k| {
                let r = if n == 1 {
                    0.0
                } else {
                    (k as f64 / (n - 1) as f64).sqrt()
                };
                let t = k as f64 * golden;
                [cx + r * t.cos(), r * t.sin(), 0.0]
            })
            .collect()
    };
    Ok((
        PointCloud::new(2, disk(0.0), Some(vec![0; n]))?,
        PointCloud::new(2, disk(separation), Some(vec![1; n]))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist, partition};
    use proptest::prelude::*;

    #[test]
    fn torus_first_point() {
        let t = generate_torus(1, DEFAULT_TORUS_MAJOR, DEFAULT_TORUS_MINOR).unwrap();
        assert_eq!(t.points(), &[[11.0, 0.0, 0.0]]);
        assert!(matches!(
            generate_torus(4, 3.0, 3.0),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(generate_torus(0, 8.0, 3.0).is_err());
    }

    #[test]
    fn torus_sixteen_equal_clusters() {
        let t = generate_torus(2048, 8.0, 3.0).unwrap();
        let labels = partition(&t, 16).unwrap();
        for l in 0..16 {
            assert_eq!(labels.iter().filter(|&&x| x == l).count(), 128);
        }
    }

    proptest! {
        #[test]
        fn torus_surface_identity(n in 1usize..3000, big in 2.0..20.0f64, frac in 0.05..0.95f64) {
            let small = big * frac;
            let t = generate_torus(n, big, small).unwrap();
            for p in t.points() {
                let e = ((p[0].hypot(p[1]) - big).powi(2) + p[2] * p[2] - small * small).abs();
                prop_assert!(e <= 1e-12 * big * big);
            }
        }
    }

    #[test]
    fn cube_corners_m2() {
        let (x, y) = generate_facing_cubes(2, 1.0).unwrap();
        assert_eq!((x.len(), y.len()), (8, 8));
        let dmin = x
            .points()
            .iter()
            .flat_map(|p| y.points().iter().map(move |q| dist(p, q)))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(dmin, 1.0);
    }

    #[test]
    fn cube_separation_axis() {
        for m in [2, 5, 10] {
            let (x, y) = generate_facing_cubes(m, 0.7).unwrap();
            assert!(x.points().iter().all(|p| p[0] <= 0.0 && p[0] >= -1.0));
            assert!(y.points().iter().all(|p| p[0] >= 0.7));
            assert_eq!(x.labels().unwrap(), vec![0; m * m * m].as_slice());
            assert_eq!(y.labels().unwrap(), vec![1; m * m * m].as_slice());
        }
        assert!(generate_facing_cubes(1, 1.0).is_err());
        assert!(generate_facing_cubes(3, 0.0).is_err());
    }

    #[test]
    fn large_cube_size() {
        let (x, y) = generate_facing_cubes(20, 1.0).unwrap();
        assert_eq!(x.len() + y.len(), 16000);
    }

    #[test]
    fn disks() {
        let (a, b) = generate_disk_pair(1, 2.5).unwrap();
        assert_eq!(a.points(), &[[0.0, 0.0, 0.0]]);
        assert_eq!(b.points(), &[[2.5, 0.0, 0.0]]);
        let (a, b) = generate_disk_pair(DEFAULT_DISK_POINTS, DEFAULT_DISK_SEPARATION).unwrap();
        assert_eq!((a.len(), b.len(), a.dim()), (833, 833, 2));
        assert!(a.points().iter().all(|p| dist(p, &[0.0; 3]) <= 1.0 + 1e-12));
        assert!(b
            .points()
            .iter()
            .all(|p| dist(p, &[2.5, 0.0, 0.0]) <= 1.0 + 1e-12));
    }
}
