//! Fibonacci points on a bounding sphere, or equal-angle points on a circle in 2D.

use std::f64::consts::PI;

use super::{InitSet, Provenance};
use crate::geometry::{BoundingSphere, Point};

/// `r0` points on the surface of `s` with equal weights: `4πr²/r0` on a
/// sphere, `2πr/r0` on a circle. In 3D point `i = 1..r0` has
/// `z = −1 + 2(i−1)/(r0−1)` and azimuth `i·(3−√5)π`; a single point sits at
/// the south pole.
pub fn sphere_points(s: &BoundingSphere, r0: usize) -> InitSet {
    let n = r0.max(1);
    let c = s.center;
    let r = s.radius;
    let at = |u: [f64; 3]| -> Point { [c[0] + r * u[0], c[1] + r * u[1], c[2] + r * u[2]] };
    let (points, w): (Vec<Point>, f64) = if s.dim == 2 {
        let pts = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let mut p = at([t.cos(), t.sin(), 0.0]);
                p[2] = 0.0;
                p
            })
            .collect();
        (pts, 2.0 * PI * r / n as f64)
    } else if n == 1 {
        (vec![at([0.0, 0.0, -1.0])], 4.0 * PI * r * r)
    } else {
        let dtheta = (3.0 - 5f64.sqrt()) * PI;
        let pts = (1..=n)
            .map(|i| {
                let z = (-1.0 + 2.0 * (i - 1) as f64 / (n - 1) as f64).clamp(-1.0, 1.0);
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let t = dtheta * i as f64;
                at([rho * t.cos(), rho * t.sin(), z])
            })
            .collect();
        (pts, 4.0 * PI * r * r / n as f64)
    };
    InitSet {
        weights: vec![w; points.len()],
        points,
        vertices: None,
        provenance: Provenance::Sphere,
        requested_r0: r0,
        truncated: false,
        grid: None,
    }
}
