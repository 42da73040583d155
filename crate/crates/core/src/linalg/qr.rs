//! Householder QR: a greedy column-pivoted variant that stops once the
//! trailing block is small, and a plain thin QR.

use super::matrix::{axpy, dot, norm2, DenseMatrix};

/// Pivots between exact recomputations of all trailing column norms.
const NORM_REFRESH_INTERVAL: usize = 32;

/// When pivoted QR stops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Truncation {
    /// Stop at the first `k` with `‖A[k.., k..]‖_F ≤ eps · ‖A‖_F`.
    #[default]
    Frobenius,
    /// Stop at the first `k` with `|R[k, k]| < eps · |R[0, 0]|`.
    DiagonalRatio,
}

#[derive(Clone, Debug)]
pub struct CpqrResult {
    pub rank: usize,
    /// `perm[k]` is the original index of the column moved to position `k`.
    pub perm: Vec<usize>,
    /// `rows × rank`, orthonormal columns.
    pub q_factor: DenseMatrix,
    /// `rank × cols`, upper trapezoidal, columns in pivot order.
    pub r_factor: DenseMatrix,
    /// Frobenius norm of the discarded trailing block.
    pub residual_fro: f64,
}

impl CpqrResult {
    pub fn diag(&self) -> Vec<f64> {
        (0..self.rank).map(|k| self.r_factor[(k, k)]).collect()
    }

    /// Leading `k` pivot columns (original indices).
    pub fn pivots(&self, k: usize) -> &[usize] {
        &self.perm[..k]
    }
}

struct Reflector {
    v: Vec<f64>,
    tau: f64,
}

impl Reflector {
    /// Reflector mapping `x` onto `beta · e₁`; returns it with `beta`.
    fn new(x: &[f64]) -> (Self, f64) {
        let norm = norm2(x);
        if norm == 0.0 {
            return (
                Self {
                    v: vec![0.0; x.len()],
                    tau: 0.0,
                },
                0.0,
            );
        }
        let beta = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= beta;
        let vv = dot(&v, &v);
        let tau = if vv == 0.0 { 0.0 } else { 2.0 / vv };
        (Self { v, tau }, beta)
    }

    /// Applies `I − τ v vᵀ` to `y` (same length as `v`).
    #[inline]
    fn apply(&self, y: &mut [f64]) {
        if self.tau == 0.0 {
            return;
        }
        let s = self.tau * dot(&self.v, y);
        axpy(-s, &self.v, y);
    }
}

/// Column-pivoted Householder QR of `a`, truncated at relative tolerance
/// `eps` (see [`Truncation`]) or at `max_rank` pivots.
pub fn cpqr_truncated(a: &DenseMatrix, eps: f64, max_rank: usize) -> CpqrResult {
    cpqr_with_rule(a, eps, max_rank, Truncation::Frobenius)
}

pub fn cpqr_with_rule(a: &DenseMatrix, eps: f64, max_rank: usize, rule: Truncation) -> CpqrResult {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms: Vec<f64> = (0..n).map(|j| norm2(w.col(j))).collect();
    let mut exact = norms.clone();
    let total = norm2(&norms);
    let threshold = eps.max(0.0) * total;
    let kmax = m.min(n).min(max_rank);
    let mut reflectors: Vec<Reflector> = Vec::with_capacity(kmax);
    let mut r00 = 0.0_f64;

    let mut k = 0;
    while k < kmax {
        if k > 0 && k % NORM_REFRESH_INTERVAL == 0 {
            for j in k..n {
                norms[j] = norm2(&w.col(j)[k..]);
                exact[j] = norms[j];
            }
        }
        if rule == Truncation::Frobenius && norm2(&norms[k..]) <= threshold {
            // estimates say stop; confirm on exact norms before committing
            for j in k..n {
                norms[j] = norm2(&w.col(j)[k..]);
                exact[j] = norms[j];
            }
            if norm2(&norms[k..]) <= threshold {
                break;
            }
        }
        let p = argmax(&norms[k..]) + k;
        if norms[p] == 0.0 {
            break;
        }
        if rule == Truncation::DiagonalRatio && k > 0 && norms[p] < eps * r00 {
            break;
        }
        w.swap_cols(k, p);
        perm.swap(k, p);
        norms.swap(k, p);
        exact.swap(k, p);

        let (h, beta) = Reflector::new(&w.col(k)[k..]);
        {
            let ck = w.col_mut(k);
            ck[k] = beta;
            ck[k + 1..].iter_mut().for_each(|v| *v = 0.0);
        }
        if k == 0 {
            r00 = beta.abs();
        }
        for j in k + 1..n {
            let cj = &mut w.col_mut(j)[k..];
            h.apply(cj);
            // downdate with the LAPACK cancellation guard
            if norms[j] != 0.0 {
                let ratio = cj[0].abs() / norms[j];
                let t = (1.0 - ratio * ratio).max(0.0);
                let t2 = t * (norms[j] / exact[j]).powi(2);
                if t2 <= f64::EPSILON.sqrt() {
                    norms[j] = norm2(&cj[1..]);
                    exact[j] = norms[j];
                } else {
                    norms[j] *= t.sqrt();
                }
            }
        }
        reflectors.push(h);
        k += 1;
    }
    let rank = k;

    let residual_fro = norm2(
        &(rank..n)
            .map(|j| norm2(&w.col(j)[rank..]))
            .collect::<Vec<_>>(),
    );
    let r_factor = DenseMatrix::from_fn(rank, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });
    let q_factor = accumulate_q(m, rank, &reflectors);

    CpqrResult {
        rank,
        perm,
        q_factor,
        r_factor,
        residual_fro,
    }
}

/// Thin QR without pivoting: `a = Q R` with `Q` of size `m × min(m, n)`.
pub fn qr_thin(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let (m, n) = a.shape();
    let kmax = m.min(n);
    let mut w = a.clone();
    let mut reflectors = Vec::with_capacity(kmax);
    for k in 0..kmax {
        let (h, beta) = Reflector::new(&w.col(k)[k..]);
        {
            let ck = w.col_mut(k);
            ck[k] = beta;
            ck[k + 1..].iter_mut().for_each(|v| *v = 0.0);
        }
        for j in k + 1..n {
            h.apply(&mut w.col_mut(j)[k..]);
        }
        reflectors.push(h);
    }
    let r = DenseMatrix::from_fn(kmax, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });
    (accumulate_q(m, kmax, &reflectors), r)
}

fn accumulate_q(m: usize, k: usize, reflectors: &[Reflector]) -> DenseMatrix {
    let mut q = DenseMatrix::zeros(m, k);
    for j in 0..k {
        q[(j, j)] = 1.0;
    }
    for (i, h) in reflectors.iter().enumerate().rev() {
        for j in i..k {
            h.apply(&mut q.col_mut(j)[i..]);
        }
    }
    q
}

/// Index of the largest value; the lowest index wins ties.
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}
