//! LU with partial pivoting and the triangular solves built on it.

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// `P·A = L·U` with `L` unit lower triangular and `|L[i, j]| ≤ 1`.
#[derive(Clone, Debug)]
pub struct LuResult {
    /// Row `i` of `P·A` is row `perm[i]` of `A`.
    pub perm: Vec<usize>,
    pub l_factor: DenseMatrix,
    pub u_factor: DenseMatrix,
}

pub fn lu_partial(a: &DenseMatrix) -> Result<LuResult> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "lu needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .fold((k, -1.0_f64), |(bi, bv), i| {
                let v = w[(i, k)].abs();
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
            .0;
        if w[(p, k)] == 0.0 {
            return Err(Error::SingularPivot { step: k });
        }
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let t = w[(p, j)];
                w[(p, j)] = w[(k, j)];
                w[(k, j)] = t;
            }
        }
        let pivot = w[(k, k)];
        for i in k + 1..n {
            w[(i, k)] /= pivot;
        }
        for j in k + 1..n {
            let ukj = w[(k, j)];
            if ukj == 0.0 {
                continue;
            }
            // column k below the diagonal is contiguous in column-major storage
            let (ck, cj) = w.col_pair_mut(k, j);
            for i in k + 1..n {
                cj[i] -= ck[i] * ukj;
            }
        }
    }
    let l_factor = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => w[(i, j)],
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => 0.0,
    });
    let u_factor = DenseMatrix::from_fn(n, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });
    Ok(LuResult {
        perm,
        l_factor,
        u_factor,
    })
}

impl LuResult {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `L⁻¹ · P · b`.
    pub fn solve_lower(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        self.check_rows(b)?;
        let mut x = b.select_rows(&self.perm);
        for j in 0..x.cols() {
            let col = x.col_mut(j);
            for k in 0..n {
                let v = col[k];
                if v != 0.0 {
                    let lk = self.l_factor.col(k);
                    for i in k + 1..n {
                        col[i] -= lk[i] * v;
                    }
                }
            }
        }
        Ok(x)
    }

    /// `U⁻¹ · b`.
    pub fn solve_upper(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        self.check_rows(b)?;
        self.check_diagonal()?;
        let mut x = b.clone();
        for j in 0..x.cols() {
            let col = x.col_mut(j);
            for k in (0..n).rev() {
                let uk = self.u_factor.col(k);
                col[k] /= uk[k];
                let v = col[k];
                if v != 0.0 {
                    for i in 0..k {
                        col[i] -= uk[i] * v;
                    }
                }
            }
        }
        Ok(x)
    }

    /// `b · U⁻¹`, i.e. the solution `Z` of `Z · U = b`.
    pub fn right_solve_upper(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if b.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "right solve needs {n} columns, got {}",
                b.cols()
            )));
        }
        self.check_diagonal()?;
        // column j of Z: (b_j − Σ_{k<j} Z_k U[k, j]) / U[j, j]
        let mut z = b.clone();
        for j in 0..n {
            for k in 0..j {
                let ukj = self.u_factor[(k, j)];
                if ukj != 0.0 {
                    let (zk, zj) = z.col_pair_mut(k, j);
                    for (a, b) in zj.iter_mut().zip(zk.iter()) {
                        *a -= b * ukj;
                    }
                }
            }
            let d = self.u_factor[(j, j)];
            z.col_mut(j).iter_mut().for_each(|v| *v /= d);
        }
        Ok(z)
    }

    /// `A⁻¹ · b`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.solve_upper(&self.solve_lower(b)?)
    }

    fn check_rows(&self, b: &DenseMatrix) -> Result<()> {
        if b.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "solve needs {} rows, got {}",
                self.dim(),
                b.rows()
            )));
        }
        Ok(())
    }

    fn check_diagonal(&self) -> Result<()> {
        match (0..self.dim()).find(|&k| self.u_factor[(k, k)] == 0.0) {
            Some(step) => Err(Error::SingularPivot { step }),
            None => Ok(()),
        }
    }
}
