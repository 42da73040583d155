//! Radial kernels and dense block assembly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{dist, Point};
use crate::linalg::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `1/r`
    InverseR,
    /// `1/r²`
    InverseR2,
    /// `ln r`
    LogR,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [Self::InverseR, Self::InverseR2, Self::LogR];

    pub fn name(self) -> &'static str {
        match self {
            Self::InverseR => "inv_r",
            Self::InverseR2 => "inv_r2",
            Self::LogR => "log_r",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kernel `{s}` (expected inv_r, inv_r2 or log_r)"))
    }
}

/// A kernel evaluated at `r = max(‖x − y‖, δ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub regularization: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind) -> Self {
        Self {
            kind,
            regularization: 0.0,
        }
    }

    pub fn with_regularization(kind: KernelKind, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "kernel regularization must be finite and nonnegative, got {delta}"
            )));
        }
        Ok(Self {
            kind,
            regularization: delta,
        })
    }

    /// Kernel value at distance `r`, before regularization. `None` at `r = 0`.
    #[inline]
    fn of_distance(&self, r: f64) -> Option<f64> {
        let r = r.max(self.regularization);
        if r == 0.0 {
            return None;
        }
        Some(match self.kind {
            KernelKind::InverseR => 1.0 / r,
            KernelKind::InverseR2 => 1.0 / (r * r),
            KernelKind::LogR => r.ln(),
        })
    }

    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        self.of_distance(dist(x, y))
            .ok_or(Error::SingularEvaluation { row: 0, col: 0 })
    }

    /// `|xs| × |ys|` block with entry `(i, j) = k(xs[i], ys[j])`.
    pub fn assemble(&self, xs: &[Point], ys: &[Point]) -> Result<DenseMatrix> {
        let mut data = Vec::with_capacity(xs.len() * ys.len());
        for (j, y) in ys.iter().enumerate() {
            for (i, x) in xs.iter().enumerate() {
                data.push(
                    self.of_distance(dist(x, y))
                        .ok_or(Error::SingularEvaluation { row: i, col: j })?,
                );
            }
        }
        DenseMatrix::from_col_major(xs.len(), ys.len(), data)
    }
}
