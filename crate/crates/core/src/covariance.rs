//! Symbolic descriptions of the explained covariance `Σ`.

use crate::error::{RcaError, Result};
use crate::kernels::{rbf_gram, KernelSpec};
use crate::matcore::{check_finite, check_nonempty, check_square, ensure_spd};
use crate::Matrix;

#[derive(Debug, Clone)]
pub enum CovarianceSpec {
    /// `σ²·I`.
    ScaledIdentity(f64),
    /// A user-supplied symmetric positive definite matrix.
    Explicit(Matrix),
    /// `F·Fᵀ + σ²·I`, e.g. known covariates with a Gaussian prior on their weights.
    LowRankPlusNoise { factor: Matrix, noise: f64 },
    /// Square blocks placed along the diagonal.
    BlockDiagonal(Vec<Matrix>),
    /// Squared-exponential Gram matrix over the given inputs.
    Kernel {
        spec: KernelSpec,
        times: Vec<f64>,
        data_variance: Option<f64>,
    },
}

impl CovarianceSpec {
    /// Dimension implied by the spec, if it fixes one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            CovarianceSpec::ScaledIdentity(_) => None,
            CovarianceSpec::Explicit(m) => Some(m.nrows()),
            CovarianceSpec::LowRankPlusNoise { factor, .. } => Some(factor.nrows()),
            CovarianceSpec::BlockDiagonal(blocks) => Some(blocks.iter().map(|b| b.nrows()).sum()),
            CovarianceSpec::Kernel { times, .. } => Some(times.len()),
        }
    }

    /// Dense `dim × dim` matrix, symmetric and SPD after the jitter policy.
    pub fn materialize(&self, dim: usize) -> Result<Matrix> {
        if dim == 0 {
            return Err(RcaError::Empty {
                context: "materialize",
            });
        }
        if let Some(d) = self.dim() {
            if d != dim {
                return Err(RcaError::dimension("materialize", dim, d));
            }
        }
        let raw = match self {
            CovarianceSpec::ScaledIdentity(s2) => {
                if !(*s2 > 0.0 && s2.is_finite()) {
                    return Err(RcaError::invalid(
                        "sigma2",
                        format!("must be positive, got {s2}"),
                    ));
                }
                Matrix::identity(dim, dim) * *s2
            }
            CovarianceSpec::Explicit(m) => {
                check_square(m, "explicit covariance")?;
                m.clone()
            }
            CovarianceSpec::LowRankPlusNoise { factor, noise } => {
                check_finite(factor, "low-rank factor")?;
                if !(*noise >= 0.0 && noise.is_finite()) {
                    return Err(RcaError::invalid(
                        "noise",
                        format!("must be non-negative, got {noise}"),
                    ));
                }
                factor * factor.transpose() + Matrix::identity(dim, dim) * *noise
            }
            CovarianceSpec::BlockDiagonal(blocks) => {
                for b in blocks {
                    check_square(b, "covariance block")?;
                }
                block_diagonal(blocks)
            }
            CovarianceSpec::Kernel {
                spec,
                times,
                data_variance,
            } => rbf_gram(times, spec, *data_variance)?,
        };
        check_nonempty(&raw, "materialize")?;
        ensure_spd(&raw)
    }
}

/// Places square blocks along the diagonal of a zero matrix.
pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Matrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((at, at), (k, k)).copy_from(b);
        at += k;
    }
    out
}
