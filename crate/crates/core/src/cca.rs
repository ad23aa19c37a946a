//! Canonical correlation analysis through the residual eigenproblem.
//!
//! With joint sample covariance `C` of `[Y₁ Y₂]` and `Σ = blkdiag(C₁₁, C₂₂)`,
//! the generalized spectrum of `C` against `Σ` is `1 ± ρ_i` (plus ones for the
//! unmatched dimensions), so the retained values minus one are the canonical
//! correlations.

use crate::covariance::block_diagonal;
use crate::error::{RcaError, Result};
use crate::matcore::{check_finite, check_nonempty, ensure_spd, gen_eig_spd, sym_eig, symmetrize};
use crate::rca::{center_columns, retained_rank, sample_covariance};
use crate::{Matrix, Vector};

/// Generalized eigenvalues in `(1, 1 + CCA_TOL]` are treated as uncorrelated.
pub const CCA_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CcaFit {
    /// Canonical directions for view 1 (`d₁ × q`), `s1ᵀ·C₁₁·s1 = I`.
    pub s1: Matrix,
    /// Canonical directions for view 2 (`d₂ × q`), `s2ᵀ·C₂₂·s2 = I`.
    pub s2: Matrix,
    /// Canonical correlations, descending.
    pub correlations: Vector,
    /// `C₁₁·s1·diag(ρ)^{1/2}`.
    pub v1: Matrix,
    /// `C₂₂·s2·diag(ρ)^{1/2}`.
    pub v2: Matrix,
    /// Full generalized spectrum of `C` against `blkdiag(C₁₁, C₂₂)`.
    pub spectrum: Vector,
    /// Set when a correlation exceeded one numerically and was clamped.
    pub clamped: bool,
    pub mean1: Vector,
    pub mean2: Vector,
}

impl CcaFit {
    pub fn q(&self) -> usize {
        self.correlations.len()
    }

    /// Largest deviation of the spectrum from symmetry about one.
    pub fn spectrum_asymmetry(&self) -> f64 {
        let n = self.spectrum.len();
        (0..n)
            .map(|i| (self.spectrum[i] + self.spectrum[n - 1 - i] - 2.0).abs())
            .fold(0.0, f64::max)
    }
}

fn joint_covariance(y1: &Matrix, y2: &Matrix) -> Result<(Matrix, Vector, Vector)> {
    check_nonempty(y1, "cca view 1")?;
    check_nonempty(y2, "cca view 2")?;
    check_finite(y1, "cca view 1")?;
    check_finite(y2, "cca view 2")?;
    if y1.nrows() != y2.nrows() {
        return Err(RcaError::dimension("cca row count", y1.nrows(), y2.nrows()));
    }
    let (c1, mean1) = center_columns(y1);
    let (c2, mean2) = center_columns(y2);
    let (n, d1, d2) = (c1.nrows(), c1.ncols(), c2.ncols());
    let mut joint = Matrix::zeros(n, d1 + d2);
    joint.columns_mut(0, d1).copy_from(&c1);
    joint.columns_mut(d1, d2).copy_from(&c2);
    Ok((sample_covariance(&joint), mean1, mean2))
}

fn view_block(c: &Matrix, start: usize, len: usize, view: usize) -> Result<Matrix> {
    let block = c.view((start, start), (len, len)).into_owned();
    ensure_spd(&block).map_err(|e| match e {
        RcaError::NotPositiveDefinite { eigenvalue, .. } => {
            RcaError::DegenerateView { view, eigenvalue }
        }
        other => other,
    })
}

/// CCA of two centred-or-not views with matching row counts. Columns are
/// centred here and the means recorded.
pub fn cca_fit(y1: &Matrix, y2: &Matrix) -> Result<CcaFit> {
    let (c, mean1, mean2) = joint_covariance(y1, y2)?;
    let (d1, d2) = (y1.ncols(), y2.ncols());
    let c11 = view_block(&c, 0, d1, 1)?;
    let c22 = view_block(&c, d1, d2, 2)?;

    // Put both views on a common scale first so the jitter floor of the joint
    // Σ (relative to its mean eigenvalue) cannot swamp the smaller view.
    let r1 = (c11.trace() / d1 as f64).sqrt();
    let r2 = (c22.trace() / d2 as f64).sqrt();
    let unscale = Vector::from_iterator(
        d1 + d2,
        (0..d1 + d2).map(|i| if i < d1 { 1.0 / r1 } else { 1.0 / r2 }),
    );
    let rescale = |m: &Matrix| {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * unscale[i] * unscale[j]
        })
    };
    let sigma = block_diagonal(&[c11.clone() / (r1 * r1), c22.clone() / (r2 * r2)]);
    let eig = gen_eig_spd(&symmetrize(&rescale(&c)), &sigma)?;

    let q = retained_rank(&eig.values, 1.0 + CCA_TOL);
    let mut clamped = false;
    let correlations = Vector::from_iterator(
        q,
        eig.values.iter().take(q).map(|&v| {
            if v - 1.0 > 1.0 {
                clamped = true;
                1.0
            } else {
                v - 1.0
            }
        }),
    );

    // joint normalisation splits evenly between the two blocks
    let s1 = eig.vectors.view((0, 0), (d1, q)) * (std::f64::consts::SQRT_2 / r1);
    let s2 = eig.vectors.view((d1, 0), (d2, q)) * (std::f64::consts::SQRT_2 / r2);
    let root = Matrix::from_diagonal(&correlations.map(f64::sqrt));
    let v1 = &c11 * &s1 * &root;
    let v2 = &c22 * &s2 * &root;

    Ok(CcaFit {
        s1,
        s2,
        correlations,
        v1,
        v2,
        spectrum: eig.values,
        clamped,
        mean1,
        mean2,
    })
}

fn inverse_sqrt(m: &Matrix) -> Result<Matrix> {
    let eig = sym_eig(m)?;
    let scale = eig.values.map(|v| 1.0 / v.sqrt());
    Ok(&eig.vectors * Matrix::from_diagonal(&scale) * eig.vectors.transpose())
}

/// Canonical correlations from the whitened cross-covariance:
/// square roots of the eigenvalues of `C₁₁^{-1/2}·C₁₂·C₂₂⁻¹·C₂₁·C₁₁^{-1/2}`,
/// the first `min(d₁, d₂)` of them.
pub fn cca_oracle(y1: &Matrix, y2: &Matrix) -> Result<Vector> {
    let (c, _, _) = joint_covariance(y1, y2)?;
    let (d1, d2) = (y1.ncols(), y2.ncols());
    let c11 = view_block(&c, 0, d1, 1)?;
    let c22 = view_block(&c, d1, d2, 2)?;
    let c12 = c.view((0, d1), (d1, d2)).into_owned();
    let c22_inv = c22
        .cholesky()
        .ok_or(RcaError::DegenerateView {
            view: 2,
            eigenvalue: 0.0,
        })?
        .inverse();
    let w = inverse_sqrt(&c11)?;
    let m = symmetrize(&(&w * &c12 * c22_inv * c12.transpose() * &w));
    let eig = sym_eig(&m)?;
    let k = d1.min(d2);
    Ok(Vector::from_iterator(
        k,
        eig.values.iter().take(k).map(|&v| v.max(0.0).sqrt()),
    ))
}
