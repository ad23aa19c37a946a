//! Symmetric and symmetric-definite generalized eigendecompositions.
//!
//! The generalized problem `A·S = Σ·S·D` is reduced to a standard symmetric
//! one by whitening with the eigendecomposition `Σ = U·Λ·Uᵀ`:
//! with `T = Λ^{-1/2}·Uᵀ`, the projected matrix `Â = T·A·Tᵀ` has eigenpairs
//! `(D, V̂)` and the generalized eigenvectors are recovered as `S = Tᵀ·V̂`.
//! This keeps `Â` and `V̂` observable, which the direct Cholesky route would not.

use nalgebra::SymmetricEigen;

use crate::error::{RcaError, Result};
use crate::{Matrix, Vector};

/// Relative symmetry tolerance: `max |a_ij - a_ji| <= SYMMETRY_TOL * ‖A‖_F`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// An SPD matrix whose smallest eigenvalue is at or below
/// `SPD_FLOOR * trace / dim` is jittered once.
pub const SPD_FLOOR: f64 = 1e-12;
/// Jitter added to the diagonal, relative to `trace / dim`.
pub const JITTER: f64 = 1e-10;

/// Eigendecomposition of a symmetric matrix, values sorted descending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vector,
    /// Orthonormal columns; column `i` pairs with `values[i]`.
    pub vectors: Matrix,
}

/// Solution of `A·S = Σ·S·D`, values sorted descending.
#[derive(Debug, Clone)]
pub struct GenEig {
    /// Diagonal of `D`.
    pub values: Vector,
    /// `S`, normalised so that `Sᵀ·Σ·S = I`.
    pub vectors: Matrix,
}

/// Whitening transform of an SPD matrix.
#[derive(Debug, Clone)]
pub struct Whitening {
    /// `T = Λ^{-1/2}·Uᵀ`, so that `T·Σ·Tᵀ = I`.
    pub transform: Matrix,
    /// Eigendecomposition of the (possibly jittered) input.
    pub eigen: SymEig,
    /// Diagonal jitter that was added, zero if none was needed.
    pub jitter: f64,
}

impl Whitening {
    /// `T·A·Tᵀ`, the matrix whose ordinary eigenproblem is equivalent to the
    /// generalized one against the whitened covariance.
    pub fn project(&self, a: &Matrix) -> Matrix {
        symmetrize(&(&self.transform * a * self.transform.transpose()))
    }

    pub fn dim(&self) -> usize {
        self.transform.nrows()
    }
}

pub fn check_nonempty(m: &Matrix, context: &'static str) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(RcaError::Empty { context });
    }
    Ok(())
}

pub fn check_finite(m: &Matrix, context: &'static str) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(RcaError::NonFinite {
                    context,
                    row: i,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

pub fn check_square(m: &Matrix, context: &'static str) -> Result<()> {
    check_nonempty(m, context)?;
    if !m.is_square() {
        return Err(RcaError::dimension(
            context,
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

pub fn check_symmetric(m: &Matrix, context: &'static str) -> Result<()> {
    check_square(m, context)?;
    check_finite(m, context)?;
    let n = m.nrows();
    let mut asymmetry = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    let tolerance = SYMMETRY_TOL * m.norm();
    if asymmetry > tolerance {
        return Err(RcaError::NotSymmetric {
            asymmetry,
            tolerance,
        });
    }
    Ok(())
}

/// `(A + Aᵀ) / 2`.
pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// Flips each column so that its entry of largest magnitude is positive.
/// Ties go to the lowest row index.
pub fn canonicalize_signs(vectors: &mut Matrix) {
    for mut col in vectors.column_iter_mut() {
        let mut pivot = 0.0f64;
        for &x in col.iter() {
            if x.abs() > pivot.abs() {
                pivot = x;
            }
        }
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Values are sorted non-increasing and each eigenvector carries the sign
/// convention of [`canonicalize_signs`]. Repeated eigenvalues get an
/// arbitrary orthonormal basis of their eigenspace.
pub fn sym_eig(a: &Matrix) -> Result<SymEig> {
    check_symmetric(a, "sym_eig")?;
    Ok(sym_eig_unchecked(&symmetrize(a)))
}

fn sym_eig_unchecked(a: &Matrix) -> SymEig {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    canonicalize_signs(&mut vectors);
    SymEig { values, vectors }
}

/// Whitening transform `T = Λ^{-1/2}·Uᵀ` of an SPD matrix.
///
/// If the smallest eigenvalue is at or below `1e-12·trace/dim`, a jitter of
/// `1e-10·trace/dim` is added to the diagonal once; if that still does not
/// clear the floor the matrix is rejected.
pub fn whiten(sigma: &Matrix) -> Result<Whitening> {
    check_symmetric(sigma, "whiten")?;
    let n = sigma.nrows();
    let mut eigen = sym_eig_unchecked(&symmetrize(sigma));
    let scale = sigma.trace() / n as f64;
    let smallest = eigen.values[n - 1];
    if scale.is_nan() || scale <= 0.0 {
        return Err(RcaError::NotPositiveDefinite {
            eigenvalue: smallest,
            jitter: 0.0,
        });
    }

    let floor = SPD_FLOOR * scale;
    let mut jitter = 0.0;
    if smallest <= floor {
        jitter = JITTER * scale;
        eigen.values.add_scalar_mut(jitter);
        let jittered = eigen.values[n - 1];
        if jittered <= floor {
            return Err(RcaError::NotPositiveDefinite {
                eigenvalue: smallest,
                jitter,
            });
        }
    }

    let mut transform = eigen.vectors.transpose();
    for (i, mut row) in transform.row_iter_mut().enumerate() {
        row /= eigen.values[i].sqrt();
    }
    Ok(Whitening {
        transform,
        eigen,
        jitter,
    })
}

/// Returns the matrix itself if it is SPD, or the jittered matrix if the
/// jitter policy was needed to make it so.
pub fn ensure_spd(sigma: &Matrix) -> Result<Matrix> {
    let w = whiten(sigma)?;
    let mut out = symmetrize(sigma);
    if w.jitter > 0.0 {
        for i in 0..out.nrows() {
            out[(i, i)] += w.jitter;
        }
    }
    Ok(out)
}

/// All eigenpairs of the symmetric-definite problem `A·S = Σ·S·D`.
pub fn gen_eig_spd(a: &Matrix, sigma: &Matrix) -> Result<GenEig> {
    let w = whiten(sigma)?;
    gen_eig_whitened(a, &w)
}

/// As [`gen_eig_spd`], reusing an existing whitening of `Σ`.
pub fn gen_eig_whitened(a: &Matrix, whitening: &Whitening) -> Result<GenEig> {
    check_symmetric(a, "gen_eig_spd")?;
    if a.nrows() != whitening.dim() {
        return Err(RcaError::dimension(
            "gen_eig_spd",
            format!("{0}x{0}", whitening.dim()),
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    let projected = whitening.project(a);
    let inner = sym_eig_unchecked(&projected);
    let mut vectors = whitening.transform.transpose() * inner.vectors;
    canonicalize_signs(&mut vectors);
    Ok(GenEig {
        values: inner.values,
        vectors,
    })
}
