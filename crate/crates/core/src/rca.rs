//! Maximum-likelihood residual components given a known covariance `Σ`.
//!
//! For a Gram/covariance matrix `G` and SPD `Σ`, the stationary points of
//! the Gaussian likelihood with covariance `X·Xᵀ + Σ` come from
//! `G·S = Σ·S·D`. Keeping the eigenvalues greater than one,
//!
//! ```text
//! X = Σ·S_q·(D_q − I)^{1/2}
//! ```
//!
//! with the rotation fixed to the identity. In dual form `G` is the `n × n`
//! inner-product matrix of the data and `X` the latent coordinates; in primal
//! form `G` is the `d × d` covariance and the result is the loading matrix
//! `W`. The solver itself does not care which, and does not rescale `G`: the
//! maximum-likelihood optimum for `d` independent columns corresponds to
//! `G = d⁻¹·Y·Yᵀ` (primal: `G = n⁻¹·Yᵀ·Y`).

use std::f64::consts::PI;

use nalgebra::Cholesky;

use crate::covariance::CovarianceSpec;
use crate::error::{RcaError, Result};
use crate::matcore::{
    check_finite, check_nonempty, check_symmetric, gen_eig_whitened, whiten, GenEig,
};
use crate::{Matrix, Vector};

/// Eigenvalues at or below `1 + RANK_TOL` are treated as exactly one.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RcaFit {
    /// Full generalized spectrum of `G` against `Σ`.
    pub eig: GenEig,
    /// Number of retained components.
    pub q: usize,
    /// `Σ·S_q·(D_q − I)^{1/2}`; has `q` columns (possibly zero).
    pub loadings: Matrix,
    /// Per-sample log-likelihood `−½ln|K| − ½tr(G·K⁻¹) − (n/2)ln 2π` at
    /// `K = loadings·loadingsᵀ + Σ`.
    pub log_likelihood: f64,
}

impl RcaFit {
    /// Generalized eigenvalues of the retained components.
    pub fn retained_values(&self) -> Vector {
        self.eig.values.rows(0, self.q).into_owned()
    }

    /// Retained generalized eigenvectors `S_q`.
    pub fn retained_vectors(&self) -> Matrix {
        self.eig.vectors.columns(0, self.q).into_owned()
    }
}

/// Number of leading (descending) values strictly above `threshold`.
pub fn retained_rank(values: &Vector, threshold: f64) -> usize {
    values.iter().take_while(|&&v| v > threshold).count()
}

/// `Σ·S_q·(D_q − I)^{1/2}` for the first `q` generalized eigenpairs.
pub fn residual_loadings(sigma: &Matrix, eig: &GenEig, q: usize) -> Matrix {
    let mut scaled = eig.vectors.columns(0, q).into_owned();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= (eig.values[j] - 1.0).max(0.0).sqrt();
    }
    sigma * scaled
}

/// Fits the residual components of `g` given the covariance described by `sigma`.
pub fn rca_fit(g: &Matrix, sigma: &CovarianceSpec) -> Result<RcaFit> {
    check_nonempty(g, "rca_fit")?;
    let sigma = sigma.materialize(g.nrows())?;
    rca_fit_with_threshold(g, &sigma, 1.0 + RANK_TOL)
}

/// As [`rca_fit`] with an explicit `Σ` and a custom retention threshold:
/// components with generalized eigenvalue strictly above `threshold` are kept.
pub fn rca_fit_with_threshold(g: &Matrix, sigma: &Matrix, threshold: f64) -> Result<RcaFit> {
    check_symmetric(g, "rca_fit")?;
    if g.nrows() != sigma.nrows() || !sigma.is_square() {
        return Err(RcaError::dimension(
            "rca_fit",
            format!("{0}x{0} covariance", g.nrows()),
            format!("{}x{}", sigma.nrows(), sigma.ncols()),
        ));
    }
    let whitening = whiten(sigma)?;
    let eig = gen_eig_whitened(g, &whitening)?;
    let q = retained_rank(&eig.values, threshold.max(1.0));
    let loadings = residual_loadings(sigma, &eig, q);
    let k = &loadings * loadings.transpose() + sigma;
    let log_likelihood = gram_log_likelihood(g, &k)?;
    Ok(RcaFit {
        eig,
        q,
        loadings,
        log_likelihood,
    })
}

fn cholesky(k: &Matrix) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(k.clone()).ok_or_else(|| {
        let smallest = nalgebra::SymmetricEigen::new(crate::matcore::symmetrize(k))
            .eigenvalues
            .min();
        RcaError::NotPositiveDefinite {
            eigenvalue: smallest,
            jitter: 0.0,
        }
    })
}

/// `−½ln|K| − ½tr(G·K⁻¹) − (n/2)ln 2π`: the average log density of one
/// column when `G` is the empirical second-moment matrix of the columns.
pub fn gram_log_likelihood(g: &Matrix, k: &Matrix) -> Result<f64> {
    let n = k.nrows();
    let chol = cholesky(k)?;
    let log_det = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|x| x.ln())
            .sum::<f64>();
    let trace = chol.solve(g).trace();
    Ok(-0.5 * log_det - 0.5 * trace - 0.5 * n as f64 * (2.0 * PI).ln())
}

/// Dual-form log marginal likelihood of `Y` (`n × d`) under
/// `N(0, X·Xᵀ + Σ)` independently for every column:
/// `−(d/2)ln|K| − ½tr(Y·Yᵀ·K⁻¹) − (nd/2)ln 2π`.
///
/// The primal form is the same call with `Yᵀ`, the `d × q` loadings and a
/// `d × d` `Σ`.
pub fn log_marginal(y: &Matrix, x: &Matrix, sigma: &Matrix) -> Result<f64> {
    check_nonempty(y, "log_marginal")?;
    check_finite(y, "log_marginal data")?;
    let (n, d) = y.shape();
    if x.nrows() != n {
        return Err(RcaError::dimension(
            "log_marginal latent rows",
            n,
            x.nrows(),
        ));
    }
    if sigma.shape() != (n, n) {
        return Err(RcaError::dimension(
            "log_marginal covariance",
            format!("{n}x{n}"),
            format!("{}x{}", sigma.nrows(), sigma.ncols()),
        ));
    }
    let k = x * x.transpose() + sigma;
    let chol = cholesky(&k)?;
    let log_det = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|v| v.ln())
            .sum::<f64>();
    let solved = chol.solve(y);
    let quad = y.component_mul(&solved).sum();
    Ok(-0.5 * d as f64 * log_det - 0.5 * quad - 0.5 * (n * d) as f64 * (2.0 * PI).ln())
}

/// Subtracts column means; returns the centred copy and the means.
pub fn center_columns(y: &Matrix) -> (Matrix, Vector) {
    let n = y.nrows() as f64;
    let means = Vector::from_iterator(y.ncols(), y.column_iter().map(|c| c.sum() / n));
    let mut centred = y.clone();
    for (j, mut col) in centred.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    (centred, means)
}

/// `n⁻¹·Yᵀ·Y` of already centred data.
pub fn sample_covariance(centred: &Matrix) -> Matrix {
    crate::matcore::symmetrize(&(centred.transpose() * centred)) / centred.nrows() as f64
}

/// Probabilistic PCA as RCA with `Σ = σ²·I` on the sample covariance.
#[derive(Debug, Clone)]
pub struct PpcaFit {
    pub rca: RcaFit,
    /// Column means removed before fitting.
    pub mean: Vector,
    pub sigma2: f64,
}

/// Primal PPCA: centres `y` (`n × d`), forms `C = n⁻¹·Yᵀ·Y` and solves
/// `C·S = σ²·S·D`. The loadings equal `U_q·diag(√(λ_q − σ²))` where `λ` are the
/// eigenvalues of `C` above `σ²`.
pub fn ppca_fit(y: &Matrix, sigma2: f64) -> Result<PpcaFit> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(RcaError::invalid(
            "sigma2",
            format!("must be positive, got {sigma2}"),
        ));
    }
    check_nonempty(y, "ppca_fit")?;
    check_finite(y, "ppca_fit")?;
    let (centred, mean) = center_columns(y);
    let c = sample_covariance(&centred);
    let rca = rca_fit(&c, &CovarianceSpec::ScaledIdentity(sigma2))?;
    Ok(PpcaFit { rca, mean, sigma2 })
}
