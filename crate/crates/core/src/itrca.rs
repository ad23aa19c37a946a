//! Alternating fit of the shared/private two-view latent model
//!
//! ```text
//! y₁ = W₁·x₁ + V₁·z + ε₁,   y₂ = W₂·x₂ + V₂·z + ε₂
//! ```
//!
//! with isotropic noise per view. Each sweep solves three residual problems:
//! the private loadings of each view given the current shared part, then the
//! shared loadings of the concatenated data given both private parts. Noise
//! levels are fixed up front as a fraction `α` of each view's average
//! variance, which is the only knob controlling the recovered ranks.

use crate::covariance::block_diagonal;
use crate::error::{RcaError, Result};
use crate::matcore::{check_finite, check_nonempty};
use crate::rca::{
    center_columns, gram_log_likelihood, log_marginal, rca_fit_with_threshold, sample_covariance,
    RcaFit, RANK_TOL,
};
use crate::{Matrix, Vector};

/// How many components each residual solve keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankRule {
    /// Generalized eigenvalues above `1 + 1e-10`.
    Strict,
    /// Generalized eigenvalues above `(1 + √(p/n))²` for a `p`-dimensional
    /// solve on `n` rows, the upper edge of the spectrum a pure-noise sample
    /// covariance would produce.
    SamplingEdge,
}

impl RankRule {
    pub fn threshold(self, dim: usize, n: usize) -> f64 {
        match self {
            RankRule::Strict => 1.0 + RANK_TOL,
            RankRule::SamplingEdge => {
                let r = 1.0 + (dim as f64 / n as f64).sqrt();
                r * r
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RankRule::Strict => "strict",
            RankRule::SamplingEdge => "sampling-edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItrcaConfig {
    /// Noise fraction, `σ_i² = (α/d_i)·tr(C_ii)`; must lie in `(0, 1)`.
    pub alpha: f64,
    /// Stopping tolerance on `|ΔL|`; `None` means `1e-6·n·(d₁ + d₂)`.
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub rank_rule: RankRule,
}

impl Default for ItrcaConfig {
    fn default() -> Self {
        ItrcaConfig {
            alpha: 0.3,
            tol: None,
            max_iter: 200,
            rank_rule: RankRule::SamplingEdge,
        }
    }
}

impl ItrcaConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        ItrcaConfig {
            alpha,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(RcaError::invalid(
                "alpha",
                format!("must lie in (0, 1), got {}", self.alpha),
            ));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(RcaError::invalid(
                    "tol",
                    format!("must be positive, got {tol}"),
                ));
            }
        }
        if self.max_iter == 0 {
            return Err(RcaError::invalid("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Joint log-likelihood summed over the training rows.
    pub log_likelihood: f64,
    pub q1: usize,
    pub q2: usize,
    pub qs: usize,
}

#[derive(Debug, Clone)]
pub struct SharedPrivateModel {
    pub w1: Matrix,
    pub w2: Matrix,
    pub v1: Matrix,
    pub v2: Matrix,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub mu1: Vector,
    pub mu2: Vector,
    pub alpha: f64,
    pub history: Vec<IterationRecord>,
    pub converged: bool,
}

impl SharedPrivateModel {
    pub fn d1(&self) -> usize {
        self.w1.nrows()
    }

    pub fn d2(&self) -> usize {
        self.w2.nrows()
    }

    /// `(q₁, q₂, q_s)`.
    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.w1.ncols(), self.w2.ncols(), self.v1.ncols())
    }

    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    pub fn final_log_likelihood(&self) -> Option<f64> {
        self.history.last().map(|r| r.log_likelihood)
    }

    /// `W₁·W₁ᵀ + σ₁²·I`.
    pub fn private_cov1(&self) -> Matrix {
        private_cov(&self.w1, self.sigma1_sq)
    }

    /// `W₂·W₂ᵀ + σ₂²·I`.
    pub fn private_cov2(&self) -> Matrix {
        private_cov(&self.w2, self.sigma2_sq)
    }

    /// `[V₁; V₂]`.
    pub fn shared(&self) -> Matrix {
        stack_rows(&self.v1, &self.v2)
    }

    /// Model covariance of the concatenated views.
    pub fn joint_covariance(&self) -> Matrix {
        let v = self.shared();
        block_diagonal(&[self.private_cov1(), self.private_cov2()]) + &v * v.transpose()
    }
}

fn private_cov(w: &Matrix, sigma_sq: f64) -> Matrix {
    let d = w.nrows();
    w * w.transpose() + Matrix::identity(d, d) * sigma_sq
}

fn stack_rows(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

/// One private-loading solve: the residual fit of `c` against
/// `V·Vᵀ + σ²·I`, keeping eigenvalues above `threshold`.
pub fn private_step(c: &Matrix, v: &Matrix, sigma_sq: f64, threshold: f64) -> Result<RcaFit> {
    rca_fit_with_threshold(c, &private_cov(v, sigma_sq), threshold)
}

fn check_views(y1: &Matrix, y2: &Matrix) -> Result<()> {
    check_nonempty(y1, "view 1")?;
    check_nonempty(y2, "view 2")?;
    check_finite(y1, "view 1")?;
    check_finite(y2, "view 2")?;
    if y1.nrows() != y2.nrows() {
        return Err(RcaError::dimension(
            "view row count",
            y1.nrows(),
            y2.nrows(),
        ));
    }
    Ok(())
}

fn wrap(iteration: usize, block: &'static str) -> impl FnOnce(RcaError) -> RcaError {
    move |e| RcaError::Iteration {
        iteration,
        block,
        source: Box::new(e),
    }
}

/// Fits the shared/private model to two aligned views (rows are samples).
pub fn iterative_rca(y1: &Matrix, y2: &Matrix, config: &ItrcaConfig) -> Result<SharedPrivateModel> {
    config.validate()?;
    check_views(y1, y2)?;
    let (n, d1, d2) = (y1.nrows(), y1.ncols(), y2.ncols());
    let (c1, mu1) = center_columns(y1);
    let (c2, mu2) = center_columns(y2);
    let c = sample_covariance(&stack_cols(&c1, &c2));
    let c11 = c.view((0, 0), (d1, d1)).into_owned();
    let c22 = c.view((d1, d1), (d2, d2)).into_owned();

    let sigma1_sq = config.alpha / d1 as f64 * c11.trace();
    let sigma2_sq = config.alpha / d2 as f64 * c22.trace();
    if sigma1_sq.is_nan() || sigma1_sq <= 0.0 || sigma2_sq.is_nan() || sigma2_sq <= 0.0 {
        let view = if sigma1_sq > 0.0 { 2 } else { 1 };
        return Err(RcaError::DegenerateView {
            view,
            eigenvalue: 0.0,
        });
    }

    let tol = config.tol.unwrap_or(1e-6 * (n * (d1 + d2)) as f64);
    let rule = config.rank_rule;
    let (t1, t2, ts) = (
        rule.threshold(d1, n),
        rule.threshold(d2, n),
        rule.threshold(d1 + d2, n),
    );

    let mut v1 = Matrix::zeros(d1, 0);
    let mut v2 = Matrix::zeros(d2, 0);
    let mut w1 = Matrix::zeros(d1, 0);
    let mut w2 = Matrix::zeros(d2, 0);
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut converged = false;

    for iteration in 1..=config.max_iter {
        w1 = private_step(&c11, &v1, sigma1_sq, t1)
            .map_err(wrap(iteration, "W1"))?
            .loadings;
        w2 = private_step(&c22, &v2, sigma2_sq, t2)
            .map_err(wrap(iteration, "W2"))?
            .loadings;

        let sigma = block_diagonal(&[private_cov(&w1, sigma1_sq), private_cov(&w2, sigma2_sq)]);
        let shared = rca_fit_with_threshold(&c, &sigma, ts).map_err(wrap(iteration, "V"))?;
        v1 = shared.loadings.rows(0, d1).into_owned();
        v2 = shared.loadings.rows(d1, d2).into_owned();

        let log_likelihood = n as f64
            * gram_log_likelihood(
                &c,
                &(&sigma + &shared.loadings * shared.loadings.transpose()),
            )
            .map_err(wrap(iteration, "likelihood"))?;
        let previous = history.last().map(|r| r.log_likelihood);
        history.push(IterationRecord {
            iteration,
            log_likelihood,
            q1: w1.ncols(),
            q2: w2.ncols(),
            qs: v1.ncols(),
        });
        if let Some(prev) = previous {
            if (log_likelihood - prev).abs() <= tol {
                converged = true;
                break;
            }
        }
    }

    Ok(SharedPrivateModel {
        w1,
        w2,
        v1,
        v2,
        sigma1_sq,
        sigma2_sq,
        mu1,
        mu2,
        alpha: config.alpha,
        history,
        converged,
    })
}

fn stack_cols(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Log density of the rows of `[Y₁ Y₂]` under the model, centred at the
/// model means, summed over rows.
pub fn joint_log_marginal(model: &SharedPrivateModel, y1: &Matrix, y2: &Matrix) -> Result<f64> {
    check_views(y1, y2)?;
    if y1.ncols() != model.d1() {
        return Err(RcaError::dimension(
            "view 1 columns",
            model.d1(),
            y1.ncols(),
        ));
    }
    if y2.ncols() != model.d2() {
        return Err(RcaError::dimension(
            "view 2 columns",
            model.d2(),
            y2.ncols(),
        ));
    }
    let mut y = stack_cols(y1, y2);
    let mu: Vec<f64> = model.mu1.iter().chain(model.mu2.iter()).copied().collect();
    for (j, mut col) in y.column_iter_mut().enumerate() {
        col.add_scalar_mut(-mu[j]);
    }
    let sigma = block_diagonal(&[model.private_cov1(), model.private_cov2()]);
    log_marginal(&y.transpose(), &model.shared(), &sigma)
}

/// Conditional-mean predictor of view 1 from view 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    /// `V₁·V₂ᵀ·(W₂·W₂ᵀ + σ₂²·I)⁻¹·(y₂ − μ₂) + μ₁`.
    Printed,
    /// `V₁·V₂ᵀ·(W₂·W₂ᵀ + V₂·V₂ᵀ + σ₂²·I)⁻¹·(y₂ − μ₂) + μ₁`, the Gaussian
    /// conditional mean under the model covariance.
    Exact,
}

impl Predictor {
    pub fn name(self) -> &'static str {
        match self {
            Predictor::Printed => "printed",
            Predictor::Exact => "exact",
        }
    }
}

fn gain(model: &SharedPrivateModel, predictor: Predictor) -> Result<Matrix> {
    let mut c22 = model.private_cov2();
    if predictor == Predictor::Exact {
        c22 += &model.v2 * model.v2.transpose();
    }
    let chol = c22.cholesky().ok_or(RcaError::NotPositiveDefinite {
        eigenvalue: f64::NAN,
        jitter: 0.0,
    })?;
    // V₁·V₂ᵀ·C₂₂⁻¹ = (C₂₂⁻¹·V₂·V₁ᵀ)ᵀ
    Ok(chol.solve(&(&model.v2 * model.v1.transpose())).transpose())
}

/// Predicts view 1 for each row of `y2` (`m × d₂`), returning `m × d₁`.
pub fn predict_view1_rows(
    model: &SharedPrivateModel,
    y2: &Matrix,
    predictor: Predictor,
) -> Result<Matrix> {
    check_finite(y2, "predict input")?;
    if y2.ncols() != model.d2() {
        return Err(RcaError::dimension(
            "predict input columns",
            model.d2(),
            y2.ncols(),
        ));
    }
    let g = gain(model, predictor)?;
    let mut centred = y2.clone();
    for (j, mut col) in centred.column_iter_mut().enumerate() {
        col.add_scalar_mut(-model.mu2[j]);
    }
    let mut out = centred * g.transpose();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col.add_scalar_mut(model.mu1[j]);
    }
    Ok(out)
}

/// Predicts view 1 from a single view-2 observation.
pub fn predict_view1(
    model: &SharedPrivateModel,
    y2: &Vector,
    predictor: Predictor,
) -> Result<Vector> {
    let row = Matrix::from_row_slice(1, y2.len(), y2.as_slice());
    let out = predict_view1_rows(model, &row, predictor)?;
    Ok(out.row(0).transpose())
}

/// Root mean squared entrywise difference.
pub fn rms_error(pred: &Matrix, truth: &Matrix) -> Result<f64> {
    if pred.shape() != truth.shape() {
        return Err(RcaError::dimension(
            "rms_error",
            format!("{}x{}", truth.nrows(), truth.ncols()),
            format!("{}x{}", pred.nrows(), pred.ncols()),
        ));
    }
    if pred.is_empty() {
        return Err(RcaError::Empty {
            context: "rms_error",
        });
    }
    Ok(((pred - truth).norm_squared() / pred.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_model(d1: usize, d2: usize) -> SharedPrivateModel {
        SharedPrivateModel {
            w1: Matrix::zeros(d1, 0),
            w2: Matrix::zeros(d2, 0),
            v1: Matrix::zeros(d1, 0),
            v2: Matrix::zeros(d2, 0),
            sigma1_sq: 1.0,
            sigma2_sq: 1.0,
            mu1: Vector::from_element(d1, 0.5),
            mu2: Vector::zeros(d2),
            alpha: 0.5,
            history: Vec::new(),
            converged: true,
        }
    }

    #[test]
    fn rms_examples() {
        let truth = Matrix::from_row_slice(1, 2, &[3.0, 4.0]);
        assert_eq!(rms_error(&truth, &truth).unwrap(), 0.0);
        assert!((rms_error(&truth.add_scalar(1.0), &truth).unwrap() - 1.0).abs() < 1e-15);
        let r = rms_error(&Matrix::zeros(1, 2), &truth).unwrap();
        assert!((r - 12.5f64.sqrt()).abs() < 1e-15);
        assert!(rms_error(&Matrix::zeros(2, 1), &truth).is_err());
    }

    #[test]
    fn no_shared_subspace_predicts_the_mean() {
        let m = empty_model(3, 2);
        let y2 = Vector::from_row_slice(&[4.0, -1.0]);
        for p in [Predictor::Printed, Predictor::Exact] {
            assert_eq!(predict_view1(&m, &y2, p).unwrap(), m.mu1);
        }
    }

    #[test]
    fn joint_log_marginal_zero_data_unit_covariance() {
        let mut m = empty_model(2, 3);
        m.mu1.fill(0.0);
        let n = 4;
        let l = joint_log_marginal(&m, &Matrix::zeros(n, 2), &Matrix::zeros(n, 3)).unwrap();
        let expected = -0.5 * (n * 5) as f64 * (2.0 * std::f64::consts::PI).ln();
        assert!((l - expected).abs() < 1e-12);
    }

    #[test]
    fn sampling_edge_threshold() {
        assert!((RankRule::SamplingEdge.threshold(25, 100) - 2.25).abs() < 1e-15);
        assert_eq!(RankRule::Strict.threshold(25, 100), 1.0 + RANK_TOL);
    }

    #[test]
    fn config_validation() {
        assert!(ItrcaConfig::with_alpha(0.0).validate().is_err());
        assert!(ItrcaConfig::with_alpha(1.0).validate().is_err());
        let mut c = ItrcaConfig::with_alpha(0.3);
        c.tol = Some(-1.0);
        assert!(c.validate().is_err());
        c.tol = None;
        c.max_iter = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn isotropic_data_at_high_alpha_is_pure_noise() {
        // orthogonal, equal-variance columns
        let y1 = Matrix::from_row_slice(4, 2, &[1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
        let y2 = Matrix::from_row_slice(4, 2, &[1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0]);
        let m = iterative_rca(&y1, &y2, &ItrcaConfig::with_alpha(0.95)).unwrap();
        assert_eq!(m.ranks(), (0, 0, 0));
        let p =
            predict_view1(&m, &Vector::from_row_slice(&[3.0, 2.0]), Predictor::Printed).unwrap();
        assert_eq!(p, m.mu1);
        assert!(m.converged);
    }
}
