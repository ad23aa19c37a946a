//! Residual component analysis (RCA).
//!
//! Given data whose covariance is partly explained by a known positive
//! definite matrix `Σ`, RCA finds the maximum-likelihood low-rank term
//! `X·Xᵀ` in the Gaussian model with covariance `X·Xᵀ + Σ`. The optimum is a
//! symmetric-definite generalized eigenvalue problem `G·S = Σ·S·D`; the
//! retained components are the eigenvalues larger than one.
//!
//! The crate is organised as:
//!
//! - [`matcore`]: symmetric and generalized eigensolvers, whitening.
//! - [`covariance`]: symbolic descriptions of `Σ`.
//! - [`rca`]: the core fit, log-marginal likelihood and the PPCA reduction.
//! - [`cca`]: canonical correlation analysis as RCA with block-diagonal `Σ`.
//! - [`kernels`]: squared-exponential temporal covariances.
//! - [`diffexpr`]: differential scoring of paired time series and ROC/AUC.
//! - [`itrca`]: alternating shared/private latent model and prediction.
//! - [`synth`]: seeded planted-instance generators.
//! - [`io`], [`cli`]: CSV ingestion/emission and the command-line front end.

pub mod cca;
pub mod cli;
pub mod covariance;
pub mod diffexpr;
pub mod error;
pub mod io;
pub mod itrca;
pub mod kernels;
pub mod matcore;
pub mod rca;
pub mod synth;

/// Dense real matrix used for data, covariances and eigenvector blocks.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense real column vector.
pub type Vector = nalgebra::DVector<f64>;

pub use cca::{cca_fit, cca_oracle, CcaFit};
pub use covariance::CovarianceSpec;
pub use diffexpr::{residual_scores, roc_curve, RocCurve, ScoredRanking, TimeSeriesPair};
pub use error::{RcaError, Result};
pub use itrca::{
    iterative_rca, joint_log_marginal, predict_view1, rms_error, ItrcaConfig, Predictor, RankRule,
    SharedPrivateModel,
};
pub use kernels::{rbf_gram, KernelSpec, NoiseMode};
pub use matcore::{gen_eig_spd, sym_eig, whiten, GenEig, SymEig, Whitening};
pub use rca::{log_marginal, ppca_fit, rca_fit, PpcaFit, RcaFit};
