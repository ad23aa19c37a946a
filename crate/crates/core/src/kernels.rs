//! Squared-exponential temporal covariance.
//!
//! `k(t_i, t_j) = exp(-0.5 (t_i - t_j)² / ℓ²)` with unit signal variance, plus
//! a noise term on the diagonal. Duplicated time points are kept as is: two
//! observations at the same time are fully correlated apart from the noise,
//! which is how treatment and control series share one temporal axis.

use crate::error::{RcaError, Result};
use crate::Matrix;

pub const DEFAULT_LENGTHSCALE: f64 = 20.0;
pub const DEFAULT_NOISE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseMode {
    /// Fixed noise variance `σ_n²`.
    Absolute(f64),
    /// Noise variance equal to `p` times the data variance supplied at
    /// construction time.
    FractionOfDataVariance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub lengthscale: f64,
    pub noise: NoiseMode,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            lengthscale: DEFAULT_LENGTHSCALE,
            noise: NoiseMode::FractionOfDataVariance(DEFAULT_NOISE_FRACTION),
        }
    }
}

impl KernelSpec {
    pub fn new(lengthscale: f64, noise: NoiseMode) -> Result<Self> {
        let spec = KernelSpec { lengthscale, noise };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lengthscale > 0.0 && self.lengthscale.is_finite()) {
            return Err(RcaError::invalid(
                "lengthscale",
                format!("must be positive and finite, got {}", self.lengthscale),
            ));
        }
        match self.noise {
            NoiseMode::Absolute(v) if !(v >= 0.0 && v.is_finite()) => Err(RcaError::invalid(
                "noise_variance",
                format!("must be non-negative, got {v}"),
            )),
            NoiseMode::FractionOfDataVariance(p) if !(0.0..=1.0).contains(&p) => Err(
                RcaError::invalid("noise_fraction", format!("must lie in [0, 1], got {p}")),
            ),
            _ => Ok(()),
        }
    }

    /// Noise variance actually placed on the diagonal.
    pub fn effective_noise(&self, data_variance: Option<f64>) -> Result<f64> {
        match self.noise {
            NoiseMode::Absolute(v) => Ok(v),
            NoiseMode::FractionOfDataVariance(p) => match data_variance {
                Some(v) if v >= 0.0 && v.is_finite() => Ok(p * v),
                Some(v) => Err(RcaError::invalid(
                    "data_variance",
                    format!("must be non-negative, got {v}"),
                )),
                None => Err(RcaError::invalid(
                    "data_variance",
                    "required when the noise is a fraction of the data variance",
                )),
            },
        }
    }
}

/// Unit-amplitude squared-exponential kernel.
pub fn rbf(ti: f64, tj: f64, lengthscale: f64) -> f64 {
    let r = (ti - tj) / lengthscale;
    (-0.5 * r * r).exp()
}

/// Gram matrix of the squared-exponential kernel over `times`, with the
/// effective noise variance added to the diagonal.
pub fn rbf_gram(times: &[f64], spec: &KernelSpec, data_variance: Option<f64>) -> Result<Matrix> {
    spec.validate()?;
    if times.is_empty() {
        return Err(RcaError::Empty {
            context: "rbf_gram",
        });
    }
    if let Some(i) = times.iter().position(|t| !t.is_finite()) {
        return Err(RcaError::NonFinite {
            context: "rbf_gram times",
            row: i,
            col: 0,
        });
    }
    let noise = spec.effective_noise(data_variance)?;
    let n = times.len();
    let mut k = Matrix::zeros(n, n);
    for j in 0..n {
        k[(j, j)] = 1.0 + noise;
        for i in (j + 1)..n {
            let v = rbf(times[i], times[j], spec.lengthscale);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(k)
}

/// The time-input vector used for the two-condition design: 13 treatment
/// samples every 20 time units from 0 to 240, followed by the 7 control times.
pub fn paired_time_grid() -> (Vec<f64>, Vec<f64>) {
    let treatment = (0..=12).map(|i| 20.0 * i as f64).collect();
    let control = vec![0.0, 20.0, 40.0, 60.0, 120.0, 180.0, 240.0];
    (treatment, control)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicated_times_are_fully_correlated() {
        let spec = KernelSpec::new(20.0, NoiseMode::Absolute(0.0)).unwrap();
        let k = rbf_gram(&[0.0, 0.0], &spec, None).unwrap();
        assert_eq!(k, Matrix::from_element(2, 2, 1.0));
    }

    #[test]
    fn one_lengthscale_apart() {
        let spec = KernelSpec::new(20.0, NoiseMode::Absolute(1e-4)).unwrap();
        let k = rbf_gram(&[0.0, 20.0], &spec, None).unwrap();
        assert!((k[(0, 1)] - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert_eq!(k[(1, 0)], k[(0, 1)]);
        assert!((k[(0, 0)] - 1.0001).abs() < 1e-15);
    }

    #[test]
    fn augmented_grid_cross_blocks_match_within_blocks() {
        let (t1, t2) = paired_time_grid();
        let times: Vec<f64> = t1.iter().chain(t2.iter()).copied().collect();
        assert_eq!(times.len(), 20);
        let spec = KernelSpec::new(20.0, NoiseMode::Absolute(1e-4)).unwrap();
        let k = rbf_gram(&times, &spec, None).unwrap();
        assert_eq!(k, k.transpose());
        for i in 0..13 {
            for j in 13..20 {
                // control time t2 also appears in the treatment block at index i2
                let i2 = t1.iter().position(|&t| t == times[j]).unwrap();
                if i == i2 {
                    assert_eq!(k[(i, j)], 1.0);
                } else {
                    assert_eq!(k[(i, j)], k[(i, i2)]);
                }
            }
        }
    }

    #[test]
    fn fraction_mode_needs_data_variance() {
        let spec = KernelSpec::default();
        assert!(rbf_gram(&[0.0, 1.0], &spec, None).is_err());
        let k = rbf_gram(&[0.0, 1.0], &spec, Some(2.0)).unwrap();
        assert!((k[(0, 0)] - 1.02).abs() < 1e-15);
    }

    #[test]
    fn invalid_lengthscale() {
        assert!(KernelSpec::new(0.0, NoiseMode::Absolute(0.0)).is_err());
        assert!(KernelSpec::new(-1.0, NoiseMode::Absolute(0.0)).is_err());
        assert!(KernelSpec::new(1.0, NoiseMode::FractionOfDataVariance(1.5)).is_err());
    }
}
