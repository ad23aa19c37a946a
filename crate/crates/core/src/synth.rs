//! Seeded planted instances for the two case-study pipelines.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::diffexpr::TimeSeriesPair;
use crate::error::{RcaError, Result};
use crate::kernels::{paired_time_grid, rbf, rbf_gram, KernelSpec, NoiseMode, DEFAULT_LENGTHSCALE};
use crate::{Matrix, Vector};

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    // column-major fill keeps the draw order independent of nalgebra internals
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = rng.sample(StandardNormal);
        }
    }
    m
}

#[derive(Debug, Clone)]
pub struct DiffexprParams {
    pub genes: usize,
    pub planted: usize,
    /// Bump amplitude in units of the per-gene null standard deviation
    /// `√(1 + noise_sd²)`.
    pub effect: f64,
    /// Observation noise standard deviation; the shared profile has unit variance.
    pub noise_sd: f64,
}

impl Default for DiffexprParams {
    fn default() -> Self {
        DiffexprParams {
            genes: 200,
            planted: 10,
            effect: 3.0,
            noise_sd: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedDiffexpr {
    pub pair: TimeSeriesPair,
    /// `true` for genes carrying a treatment-only bump.
    pub labels: Vec<bool>,
}

/// Treatment (13 points) and control (7 points) series on the standard grids.
///
/// Every gene follows one draw of a unit-amplitude squared-exponential process
/// (lengthscale 20) observed with independent noise in both conditions. The
/// planted genes additionally get a Gaussian bump of width 20, random centre in
/// `[40, 200]` and random sign, on the treatment rows only.
pub fn planted_diffexpr(seed: u64, params: &DiffexprParams) -> Result<PlantedDiffexpr> {
    if params.genes == 0 || params.planted > params.genes {
        return Err(RcaError::invalid(
            "planted",
            format!(
                "need 0 < genes and planted <= genes, got {} of {}",
                params.planted, params.genes
            ),
        ));
    }
    if !(params.noise_sd >= 0.0 && params.effect.is_finite()) {
        return Err(RcaError::invalid("noise_sd", "must be non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t1, t2) = paired_time_grid();
    let mut grid: Vec<f64> = t1.iter().chain(t2.iter()).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let spec = KernelSpec::new(DEFAULT_LENGTHSCALE, NoiseMode::Absolute(1e-10))?;
    let chol = rbf_gram(&grid, &spec, None)?
        .cholesky()
        .ok_or(RcaError::NotPositiveDefinite {
            eigenvalue: 0.0,
            jitter: 1e-10,
        })?;
    let d = params.genes;
    let profiles = chol.l() * gaussian(&mut rng, grid.len(), d);
    let at = |t: f64| grid.iter().position(|&g| g == t).unwrap();

    let noise1 = gaussian(&mut rng, t1.len(), d) * params.noise_sd;
    let noise2 = gaussian(&mut rng, t2.len(), d) * params.noise_sd;
    let mut y1 = Matrix::from_fn(t1.len(), d, |i, j| profiles[(at(t1[i]), j)]) + noise1;
    let y2 = Matrix::from_fn(t2.len(), d, |i, j| profiles[(at(t2[i]), j)]) + noise2;

    let amplitude = params.effect * (1.0 + params.noise_sd * params.noise_sd).sqrt();
    let mut labels = vec![false; d];
    let mut planted: Vec<usize> = sample(&mut rng, d, params.planted).into_vec();
    planted.sort_unstable();
    for &j in &planted {
        labels[j] = true;
        let centre: f64 = rng.random_range(40.0..200.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        for (i, &t) in t1.iter().enumerate() {
            y1[(i, j)] += sign * amplitude * rbf(t, centre, DEFAULT_LENGTHSCALE);
        }
    }

    Ok(PlantedDiffexpr {
        pair: TimeSeriesPair::new(y1, y2, t1, t2)?,
        labels,
    })
}

#[derive(Debug, Clone)]
pub struct SharedPrivateParams {
    pub n: usize,
    pub d1: usize,
    pub d2: usize,
    pub qs: usize,
    pub q1: usize,
    pub q2: usize,
    /// Observation noise variance in both views.
    pub noise: f64,
    /// Make the sampled latents exactly centred and orthogonal with unit
    /// sample variance, so the planted subspaces are the ones the sample supports.
    pub whiten_latents: bool,
}

impl Default for SharedPrivateParams {
    fn default() -> Self {
        SharedPrivateParams {
            n: 500,
            d1: 15,
            d2: 12,
            qs: 2,
            q1: 1,
            q2: 1,
            noise: 0.1,
            whiten_latents: true,
        }
    }
}

/// Ground-truth parameters of a planted shared/private model (zero means).
#[derive(Debug, Clone)]
pub struct SharedPrivateTruth {
    pub w1: Matrix,
    pub w2: Matrix,
    pub v1: Matrix,
    pub v2: Matrix,
    pub noise: f64,
}

impl SharedPrivateTruth {
    /// `m` fresh iid rows from the model.
    pub fn sample(&self, rng: &mut ChaCha8Rng, m: usize) -> (Matrix, Matrix) {
        let latents = gaussian(rng, m, self.v1.ncols() + self.w1.ncols() + self.w2.ncols());
        self.emit(rng, &latents)
    }

    fn emit(&self, rng: &mut ChaCha8Rng, latents: &Matrix) -> (Matrix, Matrix) {
        let (qs, q1, q2) = (self.v1.ncols(), self.w1.ncols(), self.w2.ncols());
        let m = latents.nrows();
        let z = latents.columns(0, qs);
        let x1 = latents.columns(qs, q1);
        let x2 = latents.columns(qs + q1, q2);
        let sd = self.noise.sqrt();
        let e1 = gaussian(rng, m, self.w1.nrows()) * sd;
        let e2 = gaussian(rng, m, self.w2.nrows()) * sd;
        let y1 = x1 * self.w1.transpose() + z * self.v1.transpose() + e1;
        let y2 = x2 * self.w2.transpose() + z * self.v2.transpose() + e2;
        (y1, y2)
    }

    /// Bayes-optimal prediction `E[y₁ | y₂]` for each row of `y2`.
    pub fn conditional_mean(&self, y2: &Matrix) -> Matrix {
        let d2 = self.w2.nrows();
        let c22 = &self.w2 * self.w2.transpose()
            + &self.v2 * self.v2.transpose()
            + Matrix::identity(d2, d2) * self.noise;
        let gain = c22
            .cholesky()
            .expect("noise keeps the view-2 covariance positive definite")
            .solve(&(&self.v2 * self.v1.transpose()));
        y2 * gain
    }
}

#[derive(Debug, Clone)]
pub struct PlantedSharedPrivate {
    pub y1: Matrix,
    pub y2: Matrix,
    pub truth: SharedPrivateTruth,
}

/// Training data from the shared/private model with standard-normal loadings.
/// The returned truth can draw further test rows.
pub fn planted_shared_private(
    seed: u64,
    params: &SharedPrivateParams,
) -> Result<PlantedSharedPrivate> {
    let p = params;
    let q = p.qs + p.q1 + p.q2;
    if p.n == 0 || p.d1 == 0 || p.d2 == 0 {
        return Err(RcaError::invalid("dims", "n, d1 and d2 must be positive"));
    }
    if p.whiten_latents && q >= p.n {
        return Err(RcaError::invalid(
            "n",
            "need more rows than latent dimensions",
        ));
    }
    if !(p.noise > 0.0 && p.noise.is_finite()) {
        return Err(RcaError::invalid(
            "noise",
            format!("must be positive, got {}", p.noise),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = SharedPrivateTruth {
        v1: gaussian(&mut rng, p.d1, p.qs),
        v2: gaussian(&mut rng, p.d2, p.qs),
        w1: gaussian(&mut rng, p.d1, p.q1),
        w2: gaussian(&mut rng, p.d2, p.q2),
        noise: p.noise,
    };
    let mut latents = gaussian(&mut rng, p.n, q);
    if p.whiten_latents && q > 0 {
        for mut col in latents.column_iter_mut() {
            let mean = col.mean();
            col.add_scalar_mut(-mean);
        }
        latents = latents.qr().q() * (p.n as f64).sqrt();
    }
    let (y1, y2) = truth.emit(&mut rng, &latents);
    Ok(PlantedSharedPrivate { y1, y2, truth })
}

/// Column means of a matrix.
pub fn column_means(m: &Matrix) -> Vector {
    Vector::from_iterator(m.ncols(), m.column_iter().map(|c| c.mean()))
}
