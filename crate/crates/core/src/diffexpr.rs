//! Differential scoring of paired time series against a shared temporal
//! covariance, and ROC evaluation of the resulting ranking.
//!
//! Treatment and control profiles of each gene are stacked as if they were
//! noisy observations of one smooth function, with the squared-exponential
//! kernel over the concatenated times as `Σ`. Whatever that kernel cannot
//! explain lands in the residual directions; each gene is scored by the norm
//! of its standardized profile projected onto them.

use std::cmp::Ordering;

use crate::error::{RcaError, Result};
use crate::kernels::{rbf_gram, KernelSpec};
use crate::matcore::{check_finite, check_nonempty, gen_eig_spd, symmetrize};
use crate::rca::{retained_rank, RANK_TOL};
use crate::{Matrix, Vector};

/// Two expression matrices observed on possibly different time grids.
/// Rows are time points, columns are genes.
#[derive(Debug, Clone)]
pub struct TimeSeriesPair {
    pub y1: Matrix,
    pub y2: Matrix,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
}

impl TimeSeriesPair {
    pub fn new(y1: Matrix, y2: Matrix, t1: Vec<f64>, t2: Vec<f64>) -> Result<Self> {
        check_nonempty(&y1, "treatment series")?;
        check_nonempty(&y2, "control series")?;
        check_finite(&y1, "treatment series")?;
        check_finite(&y2, "control series")?;
        if y1.ncols() != y2.ncols() {
            return Err(RcaError::dimension("gene count", y1.ncols(), y2.ncols()));
        }
        if t1.len() != y1.nrows() {
            return Err(RcaError::dimension("treatment times", y1.nrows(), t1.len()));
        }
        if t2.len() != y2.nrows() {
            return Err(RcaError::dimension("control times", y2.nrows(), t2.len()));
        }
        Ok(TimeSeriesPair { y1, y2, t1, t2 })
    }

    pub fn genes(&self) -> usize {
        self.y1.ncols()
    }

    /// `[Y₁; Y₂]` and the matching concatenated time vector.
    pub fn stacked(&self) -> (Matrix, Vec<f64>) {
        let (n1, n2, d) = (self.y1.nrows(), self.y2.nrows(), self.genes());
        let mut y = Matrix::zeros(n1 + n2, d);
        y.rows_mut(0, n1).copy_from(&self.y1);
        y.rows_mut(n1, n2).copy_from(&self.y2);
        let times = self.t1.iter().chain(self.t2.iter()).copied().collect();
        (y, times)
    }
}

/// Per-gene scores and the ranking they induce.
#[derive(Debug, Clone)]
pub struct ScoredRanking {
    pub scores: Vector,
    /// Gene indices by descending score, ties by ascending index.
    pub order: Vec<usize>,
    pub q_used: usize,
    /// Full generalized spectrum of the scaled Gram matrix against the kernel.
    pub eigenvalues: Vector,
    /// No eigenvalue exceeded one (or every gene was constant); all scores are zero.
    pub no_residual: bool,
}

impl ScoredRanking {
    /// 1-based rank of every gene.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (r, &g) in self.order.iter().enumerate() {
            ranks[g] = r + 1;
        }
        ranks
    }
}

/// Centres each column and divides by its population standard deviation.
/// Columns with zero spread are zeroed and reported as `false` in the mask.
pub fn standardize_columns(y: &Matrix) -> (Matrix, Vec<bool>) {
    let n = y.nrows() as f64;
    let mut out = y.clone();
    let mut varying = Vec::with_capacity(y.ncols());
    for mut col in out.column_iter_mut() {
        let mean = col.sum() / n;
        col.add_scalar_mut(-mean);
        let sd = (col.norm_squared() / n).sqrt();
        let scale = mean.abs().max(1.0);
        if sd > 1e-12 * scale {
            col /= sd;
            varying.push(true);
        } else {
            col.fill(0.0);
            varying.push(false);
        }
    }
    (out, varying)
}

fn ranking(scores: &Vector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Residual differential-expression scores.
///
/// The stacked data are standardized per gene, the Gram matrix is averaged
/// over the non-constant genes (`G = Y·Yᵀ/d`), `Σ` is the kernel Gram matrix
/// over the concatenated times (noise taken relative to the mean per-gene
/// variance of the standardized data) and the retained generalized
/// eigenvectors `S_q` give scores `‖S_qᵀ·y_j‖`.
pub fn residual_scores(pair: &TimeSeriesPair, spec: &KernelSpec) -> Result<ScoredRanking> {
    spec.validate()?;
    let (raw, times) = pair.stacked();
    let n = raw.nrows();
    if n < 2 {
        return Err(RcaError::invalid(
            "time points",
            format!("need at least 2 stacked observations, got {n}"),
        ));
    }
    let d = raw.ncols();
    let (y, varying) = standardize_columns(&raw);
    let d_eff = varying.iter().filter(|&&v| v).count();
    if d_eff == 0 {
        return Ok(ScoredRanking {
            scores: Vector::zeros(d),
            order: (0..d).collect(),
            q_used: 0,
            eigenvalues: Vector::zeros(n),
            no_residual: true,
        });
    }

    let mean_variance = y.column_iter().map(|c| c.norm_squared()).sum::<f64>() / (n * d_eff) as f64;
    let k = rbf_gram(&times, spec, Some(mean_variance))?;
    let g = symmetrize(&(&y * y.transpose())) / d_eff as f64;
    let eig = gen_eig_spd(&g, &k)?;
    let q = retained_rank(&eig.values, 1.0 + RANK_TOL);

    let scores = if q == 0 {
        Vector::zeros(d)
    } else {
        let projected = eig.vectors.columns(0, q).transpose() * &y;
        Vector::from_iterator(d, projected.column_iter().map(|c| c.norm()))
    };
    let order = ranking(&scores);
    Ok(ScoredRanking {
        scores,
        order,
        q_used: q,
        eigenvalues: eig.values,
        no_residual: q == 0,
    })
}

/// ROC points `(threshold, fpr, tpr)` from `(+∞, 0, 0)` to `(min score, 1, 1)`
/// and the trapezoidal area under them.
#[derive(Debug, Clone)]
pub struct RocCurve {
    pub points: Vec<(f64, f64, f64)>,
    pub auc: f64,
}

/// Builds the ROC curve of `scores` against binary `labels`; higher scores
/// predict the positive class. Equal scores form one threshold step.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(RcaError::dimension(
            "roc labels",
            scores.len(),
            labels.len(),
        ));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(RcaError::NonFinite {
            context: "roc scores",
            row: i,
            col: 0,
        });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(RcaError::SingleClass);
    }

    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| match scores[b].partial_cmp(&scores[a]) {
        Some(o) => o,
        None => Ordering::Equal,
    });

    let (p, n) = (positives as f64, negatives as f64);
    let mut points = vec![(f64::INFINITY, 0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let threshold = scores[idx[i]];
        while i < idx.len() && scores[idx[i]] == threshold {
            if labels[idx[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let (_, fpr0, tpr0) = *points.last().unwrap();
        let (fpr, tpr) = (fp as f64 / n, tp as f64 / p);
        auc += (fpr - fpr0) * (tpr + tpr0) * 0.5;
        points.push((threshold, fpr, tpr));
    }
    Ok(RocCurve { points, auc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{paired_time_grid, NoiseMode};

    #[test]
    fn perfect_and_inverted_separation() {
        let labels = [true, true, false];
        assert_eq!(roc_curve(&[3.0, 2.0, 1.0], &labels).unwrap().auc, 1.0);
        assert_eq!(roc_curve(&[1.0, 2.0, 3.0], &labels).unwrap().auc, 0.0);
    }

    #[test]
    fn ties_give_the_diagonal() {
        let roc = roc_curve(&[0.5; 4], &[true, false, true, false]).unwrap();
        assert_eq!(roc.auc, 0.5);
        assert_eq!(roc.points.len(), 2);
        assert_eq!(roc.points[1], (0.5, 1.0, 1.0));
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            roc_curve(&[1.0, 2.0], &[true, true]),
            Err(RcaError::SingleClass)
        ));
    }

    #[test]
    fn roc_points_are_monotone() {
        let scores = [0.9, 0.1, 0.4, 0.4, 0.7, 0.2];
        let labels = [true, false, true, false, false, true];
        let roc = roc_curve(&scores, &labels).unwrap();
        for w in roc.points.windows(2) {
            assert!(w[1].1 >= w[0].1 && w[1].2 >= w[0].2);
        }
        assert_eq!(*roc.points.last().unwrap(), (0.1, 1.0, 1.0));
        // positive/negative pairs won: 3 + 1.5 + 1 out of 9
        assert!((roc.auc - 5.5 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn standardization_flags_constant_columns() {
        let y = Matrix::from_row_slice(3, 2, &[1.0, 5.0, 2.0, 5.0, 3.0, 5.0]);
        let (z, varying) = standardize_columns(&y);
        assert_eq!(varying, vec![true, false]);
        assert!(z.column(1).iter().all(|&v| v == 0.0));
        assert!((z.column(0).norm_squared() / 3.0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_profiles_score_zero() {
        let (t1, t2) = paired_time_grid();
        let pair = TimeSeriesPair::new(
            Matrix::from_element(13, 4, 2.0),
            Matrix::from_element(7, 4, 2.0),
            t1,
            t2,
        )
        .unwrap();
        let r = residual_scores(&pair, &KernelSpec::default()).unwrap();
        assert!(r.no_residual);
        assert_eq!(r.q_used, 0);
        assert!(r.scores.iter().all(|&s| s == 0.0));
        assert_eq!(r.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rank_breaks_ties_by_index() {
        let scores = Vector::from_row_slice(&[1.0, 3.0, 1.0, 3.0]);
        assert_eq!(ranking(&scores), vec![1, 3, 0, 2]);
    }

    #[test]
    fn shape_checks() {
        let (t1, t2) = paired_time_grid();
        assert!(TimeSeriesPair::new(
            Matrix::zeros(13, 3),
            Matrix::zeros(7, 2),
            t1.clone(),
            t2.clone()
        )
        .is_err());
        assert!(TimeSeriesPair::new(Matrix::zeros(12, 3), Matrix::zeros(7, 3), t1, t2).is_err());
    }

    #[test]
    fn scaling_one_gene_keeps_its_score() {
        let (t1, t2) = paired_time_grid();
        let f = |t: f64, j: usize| (t / 40.0 + j as f64).sin() + 0.01 * (t * j as f64).cos();
        let mut y1 = Matrix::from_fn(13, 5, |i, j| f(t1[i], j));
        let y2 = Matrix::from_fn(7, 5, |i, j| f(t2[i], j) * 0.5);
        y1[(3, 2)] += 1.0;
        let spec = KernelSpec::new(20.0, NoiseMode::FractionOfDataVariance(0.01)).unwrap();
        let base = residual_scores(
            &TimeSeriesPair::new(y1.clone(), y2.clone(), t1.clone(), t2.clone()).unwrap(),
            &spec,
        )
        .unwrap();
        let mut y1s = y1;
        let mut y2s = y2;
        y1s.column_mut(4).scale_mut(7.5);
        y2s.column_mut(4).scale_mut(7.5);
        let scaled =
            residual_scores(&TimeSeriesPair::new(y1s, y2s, t1, t2).unwrap(), &spec).unwrap();
        assert!((base.scores[4] - scaled.scores[4]).abs() < 1e-10);
    }
}
