//! Reference implementations used only by the integration tests. None of
//! them call into the library's solvers.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rca::{Matrix, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let a = gaussian(rng, n, n);
    (&a + a.transpose()) * 0.5
}

/// `BᵀB + shift·I` for a square Gaussian `B`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Matrix {
    let b = gaussian(rng, n, n);
    b.transpose() * &b + Matrix::identity(n, n) * shift
}

pub fn centred(y: &Matrix) -> Matrix {
    let mut c = y.clone();
    for mut col in c.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
    }
    c
}

/// Cyclic Jacobi rotations; eigenvalues descending with matching columns.
pub fn jacobi_eig(a: &Matrix) -> (Vector, Matrix) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off.sqrt() <= 1e-15 * m.norm().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap());
    let values = Vector::from_iterator(n, idx.iter().map(|&i| m[(i, i)]));
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (values, vectors)
}

/// Gaussian elimination with partial pivoting: `(det(a), a⁻¹)`.
pub fn lu_det_inverse(a: &Matrix) -> (f64, Matrix) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut inv = Matrix::identity(n, n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().partial_cmp(&m[(j, col)].abs()).unwrap())
            .unwrap();
        if pivot != col {
            m.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            det = -det;
        }
        let d = m[(col, col)];
        det *= d;
        for k in 0..n {
            m[(col, k)] /= d;
            inv[(col, k)] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[(r, col)];
                if f != 0.0 {
                    for k in 0..n {
                        m[(r, k)] -= f * m[(col, k)];
                        inv[(r, k)] -= f * inv[(col, k)];
                    }
                }
            }
        }
    }
    (det, inv)
}

/// Eigenvalues of `Σ⁻¹A` (descending) by power iteration with Σ-orthogonal
/// deflation; `A` symmetric PSD, `Σ` SPD.
pub fn gen_eigvals_power(a: &Matrix, sigma: &Matrix, seed: u64) -> Vector {
    let n = a.nrows();
    let (_, sinv) = lu_det_inverse(sigma);
    let mut m = &sinv * a;
    let mut r = rng(seed);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v = gaussian(&mut r, n, 1);
        let mut lambda = 0.0;
        for it in 0..20000 {
            let w = &m * &v;
            let norm = (w.transpose() * sigma * &w)[(0, 0)].sqrt();
            if norm == 0.0 {
                lambda = 0.0;
                break;
            }
            v = w / norm;
            let next = (v.transpose() * a * &v)[(0, 0)];
            if it > 50 && (next - lambda).abs() <= 1e-15 * next.abs().max(1.0) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        values.push(lambda);
        // remove the found pair: M ← M − λ·v·vᵀ·Σ (v is Σ-normalised)
        m -= lambda * &v * (v.transpose() * sigma);
    }
    let mut values = Vector::from_vec(values);
    values
        .as_mut_slice()
        .sort_by(|x, y| y.partial_cmp(x).unwrap());
    values
}

/// `−(d/2)ln|K| − ½tr(Y·Yᵀ·K⁻¹) − (nd/2)ln 2π` with an explicit inverse.
pub fn log_marginal_direct(y: &Matrix, x: &Matrix, sigma: &Matrix) -> f64 {
    let (n, d) = y.shape();
    let k = x * x.transpose() + sigma;
    let (det, inv) = lu_det_inverse(&k);
    let quad = (y * y.transpose() * inv).trace();
    -0.5 * d as f64 * det.ln()
        - 0.5 * quad
        - 0.5 * (n * d) as f64 * (2.0 * std::f64::consts::PI).ln()
}

/// `U_q·diag(√(λ_q − σ²))` from the sample covariance of centred data.
pub fn ppca_closed_form(y: &Matrix, sigma2: f64) -> Matrix {
    let c = centred(y);
    let cov = c.transpose() * &c / c.nrows() as f64;
    let (values, vectors) = jacobi_eig(&cov);
    let q = values
        .iter()
        .filter(|&&l| l > sigma2 * (1.0 + 1e-10))
        .count();
    Matrix::from_fn(cov.nrows(), q, |i, j| {
        vectors[(i, j)] * (values[j] - sigma2).sqrt()
    })
}

/// Compares loading matrices column by column allowing a sign flip.
pub fn max_signed_column_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "loading shapes differ");
    (0..a.ncols())
        .map(|j| {
            let plus = (a.column(j) - b.column(j)).amax();
            let minus = (a.column(j) + b.column(j)).amax();
            plus.min(minus)
        })
        .fold(0.0, f64::max)
}

/// Canonical correlations via Jacobi: sqrt of eig(C₁₁^{-1/2}C₁₂C₂₂⁻¹C₂₁C₁₁^{-1/2}).
pub fn cca_correlations(y1: &Matrix, y2: &Matrix) -> Vector {
    let (a, b) = (centred(y1), centred(y2));
    let n = a.nrows() as f64;
    let c11 = a.transpose() * &a / n;
    let c22 = b.transpose() * &b / n;
    let c12 = a.transpose() * &b / n;
    let (l, u) = jacobi_eig(&c11);
    let w = &u * Matrix::from_diagonal(&l.map(|x| 1.0 / x.sqrt())) * u.transpose();
    let (_, c22i) = lu_det_inverse(&c22);
    let m = &w * &c12 * c22i * c12.transpose() * &w;
    let m = (&m + m.transpose()) * 0.5;
    let (vals, _) = jacobi_eig(&m);
    let k = y1.ncols().min(y2.ncols());
    Vector::from_iterator(k, vals.iter().take(k).map(|v| v.max(0.0).sqrt()))
}

/// Orthonormal basis of the column span via modified Gram-Schmidt.
pub fn orthonormal_basis(a: &Matrix) -> Matrix {
    let mut q: Vec<Vector> = Vec::new();
    for j in 0..a.ncols() {
        let mut v: Vector = a.column(j).into_owned();
        for u in &q {
            let p = u.dot(&v);
            v -= u * p;
        }
        let norm = v.norm();
        if norm > 1e-12 {
            q.push(v / norm);
        }
    }
    Matrix::from_columns(&q)
}

/// Largest principal angle between two column spans, in degrees
/// (90 when the ranks differ or either is empty).
pub fn max_principal_angle_deg(a: &Matrix, b: &Matrix) -> f64 {
    let (qa, qb) = (orthonormal_basis(a), orthonormal_basis(b));
    if qa.ncols() == 0 || qa.ncols() != qb.ncols() {
        return 90.0;
    }
    let m = qa.transpose() * qb;
    let (s2, _) = jacobi_eig(&(m.transpose() * &m));
    let smallest = s2.min().clamp(0.0, 1.0).sqrt();
    smallest.acos().to_degrees()
}

/// Gaussian log density of `y` under `N(0, k)` via the LU oracle.
pub fn gaussian_log_density(y: &Vector, k: &Matrix) -> f64 {
    let (det, inv) = lu_det_inverse(k);
    let n = y.len() as f64;
    -0.5 * det.ln()
        - 0.5 * (y.transpose() * inv * y)[(0, 0)]
        - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
}

fn se_gram(t: &[f64], lengthscale: f64, noise: f64) -> Matrix {
    Matrix::from_fn(t.len(), t.len(), |i, j| {
        let r = (t[i] - t[j]) / lengthscale;
        (-0.5 * r * r).exp() + if i == j { noise } else { 0.0 }
    })
}

/// Per-gene log likelihood ratio of "two independent processes" against "one
/// shared process" for standardized stacked profiles.
pub fn likelihood_ratio_scores(
    y1: &Matrix,
    y2: &Matrix,
    t1: &[f64],
    t2: &[f64],
    lengthscale: f64,
    noise: f64,
) -> Vec<f64> {
    let (n1, n2) = (y1.nrows(), y2.nrows());
    let times: Vec<f64> = t1.iter().chain(t2).copied().collect();
    let shared = se_gram(&times, lengthscale, noise);
    let mut separate = Matrix::zeros(n1 + n2, n1 + n2);
    separate
        .view_mut((0, 0), (n1, n1))
        .copy_from(&se_gram(t1, lengthscale, noise));
    separate
        .view_mut((n1, n1), (n2, n2))
        .copy_from(&se_gram(t2, lengthscale, noise));
    (0..y1.ncols())
        .map(|j| {
            let mut y: Vector = Vector::from_iterator(
                n1 + n2,
                y1.column(j).iter().chain(y2.column(j).iter()).copied(),
            );
            let m = y.mean();
            y.add_scalar_mut(-m);
            let sd = (y.norm_squared() / y.len() as f64).sqrt();
            if sd > 0.0 {
                y /= sd;
            }
            gaussian_log_density(&y, &separate) - gaussian_log_density(&y, &shared)
        })
        .collect()
}

/// Mann-Whitney form of the AUC (ties count one half).
pub fn auc_pairs(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}
