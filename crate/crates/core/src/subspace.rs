//! Karhunen-Loève subspaces of design matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::featureset::DesignMatrix;
use crate::numeric::{median, pairwise_sum, sq_dist};
use crate::shapes::{ClosedProfile2D, DefectCode, Design, ValidityVerdict};
use crate::{Error, Result};

/// Eigenvalues floor used inside log-determinants.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleBasis {
    pub mean: Vec<f64>,
    /// Nonincreasing, nonnegative.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub retained_dims: usize,
    pub variance_threshold: f64,
}

impl KleBasis {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn total_variance(&self) -> f64 {
        pairwise_sum(&self.eigenvalues)
    }

    pub fn retained_fraction(&self, d: usize) -> f64 {
        let total = self.total_variance();
        pairwise_sum(&self.eigenvalues[..d.min(self.eigenvalues.len())]) / total
    }
}

fn sym_eigen(m: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let tol = -1e-10 * top.max(1.0);
    if let Some(&bad) = vals.iter().find(|&&v| v < tol) {
        return Err(Error::NegativeEigenvalue { value: bad });
    }
    Ok((vals.into_iter().map(|v| v.max(0.0)).collect(), vecs))
}

/// Sign convention: the largest-magnitude component of each vector is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Smallest `d` whose leading eigenvalues hold at least `threshold` of the
/// total variance.
pub fn retained_dims_for(eigenvalues: &[f64], threshold: f64) -> usize {
    let total = pairwise_sum(eigenvalues);
    let mut acc = 0.0;
    for (i, v) in eigenvalues.iter().enumerate() {
        acc += v;
        if acc / total >= threshold - 1e-12 {
            return i + 1;
        }
    }
    eigenvalues.len()
}

/// Eigendecomposition of the sample covariance (`1/(N-1)`) of the rows.
/// With more columns than rows the Gram matrix is decomposed instead and
/// only its non-null modes are kept.
pub fn fit_kle_rows(rows: &[Vec<f64>], threshold: f64) -> Result<KleBasis> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("KLE needs at least 2 rows, got {n}")));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!("threshold must be in (0, 1], got {threshold}")));
    }
    let d = rows[0].len();
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: r.len() });
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NanInput);
    }
    if rows.iter().all(|r| r == &rows[0]) {
        return Err(Error::DegenerateData);
    }
    let mean: Vec<f64> = (0..d)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let x = DMatrix::from_fn(n, d, |i, j| rows[i][j] - mean[j]);
    let scale = 1.0 / (n - 1) as f64;
    let (eigenvalues, eigenvectors) = if d <= n {
        let (vals, vecs) = sym_eigen(x.transpose() * &x * scale)?;
        let cols = (0..d).map(|c| vecs.column(c).iter().copied().collect()).collect();
        (vals, cols)
    } else {
        let (vals, u) = sym_eigen(&x * x.transpose() * scale)?;
        let top = vals[0];
        let mut kept_vals = Vec::new();
        let mut cols = Vec::new();
        for (i, &lam) in vals.iter().enumerate() {
            if lam <= 1e-12 * top {
                break;
            }
            let v = x.transpose() * u.column(i) / ((n - 1) as f64 * lam).sqrt();
            kept_vals.push(lam);
            cols.push(v.iter().copied().collect::<Vec<f64>>());
        }
        (kept_vals, cols)
    };
    let mut eigenvectors: Vec<Vec<f64>> = eigenvectors;
    eigenvectors.iter_mut().for_each(|v| fix_sign(v));
    if pairwise_sum(&eigenvalues) <= 0.0 {
        return Err(Error::DegenerateData);
    }
    let retained_dims = retained_dims_for(&eigenvalues, threshold);
    Ok(KleBasis {
        mean,
        eigenvalues,
        eigenvectors,
        retained_dims,
        variance_threshold: threshold,
    })
}

pub fn fit_kle(data: &DesignMatrix, threshold: f64) -> Result<KleBasis> {
    fit_kle_rows(&data.rows, threshold)
}

/// Coefficients of `row - mean` on the retained eigenvectors.
pub fn project(basis: &KleBasis, row: &[f64]) -> Result<Vec<f64>> {
    if row.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: row.len() });
    }
    let centred: Vec<f64> = row.iter().zip(&basis.mean).map(|(x, m)| x - m).collect();
    Ok(basis.eigenvectors[..basis.retained_dims]
        .iter()
        .map(|v| v.iter().zip(&centred).map(|(a, b)| a * b).sum())
        .collect())
}

/// `mean + sum latent_i v_i`.
pub fn reconstruct(basis: &KleBasis, latent: &[f64]) -> Result<Vec<f64>> {
    if latent.len() != basis.retained_dims {
        return Err(Error::DimensionMismatch {
            expected: basis.retained_dims,
            found: latent.len(),
        });
    }
    let mut out = basis.mean.clone();
    for (c, v) in latent.iter().zip(&basis.eigenvectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    Ok(out)
}

/// Latent vectors drawn uniformly from `[-scale sqrt(3 l_i), scale sqrt(3 l_i)]`.
pub fn sample_latent(basis: &KleBasis, n: usize, seed: u64, scale: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half: Vec<f64> = basis.eigenvalues[..basis.retained_dims]
        .iter()
        .map(|l| scale * (3.0 * l).sqrt())
        .collect();
    (0..n)
        .map(|_| {
            half.iter()
                .map(|h| h * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        })
        .collect()
}

/// Median of all pairwise Euclidean distances; 1 when every row coincides.
pub fn median_pairwise_distance(rows: &[Vec<f64>]) -> f64 {
    let mut d = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            d.push(sq_dist(&rows[i], &rows[j]).sqrt());
        }
    }
    let m = median(&mut d);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

pub fn rbf_similarity(rows: &[Vec<f64>], kernel_length: f64) -> DMatrix<f64> {
    let n = rows.len();
    let inv = 1.0 / (2.0 * kernel_length * kernel_length);
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (-sq_dist(&rows[i], &rows[j]) * inv).exp()
        }
    })
}

/// `sum log max(l_i, 1e-12) / n` over the eigenvalues of `m`.
pub fn floored_logdet_mean(m: DMatrix<f64>) -> (f64, bool) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let floored = vals.iter().any(|&v| v < EIGEN_FLOOR);
    let logs: Vec<f64> = vals.iter().map(|v| v.max(EIGEN_FLOOR).ln()).collect();
    (pairwise_sum(&logs) / n as f64, floored)
}

/// Mean log-determinant of the RBF similarity matrix of the rows.
pub fn diversity_score(rows: &[Vec<f64>], kernel_length: f64) -> f64 {
    floored_logdet_mean(rbf_similarity(rows, kernel_length)).0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub invalid_rate: f64,
    pub verdicts: Vec<ValidityVerdict>,
}

/// Fraction of decoded latent samples that are invalid designs; decoding
/// failures count as invalid with `DECODE_FAIL`.
pub fn validity_rate<F>(latents: &[Vec<f64>], basis: &KleBasis, decode: F) -> ValidityReport
where
    F: Fn(&[f64]) -> Result<Design>,
{
    let verdicts: Vec<ValidityVerdict> = latents
        .iter()
        .map(|z| match reconstruct(basis, z).and_then(|row| decode(&row)) {
            Ok(design) => design.validity(),
            Err(_) => ValidityVerdict::from_reasons(vec![DefectCode::DecodeFail]),
        })
        .collect();
    let invalid = verdicts.iter().filter(|v| !v.valid).count();
    ValidityReport {
        invalid_rate: if verdicts.is_empty() {
            0.0
        } else {
            invalid as f64 / verdicts.len() as f64
        },
        verdicts,
    }
}

/// Interleaved `x0 y0 x1 y1 ...` back to a closed polyline.
pub fn decode_polyline(row: &[f64]) -> Result<Design> {
    if row.len() % 2 != 0 {
        return Err(Error::InvalidArgument("coordinate row has odd length".into()));
    }
    let pts = row.chunks(2).map(|c| [c[0], c[1]]).collect();
    Ok(Design::Profile(ClosedProfile2D::new(pts)?))
}
