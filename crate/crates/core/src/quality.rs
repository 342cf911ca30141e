//! Quality-weighted DPP kernels and batch diversity/quality/novelty scores.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::featureset::{flatten, ComboSpec, GoVector, Standardisation};
use crate::numeric::pairwise_sum;
use crate::subspace::{diversity_score, rbf_similarity, EIGEN_FLOOR};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DppKernel {
    pub l: DMatrix<f64>,
    pub gamma0: f64,
    pub kernel_length: f64,
}

/// `L_ij = k(x_i, x_j) (q_i q_j)^gamma0` with an RBF `k`.
pub fn build_dpp_kernel(batch: &[Vec<f64>], qualities: &[f64], gamma0: f64, kernel_length: f64) -> Result<DppKernel> {
    if batch.len() < 2 {
        return Err(Error::InvalidArgument(format!("batch of {} rows, need at least 2", batch.len())));
    }
    if qualities.len() != batch.len() {
        return Err(Error::DimensionMismatch { expected: batch.len(), found: qualities.len() });
    }
    if let Some((index, &value)) = qualities.iter().enumerate().find(|(_, q)| !(**q >= 0.0)) {
        return Err(Error::NegativeQuality { index, value });
    }
    if !(kernel_length > 0.0) {
        return Err(Error::InvalidArgument(format!("kernel length {kernel_length} must be positive")));
    }
    let k = rbf_similarity(batch, kernel_length);
    let l = DMatrix::from_fn(batch.len(), batch.len(), |i, j| {
        k[(i, j)] * (qualities[i] * qualities[j]).powf(gamma0)
    });
    Ok(DppKernel { l, gamma0, kernel_length })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DppLoss {
    pub value: f64,
    /// Some eigenvalue was raised to the floor.
    pub degenerate: bool,
    pub min_eigenvalue: f64,
}

/// `-(1/n) sum log max(lambda_i, 1e-12)`.
pub fn dpp_loss_term(kernel: &DppKernel) -> DppLoss {
    let n = kernel.l.nrows();
    let eig = SymmetricEigen::new(kernel.l.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let logs: Vec<f64> = vals.iter().map(|v| v.max(EIGEN_FLOOR).ln()).collect();
    DppLoss {
        value: -pairwise_sum(&logs) / n as f64,
        degenerate: vals[0] < EIGEN_FLOOR,
        min_eigenvalue: vals[0],
    }
}

fn quality_combo() -> ComboSpec {
    ComboSpec { include_p: false, include_m: true, include_k: true, include_ft: true }
}

/// L1 norm of already standardised components.
pub fn l1_quality(components: &[f64]) -> f64 {
    let abs: Vec<f64> = components.iter().map(|v| v.abs()).collect();
    pairwise_sum(&abs)
}

/// Sidecar standardisation of the `(M, K, F_T)` sub-vector over a batch.
pub fn fit_quality_standardisation(batch: &[GoVector]) -> Result<Standardisation> {
    let combo = quality_combo();
    let rows = batch.iter().map(|g| flatten(g, &combo)).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    Ok(Standardisation::fit(&rows))
}

/// `q(x) = ||(M, K, F_T)||_1` after standardisation by `sidecar`.
pub fn go_quality(x: &GoVector, sidecar: &Standardisation) -> Result<f64> {
    let row = flatten(x, &quality_combo())?;
    if row.len() != sidecar.mean.len() {
        return Err(Error::DimensionMismatch { expected: sidecar.mean.len(), found: row.len() });
    }
    Ok(l1_quality(&sidecar.apply(&row)))
}

/// Qualities for a batch standardised against itself.
pub fn batch_qualities(batch: &[GoVector]) -> Result<Vec<f64>> {
    let sidecar = fit_quality_standardisation(batch)?;
    batch.iter().map(|g| go_quality(g, &sidecar)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchScores {
    pub diversity: f64,
    pub quality: f64,
    pub novelty: f64,
    pub n_generated: usize,
    pub n_training: usize,
    pub gamma0: f64,
    pub kernel_length: f64,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn batch_scores(
    generated: &[Vec<f64>],
    training: &[Vec<f64>],
    qualities: &[f64],
    kernel_length: f64,
    gamma0: f64,
) -> Result<BatchScores> {
    if generated.is_empty() || training.is_empty() {
        return Err(Error::InvalidArgument("batch scores need non-empty generated and training sets".into()));
    }
    if qualities.len() != generated.len() {
        return Err(Error::DimensionMismatch { expected: generated.len(), found: qualities.len() });
    }
    let d = generated[0].len();
    if let Some(r) = generated.iter().chain(training).find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: r.len() });
    }
    let nearest: Vec<f64> = generated
        .iter()
        .map(|g| training.iter().map(|t| dist(g, t)).fold(f64::INFINITY, f64::min))
        .collect();
    // Sorting makes the sums independent of input order.
    let mut nearest = nearest;
    nearest.sort_by(f64::total_cmp);
    let mut q = qualities.to_vec();
    q.sort_by(f64::total_cmp);
    let mut ordered = generated.to_vec();
    ordered.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(BatchScores {
        diversity: diversity_score(&ordered, kernel_length),
        quality: pairwise_sum(&q) / q.len() as f64,
        novelty: pairwise_sum(&nearest) / nearest.len() as f64,
        n_generated: generated.len(),
        n_training: training.len(),
        gamma0,
        kernel_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{MomentVariant, MomentVector};

    fn go(id: usize, m: Vec<f64>, k: f64, ft: f64) -> GoVector {
        let n = m.len();
        GoVector {
            design_id: format!("d{id}"),
            p: None,
            m: Some(MomentVector {
                order_max: 1,
                dim: 2,
                variant: MomentVariant::Raw,
                exponents: vec![[0, 0, 0], [1, 0, 0], [0, 1, 0]][..n].to_vec(),
                values: m,
            }),
            k: Some(k),
            ft: Some(ft),
        }
    }

    #[test]
    fn kernel_formula_cases() {
        let len = 1.0 / (2.0 * 2f64.ln()).sqrt();
        let batch = vec![vec![0.0], vec![1.0]];
        let l = build_dpp_kernel(&batch, &[1.0, 4.0], 0.5, len).unwrap().l;
        let want = [[1.0, 1.0], [1.0, 4.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((l[(i, j)] - want[i][j]).abs() < 1e-12);
            }
        }
        let rows = vec![vec![0.0, 0.1], vec![0.3, 0.2], vec![1.0, 0.0]];
        let k = rbf_similarity(&rows, 0.7);
        assert_eq!(build_dpp_kernel(&rows, &[1.0; 3], 1.7, 0.7).unwrap().l, k);
        assert_eq!(build_dpp_kernel(&rows, &[0.2, 9.0, 3.0], 0.0, 0.7).unwrap().l, k);
        assert!(matches!(
            build_dpp_kernel(&rows, &[0.2, -1.0, 3.0], 1.0, 0.7),
            Err(Error::NegativeQuality { index: 1, .. })
        ));
    }

    #[test]
    fn loss_values() {
        let id = DppKernel { l: DMatrix::identity(3, 3), gamma0: 1.0, kernel_length: 1.0 };
        assert_eq!(dpp_loss_term(&id).value, 0.0);
        let e = std::f64::consts::E;
        let de = DppKernel { l: DMatrix::from_diagonal_element(2, 2, e), gamma0: 1.0, kernel_length: 1.0 };
        assert!((dpp_loss_term(&de).value + 1.0).abs() < 1e-14);
        let dup = build_dpp_kernel(&[vec![0.0], vec![0.0]], &[1.0, 1.0], 1.0, 1.0).unwrap();
        let loss = dpp_loss_term(&dup);
        assert!(loss.degenerate && loss.value > 10.0);
    }

    #[test]
    fn loss_prefers_diverse_and_good_batches() {
        let q = [1.0, 1.0, 1.0];
        let dup = build_dpp_kernel(&[vec![0.0], vec![0.0], vec![1.0]], &q, 1.0, 1.0).unwrap();
        let far = build_dpp_kernel(&[vec![0.0], vec![3.0], vec![1.0]], &q, 1.0, 1.0).unwrap();
        assert!(dpp_loss_term(&far).value < dpp_loss_term(&dup).value);
        let rows = [vec![0.0], vec![0.5], vec![1.0]];
        let lo = build_dpp_kernel(&rows, &[1.0, 1.0, 1.0], 1.0, 1.0).unwrap();
        let hi = build_dpp_kernel(&rows, &[1.0, 1.5, 1.0], 1.0, 1.0).unwrap();
        assert!(dpp_loss_term(&hi).value < dpp_loss_term(&lo).value);
    }

    #[test]
    fn quality_norms() {
        assert_eq!(l1_quality(&[0.5, -1.5, 2.0]), 4.0);
        assert_eq!(l1_quality(&[0.0; 4]), 0.0);
        let batch: Vec<GoVector> = (0..6)
            .map(|i| {
                let t = i as f64;
                go(i, vec![1.0 + t, 0.3 * t * t, (t * 0.7).sin()], 6.3 + 0.1 * t, 1e3 - t * t)
            })
            .collect();
        let q = batch_qualities(&batch).unwrap();
        let mut scaled = batch.clone();
        for g in &mut scaled {
            g.m.as_mut().unwrap().values[1] *= 2.0;
        }
        for (a, b) in q.iter().zip(batch_qualities(&scaled).unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut missing = batch[0].clone();
        missing.k = None;
        let side = fit_quality_standardisation(&batch).unwrap();
        assert!(matches!(go_quality(&missing, &side), Err(Error::MissingComponent { .. })));
    }

    #[test]
    fn batch_score_cases() {
        let train = vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![3.0, -1.0]];
        let s = batch_scores(&train[..2], &train, &[2.0, 2.0], 1.0, 1.0).unwrap();
        assert_eq!(s.novelty, 0.0);
        assert_eq!(s.quality, 2.0);
        let shifted: Vec<Vec<f64>> = train.iter().map(|r| vec![r[0] + 0.125, r[1]]).collect();
        let s = batch_scores(&shifted, &train, &[1.0, 2.0, 3.0], 1.0, 1.0).unwrap();
        assert!((s.novelty - 0.125).abs() < 1e-15);
        let mut rev = shifted.clone();
        rev.reverse();
        let mut tr = train.clone();
        tr.rotate_left(1);
        let r = batch_scores(&rev, &tr, &[3.0, 2.0, 1.0], 1.0, 1.0).unwrap();
        assert_eq!(r, s);
    }
}
