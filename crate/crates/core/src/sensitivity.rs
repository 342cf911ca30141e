//! Variance-based (Sobol) sensitivity analysis.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::featureset::{assemble_go, flatten, lhs_sample, ComboSpec, GoConfig, GoVector};
use crate::numeric::pairwise_sum;
use crate::shapes::Design;
use crate::{Error, Result};

pub const CLAMP_RANGE: (f64, f64) = (-0.05, 1.05);
pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaltelliDesign {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    /// `ab[i]` is `a` with column `i` taken from `b`.
    pub ab: Vec<Vec<Vec<f64>>>,
    pub seed: u64,
}

impl SaltelliDesign {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> usize {
        self.ab.len()
    }

    /// `A`, then `B`, then each `AB_i`: `n (d + 2)` rows.
    pub fn evaluation_rows(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.n() * (self.d() + 2));
        out.extend(self.a.iter().cloned());
        out.extend(self.b.iter().cloned());
        for m in &self.ab {
            out.extend(m.iter().cloned());
        }
        out
    }
}

/// `A` and `B` are independent Latin-hypercube samples.
pub fn saltelli_design(d: usize, n: usize, seed: u64) -> Result<SaltelliDesign> {
    if n < 64 || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "a Saltelli design needs n >= 64 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = lhs_sample(d, n, rng.random());
    let b = lhs_sample(d, n, rng.random());
    let ab = (0..d)
        .map(|i| {
            a.iter()
                .zip(&b)
                .map(|(ra, rb)| {
                    let mut r = ra.clone();
                    r[i] = rb[i];
                    r
                })
                .collect()
        })
        .collect();
    Ok(SaltelliDesign { a, b, ab, seed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QoiKind {
    Scalar,
    Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolReport {
    /// Clamped to `CLAMP_RANGE`.
    pub first_order: Vec<f64>,
    pub total_order: Vec<f64>,
    pub first_order_raw: Vec<f64>,
    pub total_order_raw: Vec<f64>,
    pub qoi_kind: QoiKind,
    pub epsilon: f64,
    pub use_total: bool,
    pub selected_mask: Vec<bool>,
    pub n: usize,
}

impl SobolReport {
    pub fn with_selection(mut self, epsilon: f64, use_total: bool) -> Self {
        self.selected_mask = select_features(&self, epsilon, use_total);
        self.epsilon = epsilon;
        self.use_total = use_total;
        self
    }

    pub fn chosen(&self, use_total: bool) -> &[f64] {
        if use_total {
            &self.total_order
        } else {
            &self.first_order
        }
    }
}

fn check_shapes(f_a: &[Vec<f64>], f_b: &[Vec<f64>], f_ab: &[Vec<Vec<f64>>]) -> Result<(usize, usize)> {
    let n = f_a.len();
    let q = f_a.first().map_or(0, |r| r.len());
    if n == 0 || q == 0 {
        return Err(Error::InvalidArgument("empty evaluation matrices".into()));
    }
    let all = f_b.iter().chain(f_ab.iter().flatten());
    if f_b.len() != n || f_ab.iter().any(|m| m.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f_b.len() });
    }
    for r in f_a.iter().chain(all) {
        if r.len() != q {
            return Err(Error::DimensionMismatch { expected: q, found: r.len() });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NanInput);
        }
    }
    Ok((n, q))
}

fn clamp(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.clamp(CLAMP_RANGE.0, CLAMP_RANGE.1)).collect()
}

/// Shared estimator: per-output numerators summed, then divided by the summed
/// pooled variances.
fn estimate(
    f_a: &[Vec<f64>],
    f_b: &[Vec<f64>],
    f_ab: &[Vec<Vec<f64>>],
    kind: QoiKind,
) -> Result<SobolReport> {
    let (n, q) = check_shapes(f_a, f_b, f_ab)?;
    let nf = n as f64;
    let mut var_terms = Vec::with_capacity(q);
    let mut mean_sq = Vec::with_capacity(q);
    for c in 0..q {
        let pooled: Vec<f64> = f_a.iter().chain(f_b).map(|r| r[c]).collect();
        let mu = pairwise_sum(&pooled) / (2.0 * nf);
        let dev: Vec<f64> = pooled.iter().map(|v| (v - mu) * (v - mu)).collect();
        var_terms.push(pairwise_sum(&dev) / (2.0 * nf));
        mean_sq.push(mu * mu);
    }
    let v = pairwise_sum(&var_terms);
    let degenerate = match kind {
        QoiKind::Scalar => v <= 1e-14 * mean_sq[0],
        QoiKind::Vector => v < 1e-14,
    };
    if degenerate || v == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mut first = Vec::with_capacity(f_ab.len());
    let mut total = Vec::with_capacity(f_ab.len());
    for m in f_ab {
        let mut s_num = Vec::with_capacity(q);
        let mut t_num = Vec::with_capacity(q);
        for c in 0..q {
            let s: Vec<f64> = (0..n).map(|k| f_b[k][c] * (m[k][c] - f_a[k][c])).collect();
            let t: Vec<f64> = (0..n).map(|k| (f_a[k][c] - m[k][c]).powi(2)).collect();
            s_num.push(pairwise_sum(&s) / nf);
            t_num.push(pairwise_sum(&t) / (2.0 * nf));
        }
        first.push(pairwise_sum(&s_num) / v);
        total.push(pairwise_sum(&t_num) / v);
    }
    let report = SobolReport {
        first_order: clamp(&first),
        total_order: clamp(&total),
        first_order_raw: first,
        total_order_raw: total,
        qoi_kind: kind,
        epsilon: DEFAULT_EPSILON,
        use_total: false,
        selected_mask: Vec::new(),
        n,
    };
    Ok(report.with_selection(DEFAULT_EPSILON, false))
}

fn as_column(v: &[f64]) -> Vec<Vec<f64>> {
    v.iter().map(|&x| vec![x]).collect()
}

/// First-order `(1/n) sum f_B (f_ABi - f_A) / V` and total-order
/// `(1/2n) sum (f_A - f_ABi)^2 / V`, `V` pooled over `f_A` and `f_B`.
pub fn sobol_indices_scalar(f_a: &[f64], f_b: &[f64], f_ab: &[Vec<f64>]) -> Result<SobolReport> {
    let ab: Vec<Vec<Vec<f64>>> = f_ab.iter().map(|m| as_column(m)).collect();
    estimate(&as_column(f_a), &as_column(f_b), &ab, QoiKind::Scalar)
}

/// Generalised indices for `n x q` outputs: numerators and variances are
/// summed over the outputs (a trace) before dividing.
pub fn sobol_indices_vector(
    f_a: &[Vec<f64>],
    f_b: &[Vec<f64>],
    f_ab: &[Vec<Vec<f64>>],
) -> Result<SobolReport> {
    estimate(f_a, f_b, f_ab, QoiKind::Vector)
}

/// Inputs whose chosen (clamped) index is at least `epsilon`.
pub fn select_features(report: &SobolReport, epsilon: f64, use_total: bool) -> Vec<bool> {
    report.chosen(use_total).iter().map(|&s| s >= epsilon).collect()
}

pub fn mask_as_vector(mask: &[bool]) -> Vec<f64> {
    mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect()
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let na = a.iter().map(|x| x * x).sum::<f64>();
    let nb = b.iter().map(|x| x * x).sum::<f64>();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexComparison {
    /// Undefined when either vector is all zeros.
    pub cosine: Option<f64>,
    pub mse: f64,
}

pub fn compare_index_vectors(a: &[f64], b: &[f64]) -> Result<IndexComparison> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let cosine = match cosine_similarity(a, b) {
        Ok(c) => Some(c),
        Err(Error::ZeroVector) => None,
        Err(e) => return Err(e),
    };
    let mse = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64;
    Ok(IndexComparison { cosine, mse })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    /// Keyed by combination label.
    pub reports: BTreeMap<String, SobolReport>,
    /// Combinations without a report, with the error code.
    pub failures: BTreeMap<String, String>,
    /// Saltelli rows dropped because some evaluation in the row failed.
    pub excluded: usize,
    pub n: usize,
    pub d: usize,
}

/// One GO record per evaluation row, `None` for a failed or invalid design.
pub fn evaluate_designs<G>(rows: &[Vec<f64>], generator: G, config: &GoConfig) -> Vec<Option<GoVector>>
where
    G: Fn(&[f64]) -> Result<Design>,
{
    rows.iter()
        .enumerate()
        .map(|(i, x)| evaluate_one(i, x, &generator, config))
        .collect()
}

pub fn evaluate_one<G>(i: usize, x: &[f64], generator: &G, config: &GoConfig) -> Option<GoVector>
where
    G: Fn(&[f64]) -> Result<Design>,
{
    let design = generator(x).ok()?;
    if !design.validity().valid {
        return None;
    }
    assemble_go(&format!("s{i}"), &design, Some(x), config).ok()
}

/// Reports for the seven combinations of `(M, K, F_T)` from GO records laid
/// out as `SaltelliDesign::evaluation_rows`. Each output column is
/// standardised over all kept evaluations.
pub fn study_from_records(design: &SaltelliDesign, records: &[Option<GoVector>]) -> Result<StudyResult> {
    let (n, d) = (design.n(), design.d());
    if records.len() != n * (d + 2) {
        return Err(Error::DimensionMismatch { expected: n * (d + 2), found: records.len() });
    }
    let block = |b: usize, k: usize| &records[b * n + k];
    let keep: Vec<usize> = (0..n)
        .filter(|&k| (0..d + 2).all(|b| block(b, k).is_some()))
        .collect();
    let mut reports = BTreeMap::new();
    let mut failures = BTreeMap::new();
    for combo in ComboSpec::go_only() {
        let outputs = |b: usize| -> Result<Vec<Vec<f64>>> {
            keep.iter()
                .map(|&k| flatten(block(b, k).as_ref().unwrap(), &combo))
                .collect()
        };
        let blocks: Vec<Vec<Vec<f64>>> = (0..d + 2).map(outputs).collect::<Result<_>>()?;
        let q = blocks[0].first().map_or(0, |r| r.len());
        let mut stats = Vec::with_capacity(q);
        for c in 0..q {
            let col: Vec<f64> = blocks.iter().flatten().map(|r| r[c]).collect();
            let mu = pairwise_sum(&col) / col.len() as f64;
            let dev: Vec<f64> = col.iter().map(|v| (v - mu).powi(2)).collect();
            let sd = (pairwise_sum(&dev) / col.len() as f64).sqrt();
            // Constant outputs are zeroed rather than amplified rounding noise.
            stats.push((mu, (sd > 1e-12 * mu.abs() && sd > 0.0).then_some(sd)));
        }
        let z: Vec<Vec<Vec<f64>>> = blocks
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|r| {
                        r.iter()
                            .zip(&stats)
                            .map(|(v, (mu, sd))| sd.map_or(0.0, |sd| (v - mu) / sd))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let report = if q == 1 {
            let col = |m: &Vec<Vec<f64>>| m.iter().map(|r| r[0]).collect::<Vec<f64>>();
            let ab: Vec<Vec<f64>> = z[2..].iter().map(col).collect();
            sobol_indices_scalar(&col(&z[0]), &col(&z[1]), &ab)
        } else {
            sobol_indices_vector(&z[0], &z[1], &z[2..])
        };
        match report {
            Ok(r) => {
                reports.insert(combo.label(), r);
            }
            Err(Error::ZeroVariance) => {
                failures.insert(combo.label(), Error::ZeroVariance.code().to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(StudyResult {
        reports,
        failures,
        excluded: n - keep.len(),
        n,
        d,
    })
}

pub fn go_sensitivity_study<G>(generator: G, config: &GoConfig, d: usize, n: usize, seed: u64) -> Result<StudyResult>
where
    G: Fn(&[f64]) -> Result<Design>,
{
    let design = saltelli_design(d, n, seed)?;
    let records = evaluate_designs(&design.evaluation_rows(), generator, config);
    study_from_records(&design, &records)
}
