//! Gaussian-process regression surrogates and the GO-combination ablation.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::featureset::{build_matrix, ComboSpec, DesignMatrix, GoVector};
use crate::numeric::pairwise_sum;
use crate::{Error, Result};

pub const NOISE_FLOOR: f64 = 1e-10;
pub const JITTER_CAP: f64 = 1e-4;
pub const N_STARTS: usize = 8;
const JITTERS: [f64; 8] = [0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kernel {
    Rbf,
    #[serde(rename = "MATERN_5_2")]
    Matern52,
    RationalQuadratic,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::Rbf, Kernel::Matern52, Kernel::RationalQuadratic];

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Rbf => "RBF",
            Kernel::Matern52 => "MATERN_5_2",
            Kernel::RationalQuadratic => "RATIONAL_QUADRATIC",
        }
    }

    /// `(k(r2), g(r2))` where `r2` is the scaled squared distance and
    /// `dk/dlog l_d = g * delta_d^2 / l_d^2`.
    fn eval(&self, r2: f64, alpha: f64) -> (f64, f64) {
        match self {
            Kernel::Rbf => {
                let k = (-0.5 * r2).exp();
                (k, k)
            }
            Kernel::Matern52 => {
                let r = r2.sqrt();
                let s = 5f64.sqrt() * r;
                let e = (-s).exp();
                ((1.0 + s + 5.0 * r2 / 3.0) * e, 5.0 / 3.0 * (1.0 + s) * e)
            }
            Kernel::RationalQuadratic => {
                let b = 1.0 + r2 / (2.0 * alpha);
                let k = b.powf(-alpha);
                (k, k / b)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MeanFn {
    Zero,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GprOptions {
    pub kernel: Kernel,
    pub mean_fn: MeanFn,
    pub seed: u64,
    pub max_iter: usize,
}

impl GprOptions {
    pub fn new(kernel: Kernel, seed: u64) -> Self {
        GprOptions {
            kernel,
            mean_fn: MeanFn::Constant,
            seed,
            max_iter: 100,
        }
    }
}

/// Hyperparameters, in standardised-target units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GprHyperparameters {
    pub kernel: Kernel,
    pub mean_fn: MeanFn,
    pub length_scales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
    /// Rational-quadratic shape; unused by the other kernels.
    pub alpha: f64,
}

#[derive(Debug, Clone)]
pub struct GprModel {
    pub hyper: GprHyperparameters,
    pub jitter: f64,
    pub y_mean: f64,
    pub y_std: f64,
    /// Prior mean of the standardised target.
    pub prior_mean: f64,
    pub log_marginal_likelihood: f64,
    pub x_train: Vec<Vec<f64>>,
    pub y_train: Vec<f64>,
    weights: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
}

// Log-space parameter vector: [log l_1..l_D, log s2, log n2, (log alpha)].
struct Problem<'a> {
    kernel: Kernel,
    mean_fn: MeanFn,
    x: &'a [Vec<f64>],
    y: DVector<f64>,
    d: usize,
    /// Squared per-dimension differences over pairs `i < j`.
    sq: Vec<Vec<f64>>,
}

struct Evaluation {
    nll: f64,
    grad: Vec<f64>,
}

fn bounds(kernel: Kernel, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![(1e-3f64).ln(); d];
    let mut hi = vec![(1e3f64).ln(); d];
    lo.push((1e-4f64).ln());
    hi.push((1e2f64).ln());
    lo.push(NOISE_FLOOR.ln());
    hi.push(0.0);
    if kernel == Kernel::RationalQuadratic {
        lo.push((1e-2f64).ln());
        hi.push((1e2f64).ln());
    }
    (lo, hi)
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

struct Factorised {
    chol: Cholesky<f64, Dyn>,
    jitter: f64,
    corr: Vec<f64>,
    g: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(kernel: Kernel, mean_fn: MeanFn, x: &'a [Vec<f64>], y: &[f64]) -> Self {
        let n = x.len();
        let d = x[0].len();
        let pairs = pair_index(n);
        let sq = (0..d)
            .map(|k| pairs.iter().map(|&(i, j)| (x[i][k] - x[j][k]).powi(2)).collect())
            .collect();
        Problem {
            kernel,
            mean_fn,
            x,
            y: DVector::from_column_slice(y),
            d,
            sq,
        }
    }

    fn unpack(&self, theta: &[f64]) -> GprHyperparameters {
        GprHyperparameters {
            kernel: self.kernel,
            mean_fn: self.mean_fn,
            length_scales: theta[..self.d].iter().map(|v| v.exp()).collect(),
            signal_variance: theta[self.d].exp(),
            noise_variance: theta[self.d + 1].exp(),
            alpha: if self.kernel == Kernel::RationalQuadratic {
                theta[self.d + 2].exp()
            } else {
                1.0
            },
        }
    }

    fn factorise(&self, h: &GprHyperparameters) -> Option<Factorised> {
        let n = self.x.len();
        let inv_l2: Vec<f64> = h.length_scales.iter().map(|l| 1.0 / (l * l)).collect();
        let npairs = n * (n - 1) / 2;
        let mut corr = Vec::with_capacity(npairs);
        let mut g = Vec::with_capacity(npairs);
        for p in 0..npairs {
            let r2: f64 = (0..self.d).map(|k| self.sq[k][p] * inv_l2[k]).sum();
            let (kv, gv) = self.kernel.eval(r2, h.alpha);
            corr.push(kv);
            g.push(gv);
        }
        let mut base = DMatrix::<f64>::zeros(n, n);
        let mut p = 0;
        for i in 0..n {
            base[(i, i)] = h.signal_variance + h.noise_variance;
            for j in i + 1..n {
                let v = h.signal_variance * corr[p];
                base[(i, j)] = v;
                base[(j, i)] = v;
                p += 1;
            }
        }
        for &jitter in &JITTERS {
            let mut k = base.clone();
            for i in 0..n {
                k[(i, i)] += jitter;
            }
            if let Some(chol) = Cholesky::new(k) {
                return Some(Factorised { chol, jitter, corr, g });
            }
        }
        None
    }

    /// GLS estimate for the constant mean; 0 for the zero mean.
    fn prior_mean(&self, chol: &Cholesky<f64, Dyn>) -> f64 {
        match self.mean_fn {
            MeanFn::Zero => 0.0,
            MeanFn::Constant => {
                let ones = DVector::from_element(self.y.len(), 1.0);
                let kinv1 = chol.solve(&ones);
                kinv1.dot(&self.y) / kinv1.sum()
            }
        }
    }

    fn nll_only(&self, f: &Factorised) -> (f64, f64, DVector<f64>) {
        let n = self.y.len() as f64;
        let mu = self.prior_mean(&f.chol);
        let r = self.y.add_scalar(-mu);
        let a = f.chol.solve(&r);
        let logdet: f64 = f.chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum();
        let nll = 0.5 * r.dot(&a) + logdet + 0.5 * n * (2.0 * std::f64::consts::PI).ln();
        (nll, mu, a)
    }

    fn nll(&self, theta: &[f64]) -> Option<f64> {
        let f = self.factorise(&self.unpack(theta))?;
        Some(self.nll_only(&f).0).filter(|v| v.is_finite())
    }

    fn evaluate(&self, theta: &[f64]) -> Option<Evaluation> {
        let h = self.unpack(theta);
        let f = self.factorise(&h)?;
        let (nll, _, a) = self.nll_only(&f);
        if !nll.is_finite() {
            return None;
        }
        let n = self.x.len();
        let kinv = f.chol.inverse();
        // W = a a^T - K^{-1}; dLML/dtheta = 1/2 tr(W dK).
        let s2 = h.signal_variance;
        let mut grad = vec![0.0; theta.len()];
        let mut sig_terms = Vec::with_capacity(n * (n - 1) / 2);
        let mut alpha_terms = Vec::new();
        let inv_l2: Vec<f64> = h.length_scales.iter().map(|l| 1.0 / (l * l)).collect();
        let mut len_terms: Vec<Vec<f64>> = vec![Vec::with_capacity(n * (n - 1) / 2); self.d];
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                let w = a[i] * a[j] - kinv[(i, j)];
                let wk = w * s2;
                sig_terms.push(wk * f.corr[p]);
                for (k, terms) in len_terms.iter_mut().enumerate() {
                    terms.push(wk * f.g[p] * self.sq[k][p] * inv_l2[k]);
                }
                if self.kernel == Kernel::RationalQuadratic {
                    let r2: f64 = (0..self.d).map(|k| self.sq[k][p] * inv_l2[k]).sum();
                    let b = 1.0 + r2 / (2.0 * h.alpha);
                    alpha_terms.push(wk * f.corr[p] * (-h.alpha * b.ln() + r2 / (2.0 * b)));
                }
                p += 1;
            }
        }
        let diag_w: Vec<f64> = (0..n).map(|i| a[i] * a[i] - kinv[(i, i)]).collect();
        let tr_w = pairwise_sum(&diag_w);
        for (k, terms) in len_terms.iter().enumerate() {
            grad[k] = -pairwise_sum(terms);
        }
        grad[self.d] = -(pairwise_sum(&sig_terms) + 0.5 * s2 * tr_w);
        grad[self.d + 1] = -0.5 * h.noise_variance * tr_w;
        if self.kernel == Kernel::RationalQuadratic {
            grad[self.d + 2] = -pairwise_sum(&alpha_terms);
        }
        Some(Evaluation { nll, grad })
    }
}

fn project(theta: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((t, l), h) in theta.iter_mut().zip(lo).zip(hi) {
        *t = t.clamp(*l, *h);
    }
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS with a backtracking Armijo line search; iterates are
/// clamped to the box after every step, so the objective never increases.
fn lbfgs(problem: &Problem, start: Vec<f64>, lo: &[f64], hi: &[f64], max_iter: usize) -> Option<(Vec<f64>, f64)> {
    const MEM: usize = 8;
    let mut x = start;
    project(&mut x, lo, hi);
    let mut cur = problem.evaluate(&x)?;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    for _ in 0..max_iter {
        // Projected gradient norm for convergence.
        let pg = x
            .iter()
            .zip(&cur.grad)
            .zip(lo.iter().zip(hi))
            .map(|((xi, gi), (l, h))| ((xi - gi).clamp(*l, *h) - xi).abs())
            .fold(0.0, f64::max);
        if pg < 1e-6 {
            break;
        }
        // Two-loop recursion.
        let mut q = cur.grad.clone();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for (s, y) in s_hist.iter().zip(&y_hist).rev() {
            let rho = 1.0 / dotv(y, s);
            let a = rho * dotv(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push((a, rho));
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = dotv(s, y) / dotv(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let gn = dotv(&cur.grad, &cur.grad).sqrt().max(1e-12);
            q.iter_mut().for_each(|v| *v /= gn);
        }
        for ((s, y), (a, rho)) in s_hist.iter().zip(&y_hist).zip(alphas.into_iter().rev()) {
            let b = rho * dotv(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        if dotv(&dir, &cur.grad) >= 0.0 {
            dir = cur.grad.iter().map(|g| -g).collect();
            s_hist.clear();
            y_hist.clear();
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let mut cand: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            project(&mut cand, lo, hi);
            let step: Vec<f64> = cand.iter().zip(&x).map(|(c, xi)| c - xi).collect();
            let decrease = dotv(&cur.grad, &step);
            if let Some(nll) = problem.nll(&cand) {
                if nll <= cur.nll + 1e-4 * decrease.min(0.0) && nll <= cur.nll {
                    if let Some(ev) = problem.evaluate(&cand) {
                        accepted = Some((cand, ev, step));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((cand, ev, step)) = accepted else { break };
        let yv: Vec<f64> = ev.grad.iter().zip(&cur.grad).map(|(a, b)| a - b).collect();
        let improvement = cur.nll - ev.nll;
        if dotv(&step, &yv) > 1e-12 {
            s_hist.push(step);
            y_hist.push(yv);
            if s_hist.len() > MEM {
                s_hist.remove(0);
                y_hist.remove(0);
            }
        }
        x = cand;
        cur = ev;
        if improvement <= 1e-10 * cur.nll.abs().max(1.0) {
            break;
        }
    }
    Some((x, cur.nll))
}

fn standardise_y(y: &[f64]) -> (f64, f64, Vec<f64>) {
    let n = y.len() as f64;
    let mean = pairwise_sum(y) / n;
    let dev: Vec<f64> = y.iter().map(|v| (v - mean).powi(2)).collect();
    let sd = (pairwise_sum(&dev) / n).sqrt();
    let sd = if sd > 1e-12 * mean.abs() && sd > 0.0 { sd } else { 1.0 };
    (mean, sd, y.iter().map(|v| (v - mean) / sd).collect())
}

fn validate_inputs(x: &[Vec<f64>], y: &[f64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if x.len() < 8 {
        return Err(Error::InvalidArgument(format!("GPR needs at least 8 rows, got {}", x.len())));
    }
    let d = x[0].len();
    if d == 0 {
        return Err(Error::InvalidArgument("GPR needs at least one input column".into()));
    }
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: r.len() });
    }
    if y.iter().chain(x.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::NanInput);
    }
    Ok(d)
}

/// Starting points: length scales log-spaced over `[0.1, 10]`, each
/// dimension perturbed by a seeded factor of up to `e^(+-0.25)`.
fn starts(kernel: Kernel, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..N_STARTS)
        .map(|s| {
            let base = (0.1f64).ln() + (100f64).ln() * s as f64 / (N_STARTS - 1) as f64;
            let mut t: Vec<f64> = (0..d).map(|_| base + rng.random_range(-0.25..0.25)).collect();
            t.push(0.0);
            t.push((1e-2f64).ln());
            if kernel == Kernel::RationalQuadratic {
                t.push(0.0);
            }
            t
        })
        .collect()
}

impl GprModel {
    /// Builds the posterior for fixed hyperparameters.
    pub fn from_hyperparameters(hyper: GprHyperparameters, x: &[Vec<f64>], y: &[f64]) -> Result<GprModel> {
        let d = validate_inputs(x, y)?;
        if hyper.length_scales.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: hyper.length_scales.len() });
        }
        let (y_mean, y_std, ys) = standardise_y(y);
        let problem = Problem::new(hyper.kernel, hyper.mean_fn, x, &ys);
        let f = problem
            .factorise(&hyper)
            .ok_or(Error::IllConditioned { jitter: JITTER_CAP })?;
        let (nll, mu, a) = problem.nll_only(&f);
        Ok(GprModel {
            hyper,
            jitter: f.jitter,
            y_mean,
            y_std,
            prior_mean: mu,
            log_marginal_likelihood: -nll,
            x_train: x.to_vec(),
            y_train: y.to_vec(),
            weights: a,
            chol: f.chol,
        })
    }

    pub fn log_marginal_likelihood_at(&self, theta: &[f64]) -> Option<f64> {
        let (_, _, ys) = standardise_y(&self.y_train);
        let p = Problem::new(self.hyper.kernel, self.hyper.mean_fn, &self.x_train, &ys);
        p.evaluate(theta).map(|e| -e.nll)
    }

    fn cross_row(&self, x: &[f64]) -> DVector<f64> {
        let h = &self.hyper;
        DVector::from_iterator(
            self.x_train.len(),
            self.x_train.iter().map(|t| {
                let r2: f64 = t
                    .iter()
                    .zip(x)
                    .zip(&h.length_scales)
                    .map(|((a, b), l)| ((a - b) / l).powi(2))
                    .sum();
                h.signal_variance * h.kernel.eval(r2, h.alpha).0
            }),
        )
    }

    /// Posterior mean and latent variance in target units.
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.hyper.length_scales.len();
        let mut mean = Vec::with_capacity(rows.len());
        let mut var = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: r.len() });
            }
            let ks = self.cross_row(r);
            let m = self.prior_mean + ks.dot(&self.weights);
            let v = self.chol.l_dirty().solve_lower_triangular(&ks).map_or(0.0, |w| w.dot(&w));
            let latent = (self.hyper.signal_variance - v).max(0.0);
            mean.push(self.y_mean + self.y_std * m);
            var.push(latent * self.y_std * self.y_std);
        }
        Ok((mean, var))
    }
}

/// Maximum-marginal-likelihood fit over `N_STARTS` seeded starts.
pub fn fit_gpr_rows(x: &[Vec<f64>], y: &[f64], options: &GprOptions) -> Result<GprModel> {
    let d = validate_inputs(x, y)?;
    let (_, _, ys) = standardise_y(y);
    let problem = Problem::new(options.kernel, options.mean_fn, x, &ys);
    let (lo, hi) = bounds(options.kernel, d);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts(options.kernel, d, options.seed) {
        if let Some((theta, nll)) = lbfgs(&problem, start, &lo, &hi, options.max_iter) {
            if best.as_ref().is_none_or(|b| nll < b.1) {
                best = Some((theta, nll));
            }
        }
    }
    let (theta, _) = best.ok_or(Error::IllConditioned { jitter: JITTER_CAP })?;
    GprModel::from_hyperparameters(problem.unpack(&theta), x, y)
}

pub fn fit_gpr(x: &DesignMatrix, y: &[f64], kernel: Kernel, seed: u64) -> Result<GprModel> {
    fit_gpr_rows(&x.rows, y, &GprOptions::new(kernel, seed))
}

pub fn predict(model: &GprModel, rows: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    model.predict(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitMetrics {
    pub r2: f64,
    /// Percent.
    pub mape: f64,
    pub rmse: f64,
    /// Targets whose magnitude was raised to the `1e-12` MAPE floor.
    pub mape_floored: usize,
}

pub fn metrics(pred: &[f64], truth: &[f64]) -> FitMetrics {
    let n = truth.len() as f64;
    let mean = pairwise_sum(truth) / n;
    let res: Vec<f64> = pred.iter().zip(truth).map(|(p, t)| (p - t).powi(2)).collect();
    let tot: Vec<f64> = truth.iter().map(|t| (t - mean).powi(2)).collect();
    let (ss_res, ss_tot) = (pairwise_sum(&res), pairwise_sum(&tot));
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    let mut floored = 0;
    let ape: Vec<f64> = pred
        .iter()
        .zip(truth)
        .map(|(p, t)| {
            if t.abs() < 1e-12 {
                floored += 1;
            }
            (p - t).abs() / t.abs().max(1e-12)
        })
        .collect();
    FitMetrics {
        r2,
        mape: 100.0 * pairwise_sum(&ape) / n,
        rmse: (ss_res / n).sqrt(),
        mape_floored: floored,
    }
}

pub fn evaluate(model: &GprModel, x_test: &[Vec<f64>], y_test: &[f64]) -> Result<FitMetrics> {
    if x_test.len() != y_test.len() || x_test.is_empty() {
        return Err(Error::DimensionMismatch { expected: x_test.len(), found: y_test.len() });
    }
    let (pred, _) = model.predict(x_test)?;
    Ok(metrics(&pred, y_test))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    /// Subsets of `train` used to choose the kernel.
    pub fit: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Seeded 80/20 split, then the same split of the training part.
pub fn split_plan(n: usize, seed: u64) -> SplitPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let n_train = ((0.8 * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1));
    let train = idx[..n_train].to_vec();
    let test = idx[n_train..].to_vec();
    let n_fit = ((0.8 * n_train as f64).round() as usize).clamp(1, n_train.saturating_sub(1).max(1));
    SplitPlan {
        fit: train[..n_fit].to_vec(),
        validation: train[n_fit..].to_vec(),
        train,
        test,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub combo: String,
    pub kernel: Kernel,
    pub mean_fn: MeanFn,
    pub validation_r2: f64,
    pub metrics: FitMetrics,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

fn pick(rows: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

fn pick_y(y: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| y[i]).collect()
}

/// One combination: standardise, choose the kernel by validation R^2 (the
/// first in grid order wins ties), refit on the whole training part and
/// score on the held-out part.
pub fn ablation_combo(
    gos: &[GoVector],
    labels: &[f64],
    combo: ComboSpec,
    grid: &[(Kernel, MeanFn)],
    seed: u64,
) -> Result<AblationRow> {
    if gos.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: gos.len(), found: labels.len() });
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty kernel grid".into()));
    }
    let m = build_matrix(gos, combo, true)?;
    let plan = split_plan(m.n_rows(), seed);
    let mut best: Option<(f64, Kernel, MeanFn)> = None;
    for &(kernel, mean_fn) in grid {
        let opts = GprOptions { mean_fn, ..GprOptions::new(kernel, seed) };
        let model = fit_gpr_rows(&pick(&m.rows, &plan.fit), &pick_y(labels, &plan.fit), &opts)?;
        let score = evaluate(&model, &pick(&m.rows, &plan.validation), &pick_y(labels, &plan.validation))?.r2;
        if best.is_none_or(|b| score > b.0) {
            best = Some((score, kernel, mean_fn));
        }
    }
    let (validation_r2, kernel, mean_fn) = best.unwrap();
    let opts = GprOptions { mean_fn, ..GprOptions::new(kernel, seed) };
    let model = fit_gpr_rows(&pick(&m.rows, &plan.train), &pick_y(labels, &plan.train), &opts)?;
    let metrics = evaluate(&model, &pick(&m.rows, &plan.test), &pick_y(labels, &plan.test))?;
    Ok(AblationRow {
        combo: combo.label(),
        kernel,
        mean_fn,
        validation_r2,
        metrics,
        n_train: plan.train.len(),
        n_test: plan.test.len(),
        seed,
    })
}

pub fn ablation_study(
    gos: &[GoVector],
    labels: &[f64],
    combos: &[ComboSpec],
    grid: &[(Kernel, MeanFn)],
    seed: u64,
) -> Result<Vec<AblationRow>> {
    combos
        .iter()
        .map(|&c| ablation_combo(gos, labels, c, grid, seed))
        .collect()
}

pub fn default_grid() -> Vec<(Kernel, MeanFn)> {
    Kernel::ALL.iter().map(|&k| (k, MeanFn::Constant)).collect()
}
