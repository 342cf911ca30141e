//! Fourier descriptors of closed curves and of sectioned closed surfaces.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::numeric::pairwise_sum;
use crate::shapes::{ClosedProfile2D, TriangleMesh};
use crate::slicing::{section_loops, Axis};
use crate::{Error, Result};

pub use rustfft::num_complex::Complex64 as Complex;

pub const MIN_SAMPLES: usize = 8;

/// Complex boundary samples `x + iy`, uniform in arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySignal {
    pub samples: Vec<Complex64>,
    pub length: f64,
}

impl BoundarySignal {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::TooFewPoints { found: samples.len() });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NanInput);
        }
        let n = samples.len();
        let length = (0..n).map(|k| (samples[(k + 1) % n] - samples[k]).norm()).sum();
        Ok(BoundarySignal { samples, length })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean_square(&self) -> f64 {
        let sq: Vec<f64> = self.samples.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&sq) / self.len() as f64
    }
}

/// `n` points at equal arc-length spacing, starting at point 0.
pub fn resample_arclength(profile: &ClosedProfile2D, n: usize) -> Result<BoundarySignal> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "sample count must be a power of two >= 16, got {n}"
        )));
    }
    let length = profile.perimeter();
    let r = profile.resampled(n)?;
    Ok(BoundarySignal {
        samples: r.points().iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        length,
    })
}

fn dft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    fft.process(data);
}

/// Coefficients `F(n)` for `n` in `[-N/2, N/2)`, stored in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSpectrum {
    pub coeffs: Vec<Complex64>,
}

impl PlanarSpectrum {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        -(self.len() as i64 / 2)
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.min_index()..self.min_index() + self.len() as i64
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.coeffs[(n - self.min_index()) as usize]
    }

    /// Samples reconstructed by the inverse transform.
    pub fn inverse(&self) -> Vec<Complex64> {
        let n = self.len();
        let half = n / 2;
        let mut buf: Vec<Complex64> = (0..n).map(|k| self.coeffs[(k + half) % n]).collect();
        dft(&mut buf, true);
        buf
    }

    pub fn total_energy(&self, include_dc: bool) -> f64 {
        let sq: Vec<f64> = self
            .indices()
            .filter(|&n| include_dc || n != 0)
            .map(|n| self.get(n).norm_sqr())
            .collect();
        pairwise_sum(&sq)
    }
}

/// `F(n) = (1/N) sum_k C_k exp(-2 pi i n k / N)`.
pub fn planar_fd(signal: &BoundarySignal) -> PlanarSpectrum {
    let n = signal.len();
    let mut buf = signal.samples.clone();
    dft(&mut buf, false);
    let inv = 1.0 / n as f64;
    let half = n / 2;
    PlanarSpectrum {
        coeffs: (0..n).map(|i| buf[(i + n - half) % n] * inv).collect(),
    }
}

/// Double-DFT sectional descriptor `F(m, n)`. Both index ranges are symmetric;
/// the unpaired Nyquist row and column are not stored, but their energy is
/// kept so that the total energy still satisfies Parseval.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrid {
    pub m_max: usize,
    pub n_max: usize,
    /// Row-major over `m` then `n`, both ascending from their minimum.
    pub coeffs: Vec<Complex64>,
    pub section_count: usize,
    pub height: f64,
    pub section_levels: Vec<f64>,
    pub nyquist_energy: f64,
}

impl FourierGrid {
    pub fn rows(&self) -> usize {
        2 * self.m_max + 1
    }

    pub fn cols(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        let i = (m + self.m_max as i64) as usize;
        let j = (n + self.n_max as i64) as usize;
        self.coeffs[i * self.cols() + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let (mm, nn) = (self.m_max as i64, self.n_max as i64);
        (-mm..=mm).flat_map(move |m| (-nn..=nn).map(move |n| (m, n, self.get(m, n))))
    }

    /// Sum of `|F(m, n)|^2`; without the DC term the whole `n = 0` column
    /// (the section centroids) is left out.
    pub fn total_energy(&self, include_dc: bool) -> f64 {
        let sq: Vec<f64> = self
            .entries()
            .filter(|&(_, n, _)| include_dc || n != 0)
            .map(|(_, _, c)| c.norm_sqr())
            .collect();
        pairwise_sum(&sq) + self.nyquist_energy
    }
}

/// Rotates a counter-clockwise loop to start where the ray from its area
/// centroid along `+x` leaves it, inserting that point if it is not a vertex.
pub fn canonical_start(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = points.len();
    let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        let w = p[0] * q[1] - q[0] * p[1];
        a2 += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    let (cx, cy) = (cx / (3.0 * a2), cy / (3.0 * a2));
    let mut best: Option<(f64, usize, [f64; 2])> = None;
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        if (p[1] >= cy) == (q[1] >= cy) {
            continue;
        }
        let t = (cy - p[1]) / (q[1] - p[1]);
        let x = p[0] + t * (q[0] - p[0]);
        if x > cx && best.is_none_or(|(bx, _, _)| x > bx) {
            best = Some((x, i, [x, cy]));
        }
    }
    let Some((_, i, hit)) = best else {
        return points.to_vec();
    };
    let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-12;
    let j = (i + 1) % n;
    let mut out = Vec::with_capacity(n + 1);
    let start = if close(hit, points[i]) {
        i
    } else if close(hit, points[j]) {
        j
    } else {
        out.push(hit);
        j
    };
    out.extend((0..n).map(|k| points[(start + k) % n]));
    out
}

/// Sections the mesh at `n_sections` levels `z_k = z_min + (k + 1/2) H / S`,
/// transforms each section loop, then transforms across sections.
pub fn sectional_fd_3d(mesh: &TriangleMesh, n_sections: usize, n_per_section: usize) -> Result<FourierGrid> {
    if n_sections < 2 || !n_sections.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "section count must be a power of two >= 2, got {n_sections}"
        )));
    }
    let (open, non_manifold) = mesh.boundary_counts();
    if open > 0 || non_manifold > 0 {
        return Err(Error::NotWatertight {
            open_edges: open,
            non_manifold_edges: non_manifold,
        });
    }
    let (lo, hi) = mesh.bounds();
    let height = hi[2] - lo[2];
    let levels: Vec<f64> = (0..n_sections)
        .map(|k| lo[2] + (k as f64 + 0.5) * height / n_sections as f64)
        .collect();
    let mut spectra = Vec::with_capacity(n_sections);
    for &z in &levels {
        let loops = section_loops(mesh, Axis::Z, z)?;
        if loops.len() != 1 {
            return Err(Error::MultiLoopSection { z, loops: loops.len() });
        }
        let profile = ClosedProfile2D::new(canonical_start(&loops[0]))?;
        spectra.push(planar_fd(&resample_arclength(&profile, n_per_section)?));
    }

    let n = n_per_section;
    let s = n_sections;
    let mut full = vec![Complex64::new(0.0, 0.0); s * n];
    for j in 0..n {
        let mut column: Vec<Complex64> = spectra.iter().map(|sp| sp.coeffs[j]).collect();
        dft(&mut column, false);
        let half = s / 2;
        for i in 0..s {
            full[i * n + j] = column[(i + s - half) % s] / s as f64;
        }
    }
    let (m_max, n_max) = (s / 2 - 1, n / 2 - 1);
    let mut coeffs = Vec::with_capacity((2 * m_max + 1) * (2 * n_max + 1));
    let mut nyq = Vec::new();
    for i in 0..s {
        for j in 0..n {
            let c = full[i * n + j];
            if i == 0 || j == 0 {
                nyq.push(c.norm_sqr());
            } else {
                coeffs.push(c);
            }
        }
    }
    Ok(FourierGrid {
        m_max,
        n_max,
        coeffs,
        section_count: s,
        height,
        section_levels: levels,
        nyquist_energy: pairwise_sum(&nyq),
    })
}

/// `F_T = sum |c|^2`.
pub fn total_energy(coeffs: &[Complex64]) -> f64 {
    let sq: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
    pairwise_sum(&sq)
}
