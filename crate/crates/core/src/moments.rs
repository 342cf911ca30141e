//! Geometric moments of planar regions and closed solids.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::numeric::{binomial, factorial, pairwise_sum};
use crate::shapes::{ClosedProfile2D, TriangleMesh};
use crate::slicing::{section_area, Axis};
use crate::{Error, Result};

pub const MAX_ORDER: u32 = 16;
/// `|M0|` at or below this is treated as an empty region.
pub const ZERO_MEASURE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MomentVariant {
    Raw,
    Central,
    CentralScaleNormalised,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub order_max: u32,
    pub dim: u32,
    pub variant: MomentVariant,
    /// Exponents in graded lexicographic order; `r = 0` throughout for 2D.
    pub exponents: Vec<[u32; 3]>,
    pub values: Vec<f64>,
}

/// All exponent tuples of total order `<= s`, grouped by order and, within an
/// order, with `p` then `q` descending.
pub fn exponents(s: u32, dim: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for t in 0..=s {
        for p in (0..=t).rev() {
            if dim == 2 {
                out.push([p, t - p, 0]);
            } else {
                for q in (0..=t - p).rev() {
                    out.push([p, q, t - p - q]);
                }
            }
        }
    }
    out
}

/// Number of moments of order `<= s`, optionally without the first-order ones.
pub fn cardinality(s: u32, dim: u32, exclude_first: bool) -> usize {
    let s = s as usize;
    let (n, first) = if dim == 2 {
        ((s + 1) * (s + 2) / 2, 2)
    } else {
        ((s + 1) * (s + 2) * (s + 3) / 6, 3)
    };
    if exclude_first && s >= 1 {
        n - first
    } else {
        n
    }
}

impl MomentVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn m0(&self) -> f64 {
        self.values[0]
    }

    pub fn get(&self, p: u32, q: u32, r: u32) -> Option<f64> {
        self.exponents
            .iter()
            .position(|e| *e == [p, q, r])
            .map(|i| self.values[i])
    }

    /// `"p,q"` in 2D, `"p,q,r"` in 3D.
    pub fn key(&self, i: usize) -> String {
        let [p, q, r] = self.exponents[i];
        if self.dim == 2 {
            format!("{p},{q}")
        } else {
            format!("{p},{q},{r}")
        }
    }

    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        (0..self.len())
            .map(|i| (self.key(i), serde_json::json!(self.values[i])))
            .collect()
    }

    fn index(&self) -> HashMap<[u32; 3], usize> {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect()
    }

    fn check_measure(&self) -> Result<f64> {
        let m0 = self.m0();
        if m0.abs() <= ZERO_MEASURE || !m0.is_finite() {
            return Err(Error::ZeroMeasure { m0 });
        }
        Ok(m0)
    }

    pub fn centroid(&self) -> Result<[f64; 3]> {
        let m0 = self.check_measure()?;
        let mut c = [0.0; 3];
        for (k, ck) in c.iter_mut().enumerate().take(self.dim as usize) {
            let mut e = [0; 3];
            e[k] = 1;
            *ck = self.get(e[0], e[1], e[2]).unwrap_or(0.0) / m0;
        }
        Ok(c)
    }

    /// Moments about the centroid, by the binomial shift law.
    pub fn to_central(&self) -> Result<MomentVector> {
        if self.variant != MomentVariant::Raw {
            return Err(Error::InvalidArgument(
                "central moments require a RAW moment vector".into(),
            ));
        }
        let c = if self.order_max == 0 {
            self.check_measure()?;
            [0.0; 3]
        } else {
            self.centroid()?
        };
        let mut out = self.clone();
        out.values = shift(self, [-c[0], -c[1], -c[2]]);
        out.variant = MomentVariant::Central;
        Ok(out)
    }

    /// Each entry divided by `M0^(1 + s/dim)`, `s` the entry's own order.
    pub fn to_scale_normalised(&self) -> Result<MomentVector> {
        if self.variant != MomentVariant::Central {
            return Err(Error::InvalidArgument(
                "scale normalisation requires a CENTRAL moment vector".into(),
            ));
        }
        let m0 = self.check_measure()?;
        let mut out = self.clone();
        for (v, e) in out.values.iter_mut().zip(&self.exponents) {
            let s = (e[0] + e[1] + e[2]) as f64;
            *v /= m0.powf(1.0 + s / self.dim as f64);
        }
        out.values[0] = 1.0;
        out.variant = MomentVariant::CentralScaleNormalised;
        Ok(out)
    }
}

/// Raw moments of the region translated by `d`.
pub fn shift(mv: &MomentVector, d: [f64; 3]) -> Vec<f64> {
    let idx = mv.index();
    mv.exponents
        .iter()
        .map(|&[p, q, r]| {
            let mut terms = Vec::new();
            for i in 0..=p {
                for j in 0..=q {
                    for k in 0..=r {
                        let w = binomial(p, i)
                            * binomial(q, j)
                            * binomial(r, k)
                            * d[0].powi((p - i) as i32)
                            * d[1].powi((q - j) as i32)
                            * d[2].powi((r - k) as i32);
                        terms.push(w * mv.values[idx[&[i, j, k]]]);
                    }
                }
            }
            pairwise_sum(&terms)
        })
        .collect()
}

fn check_order(s: u32) -> Result<()> {
    if s > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: s });
    }
    Ok(())
}

/// `w[a][b] = a! b! / (a + b + 2)!`, the integral of `u^a v^b` over the
/// reference triangle.
fn simplex_weights_2d(s: u32) -> Vec<Vec<f64>> {
    (0..=s)
        .map(|a| {
            (0..=s)
                .map(|b| factorial(a) * factorial(b) / factorial(a + b + 2))
                .collect()
        })
        .collect()
}

fn powers(x: f64, n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= x;
    }
    out
}

/// Area moments `M^{p,q}`, exact, from the fan of triangles `(0, a, b)` over
/// each boundary edge.
pub fn moments_2d(profile: &ClosedProfile2D, s: u32) -> Result<MomentVector> {
    check_order(s)?;
    let exps = exponents(s, 2);
    let w = simplex_weights_2d(s);
    let mut per_moment: Vec<Vec<f64>> = vec![Vec::with_capacity(profile.len()); exps.len()];
    for (a, b) in profile.edges() {
        let det = a[0] * b[1] - b[0] * a[1];
        let (x1, x2, y1, y2) = (powers(a[0], s), powers(b[0], s), powers(a[1], s), powers(b[1], s));
        for (m, &[p, q, _]) in exps.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..=p {
                let cx = binomial(p, i) * x1[i as usize] * x2[(p - i) as usize];
                for j in 0..=q {
                    let cy = binomial(q, j) * y1[j as usize] * y2[(q - j) as usize];
                    acc += cx * cy * w[(i + j) as usize][(p + q - i - j) as usize];
                }
            }
            per_moment[m].push(det * acc);
        }
    }
    let mut values: Vec<f64> = per_moment.iter().map(|t| pairwise_sum(t)).collect();
    if values[0] < 0.0 {
        values.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(MomentVector {
        order_max: s,
        dim: 2,
        variant: MomentVariant::Raw,
        exponents: exps,
        values,
    })
}

fn check_closed(mesh: &TriangleMesh) -> Result<()> {
    let (open, non_manifold) = mesh.boundary_counts();
    if open > 0 || non_manifold > 0 {
        return Err(Error::NotWatertight {
            open_edges: open,
            non_manifold_edges: non_manifold,
        });
    }
    Ok(())
}

/// Coefficients of `(c0 l0 + c1 l1 + c2 l2)^n` in barycentric monomials,
/// indexed `[a0][a1]` with `a2 = n - a0 - a1`.
fn trinomial(c: [f64; 3], n: u32) -> Vec<(u32, u32, u32, f64)> {
    let p: Vec<Vec<f64>> = c.iter().map(|&x| powers(x, n)).collect();
    let mut out = Vec::new();
    for a0 in 0..=n {
        for a1 in 0..=n - a0 {
            let a2 = n - a0 - a1;
            let coeff = factorial(n) / (factorial(a0) * factorial(a1) * factorial(a2))
                * p[0][a0 as usize]
                * p[1][a1 as usize]
                * p[2][a2 as usize];
            out.push((a0, a1, a2, coeff));
        }
    }
    out
}

/// Volume moments by the divergence theorem along `axis`:
/// `M^{e} = 1/(e_axis + 1) * surface integral of x_axis^{e_axis+1} (other
/// monomials) n_axis dA`, each triangle integrated exactly.
pub fn moments_3d_along(mesh: &TriangleMesh, s: u32, axis: Axis) -> Result<MomentVector> {
    check_order(s)?;
    check_closed(mesh)?;
    let exps = exponents(s, 3);
    let ax = axis.index();
    let deg = s + 1;
    let fact: Vec<f64> = (0..=deg + 2).map(factorial).collect();
    let mut per_moment: Vec<Vec<f64>> = vec![Vec::with_capacity(mesh.faces().len()); exps.len()];
    for f in 0..mesh.faces().len() {
        let v = mesh.face_vertices(f);
        let n = mesh.face_normal(f)[ax];
        // tables[c][power] for each coordinate.
        let tables: Vec<Vec<Vec<(u32, u32, u32, f64)>>> = (0..3)
            .map(|c| (0..=deg).map(|k| trinomial([v[0][c], v[1][c], v[2][c]], k)).collect())
            .collect();
        for (m, e) in exps.iter().enumerate() {
            let mut pw = *e;
            pw[ax] += 1;
            let total = pw[0] + pw[1] + pw[2];
            let norm = fact[(total + 2) as usize];
            let mut acc = 0.0;
            for &(a0, a1, a2, ca) in &tables[0][pw[0] as usize] {
                for &(b0, b1, b2, cb) in &tables[1][pw[1] as usize] {
                    let cab = ca * cb;
                    for &(c0, c1, c2, cc) in &tables[2][pw[2] as usize] {
                        acc += cab
                            * cc
                            * fact[(a0 + b0 + c0) as usize]
                            * fact[(a1 + b1 + c1) as usize]
                            * fact[(a2 + b2 + c2) as usize];
                    }
                }
            }
            per_moment[m].push(n * acc / norm / (e[ax] + 1) as f64);
        }
    }
    Ok(MomentVector {
        order_max: s,
        dim: 3,
        variant: MomentVariant::Raw,
        exponents: exps,
        values: per_moment.iter().map(|t| pairwise_sum(t)).collect(),
    })
}

/// Volume moments `M^{p,q,r}` of a closed, outward-oriented mesh.
pub fn moments_3d(mesh: &TriangleMesh, s: u32) -> Result<MomentVector> {
    moments_3d_along(mesh, s, Axis::X)
}

/// Sectional-area samples `S(x_k)` on `n` planes spanning the x-extent.
pub fn sectional_area_curve(mesh: &TriangleMesh, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = mesh.bounds();
    let xs: Vec<f64> = (0..n)
        .map(|k| lo[0] + (hi[0] - lo[0]) * k as f64 / (n - 1) as f64)
        .collect();
    let areas = xs.iter().map(|&x| section_area(mesh, Axis::X, x)).collect();
    (xs, areas)
}

/// `m_p = integral of x^p S'(x) dx` from a sectional-area curve, by
/// trapezoidal quadrature of the forward differences of `S`, summed by parts
/// with `S` taken as zero at both ends.
pub fn sac_moment(xs: &[f64], areas: &[f64], p: u32) -> f64 {
    let n = xs.len();
    let w: Vec<f64> = (0..n - 1)
        .map(|k| 0.5 * (xs[k].powi(p as i32) + xs[k + 1].powi(p as i32)))
        .collect();
    let terms: Vec<f64> = (1..n - 1).map(|k| areas[k] * (w[k - 1] - w[k])).collect();
    pairwise_sum(&terms)
}

/// `|m_p + p M^{p-1,0,0}| / max(|m_p|, 1e-30)`.
pub fn sac_moment_identity_residual(mesh: &TriangleMesh, p: u32, n_sections: usize) -> Result<f64> {
    check_closed(mesh)?;
    if n_sections < 3 {
        return Err(Error::InvalidArgument("at least 3 sections are needed".into()));
    }
    let (xs, areas) = sectional_area_curve(mesh, n_sections);
    let max = areas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let ends = areas[0].abs().max(areas[n_sections - 1].abs());
    if max == 0.0 || ends >= 1e-6 * max {
        return Err(Error::AssumptionViolated(format!(
            "end sections have area {ends:e} against a maximum of {max:e}"
        )));
    }
    let m_p = sac_moment(&xs, &areas, p);
    let expected = if p == 0 {
        0.0
    } else {
        let mv = moments_3d(mesh, p - 1)?;
        -(p as f64) * mv.get(p - 1, 0, 0).unwrap()
    };
    Ok((m_p - expected).abs() / m_p.abs().max(1e-30))
}
