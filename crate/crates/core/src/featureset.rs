//! Geometric-operator records, design matrices and space-filling samples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{total_curvature_mesh, total_curvature_profile};
use crate::fourier::{planar_fd, resample_arclength, sectional_fd_3d};
use crate::moments::{moments_2d, moments_3d, MomentVariant, MomentVector};
use crate::shapes::{Design, UNIFORM_CARDINALITY};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoConfig {
    pub moment_order: u32,
    pub moment_variant: MomentVariant,
    /// Profiles with a different point count are resampled to this first.
    pub profile_points: usize,
    pub fd_samples: usize,
    pub fd_sections: usize,
    pub fd_per_section: usize,
    pub fd_include_dc: bool,
}

impl Default for GoConfig {
    fn default() -> Self {
        GoConfig {
            moment_order: 4,
            moment_variant: MomentVariant::Raw,
            profile_points: UNIFORM_CARDINALITY,
            fd_samples: 256,
            fd_sections: 16,
            fd_per_section: 64,
            fd_include_dc: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoVector {
    pub design_id: String,
    pub p: Option<Vec<f64>>,
    pub m: Option<MomentVector>,
    pub k: Option<f64>,
    pub ft: Option<f64>,
}

impl GoVector {
    pub fn moments(&self) -> Result<&MomentVector> {
        self.m.as_ref().ok_or_else(|| self.missing("M"))
    }

    fn missing(&self, component: &str) -> Error {
        Error::MissingComponent {
            design_id: self.design_id.clone(),
            component: component.into(),
        }
    }
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NanInput)
    }
}

fn assemble_inner(design: &Design, params: Option<&[f64]>, config: &GoConfig) -> Result<GoVector> {
    let (p, m, k, ft) = match design {
        Design::Profile(profile) => {
            let profile = if profile.len() == config.profile_points {
                profile.clone().into_ccw()
            } else {
                profile.clone().into_ccw().resampled(config.profile_points)?
            };
            let p = match params {
                Some(x) => x.to_vec(),
                None => Design::Profile(profile.clone()).flattened_coordinates(),
            };
            let m = moments_2d(&profile, config.moment_order)?;
            let k = total_curvature_profile(&profile);
            let sig = resample_arclength(&profile, config.fd_samples)?;
            let ft = planar_fd(&sig).total_energy(config.fd_include_dc);
            (p, m, k, ft)
        }
        Design::Mesh(mesh) => {
            let p = match params {
                Some(x) => x.to_vec(),
                None => design.flattened_coordinates(),
            };
            let m = moments_3d(mesh, config.moment_order)?;
            let k = total_curvature_mesh(mesh)?.total_curvature;
            let grid = sectional_fd_3d(mesh, config.fd_sections, config.fd_per_section)?;
            (p, m, k, grid.total_energy(config.fd_include_dc))
        }
    };
    let m = match config.moment_variant {
        MomentVariant::Raw => m,
        MomentVariant::Central => m.to_central()?,
        MomentVariant::CentralScaleNormalised => m.to_central()?.to_scale_normalised()?,
    };
    finite(&p)?;
    finite(&m.values)?;
    finite(&[k, ft])?;
    Ok(GoVector {
        design_id: String::new(),
        p: Some(p),
        m: Some(m),
        k: Some(k),
        ft: Some(ft),
    })
}

/// `GO = (P, M, K, F_T)` for one design. `P` is `params` when given, else the
/// flattened coordinates of the (resampled) discretisation.
pub fn assemble_go(
    design_id: &str,
    design: &Design,
    params: Option<&[f64]>,
    config: &GoConfig,
) -> Result<GoVector> {
    let mut go = assemble_inner(design, params, config).map_err(|e| e.with_design(design_id))?;
    go.design_id = design_id.to_string();
    Ok(go)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComboSpec {
    pub include_p: bool,
    pub include_m: bool,
    pub include_k: bool,
    pub include_ft: bool,
}

impl ComboSpec {
    pub fn new(include_p: bool, include_m: bool, include_k: bool, include_ft: bool) -> Result<Self> {
        if !(include_p || include_m || include_k || include_ft) {
            return Err(Error::InvalidArgument("a combination needs at least one component".into()));
        }
        Ok(ComboSpec {
            include_p,
            include_m,
            include_k,
            include_ft,
        })
    }

    /// Parses labels such as `P`, `P+M`, `M+K+FT`.
    pub fn parse(label: &str) -> Result<Self> {
        let mut flags = [false; 4];
        for part in label.split('+').map(str::trim) {
            let i = match part.to_ascii_uppercase().as_str() {
                "P" => 0,
                "M" => 1,
                "K" => 2,
                "FT" | "F" => 3,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown component {part:?} in combination {label:?}"
                    )))
                }
            };
            if flags[i] {
                return Err(Error::InvalidArgument(format!("repeated component in {label:?}")));
            }
            flags[i] = true;
        }
        ComboSpec::new(flags[0], flags[1], flags[2], flags[3])
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for (on, name) in [
            (self.include_p, "P"),
            (self.include_m, "M"),
            (self.include_k, "K"),
            (self.include_ft, "FT"),
        ] {
            if on {
                parts.push(name);
            }
        }
        parts.join("+")
    }

    pub fn union(&self, other: &ComboSpec) -> ComboSpec {
        ComboSpec {
            include_p: self.include_p || other.include_p,
            include_m: self.include_m || other.include_m,
            include_k: self.include_k || other.include_k,
            include_ft: self.include_ft || other.include_ft,
        }
    }

    /// The seven non-empty combinations of `(M, K, F_T)`.
    pub fn go_only() -> Vec<ComboSpec> {
        ["M", "K", "FT", "M+K", "M+FT", "K+FT", "M+K+FT"]
            .iter()
            .map(|l| ComboSpec::parse(l).unwrap())
            .collect()
    }

    /// `P` alone and `P` joined with each combination of `(M, K, F_T)`.
    pub fn with_parameters() -> Vec<ComboSpec> {
        std::iter::once(ComboSpec::parse("P").unwrap())
            .chain(ComboSpec::go_only().into_iter().map(|c| ComboSpec { include_p: true, ..c }))
            .collect()
    }
}

impl std::fmt::Display for ComboSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Per-column z-score constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardisation {
    pub mean: Vec<f64>,
    /// Population standard deviation; constant columns carry 1.
    pub std: Vec<f64>,
}

impl Standardisation {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let d = rows.first().map_or(0, |r| r.len());
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        let mut std = vec![0.0; d];
        for j in 0..d {
            let mu = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            mean[j] = mu;
            std[j] = if sd == 0.0 || sd <= 1e-12 * mu.abs() { 1.0 } else { sd };
        }
        Standardisation { mean, std }
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }

    pub fn invert(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(z, (m, s))| z * s + m)
            .collect()
    }

    pub fn select(&self, columns: &[usize]) -> Standardisation {
        Standardisation {
            mean: columns.iter().map(|&j| self.mean[j]).collect(),
            std: columns.iter().map(|&j| self.std[j]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub combo: ComboSpec,
    pub design_ids: Vec<String>,
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub standardisation: Option<Standardisation>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Keeps the named columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> DesignMatrix {
        DesignMatrix {
            combo: self.combo,
            design_ids: self.design_ids.clone(),
            column_names: columns.iter().map(|&j| self.column_names[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&j| r[j]).collect())
                .collect(),
            standardisation: self.standardisation.as_ref().map(|s| s.select(columns)),
        }
    }

    pub fn standardised(&self) -> DesignMatrix {
        let st = Standardisation::fit(&self.rows);
        DesignMatrix {
            rows: self.rows.iter().map(|r| st.apply(r)).collect(),
            standardisation: Some(st),
            ..self.clone()
        }
    }

    pub fn subset_rows(&self, idx: &[usize]) -> DesignMatrix {
        DesignMatrix {
            design_ids: idx.iter().map(|&i| self.design_ids[i].clone()).collect(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            ..self.clone()
        }
    }
}

/// Column names `p0..`, `M_p_q[_r]`, `K`, `FT`.
pub fn column_names(go: &GoVector, combo: &ComboSpec) -> Result<Vec<String>> {
    let mut names = Vec::new();
    if combo.include_p {
        let p = go.p.as_ref().ok_or_else(|| go.missing("P"))?;
        names.extend((0..p.len()).map(|i| format!("p{i}")));
    }
    if combo.include_m {
        let m = go.moments()?;
        names.extend((0..m.len()).map(|i| format!("M_{}", m.key(i).replace(',', "_"))));
    }
    if combo.include_k {
        names.push("K".into());
    }
    if combo.include_ft {
        names.push("FT".into());
    }
    Ok(names)
}

/// The combination's features of one record, in `P, M, K, F_T` order.
pub fn flatten(go: &GoVector, combo: &ComboSpec) -> Result<Vec<f64>> {
    let mut row = Vec::new();
    if combo.include_p {
        row.extend_from_slice(go.p.as_ref().ok_or_else(|| go.missing("P"))?);
    }
    if combo.include_m {
        row.extend_from_slice(&go.moments()?.values);
    }
    if combo.include_k {
        row.push(go.k.ok_or_else(|| go.missing("K"))?);
    }
    if combo.include_ft {
        row.push(go.ft.ok_or_else(|| go.missing("FT"))?);
    }
    Ok(row)
}

pub fn build_matrix(gos: &[GoVector], combo: ComboSpec, standardise: bool) -> Result<DesignMatrix> {
    let first = gos
        .first()
        .ok_or_else(|| Error::InvalidArgument("no records to build a matrix from".into()))?;
    let column_names = column_names(first, &combo)?;
    let mut rows = Vec::with_capacity(gos.len());
    for go in gos {
        let row = flatten(go, &combo)?;
        if row.len() != column_names.len() {
            return Err(Error::DimensionMismatch {
                expected: column_names.len(),
                found: row.len(),
            }
            .with_design(&go.design_id));
        }
        rows.push(row);
    }
    let m = DesignMatrix {
        combo,
        design_ids: gos.iter().map(|g| g.design_id.clone()).collect(),
        column_names,
        rows,
        standardisation: None,
    };
    Ok(if standardise { m.standardised() } else { m })
}

/// `sign(x) log10(1 + |x|)`.
pub fn signed_log(x: f64) -> f64 {
    x.signum() * (1.0 + x.abs()).log10()
}

/// Latin-hypercube sample of `n` points in `[0, 1)^dim`: each coordinate puts
/// exactly one point in every stratum `[k/n, (k+1)/n)`.
pub fn lhs_sample(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![0.0; dim]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..dim {
        perm.shuffle(&mut rng);
        for (i, row) in out.iter_mut().enumerate() {
            let u: f64 = rng.random();
            let lo = perm[i] as f64 / n as f64;
            let hi = (perm[i] + 1) as f64 / n as f64;
            let mut x = (perm[i] as f64 + u) / n as f64;
            if x >= hi {
                x = hi.next_down();
            }
            row[j] = x.max(lo);
        }
    }
    out
}
