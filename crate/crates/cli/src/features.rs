//! Reading and writing `features.csv` with its `sidecar.json`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use geoop::featureset::{column_names, flatten, ComboSpec, GoConfig, GoVector};
use geoop::moments::{MomentVariant, MomentVector};

use crate::output::{fmt_f64, parse_f64, read_csv};
use crate::CliError;

pub const FEATURES_FILE: &str = "features.csv";
pub const SIDECAR_FILE: &str = "sidecar.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Raw aerofoil design vector in `[0, 1]^11`.
    AirfoilParams,
    /// Interleaved profile coordinates.
    Coordinates,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSidecar {
    pub dim: u8,
    pub param_kind: ParamKind,
    pub param_columns: usize,
    pub columns: Vec<String>,
    pub moment_order: u32,
    pub moment_variant: MomentVariant,
    pub go: GoConfig,
    pub n_inputs: usize,
    pub n_ok: usize,
    pub n_failed: usize,
}

/// The combination written to `features.csv`: `P` only when every record
/// carries a parameter vector of the same length.
pub fn table_combo(gos: &[GoVector]) -> ComboSpec {
    let n0 = gos.first().and_then(|g| g.p.as_ref()).map(Vec::len);
    let same = n0.is_some() && gos.iter().all(|g| g.p.as_ref().map(Vec::len) == n0);
    ComboSpec {
        include_p: same,
        include_m: true,
        include_k: true,
        include_ft: true,
    }
}

pub fn table(gos: &[GoVector]) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let combo = table_combo(gos);
    let Some(first) = gos.first() else {
        return Ok((vec!["design_id".into()], Vec::new()));
    };
    let mut header = vec!["design_id".to_string()];
    header.extend(column_names(first, &combo).map_err(CliError::from_core)?);
    let mut rows = Vec::with_capacity(gos.len());
    for g in gos {
        let mut row = vec![g.design_id.clone()];
        row.extend(flatten(g, &combo).map_err(CliError::from_core)?.into_iter().map(fmt_f64));
        rows.push(row);
    }
    Ok((header, rows))
}

enum Column {
    P,
    M([u32; 3]),
    K,
    Ft,
}

fn parse_column(name: &str) -> Option<(Column, u8)> {
    match name {
        "K" => return Some((Column::K, 0)),
        "FT" => return Some((Column::Ft, 0)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('p') {
        return rest.parse::<usize>().ok().map(|_| (Column::P, 0));
    }
    let rest = name.strip_prefix("M_")?;
    let parts: Vec<u32> = rest.split('_').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    match parts.as_slice() {
        [p, q] => Some((Column::M([*p, *q, 0]), 2)),
        [p, q, r] => Some((Column::M([*p, *q, *r]), 3)),
        _ => None,
    }
}

pub fn sidecar_path(features: &Path) -> PathBuf {
    features.with_file_name(SIDECAR_FILE)
}

/// Records from a features table; the neighbouring sidecar, if present,
/// supplies the moment variant.
pub fn load_features(path: &Path) -> Result<(Vec<GoVector>, Option<FeatureSidecar>), CliError> {
    let table = read_csv(path)?;
    let sidecar: Option<FeatureSidecar> = match std::fs::read_to_string(sidecar_path(path)) {
        Ok(text) => Some(
            serde_json::from_str(&text)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", sidecar_path(path).display())))?,
        ),
        Err(_) => None,
    };
    if table.header.first().map(String::as_str) != Some("design_id") {
        return Err(CliError::Runtime(format!("{}: first column must be design_id", path.display())));
    }
    let mut cols = Vec::new();
    let mut dim = 0u8;
    for name in &table.header[1..] {
        let (c, d) = parse_column(name)
            .ok_or_else(|| CliError::Runtime(format!("{}: unknown column {name:?}", path.display())))?;
        if d != 0 {
            if dim != 0 && dim != d {
                return Err(CliError::Runtime(format!("{}: mixed moment dimensions", path.display())));
            }
            dim = d;
        }
        cols.push(c);
    }
    let exponents: Vec<[u32; 3]> = cols
        .iter()
        .filter_map(|c| if let Column::M(e) = c { Some(*e) } else { None })
        .collect();
    let has_p = cols.iter().any(|c| matches!(c, Column::P));
    let has_k = cols.iter().any(|c| matches!(c, Column::K));
    let has_ft = cols.iter().any(|c| matches!(c, Column::Ft));
    let order_max = exponents.iter().map(|e| e.iter().sum()).max().unwrap_or(0);
    let variant = sidecar.as_ref().map_or(MomentVariant::Raw, |s| s.moment_variant);
    let mut gos = Vec::with_capacity(table.rows.len());
    for (line, row) in table.rows.iter().enumerate() {
        if row.len() != table.header.len() {
            return Err(CliError::Runtime(format!("{}: row {} has {} fields", path.display(), line + 1, row.len())));
        }
        let (mut p, mut m, mut k, mut ft) = (Vec::new(), Vec::new(), None, None);
        for (c, s) in cols.iter().zip(&row[1..]) {
            let v = parse_f64(s, path, line + 1)?;
            match c {
                Column::P => p.push(v),
                Column::M(_) => m.push(v),
                Column::K => k = Some(v),
                Column::Ft => ft = Some(v),
            }
        }
        gos.push(GoVector {
            design_id: row[0].clone(),
            p: has_p.then_some(p),
            m: (!exponents.is_empty()).then(|| MomentVector {
                order_max,
                dim: u32::from(dim),
                variant,
                exponents: exponents.clone(),
                values: m,
            }),
            k: if has_k { k } else { None },
            ft: if has_ft { ft } else { None },
        });
    }
    Ok((gos, sidecar))
}
