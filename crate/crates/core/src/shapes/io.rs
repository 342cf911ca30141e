//! UIUC `.dat` (Selig ordering), OBJ and STL readers and writers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{ClosedProfile2D, TriangleMesh};
use crate::error::{Error, Result};
use crate::numeric::vec3::{cross, norm, sub};

/// STL vertices closer than this (per coordinate) are merged.
pub const STL_MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    StlAscii,
    StlBinary,
}

impl MeshFormat {
    /// Picks a format from the file extension, sniffing STL content for the
    /// ASCII `solid ... facet` layout.
    pub fn detect(path: &Path, bytes: &[u8]) -> Option<MeshFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "obj" => Some(MeshFormat::Obj),
            "stl" => {
                let head = String::from_utf8_lossy(&bytes[..bytes.len().min(512)]).to_string();
                if head.trim_start().starts_with("solid") && head.contains("facet") {
                    Some(MeshFormat::StlAscii)
                } else {
                    Some(MeshFormat::StlBinary)
                }
            }
            _ => None,
        }
    }
}

/// Round-trip float formatting used by every text writer in the crate.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Parses a Selig-ordered `.dat` file: a name line followed by `x y` rows.
///
/// The returned loop is counter-clockwise, with a repeated closing point
/// and consecutive duplicates removed.
pub fn load_uiuc_dat(text: &str) -> Result<(String, ClosedProfile2D)> {
    let mut lines = text.lines().enumerate();
    let name = lines
        .next()
        .map(|(_, l)| l.trim().to_string())
        .unwrap_or_default();
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 coordinates, found {}", toks.len()),
            });
        }
        let mut xy = [0.0; 2];
        for (slot, tok) in xy.iter_mut().zip(&toks) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("not a number: {tok:?}"),
                })?;
        }
        if pts.last().is_some_and(|p| same_point(*p, xy)) {
            continue;
        }
        pts.push(xy);
    }
    if pts.len() >= 2 && same_point(pts[0], pts[pts.len() - 1]) {
        pts.pop();
    }
    if pts.len() < 3 {
        return Err(Error::TooFewPoints { found: pts.len() });
    }
    Ok((name, ClosedProfile2D::new_ccw(pts)?))
}

fn same_point(a: [f64; 2], b: [f64; 2]) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-12
}

pub fn read_uiuc_dat(path: &Path) -> Result<(String, ClosedProfile2D)> {
    let text = std::fs::read_to_string(path)?;
    load_uiuc_dat(&text)
}

pub fn write_uiuc_dat(name: &str, profile: &ClosedProfile2D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{name}");
    for p in profile.points() {
        let _ = writeln!(out, "{} {}", fmt_f64(p[0]), fmt_f64(p[1]));
    }
    out
}

pub fn load_mesh(path: &Path, format: MeshFormat) -> Result<TriangleMesh> {
    let bytes = std::fs::read(path)?;
    parse_mesh(&bytes, format)
}

pub fn parse_mesh(bytes: &[u8], format: MeshFormat) -> Result<TriangleMesh> {
    match format {
        MeshFormat::Obj => parse_obj(&utf8(bytes)?),
        MeshFormat::StlAscii => parse_stl_ascii(&utf8(bytes)?),
        MeshFormat::StlBinary => parse_stl_binary(bytes),
    }
}

fn utf8(bytes: &[u8]) -> Result<String> {
    String::from_utf8(bytes.to_vec()).map_err(|e| Error::Parse {
        line: 0,
        message: format!("invalid UTF-8: {e}"),
    })
}

fn parse_float(tok: Option<&str>, line: usize) -> Result<f64> {
    tok.and_then(|t| t.parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected a number, found {tok:?}"),
        })
}

/// OBJ subset: `v` and triangular `f` records; other records are ignored.
pub fn parse_obj(text: &str) -> Result<TriangleMesh> {
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let x = parse_float(toks.next(), line_no)?;
                let y = parse_float(toks.next(), line_no)?;
                let z = parse_float(toks.next(), line_no)?;
                verts.push([x, y, z]);
            }
            Some("f") => {
                let refs: Vec<&str> = toks.collect();
                if refs.len() != 3 {
                    return Err(Error::NonTriangularFace {
                        line: line_no,
                        arity: refs.len(),
                    });
                }
                let mut face = [0usize; 3];
                for (slot, r) in face.iter_mut().zip(&refs) {
                    let idx: i64 = r
                        .split('/')
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: format!("bad vertex reference {r:?}"),
                        })?;
                    let resolved = if idx > 0 {
                        idx - 1
                    } else {
                        verts.len() as i64 + idx
                    };
                    if resolved < 0 || resolved as usize >= verts.len() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("vertex reference {idx} out of range"),
                        });
                    }
                    *slot = resolved as usize;
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    TriangleMesh::new(verts, faces)
}

pub fn parse_stl_ascii(text: &str) -> Result<TriangleMesh> {
    let mut soup: Vec<[f64; 3]> = Vec::new();
    let mut in_facet = 0usize;
    let mut facet_line = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            Some("facet") => {
                in_facet = 0;
                facet_line = line_no;
            }
            Some("vertex") => {
                let x = parse_float(toks.next(), line_no)?;
                let y = parse_float(toks.next(), line_no)?;
                let z = parse_float(toks.next(), line_no)?;
                soup.push([x, y, z]);
                in_facet += 1;
            }
            Some("endfacet") => {
                if in_facet != 3 {
                    return Err(Error::Parse {
                        line: facet_line,
                        message: format!("facet has {in_facet} vertices"),
                    });
                }
            }
            _ => {}
        }
    }
    if soup.len() % 3 != 0 {
        return Err(Error::Parse {
            line: 0,
            message: "truncated facet list".into(),
        });
    }
    merge_soup(&soup)
}

pub fn parse_stl_binary(bytes: &[u8]) -> Result<TriangleMesh> {
    if bytes.len() < 84 {
        return Err(Error::Parse {
            line: 0,
            message: "binary STL shorter than its 84-byte header".into(),
        });
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().expect("4 bytes")) as usize;
    let needed = 84 + 50 * count;
    if bytes.len() < needed {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected {needed} bytes for {count} facets, found {}", bytes.len()),
        });
    }
    let f32_at = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().expect("4 bytes")) as f64;
    let mut soup = Vec::with_capacity(3 * count);
    for t in 0..count {
        let base = 84 + 50 * t + 12;
        for k in 0..3 {
            let o = base + 12 * k;
            soup.push([f32_at(o), f32_at(o + 4), f32_at(o + 8)]);
        }
    }
    merge_soup(&soup)
}

/// Deduplicates a triangle soup with a hashed grid of cell size
/// [`STL_MERGE_TOLERANCE`]; the first occurrence of a vertex keeps its index.
fn merge_soup(soup: &[[f64; 3]]) -> Result<TriangleMesh> {
    let tol = STL_MERGE_TOLERANCE;
    let cell = |v: [f64; 3]| {
        (
            (v[0] / tol).floor() as i64,
            (v[1] / tol).floor() as i64,
            (v[2] / tol).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    let mut verts: Vec<[f64; 3]> = Vec::new();
    let mut remap = Vec::with_capacity(soup.len());
    for &v in soup {
        let (cx, cy, cz) = cell(v);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &id in ids {
                            let w = verts[id];
                            if (0..3).all(|k| (w[k] - v[k]).abs() <= tol) {
                                found = Some(id);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let id = found.unwrap_or_else(|| {
            verts.push(v);
            grid.entry((cx, cy, cz)).or_default().push(verts.len() - 1);
            verts.len() - 1
        });
        remap.push(id);
    }
    let faces = remap
        .chunks(3)
        .map(|c| [c[0], c[1], c[2]])
        .filter(|f| f[0] != f[1] && f[1] != f[2] && f[0] != f[2])
        .collect();
    TriangleMesh::new(verts, faces)
}

pub fn write_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in mesh.vertices() {
        let _ = writeln!(out, "v {} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]));
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

fn unit_normal(mesh: &TriangleMesh, f: usize) -> [f64; 3] {
    let [a, b, c] = mesh.face_vertices(f);
    let n = cross(sub(b, a), sub(c, a));
    let len = norm(n);
    if len > 0.0 {
        [n[0] / len, n[1] / len, n[2] / len]
    } else {
        [0.0; 3]
    }
}

pub fn write_stl_ascii(mesh: &TriangleMesh, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "solid {name}");
    for f in 0..mesh.faces().len() {
        let n = unit_normal(mesh, f);
        let _ = writeln!(out, "  facet normal {} {} {}", fmt_f64(n[0]), fmt_f64(n[1]), fmt_f64(n[2]));
        let _ = writeln!(out, "    outer loop");
        for v in mesh.face_vertices(f) {
            let _ = writeln!(out, "      vertex {} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]));
        }
        let _ = writeln!(out, "    endloop");
        let _ = writeln!(out, "  endfacet");
    }
    let _ = writeln!(out, "endsolid {name}");
    out
}

pub fn write_stl_binary(mesh: &TriangleMesh) -> Vec<u8> {
    let n = mesh.faces().len();
    let mut out = Vec::with_capacity(84 + 50 * n);
    let mut header = [0u8; 80];
    let tag = b"geoop binary stl";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for f in 0..n {
        for c in unit_normal(mesh, f) {
            out.extend_from_slice(&(c as f32).to_le_bytes());
        }
        for v in mesh.face_vertices(f) {
            for c in v {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}
