//! Planar cross-sections of closed triangle meshes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numeric::pairwise_sum;
use crate::shapes::TriangleMesh;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// In-plane coordinates, cyclic so that `(u, v, axis)` is right-handed.
    pub fn plane_indices(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [2, 0],
            Axis::Z => [0, 1],
        }
    }
}

type EdgeKey = (usize, usize);

/// One triangle's piece of a section: it leaves the solid's surface through
/// `from` edge and re-enters through `to`, traversed counter-clockwise when
/// viewed from the positive axis.
#[derive(Debug, Clone, Copy)]
struct Segment {
    from: EdgeKey,
    to: EdgeKey,
    a: [f64; 2],
    b: [f64; 2],
}

fn edge_point(mesh: &TriangleMesh, key: EdgeKey, axis: Axis, level: f64) -> [f64; 2] {
    let v = mesh.vertices();
    let (p, q) = (v[key.0], v[key.1]);
    let k = axis.index();
    let t = (level - p[k]) / (q[k] - p[k]);
    let [i, j] = axis.plane_indices();
    [p[i] + t * (q[i] - p[i]), p[j] + t * (q[j] - p[j])]
}

fn segments(mesh: &TriangleMesh, axis: Axis, level: f64) -> Vec<Segment> {
    let k = axis.index();
    let v = mesh.vertices();
    let mut out = Vec::new();
    for face in mesh.faces() {
        let above = face.map(|i| v[i][k] >= level);
        if above[0] == above[1] && above[1] == above[2] {
            continue;
        }
        let mut up = None;
        let mut down = None;
        for e in 0..3 {
            let (s, t) = (face[e], face[(e + 1) % 3]);
            let key = (s.min(t), s.max(t));
            match (above[e], above[(e + 1) % 3]) {
                (false, true) => up = Some(key),
                (true, false) => down = Some(key),
                _ => {}
            }
        }
        let (from, to) = (down.unwrap(), up.unwrap());
        out.push(Segment {
            from,
            to,
            a: edge_point(mesh, from, axis, level),
            b: edge_point(mesh, to, axis, level),
        });
    }
    out
}

/// Oriented area of the section `axis = level`, positive for an outward mesh.
pub fn section_area(mesh: &TriangleMesh, axis: Axis, level: f64) -> f64 {
    let terms: Vec<f64> = segments(mesh, axis, level)
        .iter()
        .map(|s| 0.5 * (s.a[0] * s.b[1] - s.a[1] * s.b[0]))
        .collect();
    pairwise_sum(&terms)
}

/// Closed section loops in plane coordinates.
///
/// Segments are chained through their shared crossing edge, so the two faces
/// meeting at an edge always agree on the point. Loops are emitted in the
/// order of their first face; zero-length steps (a vertex on the plane) are
/// dropped.
pub fn section_loops(mesh: &TriangleMesh, axis: Axis, level: f64) -> Result<Vec<Vec<[f64; 2]>>> {
    let segs = segments(mesh, axis, level);
    let mut by_from: BTreeMap<EdgeKey, usize> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        if by_from.insert(s.from, i).is_some() {
            return Err(Error::InvalidGeometry(format!(
                "section at {level} passes a non-manifold edge"
            )));
        }
    }
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        let mut pts: Vec<[f64; 2]> = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            let p = segs[cur].a;
            if pts.last().is_none_or(|q| dist(*q, p) > 1e-12) {
                pts.push(p);
            }
            let next = *by_from.get(&segs[cur].to).ok_or_else(|| {
                Error::InvalidGeometry(format!("section at {level} does not close"))
            })?;
            if next == start {
                break;
            }
            if used[next] {
                return Err(Error::InvalidGeometry(format!(
                    "section at {level} has a branching loop"
                )));
            }
            cur = next;
        }
        while pts.len() > 1 && dist(pts[0], *pts.last().unwrap()) <= 1e-12 {
            pts.pop();
        }
        if pts.len() >= 3 {
            loops.push(pts);
        }
    }
    Ok(loops)
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::primitives;

    fn shoelace(pts: &[[f64; 2]]) -> f64 {
        let n = pts.len();
        (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
            * 0.5
    }

    #[test]
    fn cube_sections_have_unit_area_on_every_axis() {
        let cube = primitives::unit_cube();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for level in [0.1, 0.5, 0.93] {
                assert!((section_area(&cube, axis, level) - 1.0).abs() < 1e-14);
                let loops = section_loops(&cube, axis, level).unwrap();
                assert_eq!(loops.len(), 1);
                assert!((shoelace(&loops[0]) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn outside_the_solid_is_empty() {
        let cube = primitives::unit_cube();
        assert_eq!(section_area(&cube, Axis::Z, 2.0), 0.0);
        assert!(section_loops(&cube, Axis::Z, -1.0).unwrap().is_empty());
    }

    #[test]
    fn torus_cut_through_axis_gives_two_loops() {
        let t = primitives::torus(2.0, 0.5, 48, 24);
        let loops = section_loops(&t, Axis::X, 0.013).unwrap();
        assert_eq!(loops.len(), 2);
        for l in &loops {
            let a = shoelace(l);
            assert!(a > 0.0 && (a - std::f64::consts::PI * 0.25).abs() < 0.02);
        }
        // Equatorial cut: annulus, outer loop CCW, hole CW.
        let loops = section_loops(&t, Axis::Z, 0.01).unwrap();
        assert_eq!(loops.len(), 2);
        let mut areas: Vec<f64> = loops.iter().map(|l| shoelace(l)).collect();
        areas.sort_by(f64::total_cmp);
        assert!(areas[0] < 0.0 && areas[1] > 0.0);
    }

    #[test]
    fn vertex_on_plane_is_handled() {
        let cube = primitives::unit_cube();
        let loops = section_loops(&cube, Axis::Z, 1.0).unwrap();
        assert_eq!(loops.len(), 1);
        assert!((shoelace(&loops[0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_section_area_tracks_disc() {
        let s = primitives::icosphere(4, 1.0);
        for level in [-0.6, 0.0, 0.37] {
            let exact = std::f64::consts::PI * (1.0 - level * level);
            let a = section_area(&s, Axis::X, level);
            assert!((a - exact).abs() / exact < 0.01, "{a} vs {exact}");
        }
    }
}
