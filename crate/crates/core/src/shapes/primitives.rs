//! Closed reference shapes with known integrals, used as fixtures and oracles.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use super::{ClosedProfile2D, TriangleMesh};
use crate::numeric::vec3::normalize;

/// Tetrahedron on the unit axes, outward oriented.
pub fn tetrahedron() -> TriangleMesh {
    let v = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ];
    let f = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
    TriangleMesh::new(v, f).expect("static fixture")
}

/// Axis-aligned box `[lo, hi]` as 12 outward-oriented triangles.
pub fn cuboid(lo: [f64; 3], hi: [f64; 3]) -> TriangleMesh {
    let mut v = Vec::with_capacity(8);
    for k in 0..8 {
        v.push([
            if k & 1 == 0 { lo[0] } else { hi[0] },
            if k & 2 == 0 { lo[1] } else { hi[1] },
            if k & 4 == 0 { lo[2] } else { hi[2] },
        ]);
    }
    // Quads listed counter-clockwise seen from outside.
    let quads = [
        [0, 2, 3, 1], // z = lo
        [4, 5, 7, 6], // z = hi
        [0, 1, 5, 4], // y = lo
        [2, 6, 7, 3], // y = hi
        [0, 4, 6, 2], // x = lo
        [1, 3, 7, 5], // x = hi
    ];
    let mut f = Vec::with_capacity(12);
    for q in quads {
        f.push([q[0], q[1], q[2]]);
        f.push([q[0], q[2], q[3]]);
    }
    TriangleMesh::new(v, f).expect("static fixture")
}

pub fn unit_cube() -> TriangleMesh {
    cuboid([0.0; 3], [1.0; 3])
}

/// Icosahedron refined `subdivisions` times with vertices projected onto the
/// sphere of the given radius centred at the origin.
pub fn icosphere(subdivisions: u32, radius: f64) -> TriangleMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([
                    0.5 * (p[0] + q[0]),
                    0.5 * (p[1] + q[1]),
                    0.5 * (p[2] + q[2]),
                ]));
                verts.len() - 1
            })
        };
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    let verts = verts
        .into_iter()
        .map(|p| [p[0] * radius, p[1] * radius, p[2] * radius])
        .collect();
    TriangleMesh::new(verts, faces).expect("icosphere construction")
}

/// Torus around the z axis with tube radius `minor`, sampled on an
/// `nu x nv` grid.
pub fn torus(major: f64, minor: f64, nu: usize, nv: usize) -> TriangleMesh {
    let mut verts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = TAU * i as f64 / nu as f64;
        for j in 0..nv {
            let v = TAU * j as f64 / nv as f64;
            let rho = major + minor * v.cos();
            verts.push([rho * u.cos(), rho * u.sin(), minor * v.sin()]);
        }
    }
    let idx = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriangleMesh::new(verts, faces).expect("torus construction")
}

/// Closed circular frustum along z from `z = 0` (radius `r0`) to
/// `z = height` (radius `r1`), with flat caps.
pub fn frustum(r0: f64, r1: f64, height: f64, n_theta: usize, n_z: usize) -> TriangleMesh {
    let mut verts = Vec::with_capacity(n_theta * (n_z + 1) + 2);
    for k in 0..=n_z {
        let t = k as f64 / n_z as f64;
        let z = height * t;
        let r = r0 + (r1 - r0) * t;
        for i in 0..n_theta {
            let a = TAU * i as f64 / n_theta as f64;
            verts.push([r * a.cos(), r * a.sin(), z]);
        }
    }
    let bottom = verts.len();
    verts.push([0.0, 0.0, 0.0]);
    let top = verts.len();
    verts.push([0.0, 0.0, height]);
    let idx = |i: usize, k: usize| k * n_theta + (i % n_theta);
    let mut faces = Vec::new();
    for k in 0..n_z {
        for i in 0..n_theta {
            let (a, b, c, d) = (idx(i, k), idx(i + 1, k), idx(i + 1, k + 1), idx(i, k + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for i in 0..n_theta {
        faces.push([bottom, idx(i + 1, 0), idx(i, 0)]);
        faces.push([top, idx(i, n_z), idx(i + 1, n_z)]);
    }
    TriangleMesh::new(verts, faces).expect("frustum construction")
}

pub fn cylinder(radius: f64, height: f64, n_theta: usize, n_z: usize) -> TriangleMesh {
    frustum(radius, radius, height, n_theta, n_z)
}

/// Regular `n`-gon inscribed in the circle of the given radius, starting on
/// the positive x axis, counter-clockwise.
pub fn regular_polygon(n: usize, radius: f64) -> ClosedProfile2D {
    let pts = (0..n)
        .map(|k| {
            let a = TAU * k as f64 / n as f64;
            [radius * a.cos(), radius * a.sin()]
        })
        .collect();
    ClosedProfile2D::new(pts).expect("regular polygon")
}
