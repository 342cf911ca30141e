#![allow(dead_code)]

use geoop::shapes::{ClosedProfile2D, TriangleMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre nodes and weights on [0, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

fn mono(x: [f64; 3], e: [u32; 3]) -> f64 {
    x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32)
}

/// Signed integral of `x^p y^q` over the triangle fan of a polygon from the
/// origin, by collapsed-coordinate quadrature.
pub fn polygon_moment_oracle(pts: &[[f64; 2]], p: u32, q: u32) -> f64 {
    let gl = gauss_legendre(10);
    let n = pts.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let det = a[0] * b[1] - a[1] * b[0];
        for &(xi, wx) in &gl {
            for &(eta, wy) in &gl {
                let x = xi * a[0] + xi * eta * (b[0] - a[0]);
                let y = xi * a[1] + xi * eta * (b[1] - a[1]);
                total += wx * wy * xi * det * mono([x, y, 0.0], [p, q, 0]);
            }
        }
    }
    total
}

/// Signed integral of `x^p y^q z^r` over the tetrahedral fan of a closed
/// mesh from the origin.
pub fn mesh_moment_oracle(mesh: &TriangleMesh, e: [u32; 3]) -> f64 {
    let gl = gauss_legendre(8);
    let v = mesh.vertices();
    let mut total = 0.0;
    for f in mesh.faces() {
        let (a, b, c) = (v[f[0]], v[f[1]], v[f[2]]);
        let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]);
        for &(s, ws) in &gl {
            for &(t, wt) in &gl {
                for &(u, wu) in &gl {
                    let x: [f64; 3] = std::array::from_fn(|i| {
                        s * a[i] + s * t * (b[i] - a[i]) + s * t * u * (c[i] - b[i])
                    });
                    total += ws * wt * wu * s * s * t * det * mono(x, e);
                }
            }
        }
    }
    total
}

/// `|a - b| <= tol * max(|b|, floor)`.
pub fn close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(floor)
}

/// Star-shaped loop around the origin with random radii.
pub fn random_star(seed: u64, n: usize, centre: [f64; 2]) -> ClosedProfile2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + rng.random_range(0.0..0.5)) / n as f64;
            let r = rng.random_range(0.5..2.0);
            [centre[0] + r * t.cos(), centre[1] + r * t.sin()]
        })
        .collect();
    ClosedProfile2D::new(pts).unwrap()
}

/// Disjoint union of meshes as one mesh.
pub fn union(meshes: &[TriangleMesh]) -> TriangleMesh {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for m in meshes {
        let base = vertices.len();
        vertices.extend_from_slice(m.vertices());
        faces.extend(m.faces().iter().map(|f| [f[0] + base, f[1] + base, f[2] + base]));
    }
    TriangleMesh::new(vertices, faces).unwrap()
}
