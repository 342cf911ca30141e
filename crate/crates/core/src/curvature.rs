//! Gaussian and total curvature.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::numeric::pairwise_sum;
use crate::numeric::vec3::{cross, dot, norm, sub, V3};
use crate::shapes::{ClosedProfile2D, TriangleMesh};
use crate::{Error, Result};

/// Built-in analytic surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Surface {
    /// `r (sin v cos u, sin v sin u, cos v)`.
    Sphere { radius: f64 },
    /// `((R + r cos v) cos u, (R + r cos v) sin u, r sin v)`.
    Torus { major: f64, minor: f64 },
    /// `(r cos u, r sin u, v)`.
    Cylinder { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub p: V3,
    pub pu: V3,
    pub pv: V3,
    pub puu: V3,
    pub puv: V3,
    pub pvv: V3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricPatch {
    pub surface: Surface,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
}

impl ParametricPatch {
    pub fn sphere(radius: f64) -> Self {
        ParametricPatch {
            surface: Surface::Sphere { radius },
            u_range: [0.0, TAU],
            v_range: [0.0, PI],
        }
    }

    pub fn torus(major: f64, minor: f64) -> Self {
        ParametricPatch {
            surface: Surface::Torus { major, minor },
            u_range: [0.0, TAU],
            v_range: [0.0, TAU],
        }
    }

    pub fn cylinder(radius: f64, height: f64) -> Self {
        ParametricPatch {
            surface: Surface::Cylinder { radius },
            u_range: [0.0, TAU],
            v_range: [0.0, height],
        }
    }

    pub fn with_u_range(mut self, lo: f64, hi: f64) -> Self {
        self.u_range = [lo, hi];
        self
    }

    pub fn derivatives(&self, u: f64, v: f64) -> Derivatives {
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        match self.surface {
            Surface::Sphere { radius: r } => Derivatives {
                p: [r * sv * cu, r * sv * su, r * cv],
                pu: [-r * sv * su, r * sv * cu, 0.0],
                pv: [r * cv * cu, r * cv * su, -r * sv],
                puu: [-r * sv * cu, -r * sv * su, 0.0],
                puv: [-r * cv * su, r * cv * cu, 0.0],
                pvv: [-r * sv * cu, -r * sv * su, -r * cv],
            },
            Surface::Torus { major, minor: r } => {
                let w = major + r * cv;
                Derivatives {
                    p: [w * cu, w * su, r * sv],
                    pu: [-w * su, w * cu, 0.0],
                    pv: [-r * sv * cu, -r * sv * su, r * cv],
                    puu: [-w * cu, -w * su, 0.0],
                    puv: [r * sv * su, -r * sv * cu, 0.0],
                    pvv: [-r * cv * cu, -r * cv * su, -r * sv],
                }
            }
            Surface::Cylinder { radius: r } => Derivatives {
                p: [r * cu, r * su, v],
                pu: [-r * su, r * cu, 0.0],
                pv: [0.0, 0.0, 1.0],
                puu: [-r * cu, -r * su, 0.0],
                puv: [0.0; 3],
                pvv: [0.0; 3],
            },
        }
    }

    /// `(K, sqrt(EG - F^2))` at `(u, v)`.
    fn curvature_and_area_element(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let d = self.derivatives(u, v);
        let e = dot(d.pu, d.pu);
        let f = dot(d.pu, d.pv);
        let g = dot(d.pv, d.pv);
        let det1 = e * g - f * f;
        if !(det1 >= 1e-20) {
            return Err(Error::DegeneratePoint { u, v });
        }
        let nc = cross(d.pu, d.pv);
        let nn = norm(nc);
        let n = [nc[0] / nn, nc[1] / nn, nc[2] / nn];
        let l = dot(d.puu, n);
        let m = dot(d.puv, n);
        let nv = dot(d.pvv, n);
        Ok(((l * nv - m * m) / det1, det1.sqrt()))
    }
}

/// `K = (LN - M^2) / (EG - F^2)`.
pub fn gaussian_curvature_parametric(patch: &ParametricPatch, u: f64, v: f64) -> Result<f64> {
    patch.curvature_and_area_element(u, v).map(|(k, _)| k)
}

/// Composite midpoint rule for the integral of `K dA` over the patch domain.
pub fn total_curvature_parametric(patch: &ParametricPatch, grid: (usize, usize)) -> Result<f64> {
    let (nu, nv) = grid;
    if nu == 0 || nv == 0 {
        return Err(Error::InvalidArgument("grid must be non-empty".into()));
    }
    let du = (patch.u_range[1] - patch.u_range[0]) / nu as f64;
    let dv = (patch.v_range[1] - patch.v_range[0]) / nv as f64;
    let mut terms = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = patch.u_range[0] + (i as f64 + 0.5) * du;
        for j in 0..nv {
            let v = patch.v_range[0] + (j as f64 + 0.5) * dv;
            let (k, da) = patch.curvature_and_area_element(u, v)?;
            terms.push(k * da);
        }
    }
    Ok(pairwise_sum(&terms) * du * dv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub total_curvature: f64,
    /// One entry per vertex; zero for vertices no face references.
    pub per_vertex_deficit: Vec<f64>,
    pub euler_characteristic_estimate: f64,
}

fn corner_angle(a: V3, b: V3, c: V3) -> f64 {
    let e1 = sub(b, a);
    let e2 = sub(c, a);
    norm(cross(e1, e2)).atan2(dot(e1, e2))
}

/// Angle-deficit total curvature of a closed triangle mesh.
pub fn total_curvature_mesh(mesh: &TriangleMesh) -> Result<CurvatureSummary> {
    let (open, _) = mesh.boundary_counts();
    if open > 0 {
        return Err(Error::HasBoundary { open_edges: open });
    }
    let v = mesh.vertices();
    let mut incident: Vec<Vec<f64>> = vec![Vec::new(); v.len()];
    for face in mesh.faces() {
        for k in 0..3 {
            let (a, b, c) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
            incident[a].push(corner_angle(v[a], v[b], v[c]));
        }
    }
    let per_vertex_deficit: Vec<f64> = incident
        .iter()
        .map(|angles| {
            if angles.is_empty() {
                0.0
            } else {
                TAU - pairwise_sum(angles)
            }
        })
        .collect();
    let total_curvature = pairwise_sum(&per_vertex_deficit);
    Ok(CurvatureSummary {
        total_curvature,
        per_vertex_deficit,
        euler_characteristic_estimate: total_curvature / TAU,
    })
}

/// Sum of absolute turning angles of the closed polyline; `2 pi` for any
/// convex loop.
pub fn total_curvature_profile(profile: &ClosedProfile2D) -> f64 {
    let pts = profile.points();
    let n = pts.len();
    let turns: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let e1 = [b[0] - a[0], b[1] - a[1]];
            let e2 = [c[0] - b[0], c[1] - b[1]];
            let cr = e1[0] * e2[1] - e1[1] * e2[0];
            let dt = e1[0] * e2[0] + e1[1] * e2[1];
            cr.atan2(dt).abs()
        })
        .collect();
    pairwise_sum(&turns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::primitives;

    #[test]
    fn sphere_curvature_is_inverse_square_radius() {
        for r in [1.0, 2.5] {
            let s = ParametricPatch::sphere(r);
            for (u, v) in [(0.3, 0.4), (2.0, 1.5), (5.9, 3.0)] {
                let k = gaussian_curvature_parametric(&s, u, v).unwrap();
                assert!((k - 1.0 / (r * r)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cylinder_is_flat() {
        let c = ParametricPatch::cylinder(1.7, 3.0);
        for (u, v) in [(0.1, 0.2), (4.0, 2.9)] {
            assert!(gaussian_curvature_parametric(&c, u, v).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn torus_curvature_closed_form() {
        let t = ParametricPatch::torus(2.0, 0.5);
        assert!((gaussian_curvature_parametric(&t, 0.7, 0.0).unwrap() - 0.8).abs() < 1e-9);
        for v in [0.5, 2.0, PI, 4.4] {
            let exact = v.cos() / (0.5 * (2.0 + 0.5 * v.cos()));
            let k = gaussian_curvature_parametric(&t, 1.1, v).unwrap();
            assert!((k - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_pole_is_degenerate() {
        let s = ParametricPatch::sphere(1.0);
        assert!(matches!(
            gaussian_curvature_parametric(&s, 0.0, 0.0),
            Err(Error::DegeneratePoint { .. })
        ));
    }

    #[test]
    fn parametric_gauss_bonnet() {
        let s = total_curvature_parametric(&ParametricPatch::sphere(1.0), (200, 200)).unwrap();
        assert!((s - 4.0 * PI).abs() / (4.0 * PI) < 1e-3);
        let t = total_curvature_parametric(&ParametricPatch::torus(2.0, 0.5), (200, 200)).unwrap();
        assert!(t.abs() < 1e-6);
        let h = ParametricPatch::sphere(1.0).with_u_range(0.0, PI);
        let h = total_curvature_parametric(&h, (200, 200)).unwrap();
        assert!((h - TAU).abs() / TAU < 1e-3);
    }

    #[test]
    fn mesh_gauss_bonnet() {
        let cube = total_curvature_mesh(&primitives::unit_cube()).unwrap();
        assert!((cube.total_curvature - 4.0 * PI).abs() < 1e-9);
        let torus = total_curvature_mesh(&primitives::torus(2.0, 0.5, 40, 16)).unwrap();
        assert!(torus.total_curvature.abs() < 1e-8);
        assert!(torus.euler_characteristic_estimate.abs() < 1e-9);
        for sub in 1..=5 {
            let m = primitives::icosphere(sub, 1.0);
            let c = total_curvature_mesh(&m).unwrap();
            assert!((c.total_curvature - 4.0 * PI).abs() < 1e-9);
            assert!((c.euler_characteristic_estimate - m.euler_characteristic() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_rejected() {
        let m = primitives::unit_cube().without_face(3);
        assert!(matches!(total_curvature_mesh(&m), Err(Error::HasBoundary { .. })));
    }

    #[test]
    fn profile_turning_total() {
        let c = primitives::regular_polygon(256, 1.0);
        assert!((total_curvature_profile(&c) - TAU).abs() < 1e-9);
        // The reflex corner turns back by pi/2, which is paid for twice.
        let l = ClosedProfile2D::new(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 2.0],
            [1.0, 1.0],
            [0.0, 2.0],
        ])
        .unwrap();
        let k = total_curvature_profile(&l);
        assert!((k - (TAU + PI)).abs() < 1e-12);
    }
}
