use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::vec3::{cross, dot, norm, sub};

/// Indexed triangle surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

/// Use counts of one undirected edge, split by traversal direction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeUse {
    /// Traversals from the lower to the higher vertex index.
    pub forward: usize,
    pub backward: usize,
}

impl EdgeUse {
    pub fn total(&self) -> usize {
        self.forward + self.backward
    }
}

impl TriangleMesh {
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NanInput);
        }
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidGeometry(format!(
                    "face {fi} references a vertex out of range"
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidGeometry(format!(
                    "face {fi} repeats a vertex"
                )));
            }
        }
        Ok(TriangleMesh { vertices, faces })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face_vertices(&self, f: usize) -> [[f64; 3]; 3] {
        let [a, b, c] = self.faces[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Unnormalised face normal, `(b - a) x (c - a)`; its length is twice the area.
    pub fn face_normal(&self, f: usize) -> [f64; 3] {
        let [a, b, c] = self.face_vertices(f);
        cross(sub(b, a), sub(c, a))
    }

    pub fn face_area(&self, f: usize) -> f64 {
        0.5 * norm(self.face_normal(f))
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Signed enclosed volume by the divergence theorem; positive when the
    /// faces are oriented outward.
    pub fn signed_volume(&self) -> f64 {
        let parts: Vec<f64> = (0..self.faces.len())
            .map(|f| {
                let [a, b, c] = self.face_vertices(f);
                dot(a, cross(b, c)) / 6.0
            })
            .collect();
        crate::numeric::pairwise_sum(&parts)
    }

    /// Undirected edges keyed by `(min, max)` vertex index.
    pub fn edge_uses(&self) -> BTreeMap<(usize, usize), EdgeUse> {
        let mut map: BTreeMap<(usize, usize), EdgeUse> = BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let entry = map.entry((a.min(b), a.max(b))).or_default();
                if a < b {
                    entry.forward += 1;
                } else {
                    entry.backward += 1;
                }
            }
        }
        map
    }

    /// Counts of edges used by exactly one face and by more than two faces.
    pub fn boundary_counts(&self) -> (usize, usize) {
        let uses = self.edge_uses();
        let open = uses.values().filter(|u| u.total() == 1).count();
        let non_manifold = uses.values().filter(|u| u.total() > 2).count();
        (open, non_manifold)
    }

    pub fn is_watertight(&self) -> bool {
        self.boundary_counts() == (0, 0)
    }

    /// True when every two-face edge is traversed once in each direction.
    pub fn is_consistently_oriented(&self) -> bool {
        self.edge_uses()
            .values()
            .all(|u| u.total() != 2 || (u.forward == 1 && u.backward == 1))
    }

    /// Indices of vertices referenced by at least one face.
    pub fn referenced_vertices(&self) -> Vec<bool> {
        let mut used = vec![false; self.vertices.len()];
        for f in &self.faces {
            for &i in f {
                used[i] = true;
            }
        }
        used
    }

    /// V - E + F over referenced vertices.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.referenced_vertices().iter().filter(|&&u| u).count() as i64;
        let e = self.edge_uses().len() as i64;
        v - e + self.faces.len() as i64
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn bounds(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    pub fn flipped(&self) -> Self {
        TriangleMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|f| [f[0], f[2], f[1]]).collect(),
        }
    }

    pub fn translated(&self, offset: [f64; 3]) -> Self {
        self.map_vertices(|v| [v[0] + offset[0], v[1] + offset[1], v[2] + offset[2]])
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_vertices(|v| [v[0] * factor, v[1] * factor, v[2] * factor])
    }

    /// Applies `f` to every vertex; the caller keeps orientation meaningful.
    pub fn map_vertices(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        TriangleMesh {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn without_face(&self, f: usize) -> Self {
        let mut faces = self.faces.clone();
        faces.remove(f);
        TriangleMesh {
            vertices: self.vertices.clone(),
            faces,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::primitives;

    #[test]
    fn rejects_bad_faces() {
        let v = vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert!(TriangleMesh::new(v.clone(), vec![[0, 1, 3]]).is_err());
        assert!(TriangleMesh::new(v, vec![[0, 1, 1]]).is_err());
    }

    #[test]
    fn tetrahedron_topology() {
        let t = primitives::tetrahedron();
        assert!(t.is_watertight());
        assert!(t.is_consistently_oriented());
        assert_eq!(t.euler_characteristic(), 2);
        assert!((t.signed_volume() - 1.0 / 6.0).abs() < 1e-15);
        assert!(t.flipped().signed_volume() < 0.0);
        assert_eq!(t.without_face(0).boundary_counts(), (3, 0));
    }
}
