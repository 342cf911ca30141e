//! Shape representations, the parametric aerofoil, file formats and
//! geometric validity checks.

mod airfoil;
pub mod io;
mod mesh;
pub mod primitives;
mod profile;
mod validity;

pub use airfoil::{generate_airfoil, AirfoilGeometry, AirfoilParams, PARAM_RANGES, PARAM_TABLE_VERSION};
pub use io::{load_mesh, load_uiuc_dat, MeshFormat};
pub use mesh::TriangleMesh;
pub use profile::{ClosedProfile2D, UNIFORM_CARDINALITY};
pub use validity::{
    check_mesh_validity, check_profile_validity, find_self_intersections, segments_intersect,
    DefectCode, IntersectionStrategy, ValidityVerdict,
};

/// A design handled by the feature pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Profile(ClosedProfile2D),
    Mesh(TriangleMesh),
}

impl Design {
    pub fn validity(&self) -> ValidityVerdict {
        match self {
            Design::Profile(p) => check_profile_validity(p),
            Design::Mesh(m) => check_mesh_validity(m),
        }
    }

    /// Flattened coordinates, used as the discretisation descriptor.
    pub fn flattened_coordinates(&self) -> Vec<f64> {
        match self {
            Design::Profile(p) => p.points().iter().flat_map(|q| [q[0], q[1]]).collect(),
            Design::Mesh(m) => m.vertices().iter().flat_map(|v| *v).collect(),
        }
    }
}
