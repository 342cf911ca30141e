//! Geometric operators for engineering design spaces.
//!
//! A design is a closed planar profile or a closed triangle mesh. Each design
//! is summarised by a geometric-operator record: design parameters, geometric
//! moments, total curvature and the total energy of its Fourier descriptors.
//! Those records feed Gaussian-process surrogates, Karhunen-Loève subspaces,
//! Sobol feature selection and DPP-based batch scoring.

pub mod curvature;
pub mod error;
pub mod featureset;
pub mod fourier;
pub mod moments;
pub mod quality;
pub mod sensitivity;
pub mod shapes;
pub mod slicing;
pub mod subspace;
pub mod surrogate;
mod numeric;

pub use error::{Error, Result};
pub use numeric::pairwise_sum;
