//! Matrix-free spectral boundary-element solver for sound-soft acoustic
//! scattering in three dimensions.
//!
//! The Helmholtz kernel is split into a smooth part, applied through a
//! moment-based non-equispaced FFT, and an exponentially localised part
//! applied as a diagonal correction. Both feed a Galerkin discretisation of
//! the combined-field equation that is solved by GMRES.

pub mod geometry;
pub mod kernel;
pub mod nufft;
pub mod operators;
pub mod solver;
pub mod special;

mod error;
mod scalar;
mod vec3;

pub use error::{Error, Result};
pub use scalar::{cis, imag_unit, neg_i_pow, norm2, rel_diff, Real};
pub use vec3::Vec3;

pub use num_complex::Complex;

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;
/// Double-precision point.
pub type Point = Vec3<f64>;
/// Double-precision surface mesh.
pub type Mesh = geometry::SurfaceMesh<f64>;
