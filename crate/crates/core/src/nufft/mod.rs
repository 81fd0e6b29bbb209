//! Moment-based non-equispaced FFT between piecewise-constant surface
//! densities and Fourier coefficients on `‖k‖_∞ ≤ N`.
//!
//! The forward map is `ĝ = Σ_α K_α F M_α g` and the adjoint
//! `Φ = Σ_α M_αᵀ F* conj(K_α) d`; each costs one FFT per multi-index
//! `|α| ≤ p`.

mod coeffs;
mod dft;
mod grid;
mod ja;
mod moments;
mod multi_index;
mod transform;

pub use coeffs::FourierCoeffs;
pub use dft::{Dft3, Direction};
pub use grid::{SpectralGrid, MAX_GRID_N};
pub use ja::{ja_error_bound, ja_rigorous_bound, ja_truncation_error, JaTables};
pub use moments::{surface_moments, surface_moments_normal, MomentTensor, SurfaceStencil};
pub use multi_index::MultiIndexSet;
pub use transform::{nufft_adjoint, nufft_forward, NufftPlan};

pub(crate) use transform::accumulate_modes;
