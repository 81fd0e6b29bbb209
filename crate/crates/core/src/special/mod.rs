//! Special functions and one-dimensional quadrature.

mod bessel;
mod gauss;
mod legendre;

pub use bessel::{
    spherical_bessel, spherical_jn_all, spherical_yn_all, MAX_BESSEL_ARG, MAX_BESSEL_ORDER,
};
pub use gauss::{gauss_legendre, gauss_legendre_on};
pub use legendre::{legendre_all, legendre_p};
