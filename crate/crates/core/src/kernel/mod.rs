//! Kernel split: rational filters, the smooth and local parts of the
//! Helmholtz kernel, the cut-off, the Fourier coefficients `Ĝ_k` of the
//! smooth part and the leading local coefficients.

mod cache;
mod cutoff;
mod filter;
mod ghat;
mod split;

pub use cache::{read_file as read_ghat_file, write_file as write_ghat_file, GhatCache, GhatHeader};
pub use cutoff::{psi, Cutoff};
pub use filter::{confluent_polynomials, FilterKind, FilterSpec, Pole, Rational, MAX_FILTER_ORDER};
pub use ghat::{compute_ghat, decay_slope, DEFAULT_CUBE_ORDER};
pub use split::{eval_g, KernelSplit, SplitTerm, TAYLOR_SWITCH};
