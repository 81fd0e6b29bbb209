//! Fourier coefficients `Ĝ_k = ⅛ ∫_{[−1,1]³} G_δ χ e^{−πik·y} dy` of the
//! cut-off smooth kernel, computed from Legendre moments on the cubes
//! `C_l`, `l ∈ {−N..N}³`, and one FFT per multi-index.

use num_complex::Complex;
use rayon::prelude::*;

use super::{Cutoff, KernelSplit};
use crate::nufft::{accumulate_modes, Dft3, Direction, FourierCoeffs, JaTables, MultiIndexSet, SpectralGrid};
use crate::special::{gauss_legendre, legendre_all};
use crate::{Error, Real, Result};

/// Gauss–Legendre points per axis for the cube moments.
pub const DEFAULT_CUBE_ORDER: usize = 5;

/// A box is subdivided while its side exceeds this fraction of
/// `max(√δ, distance to the origin)`.
const REFINE_RATIO: f64 = 0.5;
/// Largest phase change `κ·side` allowed across a leaf box.
const MAX_PHASE: f64 = 1.0;
const MAX_DEPTH: usize = 12;
/// Extra points per axis inside the cut-off shell, where the degree-7
/// profile multiplies the integrand.
const SHELL_EXTRA_POINTS: usize = 4;
const MAX_FIELD_BYTES: usize = 3 << 30;

struct CubeIntegrator<'a, T: Real> {
    split: &'a KernelSplit<T>,
    cutoff: &'a Cutoff<T>,
    alphas: &'a MultiIndexSet,
    p: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
    shell_nodes: Vec<T>,
    shell_weights: Vec<T>,
    h: T,
    sqrt_delta: T,
    max_side: T,
}

struct AxisPoint<T> {
    t_leg: Vec<T>,
    y: T,
    w: T,
}

impl<T: Real> CubeIntegrator<'_, T> {
    /// Quadrature points along one axis of `[a, b]`, split at the cut-off
    /// breakpoints and clipped to `[−1, 1]`; the edge factor is folded into
    /// the weight.
    fn axis_points(&self, a: T, b: T, center: T, out: &mut Vec<AxisPoint<T>>) {
        out.clear();
        let lo = a.max(-T::one());
        let hi = b.min(T::one());
        if !(hi > lo) {
            return;
        }
        let mut cuts = vec![lo];
        for bp in self.cutoff.breakpoints() {
            if bp > lo && bp < hi {
                cuts.push(bp);
            }
        }
        cuts.push(hi);
        let half = T::lit(0.5);
        for w in cuts.windows(2) {
            let (s, e) = (w[0], w[1]);
            let mid = (s + e) * half;
            let rad = (e - s) * half;
            let in_shell = mid.abs() > T::one() - self.cutoff.width();
            let (nodes, weights) = if in_shell {
                (&self.shell_nodes, &self.shell_weights)
            } else {
                (&self.nodes, &self.weights)
            };
            for (x, wx) in nodes.iter().zip(weights) {
                let y = mid + rad * *x;
                let edge = self.cutoff.edge(y);
                if edge == T::zero() {
                    continue;
                }
                let mut t_leg = vec![T::zero(); self.p + 1];
                legendre_all(self.p, (y - center) / self.h, &mut t_leg);
                out.push(AxisPoint {
                    t_leg,
                    y,
                    w: rad * *wx * edge,
                });
            }
        }
    }

    fn integrate(&self, lo: [T; 3], side: T, depth: usize, center: [T; 3], acc: &mut [Complex<T>]) {
        let mut dist2 = T::zero();
        for j in 0..3 {
            let hi = lo[j] + side;
            let d = if lo[j] > T::zero() {
                lo[j]
            } else if hi < T::zero() {
                -hi
            } else {
                T::zero()
            };
            dist2 += d * d;
        }
        let scale = self.sqrt_delta.max(dist2.sqrt());
        let coarse = side > T::lit(REFINE_RATIO) * scale || side > self.max_side;
        if coarse && depth < MAX_DEPTH {
            let hs = side * T::lit(0.5);
            for c in 0..8 {
                let child = [
                    lo[0] + if c & 1 != 0 { hs } else { T::zero() },
                    lo[1] + if c & 2 != 0 { hs } else { T::zero() },
                    lo[2] + if c & 4 != 0 { hs } else { T::zero() },
                ];
                self.integrate(child, hs, depth + 1, center, acc);
            }
            return;
        }
        let mut ax: [Vec<AxisPoint<T>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for j in 0..3 {
            let mut v = Vec::new();
            self.axis_points(lo[j], lo[j] + side, center[j], &mut v);
            if v.is_empty() {
                return;
            }
            ax[j] = v;
        }
        let na = self.alphas.len();
        let mut p01 = vec![T::zero(); na];
        for a0 in &ax[0] {
            for a1 in &ax[1] {
                for (k, al) in self.alphas.iter().enumerate() {
                    p01[k] = a0.t_leg[al[0]] * a1.t_leg[al[1]];
                }
                let w01 = a0.w * a1.w;
                let r01 = a0.y * a0.y + a1.y * a1.y;
                for a2 in &ax[2] {
                    let r = (r01 + a2.y * a2.y).sqrt();
                    let v = self.split.g_delta_radial(r) * (w01 * a2.w);
                    for (k, al) in self.alphas.iter().enumerate() {
                        acc[k] += v * (p01[k] * a2.t_leg[al[2]]);
                    }
                }
            }
        }
    }
}

/// Computes `Ĝ_k` for `‖k‖_∞ ≤ N` with Jacobi–Anger order `p` and
/// `cube_order` Gauss–Legendre points per axis.
pub fn compute_ghat<T: Real>(
    split: &KernelSplit<T>,
    cutoff: &Cutoff<T>,
    grid: &SpectralGrid,
    p: usize,
    cube_order: usize,
) -> Result<FourierCoeffs<T>> {
    if cube_order < 2 {
        return Err(Error::InvalidArgument(format!(
            "cube quadrature order {cube_order} must be ≥ 2"
        )));
    }
    let n = grid.n() as i64;
    let alphas = MultiIndexSet::new(p);
    let na = alphas.len();
    let bytes = na * grid.lattice_size() * std::mem::size_of::<Complex<T>>();
    if bytes > MAX_FIELD_BYTES {
        return Err(Error::InvalidArgument(format!(
            "kernel coefficient setup needs {} MB for N = {}, p = {p}",
            bytes >> 20,
            grid.n()
        )));
    }
    let (nodes, weights) = gauss_legendre::<T>(cube_order);
    let (shell_nodes, shell_weights) = gauss_legendre::<T>(cube_order + SHELL_EXTRA_POINTS);
    let integ = CubeIntegrator {
        split,
        cutoff,
        alphas: &alphas,
        p,
        nodes,
        weights,
        shell_nodes,
        shell_weights,
        h: grid.h(),
        sqrt_delta: split.sqrt_delta(),
        max_side: if split.kappa() > T::zero() {
            T::lit(MAX_PHASE) / split.kappa()
        } else {
            T::infinity()
        },
    };
    let side = T::one() / T::from_usize_lossy(grid.n());
    let w = (n + 1) as usize;

    // G_δχ is even in every coordinate, so only cubes with l ≥ 0 are
    // integrated; a reflection of axis j multiplies the α-moment by (−1)^{α_j}.
    let signs: Vec<[T; 3]> = alphas
        .iter()
        .map(|a| a.map(|v| if v % 2 == 0 { T::one() } else { -T::one() }))
        .collect();
    let mut fields = vec![vec![Complex::new(T::zero(), T::zero()); grid.lattice_size()]; na];
    let ls: Vec<i64> = (0..=n).collect();
    let chunk = rayon::current_num_threads().max(1) * 2;
    for block in ls.chunks(chunk) {
        let slabs: Vec<Vec<Complex<T>>> = block
            .par_iter()
            .map(|&l0| {
                let mut slab = vec![Complex::new(T::zero(), T::zero()); w * w * na];
                for l1 in 0..=n {
                    for l2 in 0..=n {
                        let center = [l0, l1, l2].map(|l| T::lit(l as f64) * side);
                        let lo = center.map(|c| c - side * T::lit(0.5));
                        let i = (l1 as usize * w + l2 as usize) * na;
                        integ.integrate(lo, side, 0, center, &mut slab[i..i + na]);
                    }
                }
                slab
            })
            .collect();
        for (&l0, slab) in block.iter().zip(slabs) {
            for l1 in 0..=n {
                for l2 in 0..=n {
                    let i = (l1 as usize * w + l2 as usize) * na;
                    let m = &slab[i..i + na];
                    for mirror in 0..8usize {
                        let flip = [mirror & 1 != 0, mirror & 2 != 0, mirror & 4 != 0];
                        let l = [l0, l1, l2];
                        if (0..3).any(|j| flip[j] && l[j] == 0) {
                            continue;
                        }
                        let target = grid.lattice_index_signed([0, 1, 2].map(|j| if flip[j] { -l[j] } else { l[j] }));
                        for ((f, v), sg) in fields.iter_mut().zip(m).zip(&signs) {
                            let mut factor = T::one();
                            for j in 0..3 {
                                if flip[j] {
                                    factor *= sg[j];
                                }
                            }
                            f[target] += *v * factor;
                        }
                    }
                }
            }
        }
    }

    let ja = JaTables::<T>::new(grid, p);
    let dft = Dft3::<T>::new(grid.dft_len());
    let mut out = FourierCoeffs::zeros(*grid);
    for (field, alpha) in fields.iter_mut().zip(alphas.iter()) {
        dft.transform(field, Direction::Forward)?;
        accumulate_modes(grid, &ja, *alpha, field, out.values_mut());
        *field = Vec::new();
    }
    let eighth = T::lit(0.125);
    for v in out.values_mut() {
        *v = *v * eighth;
    }
    Ok(out)
}

/// Least-squares slope of `log|Ĝ_k|` against `log‖k‖₂` over the outer half
/// of the mode set, `N/2 ≤ ‖k‖_∞ ≤ N`.
pub fn decay_slope<T: Real>(coeffs: &FourierCoeffs<T>) -> f64 {
    let n = coeffs.n() as i64;
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .filter_map(|(k, v)| {
            let inf = k.iter().map(|c| c.abs()).max().unwrap_or(0);
            let mag = v.norm().as_f64();
            (2 * inf >= n && inf > 0 && mag > 0.0).then(|| {
                let r2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                (0.5 * r2.ln(), mag.ln())
            })
        })
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
