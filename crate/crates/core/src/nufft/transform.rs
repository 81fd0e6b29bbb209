use num_complex::Complex;
use rayon::prelude::*;

use super::{Dft3, Direction, FourierCoeffs, JaTables, MomentTensor, SpectralGrid, SurfaceStencil};
use crate::{Error, Real, Result};

fn check<T: Real>(grid: &SpectralGrid, p: usize, ja: &JaTables<T>, dft: &Dft3<T>) -> Result<()> {
    if ja.n() != grid.n() || dft.len() != grid.dft_len() {
        return Err(Error::Shape {
            expected: grid.n(),
            got: ja.n(),
        });
    }
    if ja.order() != p {
        return Err(Error::Shape {
            expected: p,
            got: ja.order(),
        });
    }
    Ok(())
}

/// Adds `Σ_k K_α(k)·field[k mod 2N]` into `out` over `‖k‖_∞ ≤ N`.
pub(crate) fn accumulate_modes<T: Real>(
    grid: &SpectralGrid,
    ja: &JaTables<T>,
    alpha: [usize; 3],
    field: &[Complex<T>],
    out: &mut [Complex<T>],
) {
    let n = grid.n() as i64;
    let w = (2 * n + 1) as usize;
    let (r0, r1, r2) = (ja.row(alpha[0]), ja.row(alpha[1]), ja.row(alpha[2]));
    out.par_chunks_mut(w * w).enumerate().for_each(|(i0, plane)| {
        let k0 = i0 as i64 - n;
        let b0 = grid.bin(k0);
        let f0 = r0[i0];
        for i1 in 0..w {
            let k1 = i1 as i64 - n;
            let f01 = f0 * r1[i1];
            let base = grid.lattice_index([b0, grid.bin(k1), 0]);
            for i2 in 0..w {
                let k2 = i2 as i64 - n;
                plane[i1 * w + i2] += f01 * r2[i2] * field[base + grid.bin(k2)];
            }
        }
    });
}

/// `ĝ_k = Σ_α K_α(k)·F[m^α](k)`, one 3-D FFT per multi-index.
pub fn nufft_forward<T: Real>(
    moments: &MomentTensor<T>,
    ja: &JaTables<T>,
    dft: &Dft3<T>,
) -> Result<FourierCoeffs<T>> {
    let grid = moments.grid();
    check(&grid, moments.order(), ja, dft)?;
    let mut out = FourierCoeffs::zeros(grid);
    let mut field = vec![Complex::new(T::zero(), T::zero()); grid.lattice_size()];
    let na = moments.n_alpha();
    let bins: Vec<usize> = moments
        .cubes()
        .iter()
        .map(|l| grid.lattice_index(*l))
        .collect();
    let keep = grid.n() + 1;
    for (a, alpha) in ja.alphas().iter().enumerate() {
        field.fill(Complex::new(T::zero(), T::zero()));
        for (c, &b) in bins.iter().enumerate() {
            field[b] = moments.values()[c * na + a];
        }
        dft.transform_pruned(&mut field, Direction::Forward, keep)?;
        accumulate_modes(&grid, ja, *alpha, &field, out.values_mut());
    }
    Ok(out)
}

/// Folds `Σ_k conj(K_α(k))·d_k` into the lattice bins `k mod 2N`.
fn fold_modes<T: Real>(
    grid: &SpectralGrid,
    ja: &JaTables<T>,
    alpha: [usize; 3],
    d: &[Complex<T>],
    field: &mut [Complex<T>],
) {
    let n = grid.n() as i64;
    let m = grid.dft_len();
    let w = (2 * n + 1) as usize;
    let (r0, r1, r2) = (ja.row(alpha[0]), ja.row(alpha[1]), ja.row(alpha[2]));
    field.par_chunks_mut(m * m).enumerate().for_each(|(b0, plane)| {
        for v in plane.iter_mut() {
            *v = Complex::new(T::zero(), T::zero());
        }
        let b0 = b0 as i64;
        for k0 in [b0 - 2 * n, b0] {
            if k0 < -n || k0 > n {
                continue;
            }
            let i0 = (k0 + n) as usize;
            let f0 = r0[i0].conj();
            for i1 in 0..w {
                let b1 = grid.bin(i1 as i64 - n);
                let f01 = f0 * r1[i1].conj();
                let src = &d[(i0 * w + i1) * w..(i0 * w + i1 + 1) * w];
                for i2 in 0..w {
                    let b2 = grid.bin(i2 as i64 - n);
                    plane[b1 * m + b2] += f01 * r2[i2].conj() * src[i2];
                }
            }
        }
    });
}

/// Galerkin functionals `Φ_i = Σ_α M_αᵀ F* conj(K_α) d` of the series
/// `Σ_k d_k e^{πik·x}` against the panel indicator functions.
pub fn nufft_adjoint<T: Real>(
    stencil: &SurfaceStencil<T>,
    coeffs: &FourierCoeffs<T>,
    ja: &JaTables<T>,
    dft: &Dft3<T>,
) -> Result<Vec<Complex<T>>> {
    let grid = stencil.grid();
    check(&grid, stencil.order(), ja, dft)?;
    if coeffs.grid() != grid {
        return Err(Error::Shape {
            expected: grid.n_modes(),
            got: coeffs.values().len(),
        });
    }
    let na = stencil.n_alpha();
    let cubes = stencil.cubes();
    let bins: Vec<usize> = cubes.iter().map(|l| grid.lattice_index(*l)).collect();
    let mut ycube = vec![Complex::new(T::zero(), T::zero()); cubes.len() * na];
    let mut field = vec![Complex::new(T::zero(), T::zero()); grid.lattice_size()];
    let keep = grid.n() + 1;
    for (a, alpha) in ja.alphas().iter().enumerate() {
        fold_modes(&grid, ja, *alpha, coeffs.values(), &mut field);
        dft.transform_pruned(&mut field, Direction::Inverse, keep)?;
        for (c, &b) in bins.iter().enumerate() {
            ycube[c * na + a] = field[b];
        }
    }
    Ok(stencil.gather(&ycube))
}

/// Everything needed to run both transforms on one mesh.
#[derive(Debug)]
pub struct NufftPlan<T: Real> {
    pub grid: SpectralGrid,
    pub ja: JaTables<T>,
    pub dft: Dft3<T>,
    pub stencil: SurfaceStencil<T>,
}

impl<T: Real> NufftPlan<T> {
    pub fn new(grid: SpectralGrid, quad: &crate::geometry::PanelQuadrature<T>, p: usize) -> Result<Self> {
        Ok(Self {
            grid,
            ja: JaTables::new(&grid, p),
            dft: Dft3::new(grid.dft_len()),
            stencil: SurfaceStencil::new(grid, quad, p)?,
        })
    }

    pub fn forward(&self, g: &[Complex<T>]) -> Result<FourierCoeffs<T>> {
        nufft_forward(&self.stencil.moments(g)?, &self.ja, &self.dft)
    }

    /// `−πi Σ_j k_j ĝ^{(j)}_k`, the coefficients of the normal derivative.
    pub fn forward_normal(
        &self,
        mesh: &crate::geometry::SurfaceMesh<T>,
        g: &[Complex<T>],
    ) -> Result<FourierCoeffs<T>> {
        let m = super::moments::normal_moments(&self.stencil, mesh, g)?;
        let parts = [
            nufft_forward(&m[0], &self.ja, &self.dft)?,
            nufft_forward(&m[1], &self.ja, &self.dft)?,
            nufft_forward(&m[2], &self.ja, &self.dft)?,
        ];
        let mut out = FourierCoeffs::zeros(self.grid);
        let pi = T::PI();
        let grid = self.grid;
        out.values_mut().par_iter_mut().enumerate().for_each(|(i, v)| {
            let k = grid.mode(i);
            let s = parts[0].values()[i] * T::lit(k[0] as f64)
                + parts[1].values()[i] * T::lit(k[1] as f64)
                + parts[2].values()[i] * T::lit(k[2] as f64);
            *v = Complex::new(T::zero(), -pi) * s;
        });
        Ok(out)
    }

    pub fn adjoint(&self, d: &FourierCoeffs<T>) -> Result<Vec<Complex<T>>> {
        nufft_adjoint(&self.stencil, d, &self.ja, &self.dft)
    }

    pub fn memory_bytes(&self) -> usize {
        self.stencil.memory_bytes()
            + 2 * self.grid.lattice_size() * std::mem::size_of::<Complex<T>>()
    }
}
