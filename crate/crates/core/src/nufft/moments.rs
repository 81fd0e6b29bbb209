use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;

use super::{MultiIndexSet, SpectralGrid};
use crate::geometry::{PanelQuadrature, SurfaceMesh};
use crate::special::legendre_all;
use crate::{Error, Real, Result};

/// Complex Legendre moments `m_l^α` of a surface density on the occupied cubes.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensor<T> {
    grid: SpectralGrid,
    p: usize,
    cubes: Vec<[usize; 3]>,
    /// `values[c·n_α + a]` for cube slot `c` and multi-index position `a`.
    values: Vec<Complex<T>>,
}

impl<T: Real> MomentTensor<T> {
    /// Builds a tensor from sorted, distinct cubes and cube-major values.
    pub fn from_parts(
        grid: SpectralGrid,
        p: usize,
        cubes: Vec<[usize; 3]>,
        values: Vec<Complex<T>>,
    ) -> Result<Self> {
        let na = MultiIndexSet::count(p);
        if values.len() != cubes.len() * na {
            return Err(Error::Shape {
                expected: cubes.len() * na,
                got: values.len(),
            });
        }
        if cubes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("cubes must be sorted and distinct".into()));
        }
        if cubes.iter().flatten().any(|&l| l > grid.n()) {
            return Err(Error::InvalidArgument("cube index outside 0..=N".into()));
        }
        Ok(Self {
            grid,
            p,
            cubes,
            values,
        })
    }

    pub fn grid(&self) -> SpectralGrid {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn n_alpha(&self) -> usize {
        MultiIndexSet::count(self.p)
    }

    pub fn cubes(&self) -> &[[usize; 3]] {
        &self.cubes
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Moments of cube slot `c`, ordered like [`MultiIndexSet`].
    pub fn cube_moments(&self, c: usize) -> &[Complex<T>] {
        let na = self.n_alpha();
        &self.values[c * na..(c + 1) * na]
    }

    /// Moment for cube `l` and multi-index `alpha`, if the cube is occupied.
    pub fn get(&self, l: [usize; 3], alpha: [usize; 3]) -> Option<Complex<T>> {
        let c = self.cubes.binary_search(&l).ok()?;
        let a = MultiIndexSet::new(self.p).iter().position(|x| *x == alpha)?;
        Some(self.values[c * self.n_alpha() + a])
    }

    /// CSV rows `l1,l2,l3,a1,a2,a3,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "l1,l2,l3,a1,a2,a3,re,im")?;
        let alphas = MultiIndexSet::new(self.p);
        for (c, l) in self.cubes.iter().enumerate() {
            for (a, alpha) in alphas.iter().enumerate() {
                let v = self.values[c * alphas.len() + a];
                writeln!(
                    w,
                    "{},{},{},{},{},{},{:.17e},{:.17e}",
                    l[0], l[1], l[2], alpha[0], alpha[1], alpha[2], v.re, v.im
                )?;
            }
        }
        Ok(())
    }
}

/// Binning of panel quadrature points into cubes together with the
/// weighted Legendre products `w_q P_α(t_q)` used by both transforms.
#[derive(Debug, Clone)]
pub struct SurfaceStencil<T> {
    grid: SpectralGrid,
    p: usize,
    n_alpha: usize,
    n_panels: usize,
    cubes: Vec<[usize; 3]>,
    cube_start: Vec<usize>,
    point_panel: Vec<usize>,
    point_cube: Vec<usize>,
    basis: Vec<T>,
    /// Sorted point positions of each panel's quadrature points.
    panel_points: Vec<usize>,
    per_panel: usize,
}

impl<T: Real> SurfaceStencil<T> {
    pub fn new(grid: SpectralGrid, quad: &PanelQuadrature<T>, p: usize) -> Result<Self> {
        let alphas = MultiIndexSet::new(p);
        let n_alpha = alphas.len();
        let per_panel = quad.order();
        let npts = quad.points().len();

        let mut located = Vec::with_capacity(npts);
        for (q, y) in quad.points().iter().enumerate() {
            let (l, t) = grid.locate(*y)?;
            located.push((l, q, t));
        }
        // Stable sort keeps quadrature order inside each cube.
        located.sort_by(|a, b| a.0.cmp(&b.0));

        let mut cubes = Vec::new();
        let mut cube_start = Vec::new();
        let mut point_panel = Vec::with_capacity(npts);
        let mut point_cube = Vec::with_capacity(npts);
        let mut panel_points = vec![0; npts];
        let mut basis = Vec::with_capacity(npts * n_alpha);
        let mut leg = [vec![T::zero(); p + 1], vec![T::zero(); p + 1], vec![T::zero(); p + 1]];
        for (pos, (l, q, t)) in located.iter().enumerate() {
            if cubes.last() != Some(l) {
                cubes.push(*l);
                cube_start.push(pos);
            }
            point_cube.push(cubes.len() - 1);
            point_panel.push(quad.panel_of(*q));
            panel_points[*q] = pos;
            for j in 0..3 {
                legendre_all(p, t[j], &mut leg[j]);
            }
            let w = quad.weights()[*q];
            for a in alphas.iter() {
                basis.push(w * leg[0][a[0]] * leg[1][a[1]] * leg[2][a[2]]);
            }
        }
        cube_start.push(npts);
        Ok(Self {
            grid,
            p,
            n_alpha,
            n_panels: quad.n_panels(),
            cubes,
            cube_start,
            point_panel,
            point_cube,
            basis,
            panel_points,
            per_panel,
        })
    }

    pub fn grid(&self) -> SpectralGrid {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn n_panels(&self) -> usize {
        self.n_panels
    }

    pub fn cubes(&self) -> &[[usize; 3]] {
        &self.cubes
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    /// Bytes held by the stencil tables.
    pub fn memory_bytes(&self) -> usize {
        self.basis.len() * std::mem::size_of::<T>()
            + (self.point_panel.len() + self.point_cube.len() + self.panel_points.len())
                * std::mem::size_of::<usize>()
    }

    /// Moments of the piecewise-constant density `coeffs`.
    pub fn moments(&self, coeffs: &[Complex<T>]) -> Result<MomentTensor<T>> {
        if coeffs.len() != self.n_panels {
            return Err(Error::Shape {
                expected: self.n_panels,
                got: coeffs.len(),
            });
        }
        let na = self.n_alpha;
        let mut values = vec![Complex::new(T::zero(), T::zero()); self.cubes.len() * na];
        values.par_chunks_mut(na).enumerate().for_each(|(c, out)| {
            for pt in self.cube_start[c]..self.cube_start[c + 1] {
                let g = coeffs[self.point_panel[pt]];
                let b = &self.basis[pt * na..(pt + 1) * na];
                for (o, &w) in out.iter_mut().zip(b) {
                    *o += g * w;
                }
            }
        });
        Ok(MomentTensor {
            grid: self.grid,
            p: self.p,
            cubes: self.cubes.clone(),
            values,
        })
    }

    /// Panel functionals `Σ_{q∈i} Σ_α w_q P_α(t_q) y_{c(q)}^α` for per-cube
    /// values `ycube[c·n_α + a]`.
    pub fn gather(&self, ycube: &[Complex<T>]) -> Vec<Complex<T>> {
        let na = self.n_alpha;
        (0..self.n_panels)
            .into_par_iter()
            .map(|i| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &pt in &self.panel_points[i * self.per_panel..(i + 1) * self.per_panel] {
                    let c = self.point_cube[pt];
                    let y = &ycube[c * na..(c + 1) * na];
                    let b = &self.basis[pt * na..(pt + 1) * na];
                    for (yv, &w) in y.iter().zip(b) {
                        acc += yv * w;
                    }
                }
                acc
            })
            .collect()
    }
}

/// `m_l^α = Σ_{y_q ∈ C_l} w_q P_α((y_q − x_l)/H) g(y_q)`.
pub fn surface_moments<T: Real>(
    grid: &SpectralGrid,
    quad: &PanelQuadrature<T>,
    coeffs: &[Complex<T>],
    p: usize,
) -> Result<MomentTensor<T>> {
    SurfaceStencil::new(*grid, quad, p)?.moments(coeffs)
}

/// Moments of `n_j g` for `j = 1, 2, 3`.
pub fn surface_moments_normal<T: Real>(
    grid: &SpectralGrid,
    mesh: &SurfaceMesh<T>,
    quad: &PanelQuadrature<T>,
    coeffs: &[Complex<T>],
    p: usize,
) -> Result<[MomentTensor<T>; 3]> {
    let stencil = SurfaceStencil::new(*grid, quad, p)?;
    normal_moments(&stencil, mesh, coeffs)
}

pub(crate) fn normal_moments<T: Real>(
    stencil: &SurfaceStencil<T>,
    mesh: &SurfaceMesh<T>,
    coeffs: &[Complex<T>],
) -> Result<[MomentTensor<T>; 3]> {
    if coeffs.len() != mesh.n_panels() {
        return Err(Error::Shape {
            expected: mesh.n_panels(),
            got: coeffs.len(),
        });
    }
    let component = |j: usize| -> Result<MomentTensor<T>> {
        let scaled: Vec<Complex<T>> = coeffs
            .iter()
            .zip(mesh.normals())
            .map(|(g, n)| g * n[j])
            .collect();
        stencil.moments(&scaled)
    };
    Ok([component(0)?, component(1)?, component(2)?])
}
