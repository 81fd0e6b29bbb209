//! Galerkin combined-field operator `½M + K − iηV` applied without forming
//! a matrix: smooth layers through the NUFFT, the remainder as a diagonal.

mod dense;

pub use dense::{
    dense_oracle_gdelta, dense_oracle_gn, dense_reference_combined, gdelta_matrix, DenseMatrix, Layer, MAX_DENSE_GRID,
    MAX_DENSE_PANELS,
};

use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;

use crate::geometry::{estimate_curvature, panel_quadrature, CurvatureMode, PanelQuadrature, SurfaceMesh};
use crate::kernel::{compute_ghat, Cutoff, FilterKind, FilterSpec, GhatCache, GhatHeader, KernelSplit, DEFAULT_CUBE_ORDER};
use crate::nufft::{FourierCoeffs, NufftPlan, SpectralGrid};
use crate::{Error, Real, Result, Vec3};

/// Everything the operator depends on.
#[derive(Debug, Clone)]
pub struct OperatorConfig {
    /// Wavenumber in scaled coordinates.
    pub kappa: f64,
    /// Coupling parameter of the combined field.
    pub eta: f64,
    pub delta: f64,
    /// Spectral grid size.
    pub n: usize,
    /// Jacobi–Anger order.
    pub p: usize,
    /// Filter order.
    pub q: usize,
    pub filter: FilterKind,
    pub curvature: CurvatureMode,
    /// Points per panel (1, 3, 6 or 12).
    pub quad_order: usize,
    /// Width of the cut-off shell.
    pub shell_width: f64,
    /// Gauss–Legendre points per axis for the kernel moments.
    pub cube_order: usize,
    pub cache: Option<GhatCache>,
}

impl OperatorConfig {
    /// Defaults: `p = 4`, `q = 5`, power filter, `η = κ/2`, 6-point panels.
    pub fn new(kappa: f64, delta: f64, n: usize) -> Self {
        Self {
            kappa,
            eta: 0.5 * kappa,
            delta,
            n,
            p: 4,
            q: 5,
            filter: FilterKind::Power,
            curvature: CurvatureMode::Fit,
            quad_order: 6,
            shell_width: crate::geometry::DEFAULT_SHELL_WIDTH,
            cube_order: DEFAULT_CUBE_ORDER,
            cache: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("coupling eta = {} must be ≥ 0", self.eta)));
        }
        if !(self.shell_width > 0.0 && self.shell_width < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "shell width {} outside (0, 0.5)",
                self.shell_width
            )));
        }
        Ok(())
    }

    pub fn ghat_header(&self, scalar: &str) -> GhatHeader {
        GhatHeader {
            kappa: self.kappa,
            delta: self.delta,
            filter: self.filter,
            q: self.q,
            n: self.n,
            p: self.p,
            d: self.shell_width,
            cube_order: self.cube_order,
            scalar: scalar.to_string(),
        }
    }
}

/// Setup diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AssemblyInfo {
    pub ghat_seconds: f64,
    pub total_seconds: f64,
    pub cache_hit: bool,
    pub curvature_warnings: usize,
}

/// The operator ready for repeated application.
#[derive(Debug)]
pub struct AssembledOperator<T: Real> {
    config: OperatorConfig,
    mesh: SurfaceMesh<T>,
    quad: PanelQuadrature<T>,
    split: KernelSplit<T>,
    cutoff: Cutoff<T>,
    plan: NufftPlan<T>,
    ghat: FourierCoeffs<T>,
    phi0: Complex<T>,
    psi0: Complex<T>,
    mass: Vec<T>,
    local_diag: Vec<Complex<T>>,
    info: AssemblyInfo,
}

fn check_len<T>(v: &[T], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

impl<T: Real> AssembledOperator<T> {
    /// Builds every stage-independent piece. The mesh must lie in `[0, 1−d]³`.
    pub fn assemble(mesh: &SurfaceMesh<T>, config: OperatorConfig) -> Result<Self> {
        let start = Instant::now();
        config.validate()?;
        let filter = FilterSpec::new(config.filter, config.q)?;
        let split = KernelSplit::new(T::lit(config.kappa), T::lit(config.delta), filter)?;
        let d = T::lit(config.shell_width);
        let cutoff = Cutoff::new(d)?;
        let (lo, hi) = mesh.bounding_box();
        let slack = T::lit(1e-12);
        if lo.to_array().iter().any(|&c| c < -slack) || hi.to_array().iter().any(|&c| c > T::one() - d + slack) {
            return Err(Error::InvalidArgument(format!(
                "mesh must lie in [0, {}]^3; bounding box is {:?} .. {:?}",
                1.0 - config.shell_width,
                lo.to_array().map(|c| c.as_f64()),
                hi.to_array().map(|c| c.as_f64())
            )));
        }
        let grid = SpectralGrid::new(config.n)?;
        let (mesh, report) = estimate_curvature(mesh, config.curvature)?;
        let quad = panel_quadrature(&mesh, config.quad_order)?;
        let plan = NufftPlan::new(grid, &quad, config.p)?;

        let ghat_start = Instant::now();
        let header = config.ghat_header(T::NAME);
        let mut cache_hit = false;
        let ghat = match &config.cache {
            Some(cache) => match cache.load::<T>(&header)? {
                Some(g) => {
                    cache_hit = true;
                    g
                }
                None => {
                    let g = compute_ghat(&split, &cutoff, &grid, config.p, config.cube_order)?;
                    let path = cache.store(&header, &g)?;
                    log::info!("stored kernel coefficients in {}", path.display());
                    g
                }
            },
            None => compute_ghat(&split, &cutoff, &grid, config.p, config.cube_order)?,
        };
        let ghat_seconds = ghat_start.elapsed().as_secs_f64();

        let (phi0, psi0) = split.local_coefficients();
        let mass: Vec<T> = mesh.areas().iter().map(|&a| a * T::lit(0.5)).collect();
        let sd = split.sqrt_delta();
        let eta = T::lit(config.eta);
        let local_diag = mesh
            .curvature()
            .iter()
            .zip(mesh.areas())
            .map(|(&c, &a)| (psi0 * c - Complex::new(T::zero(), eta) * phi0) * (sd * a))
            .collect();
        let info = AssemblyInfo {
            ghat_seconds,
            total_seconds: start.elapsed().as_secs_f64(),
            cache_hit,
            curvature_warnings: report.warnings,
        };
        Ok(Self {
            config,
            mesh,
            quad,
            split,
            cutoff,
            plan,
            ghat,
            phi0,
            psi0,
            mass,
            local_diag,
            info,
        })
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.config
    }

    /// The mesh with curvature filled in.
    pub fn mesh(&self) -> &SurfaceMesh<T> {
        &self.mesh
    }

    pub fn quadrature(&self) -> &PanelQuadrature<T> {
        &self.quad
    }

    pub fn split(&self) -> &KernelSplit<T> {
        &self.split
    }

    pub fn cutoff(&self) -> &Cutoff<T> {
        &self.cutoff
    }

    pub fn plan(&self) -> &NufftPlan<T> {
        &self.plan
    }

    pub fn grid(&self) -> SpectralGrid {
        self.plan.grid
    }

    pub fn ghat(&self) -> &FourierCoeffs<T> {
        &self.ghat
    }

    /// `(Φ₀, Ψ₀ per unit curvature)`.
    pub fn local_coefficients(&self) -> (Complex<T>, Complex<T>) {
        (self.phi0, self.psi0)
    }

    /// Diagonal of `½M`.
    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn info(&self) -> AssemblyInfo {
        self.info
    }

    /// Number of unknowns.
    pub fn dim(&self) -> usize {
        self.mesh.n_panels()
    }

    /// Bytes held by the kernel coefficients, the transform plan and the mesh data.
    pub fn memory_bytes(&self) -> usize {
        let c = std::mem::size_of::<Complex<T>>();
        let r = std::mem::size_of::<T>();
        self.ghat.values().len() * c
            + self.plan.memory_bytes()
            + self.quad.points().len() * (3 * r + r)
            + self.dim() * (2 * c + 9 * r)
    }

    fn smooth(&self, hat: FourierCoeffs<T>) -> Result<Vec<Complex<T>>> {
        let d = hat.mul(&self.ghat)?;
        self.plan.adjoint(&d)
    }

    /// Galerkin image of the smooth single layer.
    pub fn apply_smooth_single(&self, g: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(g, self.dim())?;
        self.smooth(self.plan.forward(g)?)
    }

    /// Galerkin image of the smooth double layer.
    pub fn apply_smooth_double(&self, g: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(g, self.dim())?;
        self.smooth(self.plan.forward_normal(&self.mesh, g)?)
    }

    /// `√δ·(curv_i Ψ₀ − iηΦ₀)·g_i·area_i`.
    pub fn apply_local(&self, g: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(g, self.dim())?;
        Ok(g.iter().zip(&self.local_diag).map(|(g, d)| g * d).collect())
    }

    /// Galerkin image of `½I + K − iηV`.
    pub fn apply_combined(&self, g: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(g, self.dim())?;
        let mut hat = self.plan.forward_normal(&self.mesh, g)?;
        let single = self.plan.forward(g)?;
        let ieta = Complex::new(T::zero(), T::lit(self.config.eta));
        hat.values_mut()
            .par_iter_mut()
            .zip(single.values().par_iter())
            .for_each(|(h, s)| *h -= ieta * s);
        let mut out = self.smooth(hat)?;
        out.par_iter_mut()
            .zip(g.par_iter())
            .zip(self.mass.par_iter().zip(self.local_diag.par_iter()))
            .for_each(|((o, g), (m, l))| *o += g * *m + g * l);
        Ok(out)
    }
}

/// `b_i = −Σ_q w_q e^{iκ d̂·y_q}` for the incident wave `e^{iκ d̂·x}`.
pub fn rhs_plane_wave<T: Real>(quad: &PanelQuadrature<T>, kappa: T, direction: Vec3<T>) -> Result<Vec<Complex<T>>> {
    if !((direction.norm() - T::one()).abs() <= T::lit(1e-10)) {
        return Err(Error::InvalidArgument(format!(
            "incident direction must be a unit vector, |d| = {}",
            direction.norm()
        )));
    }
    Ok((0..quad.n_panels())
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (y, w) in quad.panel_points(i).iter().zip(quad.panel_weights(i)) {
                acc += crate::cis(kappa * direction.dot(*y)) * *w;
            }
            -acc
        })
        .collect())
}
