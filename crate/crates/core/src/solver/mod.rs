//! Parameter selection, GMRES, farfield evaluation and the Mie reference.

mod farfield;
mod gmres;
mod params;

pub use farfield::{
    farfield, farfield_error, mie_farfield, mie_truncation, wronskian_defect, DirectionSet, FarfieldPattern,
    MAX_MIE_ARGUMENT,
};
pub use gmres::{gmres, GmresOutcome};
pub use params::{beta, grid_size_for, lambda, select_parameters, Preset, SolveParams, DEFAULT_MAXIT, DEFAULT_TOL, GAMMA};

use std::io::Write;
use std::time::Instant;

use num_complex::Complex;

use crate::operators::AssembledOperator;
use crate::{Real, Result};

/// Wall time per stage in seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StageTimes {
    pub ghat_s: f64,
    pub setup_s: f64,
    pub gmres_s: f64,
    pub time_per_iteration_s: f64,
    pub total_s: f64,
}

/// Density and run statistics of one solve.
#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub density: Vec<Complex<T>>,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub true_residual: f64,
    pub times: StageTimes,
    pub mem_bytes: usize,
}

/// Runs GMRES on `op` with right-hand side `b`.
pub fn solve<T: Real>(op: &AssembledOperator<T>, b: &[Complex<T>], tol: f64, maxit: usize) -> Result<SolveResult<T>> {
    let start = Instant::now();
    let out = gmres(|v| op.apply_combined(v), b, tol, maxit)?;
    let gmres_s = start.elapsed().as_secs_f64();
    let info = op.info();
    let per_it = if out.iterations > 0 { gmres_s / out.iterations as f64 } else { 0.0 };
    Ok(SolveResult {
        density: out.x,
        iterations: out.iterations,
        residuals: out.residuals,
        converged: out.converged,
        true_residual: out.true_residual,
        times: StageTimes {
            ghat_s: info.ghat_seconds,
            setup_s: info.total_seconds,
            gmres_s,
            time_per_iteration_s: per_it,
            total_s: info.total_seconds + gmres_s,
        },
        mem_bytes: op.memory_bytes() + out.basis_bytes,
    })
}

/// JSON summary of a solve.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveSummary {
    pub n: usize,
    #[serde(rename = "N")]
    pub grid: usize,
    pub delta: f64,
    pub p: usize,
    pub q: usize,
    pub filter: crate::kernel::FilterKind,
    pub eta: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residuals: Vec<f64>,
    pub true_residual: f64,
    pub time_per_iteration_s: f64,
    pub total_time_s: f64,
    pub ghat_time_s: f64,
    pub mem_bytes: usize,
    pub cache_hit: bool,
    /// Resolved run settings, echoed for provenance.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub config: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farfield_error: Option<f64>,
}

impl SolveSummary {
    pub fn new<T: Real>(op: &AssembledOperator<T>, result: &SolveResult<T>) -> Self {
        let c = op.config();
        Self {
            n: op.dim(),
            grid: c.n,
            delta: c.delta,
            p: c.p,
            q: c.q,
            filter: c.filter,
            eta: c.eta,
            kappa: c.kappa,
            lambda: lambda(c.kappa, c.delta, c.n),
            iterations: result.iterations,
            converged: result.converged,
            residuals: result.residuals.clone(),
            true_residual: result.true_residual,
            time_per_iteration_s: result.times.time_per_iteration_s,
            total_time_s: result.times.total_s,
            ghat_time_s: result.times.ghat_s,
            mem_bytes: result.mem_bytes,
            cache_hit: op.info().cache_hit,
            config: serde_json::Map::new(),
            farfield_error: None,
        }
    }
}

/// CSV with columns `panel, cx, cy, cz, re, im`.
pub fn write_density_csv<T: Real, W: Write>(
    mesh: &crate::geometry::SurfaceMesh<T>,
    density: &[Complex<T>],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "panel,cx,cy,cz,re,im")?;
    for (i, (c, s)) in mesh.centroids().iter().zip(density).enumerate() {
        writeln!(
            w,
            "{i},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            c.x.as_f64(),
            c.y.as_f64(),
            c.z.as_f64(),
            s.re.as_f64(),
            s.im.as_f64()
        )?;
    }
    Ok(())
}
