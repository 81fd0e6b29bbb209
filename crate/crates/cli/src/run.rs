//! The three run modes.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde_json::{json, Map, Value};

use sbem::geometry::{load_mesh, make_icosphere, scale_to_unit_box, MeshFormat, ScaleRecord, DEFAULT_SHELL_WIDTH};
use sbem::kernel::GhatCache;
use sbem::operators::{rhs_plane_wave, AssembledOperator, OperatorConfig};
use sbem::solver::{
    farfield, farfield_error, grid_size_for, mie_farfield, select_parameters, solve, write_density_csv, DirectionSet,
    FarfieldPattern, SolveResult, SolveSummary,
};
use sbem::{Mesh, Vec3};

use crate::checks::{run_kernel_checks, KernelCheckReport};
use crate::config::{Auto, Command, Geometry, RunConfig, Wave};
use crate::CliError;

/// Mesh in the unit box together with resolved physics and method settings.
#[derive(Debug)]
pub struct Prepared {
    pub mesh: Mesh,
    pub record: ScaleRecord<f64>,
    pub operator: OperatorConfig,
    pub resolved: Map<String, Value>,
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let original = match cfg.geometry.as_ref().ok_or_else(|| CliError::Config("no geometry".into()))? {
        Geometry::Mesh(path) => {
            if !path.exists() {
                return Err(CliError::Runtime(format!("mesh file not found: {}", path.display())));
            }
            load_mesh::<f64>(path, MeshFormat::Obj)?
        }
        Geometry::Sphere { subdivisions } => make_icosphere(*subdivisions, 1.0, Vec3::zero())?,
    };
    let (mesh, record) = scale_to_unit_box(&original, DEFAULT_SHELL_WIDTH)?;
    let kappa = match cfg.wave.ok_or_else(|| CliError::Config("no wavenumber".into()))? {
        Wave::SizeLambda(s) => 2.0 * std::f64::consts::PI * s / mesh.diameter(),
        Wave::Kappa(k) => record.scaled_wavenumber(k),
    };
    let auto = select_parameters(kappa, cfg.preset)?;
    let delta = match cfg.delta {
        Auto::Auto => auto.delta,
        Auto::Value(d) => d,
    };
    let n = match (cfg.grid, cfg.delta) {
        (Auto::Value(n), _) => n,
        (Auto::Auto, Auto::Auto) => auto.n,
        (Auto::Auto, Auto::Value(d)) => grid_size_for(d),
    };
    let eta = match cfg.eta {
        Auto::Auto => 0.5 * kappa,
        Auto::Value(e) => e,
    };
    let mut operator = OperatorConfig::new(kappa, delta, n);
    operator.eta = eta;
    operator.p = cfg.p;
    operator.q = cfg.q;
    operator.filter = cfg.filter;
    operator.curvature = cfg.curvature;
    operator.quad_order = cfg.quad_order;
    operator.cache = cfg.cache.as_ref().map(GhatCache::new);
    log::info!(
        "resolved kappa = {kappa:.6}, delta = {delta:.4e}, N = {n}, p = {}, q = {}, filter = {}, eta = {eta:.6}",
        cfg.p,
        cfg.q,
        cfg.filter
    );
    let mut resolved = Map::new();
    resolved.insert("command".into(), json!(cfg.command));
    resolved.insert(
        "geometry".into(),
        match cfg.geometry.as_ref().unwrap() {
            Geometry::Mesh(p) => json!({ "mesh": p.display().to_string() }),
            Geometry::Sphere { subdivisions } => json!({ "sphere_subdiv": subdivisions }),
        },
    );
    if let Some(Wave::SizeLambda(s)) = cfg.wave {
        resolved.insert("size_lambda".into(), json!(s));
    }
    resolved.insert("kappa".into(), json!(kappa));
    resolved.insert("scale".into(), json!(record.scale));
    resolved.insert("incident".into(), json!([cfg.incident.x, cfg.incident.y, cfg.incident.z]));
    resolved.insert("delta".into(), json!(delta));
    resolved.insert("N".into(), json!(n));
    resolved.insert("p".into(), json!(cfg.p));
    resolved.insert("q".into(), json!(cfg.q));
    resolved.insert("filter".into(), json!(cfg.filter));
    resolved.insert("eta".into(), json!(eta));
    resolved.insert("curvature".into(), json!(format!("{:?}", cfg.curvature).to_lowercase()));
    resolved.insert("preset".into(), json!(cfg.preset));
    resolved.insert("quad_order".into(), json!(cfg.quad_order));
    resolved.insert("tol".into(), json!(cfg.tol));
    resolved.insert("maxit".into(), json!(cfg.maxit));
    resolved.insert("directions".into(), json!([cfg.directions.0, cfg.directions.1]));
    resolved.insert("workers".into(), json!(cfg.workers.unwrap_or_else(rayon::current_num_threads)));
    Ok(Prepared {
        mesh,
        record,
        operator,
        resolved,
    })
}

/// Everything a solve produced.
#[derive(Debug)]
pub struct SolveOutput {
    pub prepared: Prepared,
    pub result: SolveResult<f64>,
    pub summary: SolveSummary,
    pub farfield: FarfieldPattern,
}

fn create<P: AsRef<Path>>(path: P) -> Result<BufWriter<File>, CliError> {
    let path = path.as_ref();
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let w = create(path)?;
    serde_json::to_writer_pretty(w, value).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn solve_and_write(cfg: &RunConfig) -> Result<SolveOutput, CliError> {
    let prepared = prepare(cfg)?;
    fs::create_dir_all(&cfg.out).map_err(io_err(&cfg.out))?;
    let op = AssembledOperator::assemble(&prepared.mesh, prepared.operator.clone())?;
    log::info!(
        "setup: G-hat {:.3} s (cache hit: {}), total {:.3} s",
        op.info().ghat_seconds,
        op.info().cache_hit,
        op.info().total_seconds
    );
    let kappa = prepared.operator.kappa;
    let b = rhs_plane_wave(op.quadrature(), kappa, cfg.incident)?;
    let result = solve(&op, &b, cfg.tol, cfg.maxit)?;
    log::info!(
        "gmres: {} iterations, {:.3} s per iteration, residual {:.3e}, converged: {}",
        result.iterations,
        result.times.time_per_iteration_s,
        result.residuals.last().copied().unwrap_or(0.0),
        result.converged
    );
    let dirs = DirectionSet::new(cfg.directions.0, cfg.directions.1)?;
    let ff = farfield(op.mesh(), op.quadrature(), &result.density, kappa, prepared.operator.eta, &dirs)?;
    let mut summary = SolveSummary::new(&op, &result);
    summary.config = prepared.resolved.clone();
    let density_path = cfg.out.join("density.csv");
    write_density_csv(op.mesh(), &result.density, create(&density_path)?).map_err(io_err(&density_path))?;
    let ff_path = cfg.out.join("farfield.csv");
    ff.write_csv(create(&ff_path)?).map_err(io_err(&ff_path))?;
    write_json(&cfg.out.join("summary.json"), &summary)?;
    Ok(SolveOutput {
        prepared,
        result,
        summary,
        farfield: ff,
    })
}

fn require_converged(out: &SolveOutput) -> Result<(), CliError> {
    if out.result.converged {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "GMRES did not converge in {} iterations (residual {:.3e})",
            out.result.iterations,
            out.result.residuals.last().copied().unwrap_or(f64::NAN)
        )))
    }
}

pub fn run_solve(cfg: &RunConfig) -> Result<SolveOutput, CliError> {
    let out = solve_and_write(cfg)?;
    require_converged(&out)?;
    Ok(out)
}

/// Outcome of `validate-sphere`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub farfield_error: f64,
    pub threshold: f64,
    pub passed: bool,
    pub iterations: usize,
    pub converged: bool,
}

pub fn run_validate_sphere(cfg: &RunConfig) -> Result<(SolveOutput, ValidationReport), CliError> {
    if !matches!(cfg.geometry, Some(Geometry::Sphere { .. })) {
        return Err(CliError::Config("validate-sphere needs sphere-subdiv".into()));
    }
    let mut out = solve_and_write(cfg)?;
    let rec = &out.prepared.record;
    // The generator builds a unit sphere at the origin.
    let radius = rec.scale;
    let centre = rec.apply(Vec3::zero());
    let mie = mie_farfield(out.prepared.operator.kappa, radius, centre, &out.farfield.directions, cfg.incident)?;
    let err = farfield_error(&out.farfield, &mie)?;
    let report = ValidationReport {
        farfield_error: err,
        threshold: cfg.threshold,
        passed: err < cfg.threshold,
        iterations: out.result.iterations,
        converged: out.result.converged,
    };
    out.summary.farfield_error = Some(err);
    write_json(&cfg.out.join("summary.json"), &out.summary)?;
    write_json(&cfg.out.join("validation.json"), &report)?;
    let mie_path = cfg.out.join("mie.csv");
    mie.write_csv(create(&mie_path)?).map_err(io_err(&mie_path))?;
    log::info!("farfield error {err:.4e} (threshold {})", cfg.threshold);
    require_converged(&out)?;
    Ok((out, report))
}

pub fn run_kernel_check(cfg: &RunConfig) -> Result<KernelCheckReport, CliError> {
    let report = run_kernel_checks(cfg.inject_fault);
    fs::create_dir_all(&cfg.out).map_err(io_err(&cfg.out))?;
    write_json(&cfg.out.join("kernel_check.json"), &report)?;
    Ok(report)
}

/// Runs `cfg.command` and maps the outcome to an exit code.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        Command::Solve => run_solve(cfg).map(|_| ()),
        Command::ValidateSphere => {
            let (_, report) = run_validate_sphere(cfg)?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "farfield error {:.4e} not below threshold {}",
                    report.farfield_error, report.threshold
                )))
            }
        }
        Command::KernelCheck => {
            let report = run_kernel_check(cfg)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
            if report.all_passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect();
                Err(CliError::Validation(format!("failed properties: {}", failed.join(", "))))
            }
        }
    }
}
