//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sbem::geometry::CurvatureMode;
use sbem::kernel::FilterKind;
use sbem::solver::{Preset, DEFAULT_MAXIT, DEFAULT_TOL};
use sbem::Vec3;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    ValidateSphere,
    KernelCheck,
}

/// Numeric setting that may be resolved automatically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auto<T> {
    Auto,
    Value(T),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Mesh(PathBuf),
    Sphere { subdivisions: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    SizeLambda(f64),
    /// Wavenumber in the mesh's own units.
    Kappa(f64),
}

/// Fully parsed run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub geometry: Option<Geometry>,
    pub wave: Option<Wave>,
    pub incident: Vec3<f64>,
    pub grid: Auto<usize>,
    pub delta: Auto<f64>,
    pub p: usize,
    pub q: usize,
    pub filter: FilterKind,
    pub eta: Auto<f64>,
    pub curvature: CurvatureMode,
    pub preset: Preset,
    pub quad_order: usize,
    pub tol: f64,
    pub maxit: usize,
    pub directions: (usize, usize),
    pub threshold: f64,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
    pub workers: Option<usize>,
    pub inject_fault: bool,
}

/// Every accepted key.
pub const KEYS: &[&str] = &[
    "mesh",
    "sphere-subdiv",
    "size-lambda",
    "kappa",
    "incident",
    "N",
    "delta",
    "p",
    "q",
    "filter",
    "eta",
    "curvature",
    "preset",
    "quad-order",
    "tol",
    "maxit",
    "directions",
    "threshold",
    "out",
    "cache",
    "workers",
    "inject-fault",
];

/// Reads `key = value` lines; `#` starts a comment. Underscores in keys are
/// accepted in place of dashes.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        let key = normalise_key(k.trim());
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key '{}'", i + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn normalise_key(k: &str) -> String {
    match k.replace('_', "-") {
        n if n == "n" => "N".to_string(),
        other => other,
    }
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| CliError::Config(format!("{key}: cannot parse '{v}': {e}")))
}

fn parse_auto<T: std::str::FromStr>(key: &str, v: &str) -> Result<Auto<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if v == "auto" {
        Ok(Auto::Auto)
    } else {
        parse(key, v).map(Auto::Value)
    }
}

fn parse_vec(key: &str, v: &str) -> Result<Vec3<f64>, CliError> {
    let parts: Vec<f64> = v.split(',').map(|s| parse(key, s.trim())).collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(CliError::Config(format!("{key}: expected three comma-separated numbers")));
    }
    let d = Vec3::new(parts[0], parts[1], parts[2]);
    let n = d.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(CliError::Config(format!("{key}: direction must be nonzero")));
    }
    Ok(d / n)
}

fn parse_directions(key: &str, v: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = v
        .split_once('x')
        .ok_or_else(|| CliError::Config(format!("{key}: expected THETAxPHI, e.g. 32x64")))?;
    let a: usize = parse(key, a.trim())?;
    let b: usize = parse(key, b.trim())?;
    if a == 0 || b == 0 {
        return Err(CliError::Config(format!("{key}: counts must be positive")));
    }
    Ok((a, b))
}

impl RunConfig {
    /// Resolves merged settings; later entries of `settings` were already
    /// applied over earlier sources by the caller.
    pub fn from_settings(command: Command, settings: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| settings.get(k).map(String::as_str);
        let geometry = match (get("mesh"), get("sphere-subdiv")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("mesh and sphere-subdiv are mutually exclusive".into()))
            }
            (Some(m), None) => Some(Geometry::Mesh(PathBuf::from(m))),
            (None, Some(s)) => Some(Geometry::Sphere { subdivisions: parse("sphere-subdiv", s)? }),
            (None, None) => None,
        };
        let wave = match (get("size-lambda"), get("kappa")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("size-lambda and kappa are mutually exclusive".into()))
            }
            (Some(s), None) => Some(Wave::SizeLambda(parse("size-lambda", s)?)),
            (None, Some(k)) => Some(Wave::Kappa(parse("kappa", k)?)),
            (None, None) => None,
        };
        if let Some(Wave::SizeLambda(v) | Wave::Kappa(v)) = wave {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config("size-lambda/kappa must be positive".into()));
            }
        }
        let cfg = Self {
            command,
            geometry,
            wave,
            incident: get("incident").map(|v| parse_vec("incident", v)).transpose()?.unwrap_or(Vec3::new(0.0, 0.0, 1.0)),
            grid: get("N").map(|v| parse_auto("N", v)).transpose()?.unwrap_or(Auto::Auto),
            delta: get("delta").map(|v| parse_auto("delta", v)).transpose()?.unwrap_or(Auto::Auto),
            p: get("p").map(|v| parse("p", v)).transpose()?.unwrap_or(4),
            q: get("q").map(|v| parse("q", v)).transpose()?.unwrap_or(5),
            filter: get("filter").map(|v| parse("filter", v)).transpose()?.unwrap_or(FilterKind::Power),
            eta: get("eta").map(|v| parse_auto("eta", v)).transpose()?.unwrap_or(Auto::Auto),
            curvature: get("curvature").map(|v| parse("curvature", v)).transpose()?.unwrap_or_default(),
            preset: get("preset").map(|v| parse("preset", v)).transpose()?.unwrap_or_default(),
            quad_order: get("quad-order").map(|v| parse("quad-order", v)).transpose()?.unwrap_or(6),
            tol: get("tol").map(|v| parse("tol", v)).transpose()?.unwrap_or(DEFAULT_TOL),
            maxit: get("maxit").map(|v| parse("maxit", v)).transpose()?.unwrap_or(DEFAULT_MAXIT),
            directions: get("directions").map(|v| parse_directions("directions", v)).transpose()?.unwrap_or((32, 64)),
            threshold: get("threshold").map(|v| parse("threshold", v)).transpose()?.unwrap_or(0.12),
            out: get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out")),
            cache: get("cache").map(PathBuf::from),
            workers: get("workers").map(|v| parse("workers", v)).transpose()?,
            inject_fault: get("inject-fault").map(|v| parse("inject-fault", v)).transpose()?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol: {} outside (0, 1)", self.tol)));
        }
        if self.maxit == 0 {
            return Err(CliError::Config("maxit: must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers: must be at least 1".into()));
        }
        if let Auto::Value(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                return Err(CliError::Config(format!("delta: {d} must be positive")));
            }
        }
        if let Auto::Value(e) = self.eta {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(CliError::Config(format!("eta: {e} must be non-negative")));
            }
        }
        if !(self.threshold >= 0.0) {
            return Err(CliError::Config(format!("threshold: {} must be non-negative", self.threshold)));
        }
        match self.command {
            Command::KernelCheck => {}
            Command::Solve | Command::ValidateSphere => {
                match &self.geometry {
                    None => return Err(CliError::Config("exactly one of mesh or sphere-subdiv is required".into())),
                    Some(Geometry::Mesh(_)) if self.command == Command::ValidateSphere => {
                        return Err(CliError::Config("validate-sphere needs sphere-subdiv, not mesh".into()))
                    }
                    _ => {}
                }
                if self.wave.is_none() {
                    return Err(CliError::Config("one of size-lambda or kappa is required".into()));
                }
            }
        }
        Ok(())
    }
}
