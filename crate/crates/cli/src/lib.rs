//! Batch front-end for the spectral boundary-element solver.

pub mod checks;
pub mod config;
pub mod run;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;

pub use config::{Command, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Validation(String),
}

impl From<sbem::Error> for CliError {
    fn from(e: sbem::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sbem", version, about = "Spectral boundary-element solver for sound-soft scattering")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Flat key = value file; command-line flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mesh: Option<String>,
    #[arg(long = "sphere-subdiv")]
    pub sphere_subdiv: Option<String>,
    #[arg(long = "size-lambda")]
    pub size_lambda: Option<String>,
    /// Wavenumber in mesh units (alternative to --size-lambda).
    #[arg(long)]
    pub kappa: Option<String>,
    /// Incident direction `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    pub incident: Option<String>,
    #[arg(long = "N")]
    pub grid: Option<String>,
    /// Number or `auto`.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// `product` or `power`.
    #[arg(long)]
    pub filter: Option<String>,
    /// Number or `auto`.
    #[arg(long)]
    pub eta: Option<String>,
    /// `fit`, `zero` or `analytic`.
    #[arg(long)]
    pub curvature: Option<String>,
    /// `lower` or `higher`.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long = "quad-order")]
    pub quad_order: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub maxit: Option<String>,
    /// Farfield grid `THETAxPHI`.
    #[arg(long)]
    pub directions: Option<String>,
    /// Farfield error threshold for `validate-sphere`.
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub cache: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long = "inject-fault", hide = true)]
    pub inject_fault: bool,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let pairs: [(&'static str, &Option<String>); 21] = [
            ("mesh", &self.mesh),
            ("sphere-subdiv", &self.sphere_subdiv),
            ("size-lambda", &self.size_lambda),
            ("kappa", &self.kappa),
            ("incident", &self.incident),
            ("N", &self.grid),
            ("delta", &self.delta),
            ("p", &self.p),
            ("q", &self.q),
            ("filter", &self.filter),
            ("eta", &self.eta),
            ("curvature", &self.curvature),
            ("preset", &self.preset),
            ("quad-order", &self.quad_order),
            ("tol", &self.tol),
            ("maxit", &self.maxit),
            ("directions", &self.directions),
            ("threshold", &self.threshold),
            ("out", &self.out),
            ("cache", &self.cache),
            ("workers", &self.workers),
        ];
        let mut out: Vec<(&'static str, String)> =
            pairs.iter().filter_map(|(k, v)| v.as_ref().map(|v| (*k, v.clone()))).collect();
        if self.inject_fault {
            out.push(("inject-fault", "true".into()));
        }
        out
    }

    /// Config file first, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut settings = match &self.config {
            Some(p) => config::read_config_file(p)?,
            None => BTreeMap::new(),
        };
        for (k, v) in self.overrides() {
            settings.insert(k.to_string(), v);
        }
        RunConfig::from_settings(self.command, &settings)
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Some(w) = cfg.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            log::warn!("worker pool already initialised: {e}");
        }
    }
    match run::execute(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
