use crate::kernel::{FilterKind, FilterSpec};
use crate::{Error, Result};

/// Accuracy preset for automatic parameter selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    #[default]
    Lower,
    Higher,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Self::Lower),
            "higher" => Ok(Self::Higher),
            _ => Err(Error::InvalidArgument(format!("unknown preset '{s}' (lower, higher)"))),
        }
    }
}

/// Diameter of the reference sphere after scaling into the unit box.
const REFERENCE_DIAMETER: f64 = 0.9;

/// `κ` of a sphere of the reference diameter measured `size` wavelengths across.
fn reference_kappa(size: f64) -> f64 {
    2.0 * std::f64::consts::PI * size / REFERENCE_DIAMETER
}

/// `√δ·κ` for each preset: `δ = 1e−4` at 6.25 wavelengths (lower) and at
/// 3.13 wavelengths (higher).
pub fn beta(preset: Preset) -> f64 {
    match preset {
        Preset::Lower => 0.01 * reference_kappa(6.25),
        Preset::Higher => 0.01 * reference_kappa(3.13),
    }
}

/// `N·√δ` target: `N = 16` at `δ = 1e−4`.
pub const GAMMA: f64 = 0.16;

/// Relative slack when rounding `γ/√δ` up to a power of two, so that
/// `γ/√δ = 16(1 + 1e−12)` still gives `N = 16`.
const POW2_SLACK: f64 = 1e-9;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAXIT: usize = 200;

/// Everything a solve needs besides the mesh.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveParams {
    pub kappa: f64,
    pub delta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub filter: FilterKind,
    pub eta: f64,
    pub tol: f64,
    pub maxit: usize,
}

impl SolveParams {
    /// `κ̃ = κ√δ`.
    pub fn kappa_tilde(&self) -> f64 {
        self.kappa * self.delta.sqrt()
    }

    /// `λ = √((1+κ̃²)/(δN²))`.
    pub fn lambda(&self) -> f64 {
        lambda(self.kappa, self.delta, self.n)
    }

    /// `√δ < min_k |w_k| / κ`.
    pub fn satisfies_constraint(&self) -> bool {
        FilterSpec::new(self.filter, self.q)
            .map(|f| self.kappa * self.delta.sqrt() < f.min_w2().sqrt())
            .unwrap_or(false)
    }
}

pub fn lambda(kappa: f64, delta: f64, n: usize) -> f64 {
    let kt2 = kappa * kappa * delta;
    ((1.0 + kt2) / (delta * (n * n) as f64)).sqrt()
}

/// Smallest power of two not below `x` (within a relative `POW2_SLACK`).
fn pow2_at_least(x: f64) -> usize {
    let mut n = 1usize;
    while (n as f64) < x * (1.0 - POW2_SLACK) {
        n *= 2;
    }
    n
}

/// Grid size `N` for a given `δ`: the smallest power of two `≥ γ/√δ`.
pub fn grid_size_for(delta: f64) -> usize {
    pow2_at_least(GAMMA / delta.sqrt())
}

/// `√δ = β/κ`, `N = 2^⌈log₂(γ/√δ)⌉`, `p = 4`, `q = 5`, `η = κ/2`, power filter.
pub fn select_parameters(kappa: f64, preset: Preset) -> Result<SolveParams> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!("wavenumber {kappa} must be positive")));
    }
    let sd = beta(preset) / kappa;
    let params = SolveParams {
        kappa,
        delta: sd * sd,
        n: grid_size_for(sd * sd),
        p: 4,
        q: 5,
        filter: FilterKind::Power,
        eta: 0.5 * kappa,
        tol: DEFAULT_TOL,
        maxit: DEFAULT_MAXIT,
    };
    log::info!(
        "selected delta = {:.3e}, N = {}, lambda = {:.3} for kappa = {kappa}",
        params.delta,
        params.n,
        params.lambda()
    );
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let p = select_parameters(reference_kappa(6.25), Preset::Lower).unwrap();
        assert!((p.delta - 1e-4).abs() < 1e-16);
        assert_eq!(p.n, 16);
        let p = select_parameters(reference_kappa(12.5), Preset::Lower).unwrap();
        assert!((p.delta - 2.5e-5).abs() < 1e-17);
        assert_eq!(p.n, 32);
        let p = select_parameters(reference_kappa(3.13), Preset::Higher).unwrap();
        assert!((p.delta - 1e-4).abs() < 1e-16);
        assert_eq!(p.n, 16);
        assert_eq!((p.p, p.q, p.filter), (4, 5, FilterKind::Power));
        assert_eq!(p.eta, 0.5 * p.kappa);
    }

    #[test]
    fn doubling_kappa_halves_root_delta_and_doubles_n() {
        for preset in [Preset::Lower, Preset::Higher] {
            for &k in &[3.0, 17.0, 43.0, 200.0] {
                let a = select_parameters(k, preset).unwrap();
                let b = select_parameters(2.0 * k, preset).unwrap();
                assert!((a.delta.sqrt() / b.delta.sqrt() - 2.0).abs() < 1e-12);
                assert_eq!(b.n, 2 * a.n);
            }
        }
    }

    #[test]
    fn constraint_holds_over_range() {
        for i in 0..=300 {
            let k = 10f64.powf(3.0 * i as f64 / 300.0);
            for preset in [Preset::Lower, Preset::Higher] {
                let p = select_parameters(k, preset).unwrap();
                assert!(p.satisfies_constraint(), "kappa {k}");
                assert!(p.lambda().is_finite());
            }
        }
    }

    #[test]
    fn lambda_decreases_with_n() {
        let p = select_parameters(40.0, Preset::Lower).unwrap();
        assert!(lambda(p.kappa, p.delta, 2 * p.n) < p.lambda());
        assert!(p.lambda() > 1.0);
    }

    #[test]
    fn nonpositive_kappa_rejected() {
        assert!(select_parameters(0.0, Preset::Lower).is_err());
        assert!(select_parameters(-1.0, Preset::Higher).is_err());
        assert!("middle".parse::<Preset>().is_err());
    }
}
