use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;

use crate::geometry::{PanelQuadrature, SurfaceMesh};
use crate::special::{gauss_legendre, legendre_all, spherical_jn_all, spherical_yn_all};
use crate::{Error, Real, Result, Vec3};

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ`, uniform in `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    phi: Vec<f64>,
    directions: Vec<Vec3<f64>>,
    weights: Vec<f64>,
}

impl DirectionSet {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidArgument("direction set needs at least one node per axis".into()));
        }
        let (x, w) = gauss_legendre::<f64>(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut out = Self {
            n_theta,
            n_phi,
            theta: Vec::new(),
            phi: Vec::new(),
            directions: Vec::new(),
            weights: Vec::new(),
        };
        for (ct, wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..n_phi {
                let ph = j as f64 * dphi;
                out.theta.push(ct.acos());
                out.phi.push(ph);
                out.directions.push(Vec3::new(st * ph.cos(), st * ph.sin(), *ct));
                out.weights.push(wt * dphi);
            }
        }
        Ok(out)
    }

    /// Arbitrary unit directions with given weights; `shape` is `(len, 1)`.
    pub fn from_directions(directions: Vec<Vec3<f64>>, weights: Vec<f64>) -> Result<Self> {
        if directions.len() != weights.len() {
            return Err(Error::Shape { expected: directions.len(), got: weights.len() });
        }
        if directions.iter().any(|d| (d.norm() - 1.0).abs() > 1e-10) {
            return Err(Error::InvalidArgument("directions must be unit vectors".into()));
        }
        Ok(Self {
            n_theta: directions.len(),
            n_phi: 1,
            theta: directions.iter().map(|d| d.z.clamp(-1.0, 1.0).acos()).collect(),
            phi: directions.iter().map(|d| d.y.atan2(d.x)).collect(),
            directions,
            weights,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec3<f64>] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Expresses every direction in a frame whose pole is `axis`.
    pub fn rotated(&self, axis: Vec3<f64>) -> Self {
        let e3 = axis / axis.norm();
        let helper = if e3.z.abs() < 0.9 { Vec3::new(0.0, 0.0, 1.0) } else { Vec3::new(1.0, 0.0, 0.0) };
        let e1 = {
            let t = helper - e3 * helper.dot(e3);
            t / t.norm()
        };
        let e2 = e3.cross(e1);
        let mut out = self.clone();
        for d in out.directions.iter_mut() {
            *d = e1 * d.x + e2 * d.y + e3 * d.z;
        }
        out
    }
}

/// Farfield amplitudes on a direction set.
#[derive(Debug, Clone, PartialEq)]
pub struct FarfieldPattern {
    pub directions: DirectionSet,
    pub values: Vec<Complex<f64>>,
}

impl FarfieldPattern {
    /// `sqrt(Σ w|α|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.directions.weights())
            .map(|(v, w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// CSV with columns `theta, phi, weight, re, im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "theta,phi,weight,re,im")?;
        let d = &self.directions;
        for i in 0..self.values.len() {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                d.theta()[i],
                d.phi()[i],
                d.weights()[i],
                self.values[i].re,
                self.values[i].im
            )?;
        }
        Ok(())
    }
}

/// `α(x̂) = i ∫ e^{−iκx̂·y} (η + κ x̂·n_y) σ(y) dS_y` by panel quadrature.
pub fn farfield<T: Real>(
    mesh: &SurfaceMesh<T>,
    quad: &PanelQuadrature<T>,
    density: &[Complex<T>],
    kappa: f64,
    eta: f64,
    directions: &DirectionSet,
) -> Result<FarfieldPattern> {
    if density.len() != mesh.n_panels() || quad.n_panels() != mesh.n_panels() {
        return Err(Error::Shape { expected: mesh.n_panels(), got: density.len() });
    }
    let to64 = |v: Vec3<T>| Vec3::new(v.x.as_f64(), v.y.as_f64(), v.z.as_f64());
    let points: Vec<Vec3<f64>> = quad.points().iter().map(|&p| to64(p)).collect();
    let weights: Vec<f64> = quad.weights().iter().map(|w| w.as_f64()).collect();
    let normals: Vec<Vec3<f64>> = mesh.normals().iter().map(|&n| to64(n)).collect();
    let sigma: Vec<Complex<f64>> = density.iter().map(|v| Complex::new(v.re.as_f64(), v.im.as_f64())).collect();
    let values = directions
        .directions()
        .par_iter()
        .map(|xh| {
            let mut acc = Complex::new(0.0, 0.0);
            for (q, (y, w)) in points.iter().zip(&weights).enumerate() {
                let i = quad.panel_of(q);
                let factor = eta + kappa * xh.dot(normals[i]);
                let ph = -kappa * xh.dot(*y);
                acc += Complex::new(ph.cos(), ph.sin()) * sigma[i] * (w * factor);
            }
            Complex::new(0.0, 1.0) * acc
        })
        .collect();
    Ok(FarfieldPattern { directions: directions.clone(), values })
}

/// Largest `κa` accepted by [`mie_farfield`].
pub const MAX_MIE_ARGUMENT: f64 = 200.0;

/// Relative agreement required between truncations at `n_max` and `n_max + 10`.
const MIE_TOL: f64 = 1e-10;

/// `n_max = ⌈x + 10x^{1/3} + 10⌉`.
pub fn mie_truncation(x: f64) -> usize {
    (x + 10.0 * x.cbrt() + 10.0).ceil() as usize
}

/// `max_n |x²(j_n y_n′ − j_n′ y_n) − 1|` over `n ≤ nmax`.
pub fn wronskian_defect(nmax: usize, x: f64) -> f64 {
    let j = spherical_jn_all(nmax + 1, x);
    let y = spherical_yn_all(nmax + 1, x);
    (0..=nmax)
        .map(|n| {
            // f_n′ = n f_n/x − f_{n+1}
            let nf = n as f64;
            let jd = nf * j[n] / x - j[n + 1];
            let yd = nf * y[n] / x - y[n + 1];
            (x * x * (j[n] * yd - jd * y[n]) - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Coefficients `(2n+1) j_n(x)/h_n(x)`, `h_n = j_n + i y_n`.
fn mie_coefficients(nmax: usize, x: f64) -> Vec<Complex<f64>> {
    let j = spherical_jn_all(nmax, x);
    let y = spherical_yn_all(nmax, x);
    (0..=nmax)
        .map(|n| Complex::new(j[n], 0.0) / Complex::new(j[n], y[n]) * (2 * n + 1) as f64)
        .collect()
}

fn mie_sum(coeffs: &[Complex<f64>], cos_angle: f64, leg: &mut [f64]) -> Complex<f64> {
    legendre_all(coeffs.len() - 1, cos_angle, leg);
    coeffs.iter().zip(leg.iter()).map(|(c, p)| c * *p).sum()
}

/// Farfield of a plane wave `e^{iκd·x}` scattered by a sound-soft sphere of
/// `radius` centred at `centre`, normalised like [`farfield`]:
/// `α(x̂) = −(4πi/κ) Σ_n (2n+1) j_n(κa)/h_n(κa) P_n(x̂·d) e^{iκ(d−x̂)·c}`.
pub fn mie_farfield(
    kappa: f64,
    radius: f64,
    centre: Vec3<f64>,
    directions: &DirectionSet,
    incident: Vec3<f64>,
) -> Result<FarfieldPattern> {
    let x = kappa * radius;
    if !(x > 0.0 && x <= MAX_MIE_ARGUMENT) {
        return Err(Error::InvalidArgument(format!("kappa*radius = {x} outside (0, {MAX_MIE_ARGUMENT}]")));
    }
    if (incident.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument("incident direction must be a unit vector".into()));
    }
    let nmax = mie_truncation(x);
    let wr = wronskian_defect(nmax + 10, x);
    if !(wr <= MIE_TOL) {
        return Err(Error::NoConvergence(format!("Wronskian defect {wr:e} at kappa*radius = {x}")));
    }
    let long = mie_coefficients(nmax + 10, x);
    let short = &long[..=nmax];
    let pref = Complex::new(0.0, -4.0 * std::f64::consts::PI / kappa);
    let mut leg = vec![0.0; nmax + 11];
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let mut values = Vec::with_capacity(directions.len());
    for xh in directions.directions() {
        let ct = xh.dot(incident).clamp(-1.0, 1.0);
        let a = mie_sum(short, ct, &mut leg);
        let b = mie_sum(&long, ct, &mut leg);
        worst = worst.max((a - b).norm());
        scale = scale.max(b.norm());
        let ph = kappa * (incident - *xh).dot(centre);
        values.push(pref * a * Complex::new(ph.cos(), ph.sin()));
    }
    if worst > MIE_TOL * scale {
        return Err(Error::NoConvergence(format!(
            "partial-wave series changed by {:e} between n = {nmax} and {}",
            worst / scale,
            nmax + 10
        )));
    }
    Ok(FarfieldPattern { directions: directions.clone(), values })
}

/// `sqrt(Σ w|a − ref|²) / sqrt(Σ w|ref|²)`.
pub fn farfield_error(a: &FarfieldPattern, reference: &FarfieldPattern) -> Result<f64> {
    if a.directions != reference.directions || a.values.len() != reference.values.len() {
        return Err(Error::InvalidArgument("farfield patterns use different direction sets".into()));
    }
    let w = a.directions.weights();
    let num: f64 = a.values.iter().zip(&reference.values).zip(w).map(|((x, y), w)| w * (x - y).norm_sqr()).sum();
    let den: f64 = reference.values.iter().zip(w).map(|(y, w)| w * y.norm_sqr()).sum();
    Ok((num / den).sqrt())
}
