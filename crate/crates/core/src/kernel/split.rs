//! Closed-form split `G = G_δ + δ^{−1/2} E(‖r‖/√δ)` of the Helmholtz kernel.

use num_complex::Complex;

use super::filter::{confluent_polynomials, rational_to_f64, FilterSpec};
use crate::{cis, imag_unit, Error, Real, Result};

/// Below this value of `z = ‖r‖/√δ` the smooth part is evaluated from its
/// Taylor expansion.
pub const TAYLOR_SWITCH: f64 = 1e-6;

/// One pole contribution `poly(z)·e^{i b z}` to `F(z)`.
#[derive(Debug, Clone)]
pub struct SplitTerm<T> {
    /// Shifted wavenumber `w̃_k`, `Im w̃_k > 0`.
    pub b: Complex<T>,
    /// Polynomial coefficients in `z`, lowest degree first.
    pub poly: Vec<Complex<T>>,
}

/// Kernel split for wavenumber `κ`, mollification `δ` and a filter.
#[derive(Debug, Clone)]
pub struct KernelSplit<T> {
    kappa: T,
    delta: T,
    sqrt_delta: T,
    kappa_t: T,
    filter: FilterSpec,
    terms: Vec<SplitTerm<T>>,
    /// Taylor coefficients `f_0..f_4` of `S(z) = e^{iκ̃z} + F(z)`.
    taylor: [Complex<T>; 5],
}

fn four_pi<T: Real>() -> T {
    T::lit(4.0) * T::PI()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl<T: Real> KernelSplit<T> {
    /// Rejects `κ < 0`, `δ ≤ 0` and `δκ² ≥ min w_k²`.
    pub fn new(kappa: T, delta: T, filter: FilterSpec) -> Result<Self> {
        if !(kappa >= T::zero() && kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("wavenumber {kappa} must be ≥ 0")));
        }
        if !(delta > T::zero() && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta {delta} must be > 0")));
        }
        let sqrt_delta = delta.sqrt();
        let kappa_t = sqrt_delta * kappa;
        let kt2 = kappa_t.as_f64().powi(2);
        let min_w2 = filter.min_w2();
        if !(kt2 < min_w2) {
            return Err(Error::Constraint(format!(
                "sqrt(delta)*kappa = {:.6} must be below min|w_k| = {:.6}",
                kappa_t.as_f64(),
                min_w2.sqrt()
            )));
        }

        let qpoly = confluent_polynomials(filter.order());
        let terms: Vec<SplitTerm<T>> = filter
            .poles()
            .iter()
            .map(|pole| {
                // w̃ = sqrt(κ̃² − w²) = i·sqrt(w² − κ̃²)
                let im = (rational_to_f64(&pole.w2) - kt2).sqrt();
                let b = Complex::new(0.0, im);
                let ib = Complex::new(-im, 0.0);
                let mut poly = vec![Complex::new(0.0, 0.0); pole.multiplicity()];
                for (j0, c) in pole.coeffs.iter().enumerate() {
                    // c·w̃^{2−2j}·Q_j(i w̃ z), j = j0 + 1
                    let pref = rational_to_f64(c) * b.powi(-2 * j0 as i32);
                    for (m, qm) in qpoly[j0].iter().enumerate() {
                        poly[m] += pref * rational_to_f64(qm) * ib.powi(m as i32);
                    }
                }
                SplitTerm {
                    b: Complex::new(T::zero(), T::lit(im)),
                    poly: poly
                        .into_iter()
                        .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
                        .collect(),
                }
            })
            .collect();

        let mut taylor = [Complex::new(T::zero(), T::zero()); 5];
        let ik = Complex::new(0.0, kappa_t.as_f64());
        for (m, slot) in taylor.iter_mut().enumerate() {
            let mut f = ik.powi(m as i32) / factorial(m);
            for t in &terms {
                let ib = Complex::new(-t.b.im.as_f64(), t.b.re.as_f64());
                for (j, a) in t.poly.iter().enumerate().take(m + 1) {
                    let a = Complex::new(a.re.as_f64(), a.im.as_f64());
                    f += a * ib.powi((m - j) as i32) / factorial(m - j);
                }
            }
            *slot = Complex::new(T::lit(f.re), T::lit(f.im));
        }

        Ok(Self {
            kappa,
            delta,
            sqrt_delta,
            kappa_t,
            filter,
            terms,
            taylor,
        })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn sqrt_delta(&self) -> T {
        self.sqrt_delta
    }

    /// `κ̃ = √δ·κ`.
    pub fn kappa_tilde(&self) -> T {
        self.kappa_t
    }

    pub fn filter(&self) -> &FilterSpec {
        &self.filter
    }

    pub fn terms(&self) -> &[SplitTerm<T>] {
        &self.terms
    }

    /// Shifted wavenumbers `w̃_k`, one per pole.
    pub fn shifted_wavenumbers(&self) -> Vec<Complex<T>> {
        self.terms.iter().map(|t| t.b).collect()
    }

    /// `min_k Im w̃_k`, the exponential decay rate of `E`.
    pub fn decay_rate(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.b.im)
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// `F(z) = Σ_k poly_k(z) e^{i w̃_k z}`.
    pub fn eval_f(&self, z: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in &self.terms {
            let e = (imag_unit::<T>() * t.b * z).exp();
            let mut p = Complex::new(T::zero(), T::zero());
            for a in t.poly.iter().rev() {
                p = p * z + a;
            }
            acc += p * e;
        }
        acc
    }

    /// Remainder kernel `E(z) = −F(z)/(4πz)`, `z > 0`.
    pub fn eval_e(&self, z: T) -> Result<Complex<T>> {
        if !(z > T::zero()) {
            return Err(Error::InvalidArgument(format!("E(z) requires z > 0, got {z}")));
        }
        Ok(-self.eval_f(z) / (four_pi::<T>() * z))
    }

    /// Radial profile of `G_δ` at distance `r ≥ 0`.
    pub fn g_delta_radial(&self, r: T) -> Complex<T> {
        let z = r / self.sqrt_delta;
        let scale = T::one() / (four_pi::<T>() * self.sqrt_delta);
        if z < T::lit(TAYLOR_SWITCH) {
            let f = &self.taylor;
            return (f[1] + (f[2] + (f[3] + f[4] * z) * z) * z) * scale;
        }
        (cis(self.kappa_t * z) + self.eval_f(z)) * (scale / z)
    }

    /// `d/dr G_δ(r)`.
    pub fn g_delta_radial_derivative(&self, r: T) -> Complex<T> {
        let z = r / self.sqrt_delta;
        let scale = T::one() / (four_pi::<T>() * self.delta);
        if z < T::lit(TAYLOR_SWITCH) {
            let f = &self.taylor;
            return (f[2] + (f[3] * T::lit(2.0) + f[4] * T::lit(3.0) * z) * z) * scale;
        }
        // d/dz [S(z)/z] = (z S′ − S)/z²
        let i = imag_unit::<T>();
        let mut s = cis(self.kappa_t * z);
        let mut ds = i * self.kappa_t * s;
        for t in &self.terms {
            let e = (i * t.b * z).exp();
            let mut p = Complex::new(T::zero(), T::zero());
            let mut dp = Complex::new(T::zero(), T::zero());
            for (m, a) in t.poly.iter().enumerate().rev() {
                p = p * z + a;
                if m > 0 {
                    dp = dp * z + a * T::from_usize_lossy(m);
                }
            }
            s += p * e;
            ds += (dp + p * i * t.b) * e;
        }
        (ds * z - s) * (scale / (z * z))
    }

    /// `lim_{r→0} G_δ(r)`.
    pub fn limit_at_origin(&self) -> Complex<T> {
        self.taylor[1] / (four_pi::<T>() * self.sqrt_delta)
    }

    /// Leading local coefficients `(Φ₀, Ψ₀ per unit curvature)`.
    ///
    /// `Φ₀ = ∫_{ℝ²} E(‖t‖) d²t = −½ Σ_k Σ_j a_kj · j! · (i/w̃_k)^{j+1}`, and the
    /// double-layer constant is `−Φ₀` for the curvature convention where a
    /// sphere of radius `R` has curvature `1/R`.
    pub fn local_coefficients(&self) -> (Complex<T>, Complex<T>) {
        let mut phi = Complex::new(0.0, 0.0);
        for t in &self.terms {
            let ib = Complex::new(0.0, 1.0) / Complex::new(t.b.re.as_f64(), t.b.im.as_f64());
            for (j, a) in t.poly.iter().enumerate() {
                let a = Complex::new(a.re.as_f64(), a.im.as_f64());
                phi += a * factorial(j) * ib.powi(j as i32 + 1);
            }
        }
        phi *= -0.5;
        let phi = Complex::new(T::lit(phi.re), T::lit(phi.im));
        (phi, -phi)
    }
}

/// Helmholtz kernel `e^{iκr}/(4πr)` for `r > 0`.
pub fn eval_g<T: Real>(kappa: T, r: T) -> Result<Complex<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidArgument("G(r) is singular at r = 0".into()));
    }
    Ok(cis(kappa * r) / (four_pi::<T>() * r))
}
