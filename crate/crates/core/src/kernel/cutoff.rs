//! C³ cut-off `χ(r) = ∏_j ψ_edge(r_j)` equal to one on `[−1+d, 1−d]³`.

use crate::{Error, Real, Result, Vec3};

/// `ψ(s) = 35s⁴ − 84s⁵ + 70s⁶ − 20s⁷` on `[0, 1]`.
#[inline]
pub fn psi<T: Real>(s: T) -> T {
    if s <= T::zero() {
        return T::zero();
    }
    if s >= T::one() {
        return T::one();
    }
    let s4 = (s * s) * (s * s);
    s4 * (T::lit(35.0) + s * (T::lit(-84.0) + s * (T::lit(70.0) + s * T::lit(-20.0))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff<T> {
    d: T,
}

impl<T: Real> Cutoff<T> {
    /// Shell width `d ∈ (0, 1)`.
    pub fn new(d: T) -> Result<Self> {
        if !(d > T::zero() && d < T::one()) {
            return Err(Error::InvalidArgument(format!("cut-off width {d} outside (0, 1)")));
        }
        Ok(Self { d })
    }

    pub fn width(&self) -> T {
        self.d
    }

    /// One-dimensional profile.
    #[inline]
    pub fn edge(&self, x: T) -> T {
        let a = x.abs();
        let inner = T::one() - self.d;
        if a <= inner {
            T::one()
        } else if a >= T::one() {
            T::zero()
        } else if a < T::one() - self.d * T::lit(0.5) {
            // ψ(s) = 1 − ψ(1 − s); the small side keeps full relative precision.
            T::one() - psi((a - inner) / self.d)
        } else {
            psi((T::one() - a) / self.d)
        }
    }

    #[inline]
    pub fn eval(&self, r: Vec3<T>) -> T {
        self.edge(r.x) * self.edge(r.y) * self.edge(r.z)
    }

    /// Points where the profile changes its polynomial piece.
    pub fn breakpoints(&self) -> [T; 4] {
        let inner = T::one() - self.d;
        [-T::one(), -inner, inner, T::one()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        let c = Cutoff::new(0.1f64).unwrap();
        assert_eq!(c.eval(Vec3::zero()), 1.0);
        assert_eq!(c.eval(Vec3::new(1.05, 0.0, 0.0)), 0.0);
        assert_eq!(c.eval(Vec3::new(0.9, -0.9, 0.9)), 1.0);
        let mid = c.eval(Vec3::new(0.95, 0.0, 0.0));
        assert!((mid - 0.5).abs() < 1e-14);
        let r = Vec3::new(0.93, -0.41, 0.97);
        assert_eq!(c.eval(r), c.eval(-r));
    }

    #[test]
    fn values_in_unit_interval() {
        let c = Cutoff::new(0.2f64).unwrap();
        for i in 0..=400 {
            let x = -1.1 + 2.2 * i as f64 / 400.0;
            let v = c.edge(x);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    /// Weights of the one-sided stencil on nodes `0, 1, …, 7` that returns the
    /// exact third derivative at node 0 for polynomials of degree ≤ 7.
    fn one_sided_third_derivative_weights() -> [f64; 8] {
        use num_rational::Ratio;
        type Q = Ratio<i128>;
        let mut a: Vec<Vec<Q>> = (0..8)
            .map(|m| (0..8).map(|i| Q::from_integer((i as i128).pow(m))).collect())
            .collect();
        let mut b: Vec<Q> = (0..8).map(|m| Q::from_integer(if m == 3 { 6 } else { 0 })).collect();
        for c in 0..8 {
            let p = (c..8).find(|&r| a[r][c] != Q::from_integer(0)).unwrap();
            a.swap(c, p);
            b.swap(c, p);
            for r in 0..8 {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for k in 0..8 {
                        let v = a[c][k];
                        a[r][k] -= f * v;
                    }
                    let v = b[c];
                    b[r] -= f * v;
                }
            }
        }
        let mut w = [0.0; 8];
        for i in 0..8 {
            let x = b[i] / a[i][i];
            w[i] = *x.numer() as f64 / *x.denom() as f64;
        }
        w
    }

    fn third_derivative_jump(f: impl Fn(f64) -> f64, b: f64, h: f64) -> f64 {
        let w = one_sided_third_derivative_weights();
        // Subtracting f(b) removes the constant and the cancellation noise with it.
        let f0 = f(b);
        let f = |x: f64| f(x) - f0;
        let right: f64 = (0..8).map(|i| w[i] * f(b + i as f64 * h)).sum::<f64>() / h.powi(3);
        let left: f64 = -(0..8).map(|i| w[i] * f(b - i as f64 * h)).sum::<f64>() / h.powi(3);
        (right - left).abs()
    }

    #[test]
    fn third_derivative_continuous_at_breakpoints() {
        let c = Cutoff::new(0.1f64).unwrap();
        for &b in &c.breakpoints() {
            let jump = third_derivative_jump(|x| c.edge(x), b, 1e-3);
            assert!(jump < 1e-4, "b={b} jump={jump}");
        }
        // A C¹ smoothstep profile is caught by the same check.
        let smooth_step = |x: f64| {
            let s = ((1.0 - x.abs()) / 0.1).clamp(0.0, 1.0);
            s * s * (3.0 - 2.0 * s)
        };
        assert!(third_derivative_jump(smooth_step, 0.9, 1e-3) > 1.0);
    }

    #[test]
    fn psi_has_three_vanishing_derivatives() {
        // ψ is odd-symmetric about ½: ψ(s) + ψ(1 − s) = 1.
        for i in 0..=20 {
            let s = i as f64 / 20.0;
            assert!((psi(s) + psi(1.0 - s) - 1.0).abs() < 1e-14);
        }
        let eps = 1e-3f64;
        assert!(psi(eps) < 36.0 * eps.powi(4));
        assert!(1.0 - psi(1.0 - eps) < 36.0 * eps.powi(4));
    }

    #[test]
    fn width_validated() {
        assert!(Cutoff::new(0.0f64).is_err());
        assert!(Cutoff::new(1.0f64).is_err());
    }
}
