use crate::Real;

/// Writes `P_0(t), …, P_n(t)` into `out[..=n]`.
#[inline]
pub fn legendre_all<T: Real>(n: usize, t: T, out: &mut [T]) {
    out[0] = T::one();
    if n == 0 {
        return;
    }
    out[1] = t;
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        out[k + 1] = ((kf + kf + T::one()) * t * out[k] - kf * out[k - 1]) / (kf + T::one());
    }
}

pub fn legendre_p<T: Real>(n: usize, t: T) -> T {
    let mut buf = vec![T::zero(); n + 1];
    legendre_all(n, t, &mut buf);
    buf[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_closed_forms() {
        for &t in &[-1.0, -0.3, 0.0, 0.7, 1.0f64] {
            assert!((legendre_p(2, t) - 0.5 * (3.0 * t * t - 1.0)).abs() < 1e-15);
            assert!((legendre_p(3, t) - 0.5 * (5.0 * t * t * t - 3.0 * t)).abs() < 1e-15);
            let p4 = (35.0 * t.powi(4) - 30.0 * t * t + 3.0) / 8.0;
            assert!((legendre_p(4, t) - p4).abs() < 1e-14);
        }
    }

    #[test]
    fn endpoint_values() {
        for n in 0..20 {
            assert!((legendre_p(n, 1.0f64) - 1.0).abs() < 1e-13);
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre_p(n, -1.0f64) - s).abs() < 1e-13);
        }
    }
}
