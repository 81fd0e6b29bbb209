//! Spherical Bessel functions of the first and second kind.

use crate::{Error, Real, Result};

pub const MAX_BESSEL_ORDER: usize = 64;
pub const MAX_BESSEL_ARG: f64 = 1e4;

/// `j_ν(x)` for `0 ≤ ν ≤ 64`, `|x| ≤ 1e4`.
pub fn spherical_bessel<T: Real>(nu: usize, x: T) -> Result<T> {
    if nu > MAX_BESSEL_ORDER {
        return Err(Error::InvalidArgument(format!(
            "spherical Bessel order {nu} exceeds {MAX_BESSEL_ORDER}"
        )));
    }
    if !(x.abs().as_f64() <= MAX_BESSEL_ARG) {
        return Err(Error::InvalidArgument(format!(
            "spherical Bessel argument {x} outside [-1e4, 1e4]"
        )));
    }
    Ok(spherical_jn_all(nu, x)[nu])
}

/// `[j_0(x), …, j_nmax(x)]`.
///
/// Ascending series for `|x| < 1`, downward recurrence normalised by `j_0`
/// (or `j_1` near a zero of `j_0`) otherwise.
pub fn spherical_jn_all<T: Real>(nmax: usize, x: T) -> Vec<T> {
    let ax = x.abs();
    let mut out = if ax < T::one() {
        (0..=nmax).map(|n| series(n, ax)).collect()
    } else {
        miller(nmax, ax)
    };
    if x < T::zero() {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `[y_0(x), …, y_nmax(x)]` by upward recurrence, `x > 0`.
pub fn spherical_yn_all<T: Real>(nmax: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(nmax + 1);
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    out.push(y0);
    if nmax == 0 {
        return out;
    }
    let y1 = -c / (x * x) - s / x;
    out.push(y1);
    for n in 1..nmax {
        let two_n1 = T::from_usize_lossy(2 * n + 1);
        let next = two_n1 / x * out[n] - out[n - 1];
        out.push(next);
    }
    out
}

fn series<T: Real>(n: usize, x: T) -> T {
    // x^n / (2n+1)!! * Σ_k (-x²/2)^k / (k! (2n+3)(2n+5)…(2n+2k+1))
    let mut lead = T::one();
    for k in 0..n {
        lead = lead * x / T::from_usize_lossy(2 * k + 3);
    }
    // lead = x^n / (3·5·…·(2n+1)) = x^n/(2n+1)!!
    let mut term = T::one();
    let mut sum = T::one();
    let half_x2 = x * x / T::lit(2.0);
    for k in 1..60 {
        term = -term * half_x2 / (T::from_usize_lossy(k) * T::from_usize_lossy(2 * n + 2 * k + 1));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller<T: Real>(nmax: usize, x: T) -> Vec<T> {
    let xf = x.as_f64();
    let base = (nmax as f64).max(xf.ceil());
    let start = base as usize + 20 + (10.0 * xf.cbrt()).ceil() as usize;
    let big = T::max_value().sqrt().sqrt();

    let mut out = vec![T::zero(); nmax + 1];
    let mut upper = T::zero(); // f_{n+1}
    let mut cur = T::min_positive_value().sqrt(); // f_n, n = start
    for n in (1..=start).rev() {
        // f_{n-1} = (2n+1)/x f_n - f_{n+1}
        let lower = T::from_usize_lossy(2 * n + 1) / x * cur - upper;
        upper = cur;
        cur = lower;
        if n - 1 <= nmax {
            out[n - 1] = cur;
        }
        if n <= nmax {
            out[n] = upper;
        }
        if cur.abs() > big {
            let inv = T::one() / big;
            cur *= inv;
            upper *= inv;
            for v in out.iter_mut() {
                *v *= inv;
            }
        }
    }
    // cur = f_0, upper = f_1
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let scale = if j0.abs() >= j1.abs() {
        j0 / cur
    } else {
        j1 / upper
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}
