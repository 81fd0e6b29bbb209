use num_complex::Complex;

use crate::{norm2, Error, Real, Result};

/// Result of a GMRES run.
#[derive(Debug, Clone)]
pub struct GmresOutcome<T> {
    pub x: Vec<Complex<T>>,
    pub iterations: usize,
    /// Relative residuals `‖r_j‖/‖b‖`, starting with `j = 0`.
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// `‖b − Ax‖/‖b‖` recomputed at exit.
    pub true_residual: f64,
    /// Bytes held by the Krylov basis at exit.
    pub basis_bytes: usize,
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy<T: Real>(y: &mut [Complex<T>], a: Complex<T>, x: &[Complex<T>]) {
    for (v, w) in y.iter_mut().zip(x) {
        *v += a * w;
    }
}

/// Complex Givens rotation zeroing `b` in `(a, b)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>, Complex<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()), a);
    }
    if na == T::zero() {
        return (T::zero(), Complex::new(T::one(), T::zero()), b);
    }
    let r = na.hypot(nb);
    let phase = a / na;
    let c = na / r;
    let s = phase * b.conj() / r;
    (c, s, phase * r)
}

/// Unrestarted GMRES with modified Gram–Schmidt and one reorthogonalisation
/// pass. Stops when the relative residual drops to `tol` or after `maxit`
/// iterations.
pub fn gmres<T: Real>(
    mut apply: impl FnMut(&[Complex<T>]) -> Result<Vec<Complex<T>>>,
    b: &[Complex<T>],
    tol: f64,
    maxit: usize,
) -> Result<GmresOutcome<T>> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let bnorm = norm2(b);
    if bnorm == T::zero() {
        return Ok(GmresOutcome {
            x: vec![zero; n],
            iterations: 0,
            residuals: vec![0.0],
            converged: true,
            true_residual: 0.0,
            basis_bytes: 0,
        });
    }
    let mut basis: Vec<Vec<Complex<T>>> = vec![b.iter().map(|v| v / bnorm).collect()];
    // Rotated Hessenberg columns; column j has j + 1 entries.
    let mut r_cols: Vec<Vec<Complex<T>>> = Vec::new();
    let mut rot: Vec<(T, Complex<T>)> = Vec::new();
    let mut g = vec![Complex::new(bnorm, T::zero())];
    let mut residuals = vec![1.0];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < maxit {
        let j = iterations;
        let mut w = apply(&basis[j])?;
        if w.len() != n {
            return Err(Error::Shape { expected: n, got: w.len() });
        }
        let mut h = vec![zero; j + 2];
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = dot(v, &w);
                h[i] += c;
                axpy(&mut w, -c, v);
            }
        }
        let hn = norm2(&w);
        h[j + 1] = Complex::new(hn, T::zero());
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (a, bb) = (h[i], h[i + 1]);
            h[i] = a * c + s * bb;
            h[i + 1] = -s.conj() * a + bb * c;
        }
        let (c, s, r) = givens(h[j], h[j + 1]);
        h[j] = r;
        h.truncate(j + 1);
        rot.push((c, s));
        let gj = g[j];
        g[j] = gj * c;
        g.push(-s.conj() * gj);
        r_cols.push(h);
        iterations += 1;
        if r.norm() == T::zero() {
            return Err(Error::Breakdown { iteration: iterations, history: residuals });
        }
        let res = (g[j + 1].norm() / bnorm).as_f64();
        residuals.push(res);
        let happy = hn <= T::epsilon() * bnorm;
        if res <= tol || happy {
            converged = true;
            break;
        }
        basis.push(w.iter().map(|v| v / hn).collect());
    }

    // Back substitution for the coefficients of the first `iterations` vectors.
    let m = iterations;
    let mut y = vec![zero; m];
    for i in (0..m).rev() {
        let mut s = g[i];
        for k in i + 1..m {
            s -= r_cols[k][i] * y[k];
        }
        y[i] = s / r_cols[i][i];
    }
    let mut x = vec![zero; n];
    for (yi, v) in y.iter().zip(&basis) {
        axpy(&mut x, *yi, v);
    }
    let ax = apply(&x)?;
    let r: Vec<Complex<T>> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    let true_residual = (norm2(&r) / bnorm).as_f64();
    let basis_bytes = basis.len() * n * std::mem::size_of::<Complex<T>>();
    if !converged {
        log::warn!("gmres stopped after {maxit} iterations at residual {:.3e}", residuals.last().unwrap());
    }
    Ok(GmresOutcome {
        x,
        iterations,
        residuals,
        converged,
        true_residual,
        basis_bytes,
    })
}
