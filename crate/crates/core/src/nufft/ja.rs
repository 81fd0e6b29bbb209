use num_complex::Complex;

use super::{MultiIndexSet, SpectralGrid};
use crate::special::spherical_jn_all;
use crate::{neg_i_pow, Real};

/// One-dimensional Jacobi–Anger factors `f_ν(k) = (−i)^ν (2ν+1) j_ν(πkH)`
/// for `ν ≤ p`, `|k| ≤ N`, so that
/// `e^{−iπkH t} ≈ Σ_ν f_ν(k) P_ν(t)` and `K_α(k) = ∏_j f_{α_j}(k_j)`.
#[derive(Debug, Clone)]
pub struct JaTables<T> {
    n: usize,
    p: usize,
    /// `table[ν][k + N]`
    table: Vec<Vec<Complex<T>>>,
    alphas: MultiIndexSet,
}

impl<T: Real> JaTables<T> {
    pub fn new(grid: &SpectralGrid, p: usize) -> Self {
        let n = grid.n();
        let h = 1.0 / (2.0 * n as f64);
        let mut table = vec![vec![Complex::new(T::zero(), T::zero()); 2 * n + 1]; p + 1];
        for k in -(n as i64)..=n as i64 {
            let x = std::f64::consts::PI * k as f64 * h;
            let j = spherical_jn_all(p, x);
            for (nu, row) in table.iter_mut().enumerate() {
                row[(k + n as i64) as usize] =
                    neg_i_pow::<T>(nu) * T::lit((2 * nu + 1) as f64 * j[nu]);
            }
        }
        Self {
            n,
            p,
            table,
            alphas: MultiIndexSet::new(p),
        }
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &MultiIndexSet {
        &self.alphas
    }

    #[inline]
    pub fn factor_1d(&self, nu: usize, k: i64) -> Complex<T> {
        self.table[nu][(k + self.n as i64) as usize]
    }

    /// Row of `f_ν(k)` for `k = −N..=N`.
    #[inline]
    pub fn row(&self, nu: usize) -> &[Complex<T>] {
        &self.table[nu]
    }

    /// Forward factor `K_α(k)`; the adjoint uses its conjugate.
    #[inline]
    pub fn factor(&self, alpha: [usize; 3], k: [i64; 3]) -> Complex<T> {
        self.factor_1d(alpha[0], k[0]) * self.factor_1d(alpha[1], k[1]) * self.factor_1d(alpha[2], k[2])
    }
}

/// Nominal truncation bound `(π‖k‖₁/(4N))^{p+1}/(p+1)!`.
pub fn ja_error_bound(k: [i64; 3], n: usize, p: usize) -> f64 {
    let l1 = k.iter().map(|v| v.unsigned_abs() as f64).sum::<f64>();
    let x = std::f64::consts::PI * l1 / (4.0 * n as f64);
    let fact: f64 = (1..=p + 1).map(|i| i as f64).product();
    x.powi(p as i32 + 1) / fact
}

/// A bound on the truncation error that holds for every `t ∈ [−1, 1]³`:
/// with `x = π‖k‖₁/(4N)`, `(2x)^{p+1}/(p+1)!·e^{2x}`.
pub fn ja_rigorous_bound(k: [i64; 3], n: usize, p: usize) -> f64 {
    let l1 = k.iter().map(|v| v.unsigned_abs() as f64).sum::<f64>();
    let x = std::f64::consts::PI * l1 / (4.0 * n as f64);
    let fact: f64 = (1..=p + 1).map(|i| i as f64).product();
    (2.0 * x).powi(p as i32 + 1) / fact * (2.0 * x).exp()
}

/// `|e^{−iπk·(Ht)} − Σ_{|α|≤p} K_α(k) P_α(t)|`.
pub fn ja_truncation_error(ja: &JaTables<f64>, k: [i64; 3], t: [f64; 3]) -> f64 {
    let n = ja.n() as f64;
    let h = 1.0 / (2.0 * n);
    let phase = -std::f64::consts::PI * h * (k[0] as f64 * t[0] + k[1] as f64 * t[1] + k[2] as f64 * t[2]);
    let exact = Complex::new(phase.cos(), phase.sin());
    let p = ja.order();
    let mut leg = [vec![0.0; p + 1], vec![0.0; p + 1], vec![0.0; p + 1]];
    for j in 0..3 {
        crate::special::legendre_all(p, t[j], &mut leg[j]);
    }
    let mut approx = Complex::new(0.0, 0.0);
    for a in ja.alphas().iter() {
        approx += ja.factor(*a, k) * (leg[0][a[0]] * leg[1][a[1]] * leg[2][a[2]]);
    }
    (exact - approx).norm()
}
