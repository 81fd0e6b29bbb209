//! Dense reference matrices used to check the fast path.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;

use super::AssembledOperator;
use crate::geometry::{panel_quadrature, SurfaceMesh};
use crate::kernel::{Cutoff, KernelSplit};
use crate::special::{legendre_p, spherical_jn_all};
use crate::{neg_i_pow, Error, Real, Result};

/// Largest panel count accepted by the dense builders.
pub const MAX_DENSE_PANELS: usize = 2000;
/// Largest grid accepted by [`dense_oracle_gn`].
pub const MAX_DENSE_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Single,
    Double,
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape {
                expected: cols,
                got: bad.len(),
            });
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.cols {
            return Err(Error::Shape {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .into_par_iter()
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// `self + s·other`.
    pub fn add_scaled(&mut self, s: Complex<T>, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                expected: self.data.len(),
                got: other.data.len(),
            });
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn add_diagonal(&mut self, d: &[Complex<T>]) -> Result<()> {
        if d.len() != self.rows.min(self.cols) {
            return Err(Error::Shape {
                expected: self.rows.min(self.cols),
                got: d.len(),
            });
        }
        for (i, v) in d.iter().enumerate() {
            self.data[i * self.cols + i] += v;
        }
        Ok(())
    }

    /// `max |A_ij − A_ji| / max |A_ij|` (unconjugated).
    pub fn symmetry_defect(&self) -> T {
        let mut diff = T::zero();
        let mut big = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                big = big.max(a.norm());
                if j < self.rows && i < self.cols {
                    diff = diff.max((a - self.get(j, i)).norm());
                }
            }
        }
        if big > T::zero() {
            diff / big
        } else {
            diff
        }
    }

    /// One line per row: `re,im` pairs separated by commas.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{:e},{:e}", v.re, v.im)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

fn guard_panels(n: usize) -> Result<()> {
    if n > MAX_DENSE_PANELS {
        return Err(Error::InvalidArgument(format!(
            "dense reference limited to {MAX_DENSE_PANELS} panels, mesh has {n}"
        )));
    }
    Ok(())
}

/// Truncated plane-wave factor `e^{−πik·y}` of every mode for one point,
/// built directly from the Jacobi–Anger sum over `|α| ≤ p`.
fn truncated_exponentials<T: Real>(
    n: usize,
    p: usize,
    modes: &[[i64; 3]],
    l: [usize; 3],
    t: [T; 3],
    limit: i64,
) -> Vec<Complex<T>> {
    let w = (2 * limit + 1) as usize;
    let pi = T::PI();
    let nf = T::from_usize_lossy(n);
    // u[j][ν][k] = (−i)^ν (2ν+1) j_ν(πk/(2N)) P_ν(t_j) e^{−πi k l_j / N}
    let mut u = vec![vec![vec![Complex::new(T::zero(), T::zero()); w]; p + 1]; 3];
    for j in 0..3 {
        let leg: Vec<T> = (0..=p).map(|nu| legendre_p(nu, t[j])).collect();
        for (ik, k) in (-limit..=limit).enumerate() {
            let x = pi * T::lit(k as f64) / (T::lit(2.0) * nf);
            let jn = spherical_jn_all(p, x);
            let phase = crate::cis(-pi * T::lit((k * l[j] as i64) as f64) / nf);
            for nu in 0..=p {
                u[j][nu][ik] = neg_i_pow::<T>(nu) * T::from_usize_lossy(2 * nu + 1) * jn[nu] * leg[nu] * phase;
            }
        }
    }
    // Prefix sums over the last axis keep the total degree bounded by p.
    let mut c2 = vec![vec![Complex::new(T::zero(), T::zero()); w]; p + 1];
    for ik in 0..w {
        let mut acc = Complex::new(T::zero(), T::zero());
        for m in 0..=p {
            acc += u[2][m][ik];
            c2[m][ik] = acc;
        }
    }
    modes
        .iter()
        .map(|k| {
            let i0 = (k[0] + limit) as usize;
            let i1 = (k[1] + limit) as usize;
            let i2 = (k[2] + limit) as usize;
            let mut acc = Complex::new(T::zero(), T::zero());
            for a0 in 0..=p {
                for a1 in 0..=p - a0 {
                    acc += u[0][a0][i0] * u[1][a1][i1] * c2[p - a0 - a1][i2];
                }
            }
            acc
        })
        .collect()
}

/// Matrix of the smooth layer with the truncated kernel, evaluated mode by
/// mode: `A_ij = Σ_k Ĝ_k · conj(B_ki) · B'_kj`. `mode_limit` keeps only
/// `‖k‖_∞ ≤ mode_limit`.
pub fn dense_oracle_gn<T: Real>(op: &AssembledOperator<T>, layer: Layer, mode_limit: Option<usize>) -> Result<DenseMatrix<T>> {
    let mesh = op.mesh();
    let n_panels = mesh.n_panels();
    guard_panels(n_panels)?;
    let grid = op.grid();
    let n = grid.n();
    if n > MAX_DENSE_GRID {
        return Err(Error::InvalidArgument(format!(
            "dense reference limited to N ≤ {MAX_DENSE_GRID}, got {n}"
        )));
    }
    let limit = mode_limit.unwrap_or(n).min(n) as i64;
    let modes: Vec<[i64; 3]> = (-limit..=limit)
        .flat_map(|a| (-limit..=limit).flat_map(move |b| (-limit..=limit).map(move |c| [a, b, c])))
        .collect();
    let p = op.config().p;
    let quad = op.quadrature();
    let ghat: Vec<Complex<T>> = modes.iter().map(|&k| op.ghat().get(k)).collect();
    let pi = T::PI();

    // Columns of B (plain) and B' (layer-specific) per panel.
    let cols: Vec<(Vec<Complex<T>>, Vec<Complex<T>>)> = (0..n_panels)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let mut plain = vec![Complex::new(T::zero(), T::zero()); modes.len()];
            for (y, w) in quad.panel_points(i).iter().zip(quad.panel_weights(i)) {
                let (l, t) = grid.locate(*y)?;
                let e = truncated_exponentials(n, p, &modes, l, t.to_array(), limit);
                for (a, v) in plain.iter_mut().zip(e) {
                    *a += v * *w;
                }
            }
            let layered = match layer {
                Layer::Single => plain.clone(),
                Layer::Double => {
                    let nrm = mesh.normals()[i];
                    plain
                        .iter()
                        .zip(&modes)
                        .map(|(v, k)| {
                            let kn = T::lit(k[0] as f64) * nrm.x + T::lit(k[1] as f64) * nrm.y + T::lit(k[2] as f64) * nrm.z;
                            v * Complex::new(T::zero(), -pi * kn)
                        })
                        .collect()
                }
            };
            Ok((plain, layered))
        })
        .collect::<Result<_>>()?;

    let rows: Vec<Vec<Complex<T>>> = (0..n_panels)
        .into_par_iter()
        .map(|i| {
            let left: Vec<Complex<T>> = cols[i].0.iter().zip(&ghat).map(|(b, g)| b.conj() * g).collect();
            (0..n_panels)
                .map(|j| {
                    left.iter()
                        .zip(&cols[j].1)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
                })
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(rows)
}

/// Smooth-layer matrix from direct panel quadrature of `G_δ(x−y)·χ((x−y)/scale)`.
///
/// The double layer differentiates `G_δ` only; `χ` is identically one on
/// every pair of a mesh that fits the unit box.
pub fn gdelta_matrix<T: Real>(
    mesh: &SurfaceMesh<T>,
    split: &KernelSplit<T>,
    cutoff: &Cutoff<T>,
    cutoff_scale: T,
    layer: Layer,
    quad_order: usize,
) -> Result<DenseMatrix<T>> {
    let n_panels = mesh.n_panels();
    guard_panels(n_panels)?;
    let quad = panel_quadrature(mesh, quad_order)?;
    let rows: Vec<Vec<Complex<T>>> = (0..n_panels)
        .into_par_iter()
        .map(|i| {
            (0..n_panels)
                .map(|j| {
                    let nj = mesh.normals()[j];
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (x, wx) in quad.panel_points(i).iter().zip(quad.panel_weights(i)) {
                        for (y, wy) in quad.panel_points(j).iter().zip(quad.panel_weights(j)) {
                            let d = *x - *y;
                            let chi = cutoff.eval(d / cutoff_scale);
                            if chi == T::zero() {
                                continue;
                            }
                            let r = d.norm();
                            let v = match layer {
                                Layer::Single => split.g_delta_radial(r),
                                Layer::Double => {
                                    if r == T::zero() {
                                        Complex::new(T::zero(), T::zero())
                                    } else {
                                        // ∂/∂n_y G_δ(|x − y|) = G_δ′(r)·n_y·(y − x)/r
                                        split.g_delta_radial_derivative(r) * (-nj.dot(d) / r)
                                    }
                                }
                            };
                            acc += v * (chi * *wx * *wy);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(rows)
}

/// [`gdelta_matrix`] with the operator's mesh, kernel and cut-off.
pub fn dense_oracle_gdelta<T: Real>(op: &AssembledOperator<T>, layer: Layer, quad_order: usize) -> Result<DenseMatrix<T>> {
    gdelta_matrix(op.mesh(), op.split(), op.cutoff(), T::one(), layer, quad_order)
}

/// Full combined operator with the smooth part from [`dense_oracle_gdelta`].
pub fn dense_reference_combined<T: Real>(op: &AssembledOperator<T>, quad_order: usize) -> Result<DenseMatrix<T>> {
    let mut a = dense_oracle_gdelta(op, Layer::Double, quad_order)?;
    let v = dense_oracle_gdelta(op, Layer::Single, quad_order)?;
    a.add_scaled(Complex::new(T::zero(), -T::lit(op.config().eta)), &v)?;
    let n = op.dim();
    let unit = vec![Complex::new(T::one(), T::zero()); n];
    let mut diag: Vec<Complex<T>> = op.apply_local(&unit)?;
    for (d, m) in diag.iter_mut().zip(op.mass()) {
        *d += *m;
    }
    a.add_diagonal(&diag)?;
    Ok(a)
}
