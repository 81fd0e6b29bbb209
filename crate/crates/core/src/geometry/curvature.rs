use super::SurfaceMesh;
use crate::{Real, Result, Vec3};

/// How the per-panel curvature scalar is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureMode {
    /// Least-squares quadric fit over the vertex neighbourhood of each panel.
    #[default]
    Fit,
    /// Every curvature set to zero.
    Zero,
    /// Keep the values already stored on the mesh (e.g. set by the sphere generator).
    Analytic,
}

impl std::str::FromStr for CurvatureMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fit" => Ok(Self::Fit),
            "zero" => Ok(Self::Zero),
            "analytic" => Ok(Self::Analytic),
            _ => Err(crate::Error::InvalidArgument(format!(
                "unknown curvature mode '{s}' (fit, zero, analytic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CurvatureReport {
    /// Panels whose fit was underdetermined and fell back to zero.
    pub warnings: usize,
}

/// Returns a copy of `mesh` with curvature filled according to `mode`.
///
/// The fit expresses neighbouring vertices as heights `h(u, w)` over the
/// panel's tangent plane and matches `a0 + a1 u + a2 w + A u² + B uw + C w²`;
/// the stored value is `−(A + C)`, which is `1/R` on a sphere of radius `R`
/// with outward normals.
pub fn estimate_curvature<T: Real>(
    mesh: &SurfaceMesh<T>,
    mode: CurvatureMode,
) -> Result<(SurfaceMesh<T>, CurvatureReport)> {
    let mut out = mesh.clone();
    let mut report = CurvatureReport::default();
    match mode {
        CurvatureMode::Analytic => {}
        CurvatureMode::Zero => out.set_curvature(vec![T::zero(); mesh.n_panels()])?,
        CurvatureMode::Fit => {
            let mut vertex_nbrs: Vec<Vec<usize>> = vec![Vec::new(); mesh.vertices().len()];
            for p in mesh.panels() {
                for &a in p {
                    for &b in p {
                        vertex_nbrs[a].push(b);
                    }
                }
            }
            for l in &mut vertex_nbrs {
                l.sort_unstable();
                l.dedup();
            }
            let mut curv = Vec::with_capacity(mesh.n_panels());
            let mut ring = Vec::new();
            for (i, p) in mesh.panels().iter().enumerate() {
                ring.clear();
                for &v in p {
                    ring.extend_from_slice(&vertex_nbrs[v]);
                }
                ring.sort_unstable();
                ring.dedup();
                let pts: Vec<[f64; 3]> = ring
                    .iter()
                    .map(|&v| mesh.vertices()[v].to_array().map(|c| c.as_f64()))
                    .collect();
                let c = mesh.centroids()[i].to_array().map(|c| c.as_f64());
                let n = mesh.normals()[i].to_array().map(|c| c.as_f64());
                match fit_quadric(&pts, c, n) {
                    Some(k) => curv.push(T::lit(k)),
                    None => {
                        report.warnings += 1;
                        curv.push(T::zero());
                    }
                }
            }
            out.set_curvature(curv)?;
        }
    }
    if report.warnings > 0 {
        log::warn!(
            "curvature fit underdetermined on {} panels; set to zero",
            report.warnings
        );
    }
    Ok((out, report))
}

fn fit_quadric(pts: &[[f64; 3]], c: [f64; 3], n: [f64; 3]) -> Option<f64> {
    if pts.len() < 6 {
        return None;
    }
    let nv = Vec3::new(n[0], n[1], n[2]);
    let e1 = nv.any_orthogonal().normalized();
    let e2 = nv.cross(e1);
    let cv = Vec3::new(c[0], c[1], c[2]);
    let local: Vec<(f64, f64, f64)> = pts
        .iter()
        .map(|p| {
            let d = Vec3::new(p[0], p[1], p[2]) - cv;
            (d.dot(e1), d.dot(e2), d.dot(nv))
        })
        .collect();
    let scale = local
        .iter()
        .map(|&(u, w, _)| u.abs().max(w.abs()))
        .fold(0.0, f64::max);
    if !(scale > 0.0) {
        return None;
    }
    // Normal equations in scaled coordinates.
    let mut ata = [[0.0; 6]; 6];
    let mut atb = [0.0; 6];
    for &(u, w, h) in &local {
        let (u, w) = (u / scale, w / scale);
        let row = [1.0, u, w, u * u, u * w, w * w];
        for r in 0..6 {
            atb[r] += row[r] * h;
            for s in 0..6 {
                ata[r][s] += row[r] * row[s];
            }
        }
    }
    let x = solve6(ata, atb)?;
    Some(-(x[3] + x[5]) / (scale * scale))
}

/// Gaussian elimination with partial pivoting; `None` if numerically singular.
fn solve6(mut a: [[f64; 6]; 6], mut b: [f64; 6]) -> Option<[f64; 6]> {
    let norm = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..6 {
        let piv = (col..6).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * norm {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..6 {
            let f = a[r][col] / a[col][col];
            for s in col..6 {
                a[r][s] -= f * a[col][s];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 6];
    for r in (0..6).rev() {
        let s: f64 = (r + 1..6).map(|s| a[r][s] * x[s]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
