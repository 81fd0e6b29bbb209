//! Triangulated scatterers: ingestion, synthetic spheres, scaling and
//! per-panel geometric data.

mod curvature;
mod icosphere;
mod obj;
mod quadrature;

pub use curvature::{estimate_curvature, CurvatureMode, CurvatureReport};
pub use icosphere::{make_icosphere, MAX_SUBDIVISIONS};
pub use obj::{load_mesh, parse_obj, write_obj, MeshFormat};
pub use quadrature::{exact_degree, panel_quadrature, PanelQuadrature};

use crate::{Error, Real, Result, Vec3};

/// Closed triangulated surface with per-panel centroid, unit normal, area
/// and curvature scalar.
#[derive(Debug, Clone)]
pub struct SurfaceMesh<T> {
    vertices: Vec<Vec3<T>>,
    panels: Vec<[usize; 3]>,
    centroids: Vec<Vec3<T>>,
    normals: Vec<Vec3<T>>,
    areas: Vec<T>,
    curvature: Vec<T>,
}

impl<T: Real> SurfaceMesh<T> {
    /// Builds a mesh and its derived panel data. Curvature starts at zero.
    pub fn new(vertices: Vec<Vec3<T>>, panels: Vec<[usize; 3]>) -> Result<Self> {
        if panels.is_empty() {
            return Err(Error::InvalidMesh("mesh has no panels".into()));
        }
        let mut centroids = Vec::with_capacity(panels.len());
        let mut normals = Vec::with_capacity(panels.len());
        let mut areas = Vec::with_capacity(panels.len());
        let third = T::one() / T::lit(3.0);
        for (i, p) in panels.iter().enumerate() {
            if let Some(&bad) = p.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "panel {i} references vertex {bad} of {}",
                    vertices.len()
                )));
            }
            let [a, b, c] = p.map(|v| vertices[v]);
            let n = (b - a).cross(c - a);
            let twice_area = n.norm();
            if !(twice_area > T::zero()) {
                return Err(Error::InvalidMesh(format!("panel {i} is degenerate")));
            }
            centroids.push((a + b + c) * third);
            normals.push(n / twice_area);
            areas.push(twice_area / T::lit(2.0));
        }
        let curvature = vec![T::zero(); panels.len()];
        Ok(Self {
            vertices,
            panels,
            centroids,
            normals,
            areas,
            curvature,
        })
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn panels(&self) -> &[[usize; 3]] {
        &self.panels
    }

    pub fn n_panels(&self) -> usize {
        self.panels.len()
    }

    pub fn centroids(&self) -> &[Vec3<T>] {
        &self.centroids
    }

    pub fn normals(&self) -> &[Vec3<T>] {
        &self.normals
    }

    pub fn areas(&self) -> &[T] {
        &self.areas
    }

    pub fn curvature(&self) -> &[T] {
        &self.curvature
    }

    pub fn panel_vertices(&self, i: usize) -> [Vec3<T>; 3] {
        self.panels[i].map(|v| self.vertices[v])
    }

    pub fn total_area(&self) -> T {
        self.areas.iter().copied().sum()
    }

    /// Enclosed volume by the divergence theorem; positive for outward normals.
    pub fn signed_volume(&self) -> T {
        let third = T::one() / T::lit(3.0);
        self.centroids
            .iter()
            .zip(&self.normals)
            .zip(&self.areas)
            .map(|((c, n), &a)| a * c.dot(*n) * third)
            .sum()
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec3<T>, Vec3<T>) {
        let first = self.vertices[self.panels[0][0]];
        self.vertices
            .iter()
            .fold((first, first), |(lo, hi), v| {
                (lo.component_min(*v), hi.component_max(*v))
            })
    }

    /// Longest bounding-box extent.
    pub fn diameter(&self) -> T {
        let (lo, hi) = self.bounding_box();
        (hi - lo).max_abs()
    }

    pub fn set_curvature(&mut self, values: Vec<T>) -> Result<()> {
        if values.len() != self.panels.len() {
            return Err(Error::Shape {
                expected: self.panels.len(),
                got: values.len(),
            });
        }
        self.curvature = values;
        Ok(())
    }

    /// Reverses every panel (flips all normals).
    pub fn flipped(&self) -> Result<Self> {
        let panels = self.panels.iter().map(|&[a, b, c]| [a, c, b]).collect();
        let mut m = Self::new(self.vertices.clone(), panels)?;
        m.curvature = self.curvature.iter().map(|&c| -c).collect();
        Ok(m)
    }

    /// Applies `x ↦ scale·x + translation`; curvature scales by `1/scale`.
    pub fn transformed(&self, scale: T, translation: Vec3<T>) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|&v| v * scale + translation)
            .collect();
        let mut m = Self::new(vertices, self.panels.clone())?;
        m.curvature = self.curvature.iter().map(|&c| c / scale).collect();
        Ok(m)
    }
}

/// Affine map taking an original mesh into the unit box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleRecord<T> {
    pub scale: T,
    pub translation: Vec3<T>,
    pub original_min: Vec3<T>,
    pub original_max: Vec3<T>,
}

impl<T: Real> ScaleRecord<T> {
    pub fn apply(&self, p: Vec3<T>) -> Vec3<T> {
        p * self.scale + self.translation
    }

    pub fn invert(&self, p: Vec3<T>) -> Vec3<T> {
        (p - self.translation) / self.scale
    }

    /// Physical wavenumber expressed in scaled coordinates.
    pub fn scaled_wavenumber(&self, kappa_physical: T) -> T {
        kappa_physical / self.scale
    }
}

/// Default width of the cut-off shell (and of the unused margin of the unit box).
pub const DEFAULT_SHELL_WIDTH: f64 = 0.1;

/// Scales and translates `mesh` so that it fits `[0, 1−d]³`, touching the
/// upper face along its longest axis and the lower faces along every axis.
pub fn scale_to_unit_box<T: Real>(
    mesh: &SurfaceMesh<T>,
    d: T,
) -> Result<(SurfaceMesh<T>, ScaleRecord<T>)> {
    if !(d > T::zero() && d < T::lit(0.5)) {
        return Err(Error::InvalidArgument(format!(
            "shell width d = {d} outside (0, 0.5)"
        )));
    }
    let (lo, hi) = mesh.bounding_box();
    let extent = (hi - lo).max_abs();
    if !(extent > T::zero()) {
        return Err(Error::InvalidMesh("mesh has zero extent".into()));
    }
    let scale = (T::one() - d) / extent;
    let translation = -(lo * scale);
    let scaled = mesh.transformed(scale, translation)?;
    Ok((
        scaled,
        ScaleRecord {
            scale,
            translation,
            original_min: lo,
            original_max: hi,
        },
    ))
}
