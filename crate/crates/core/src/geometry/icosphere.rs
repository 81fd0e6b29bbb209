use std::collections::HashMap;

use super::SurfaceMesh;
use crate::{Error, Real, Result, Vec3};

pub const MAX_SUBDIVISIONS: usize = 7;

const FACES: [[usize; 3]; 20] = [
    [0, 11, 5],
    [0, 5, 1],
    [0, 1, 7],
    [0, 7, 10],
    [0, 10, 11],
    [1, 5, 9],
    [5, 11, 4],
    [11, 10, 2],
    [10, 7, 6],
    [7, 1, 8],
    [3, 9, 4],
    [3, 4, 2],
    [3, 2, 6],
    [3, 6, 8],
    [3, 8, 9],
    [4, 9, 5],
    [2, 4, 11],
    [6, 2, 10],
    [8, 6, 7],
    [9, 8, 1],
];

/// Geodesic sphere with `20·4^s` panels, vertices exactly on the sphere and
/// curvature set to `1/radius`.
pub fn make_icosphere<T: Real>(
    subdivisions: usize,
    radius: T,
    center: Vec3<T>,
) -> Result<SurfaceMesh<T>> {
    if subdivisions > MAX_SUBDIVISIONS {
        return Err(Error::InvalidArgument(format!(
            "icosphere subdivisions {subdivisions} exceed {MAX_SUBDIVISIONS}"
        )));
    }
    if !(radius > T::zero()) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    // Unit-sphere construction in f64, converted at the end.
    let mut verts: Vec<[f64; 3]> = raw.iter().map(|v| unit(*v)).collect();
    let mut faces: Vec<[usize; 3]> = FACES.to_vec();

    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(&mut verts, &mut cache, a, b);
            let bc = midpoint(&mut verts, &mut cache, b, c);
            let ca = midpoint(&mut verts, &mut cache, c, a);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }

    let vertices = verts
        .iter()
        .map(|&v| Vec3::from_f64(v) * radius + center)
        .collect();
    let mut mesh = SurfaceMesh::new(vertices, faces)?;
    if mesh.signed_volume() < T::zero() {
        mesh = mesh.flipped()?;
    }
    let n = mesh.n_panels();
    mesh.set_curvature(vec![T::one() / radius; n])?;
    Ok(mesh)
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn midpoint(
    verts: &mut Vec<[f64; 3]>,
    cache: &mut HashMap<(usize, usize), usize>,
    a: usize,
    b: usize,
) -> usize {
    let key = if a < b { (a, b) } else { (b, a) };
    *cache.entry(key).or_insert_with(|| {
        let (p, q) = (verts[a], verts[b]);
        verts.push(unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
        verts.len() - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_counts() {
        assert_eq!(make_icosphere::<f64>(0, 1.0, Vec3::zero()).unwrap().n_panels(), 20);
        assert_eq!(make_icosphere::<f64>(4, 1.0, Vec3::zero()).unwrap().n_panels(), 5120);
        assert_eq!(make_icosphere::<f64>(5, 1.0, Vec3::zero()).unwrap().n_panels(), 20480);
    }

    #[test]
    fn vertices_on_sphere_and_outward() {
        let c = Vec3::new(0.3, -0.2, 1.0);
        let m = make_icosphere::<f64>(3, 0.7, c).unwrap();
        for v in m.vertices() {
            assert!(((*v - c).norm() - 0.7).abs() < 1e-12);
        }
        for (x, n) in m.centroids().iter().zip(m.normals()) {
            assert!((*x - c).dot(*n) > 0.0);
        }
        assert!(m.curvature().iter().all(|&k| (k - 1.0 / 0.7).abs() < 1e-15));
    }

    #[test]
    fn area_converges_quadratically() {
        let exact = 4.0 * std::f64::consts::PI;
        let err: Vec<f64> = (2..=5)
            .map(|s| exact - make_icosphere::<f64>(s, 1.0, Vec3::zero()).unwrap().total_area())
            .collect();
        for w in err.windows(2) {
            assert!(w[0] > 0.0 && w[1] > 0.0);
            assert!(w[0] / w[1] >= 3.5, "ratio {}", w[0] / w[1]);
        }
    }

    #[test]
    fn volume_matches_divergence_theorem() {
        let m = make_icosphere::<f64>(4, 1.0, Vec3::zero()).unwrap();
        let v = m.signed_volume();
        assert!(v > 0.0 && (v - 4.0 / 3.0 * std::f64::consts::PI).abs() < 0.01);
    }

    #[test]
    fn axis_points_are_vertices() {
        let m = make_icosphere::<f64>(1, 1.0, Vec3::zero()).unwrap();
        let (lo, hi) = m.bounding_box();
        assert!((lo - Vec3::splat(-1.0)).norm() < 1e-15);
        assert!((hi - Vec3::splat(1.0)).norm() < 1e-15);
    }

    #[test]
    fn too_many_subdivisions() {
        assert!(make_icosphere::<f64>(8, 1.0, Vec3::zero()).is_err());
    }
}
