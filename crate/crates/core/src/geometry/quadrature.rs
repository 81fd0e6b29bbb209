use super::SurfaceMesh;
use crate::{Error, Real, Result, Vec3};

/// Symmetric triangle rules: (barycentric point, weight) with weights summing to 1.
fn rule(order: usize) -> Option<Vec<([f64; 3], f64)>> {
    let mut r = Vec::new();
    let mut push_s21 = |a: f64, w: f64| {
        let b = 1.0 - 2.0 * a;
        r.push(([a, a, b], w));
        r.push(([a, b, a], w));
        r.push(([b, a, a], w));
    };
    match order {
        1 => return Some(vec![([1.0 / 3.0; 3], 1.0)]),
        3 => push_s21(1.0 / 6.0, 1.0 / 3.0),
        6 => {
            push_s21(0.445_948_490_915_964_886_32, 0.223_381_589_678_011_465_70);
            push_s21(0.091_576_213_509_770_743_46, 0.109_951_743_655_321_867_64);
        }
        12 => {
            push_s21(0.249_286_745_170_910_421_29, 0.116_786_275_726_379_366_03);
            push_s21(0.063_089_014_491_502_228_34, 0.050_844_906_370_206_816_92);
            let (a, b) = (0.053_145_049_844_816_947_35, 0.310_352_451_033_784_405_42);
            let c = 1.0 - a - b;
            let w = 0.082_851_075_618_373_575_19;
            for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                r.push((p, w));
            }
        }
        _ => return None,
    }
    Some(r)
}

/// Polynomial degree integrated exactly by the rule with `order` points.
pub fn exact_degree(order: usize) -> Option<usize> {
    match order {
        1 => Some(1),
        3 => Some(2),
        6 => Some(4),
        12 => Some(6),
        _ => None,
    }
}

/// Quadrature points and weights on every panel of a mesh.
#[derive(Debug, Clone)]
pub struct PanelQuadrature<T> {
    order: usize,
    points: Vec<Vec3<T>>,
    weights: Vec<T>,
}

impl<T: Real> PanelQuadrature<T> {
    /// Number of points per panel.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_panels(&self) -> usize {
        self.points.len() / self.order
    }

    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn panel_points(&self, i: usize) -> &[Vec3<T>] {
        &self.points[i * self.order..(i + 1) * self.order]
    }

    pub fn panel_weights(&self, i: usize) -> &[T] {
        &self.weights[i * self.order..(i + 1) * self.order]
    }

    /// Panel owning global point index `q`.
    #[inline]
    pub fn panel_of(&self, q: usize) -> usize {
        q / self.order
    }
}

/// Builds the `order`-point rule (1, 3, 6 or 12) on every panel.
pub fn panel_quadrature<T: Real>(mesh: &SurfaceMesh<T>, order: usize) -> Result<PanelQuadrature<T>> {
    let rule = rule(order).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unsupported panel quadrature order {order} (use 1, 3, 6 or 12)"
        ))
    })?;
    let wsum: f64 = rule.iter().map(|(_, w)| w).sum();
    let mut points = Vec::with_capacity(mesh.n_panels() * order);
    let mut weights = Vec::with_capacity(mesh.n_panels() * order);
    for i in 0..mesh.n_panels() {
        let [a, b, c] = mesh.panel_vertices(i);
        let area = mesh.areas()[i];
        for (bary, w) in &rule {
            let [l0, l1, l2] = bary.map(T::lit);
            points.push(a * l0 + b * l1 + c * l2);
            weights.push(area * T::lit(w / wsum));
        }
    }
    Ok(PanelQuadrature {
        order,
        points,
        weights,
    })
}
