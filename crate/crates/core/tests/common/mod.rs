//! Reference integrators shared by the integration tests.
#![allow(dead_code)]

use sbem::C64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod 7/15 on `[a, b]` to absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64) -> C64 {
    fn rec(f: &mut dyn FnMut(f64) -> C64, a: f64, b: f64, tol: f64, depth: usize) -> C64 {
        let (v, err) = gk15(f, a, b);
        // Stop at the tolerance or once the estimate is at roundoff level.
        if err <= tol || err <= 1e-14 * v.norm() || depth > 30 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(&mut f, a, b, tol, 0)
}

/// Adaptive integration over consecutive intervals `cuts[i]..cuts[i+1]`.
pub fn integrate_pieces(mut f: impl FnMut(f64) -> C64, cuts: &[f64], tol: f64) -> C64 {
    let n = (cuts.len() - 1) as f64;
    cuts.windows(2)
        .map(|w| integrate(&mut f, w[0], w[1], tol / n))
        .sum()
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sbem::geometry::{make_icosphere, SurfaceMesh};
use sbem::Vec3;

/// Icosphere of diameter `diameter` centred in `[0, 0.9]³`.
pub fn box_sphere(subdivisions: usize, diameter: f64) -> SurfaceMesh<f64> {
    make_icosphere(subdivisions, 0.5 * diameter, Vec3::splat(0.45)).unwrap()
}

/// Square plate `[a, b]²` at height `z`, `m × m` cells split into triangles.
pub fn flat_plate(m: usize, a: f64, b: f64, z: f64) -> SurfaceMesh<f64> {
    let h = (b - a) / m as f64;
    let mut v = Vec::new();
    for i in 0..=m {
        for j in 0..=m {
            v.push(Vec3::new(a + i as f64 * h, a + j as f64 * h, z));
        }
    }
    let id = |i: usize, j: usize| i * (m + 1) + j;
    let mut p = Vec::new();
    for i in 0..m {
        for j in 0..m {
            p.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            p.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    SurfaceMesh::new(v, p).unwrap()
}

pub fn random_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn rel_err(a: &[C64], b: &[C64]) -> f64 {
    sbem::rel_diff(a, b)
}

/// Unconjugated pairing `Σ a_i b_i`.
pub fn bilinear(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Local single layer `∫_{disk R} δ^{-1/2}E(‖y‖/√δ) g(y) dA` at the disk centre,
/// by nested polar quadrature.
pub fn flat_plate_local_potential(s: &sbem::kernel::KernelSplit<f64>, radius: f64, g: impl Fn(f64, f64) -> f64) -> C64 {
    let sd = s.sqrt_delta();
    let end = (radius / sd).min(60.0 / s.decay_rate());
    let mut cuts = vec![0.0];
    let mut u = 0.25;
    while u < end {
        cuts.push(u);
        u *= 2.0;
    }
    cuts.push(end);
    let two_pi = 2.0 * std::f64::consts::PI;
    let radial = integrate_pieces(
        |u| {
            let eu = if u == 0.0 { -s.eval_f(1e-300) / (4.0 * std::f64::consts::PI) } else { s.eval_e(u).unwrap() * u };
            let ring = integrate_pieces(
                |t| C64::new(g(sd * u * t.cos(), sd * u * t.sin()), 0.0),
                &[0.0, 0.25 * two_pi, 0.5 * two_pi, 0.75 * two_pi, two_pi],
                1e-15,
            );
            eu * ring
        },
        &cuts,
        1e-16,
    );
    radial * sd
}
