mod common;

use proptest::prelude::*;
use sbem::kernel::{compute_ghat, decay_slope, eval_g, Cutoff, FilterKind, FilterSpec, KernelSplit};
use sbem::nufft::SpectralGrid;
use sbem::C64;

fn split(kappa: f64, delta: f64, kind: FilterKind, q: usize) -> KernelSplit<f64> {
    KernelSplit::new(kappa, delta, FilterSpec::new(kind, q).unwrap()).unwrap()
}

/// `(1/8)∫_{[-1,1]³} G_δχ e^{−πik·y} dy = ∫_{[0,1]³} G_δχ ∏ cos(πk_j y_j) dy` by evenness.
fn ghat_oracle(s: &KernelSplit<f64>, cutoff: &Cutoff<f64>, k: [i64; 3]) -> C64 {
    let sd = s.sqrt_delta();
    let cuts = [0.0, sd, 4.0 * sd, 16.0 * sd, 0.25, 0.5, 0.75, 0.9, 1.0];
    let tol = 1e-9;
    let pi = std::f64::consts::PI;
    let wt = |j: usize, t: f64| cutoff.edge(t) * (pi * k[j] as f64 * t).cos();
    common::integrate_pieces(
        |x| {
            common::integrate_pieces(
                |y| {
                    common::integrate_pieces(
                        |z| s.g_delta_radial((x * x + y * y + z * z).sqrt()) * wt(2, z),
                        &cuts,
                        tol,
                    ) * wt(1, y)
                },
                &cuts,
                tol,
            ) * wt(0, x)
        },
        &cuts,
        tol,
    )
}

#[test]
fn ghat_zero_mode_matches_direct_quadrature() {
    let s = split(5.0, 4e-3, FilterKind::Power, 5);
    let cutoff = Cutoff::new(0.1).unwrap();
    let grid = SpectralGrid::new(4).unwrap();
    let ghat = compute_ghat(&s, &cutoff, &grid, 4, 5).unwrap();
    let reference = ghat_oracle(&s, &cutoff, [0, 0, 0]);
    let got = ghat.get([0, 0, 0]);
    let rel = (got - reference).norm() / reference.norm();
    assert!(rel < 1e-6, "Ĝ_0 = {got}, reference {reference}, rel {rel:e}");
}

#[test]
fn ghat_nonzero_modes_match_direct_quadrature() {
    // p = 10 puts the expansion error far below the comparison tolerance.
    let s = split(5.0, 4e-3, FilterKind::Power, 5);
    let cutoff = Cutoff::new(0.1).unwrap();
    let grid = SpectralGrid::new(4).unwrap();
    let ghat = compute_ghat(&s, &cutoff, &grid, 10, 5).unwrap();
    for k in [[1, 0, 0], [0, -2, 1], [2, 1, 1]] {
        let reference = ghat_oracle(&s, &cutoff, k);
        let got = ghat.get(k);
        let rel = (got - reference).norm() / reference.norm();
        assert!(rel < 1e-6, "k = {k:?}: {got} vs {reference}, rel {rel:e}");
    }
}

#[test]
fn ghat_is_even() {
    let s = split(12.0, 1e-3, FilterKind::Power, 5);
    let cutoff = Cutoff::new(0.1).unwrap();
    let grid = SpectralGrid::new(6).unwrap();
    let ghat = compute_ghat(&s, &cutoff, &grid, 4, 5).unwrap();
    let scale = ghat.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (k, v) in ghat.iter() {
        let w = ghat.get([-k[0], -k[1], -k[2]]);
        assert!((v - w).norm() <= 1e-10 * scale, "k = {k:?}");
    }
}

#[test]
fn ghat_converges_in_cube_quadrature_order() {
    let s = split(20.0, 4e-4, FilterKind::Power, 5);
    let cutoff = Cutoff::new(0.1).unwrap();
    let grid = SpectralGrid::new(8).unwrap();
    let a = compute_ghat(&s, &cutoff, &grid, 4, 4).unwrap();
    let b = compute_ghat(&s, &cutoff, &grid, 4, 6).unwrap();
    let half = grid.n() as i64 / 2;
    let mut worst = 0.0f64;
    for (k, v) in b.iter() {
        if k.iter().all(|c| c.abs() <= half) {
            worst = worst.max((a.get(k) - v).norm() / v.norm());
        }
    }
    assert!(worst < 1e-6, "worst relative gap {worst:e}");
}

#[test]
fn ghat_decays_at_least_like_fourth_power() {
    for (kappa, delta, n) in [(20.0, 4e-4, 8), (5.0, 4e-3, 16)] {
        let s = split(kappa, delta, FilterKind::Power, 5);
        let grid = SpectralGrid::new(n).unwrap();
        let ghat = compute_ghat(&s, &Cutoff::new(0.1).unwrap(), &grid, 4, 5).unwrap();
        let slope = decay_slope(&ghat);
        assert!(slope <= -3.5, "κ = {kappa}, N = {n}: slope {slope}");
    }
}

#[test]
fn ghat_rejects_low_cube_order() {
    let s = split(1.0, 1e-2, FilterKind::Product, 3);
    let grid = SpectralGrid::new(2).unwrap();
    assert!(compute_ghat(&s, &Cutoff::new(0.1).unwrap(), &grid, 2, 1).is_err());
}

/// `2π ∫₀^∞ E(s) s ds`, the polar form of `∫_{ℝ²} E(‖t‖) d²t`.
fn phi0_oracle(s: &KernelSplit<f64>) -> C64 {
    let rate = s.decay_rate();
    let end = 45.0 / rate;
    let mut cuts = vec![0.0];
    let mut x = 0.25;
    while x < end {
        cuts.push(x);
        x *= 2.0;
    }
    cuts.push(end);
    let inner = common::integrate_pieces(
        |z| if z == 0.0 { -s.eval_f(1e-300) / (4.0 * std::f64::consts::PI) } else { s.eval_e(z).unwrap() * z },
        &cuts,
        1e-15,
    );
    inner * (2.0 * std::f64::consts::PI)
}

#[test]
fn phi0_matches_radial_quadrature() {
    let kt_values = [0.0, 0.4];
    let mut phis = Vec::new();
    for kind in [FilterKind::Product, FilterKind::Power] {
        for q in [1, 3, 5] {
            for &kt in &kt_values {
                let delta = 1e-4f64;
                let s = split(kt / delta.sqrt(), delta, kind, q);
                let (phi, psi) = s.local_coefficients();
                let reference = phi0_oracle(&s);
                let rel = (phi - reference).norm() / reference.norm();
                assert!(rel < 1e-8, "{kind} q={q} κ̃={kt}: {phi} vs {reference}");
                assert_eq!(psi, -phi);
                if q == 5 && kind == FilterKind::Power {
                    phis.push(phi);
                }
            }
        }
    }
    assert!((phis[0] - phis[1]).norm() > 1e-3);
}

#[test]
fn psi0_matches_sphere_double_layer_of_remainder() {
    // On a sphere of radius R the double layer of E_δ at a surface point is
    // (π/R) ∫₀^{2R} f′(r) r² dr with f(r) = δ^{-1/2} E(r/√δ); the local
    // expansion predicts √δ·Ψ₀/R.
    let r_sphere = 1.0;
    let (kappa, delta) = (3.0, 1e-6);
    let s = split(kappa, delta, FilterKind::Power, 5);
    let sd = delta.sqrt();
    // f′(r) = G′(r) − G_δ′(r).
    let dg = |r: f64| {
        let e = C64::new(0.0, kappa * r).exp();
        e * C64::new(-1.0, kappa * r) / (4.0 * std::f64::consts::PI * r * r)
    };
    let integrand = |r: f64| {
        if r == 0.0 {
            return C64::new(-1.0 / (4.0 * std::f64::consts::PI), 0.0);
        }
        (dg(r) - s.g_delta_radial_derivative(r)) * r * r
    };
    // Past 60/decay_rate the remainder is below e^{-60} and G′ − G_δ′ is
    // cancellation noise.
    let end = (60.0 / s.decay_rate()).min(2.0 * r_sphere / sd);
    let cuts: Vec<f64> = [0.0, 1.0, 4.0, 16.0]
        .iter()
        .copied()
        .filter(|&c| c < end)
        .chain(std::iter::once(end))
        .map(|c| c * sd)
        .collect();
    let value = common::integrate_pieces(integrand, &cuts, 1e-16) * (std::f64::consts::PI / r_sphere);
    let (_, psi) = s.local_coefficients();
    let predicted = psi * (sd / r_sphere);
    let rel = (value - predicted).norm() / predicted.norm();
    assert!(rel < 1e-3, "{value} vs {predicted}");
}

#[test]
fn remainder_is_exponentially_local() {
    // Simple poles: |E(z)|·e^{z·min Im w̃} is non-increasing. The power
    // filter carries a degree q−1 polynomial, so its envelope is divided by
    // z^{q−1} first.
    for (kind, power) in [(FilterKind::Product, 0), (FilterKind::Power, 4)] {
        let s = split(30.0, 1e-4, kind, 5);
        let rate = s.decay_rate();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let z = 1.0 + 0.25 * i as f64;
            let v = s.eval_e(z).unwrap().norm() * (z * rate).exp() / z.powi(power);
            assert!(v <= prev * (1.0 + 1e-12), "{kind} z={z}");
            prev = v;
        }
    }
}

#[test]
fn g_delta_bounded_near_origin() {
    for kind in [FilterKind::Product, FilterKind::Power] {
        let s = split(40.0, 1e-4, kind, 5);
        let lim = s.limit_at_origin();
        for e in -8..=-2 {
            let r = 10f64.powi(e) * s.sqrt_delta();
            let v = s.g_delta_radial(r);
            let tol = 1e-6f64.max(10f64.powi(e) * 10.0);
            assert!((v - lim).norm() <= tol * lim.norm(), "{kind} r = 1e{e}·√δ");
        }
    }
}

fn sum_residues(kind: FilterKind, q: usize) -> f64 {
    FilterSpec::new(kind, q).unwrap().residues_f64().iter().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn split_identity_holds(
        x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0,
        kappa in 0.5f64..80.0,
        frac in 0.05f64..0.95,
        kind_power in any::<bool>(),
        qi in 0usize..3,
    ) {
        let q = [1, 3, 5][qi];
        let kind = if kind_power { FilterKind::Power } else { FilterKind::Product };
        let r = (x * x + y * y + z * z).sqrt();
        prop_assume!(r > 1e-3);
        let sd = frac / kappa;
        let s = split(kappa, sd * sd, kind, q);
        let g = eval_g(kappa, r).unwrap();
        let e = s.eval_e(r / sd).unwrap() / sd;
        let rel = (g - (s.g_delta_radial(r) + e)).norm() / g.norm();
        prop_assert!(rel <= 1e-12, "rel {:e}", rel);
    }

    #[test]
    fn residues_sum_to_zero(q in 1usize..=8, kind_power in any::<bool>()) {
        let kind = if kind_power { FilterKind::Power } else { FilterKind::Product };
        prop_assert!(sum_residues(kind, q).abs() <= 1e-12);
        prop_assert_eq!(FilterSpec::new(kind, q).unwrap().residue_sum(), 0.into());
    }
}

fn flat_plate_remainder(delta: f64) -> f64 {
    let s = split(5.0, delta, FilterKind::Power, 5);
    let (phi, _) = s.local_coefficients();
    let local = common::flat_plate_local_potential(&s, 1.0, |x, _| (3.0 * x).cos());
    (local - phi * delta.sqrt()).norm()
}

#[test]
fn flat_plate_local_remainder_is_three_halves_order() {
    let deltas = [1e-3, 2.5e-4, 6.25e-5];
    let r: Vec<f64> = deltas.iter().map(|&d| flat_plate_remainder(d)).collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) = deltas.iter().zip(&r).map(|(d, r)| (d.ln(), r.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / 3.0;
    let my = ly.iter().sum::<f64>() / 3.0;
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    eprintln!("remainders {r:?} slope {slope}");
    assert!(slope >= 1.4, "slope {slope}");
}

#[test]
fn flat_plate_constant_density_reproduces_phi0() {
    let delta = 1e-4;
    let s = split(5.0, delta, FilterKind::Power, 5);
    let (phi, _) = s.local_coefficients();
    let local = common::flat_plate_local_potential(&s, 1.0, |_, _| 1.0);
    assert!((local - phi * delta.sqrt()).norm() < 1e-8 * local.norm());
}
