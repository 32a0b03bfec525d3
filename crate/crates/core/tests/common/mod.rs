//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use cubicnet::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// `₂F₁(a, b; c; z)` by its power series; requires `|z| < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: C64) -> C64 {
    assert!(z.norm() < 1.0, "series diverges at {z}");
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..20_000 {
        let n = n as f64;
        term *= z * ((a + n) * (b + n) / ((c + n) * (n + 1.0)));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn f(z: C64) -> C64 {
    hyp2f1(4.0 / 3.0, 3.0, 8.0 / 3.0, z)
}

fn second_coefficient() -> f64 {
    5.0 * gamma(-5.0 / 3.0) * gamma(-5.0 / 6.0) / (54.0 * 2f64.powf(2.0 / 3.0) * PI.sqrt())
}

/// Period of `[−∞, 0]` in closed form, principal branches throughout.
pub fn w0_closed(t: C64, alpha: C64) -> C64 {
    let a3 = alpha.powf(1.0 / 3.0);
    let p = |z: C64| z.powf(5.0 / 3.0);
    let first = -2.0 * PI * a3 * (t * t - t + 1.0) / (9.0 * 3f64.sqrt() * p(t - 1.0) * p(t));
    first - a3 * second_coefficient() * f(1.0 / t) / t.powi(3)
}

/// Period of `[1, ∞]` in closed form, principal branches throughout.
pub fn w1_closed(t: C64, alpha: C64) -> C64 {
    let a3 = alpha.powf(1.0 / 3.0);
    let p = |z: C64| z.powf(5.0 / 3.0);
    let one = C64::new(1.0, 0.0);
    let first = 2.0 * PI * a3 * (t * t - t + 1.0) / (9.0 * 3f64.sqrt() * p(one - t) * p(-t));
    first - a3 * second_coefficient() * f(1.0 / (one - t)) / (t - 1.0).powi(3)
}

/// Points with `|1/t| < 0.9` and `|1/(1−t)| < 0.9`, away from the real axis.
pub fn series_points(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = vec![];
    while out.len() < n {
        let t = C64::new(rng.gen_range(-2.5..3.5), rng.gen_range(-2.5..2.5));
        if (1.0 / t).norm() < 0.9 && (1.0 / (1.0 - t)).norm() < 0.9 && t.im.abs() > 0.05 {
            out.push(t);
        }
    }
    out
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn alpha_tilted() -> C64 {
    C64::new(-13.89, 8.23)
}

use cubicnet::geometry::self_crossings;
use cubicnet::network::{coincident_pairs, crossing_count, SpectralNetwork};
use cubicnet::spectralcore::{audit_core, compute_spectral_core, joints_outside};

/// Structural checks on a built network; returns the first violation.
pub fn audit_network(net: &SpectralNetwork) -> Result<(), String> {
    let ts = &net.trajectories;
    for (i, t) in ts.iter().enumerate() {
        let n = self_crossings(&t.points);
        if n > 0 {
            return Err(format!("trajectory {i} crosses itself {n} times"));
        }
    }
    // Newborns that retrace an existing trajectory are one curve, not a crossing.
    let same = coincident_pairs(net, 1e-3);
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            if same.contains(&(i, j)) {
                continue;
            }
            let n = crossing_count(net, i, j);
            if n > 1 {
                return Err(format!("trajectories {i} and {j} cross {n} times"));
            }
        }
    }
    if net.phi.zero_list().len() < 2 {
        return Ok(());
    }
    let core = compute_spectral_core(net).map_err(|e| format!("core: {e}"))?;
    let outside = joints_outside(net, &core, 1e-6);
    if !outside.is_empty() {
        return Err(format!("joints {outside:?} outside the core"));
    }
    let audit = audit_core(&core, &net.tolerances);
    if audit.gauss_bonnet_max >= 1e-6 {
        return Err(format!("Gauss-Bonnet residual {}", audit.gauss_bonnet_max));
    }
    if net.phi.zero_list().len() == 3 && !audit.triangles_ok {
        return Err(format!("{} triangles, expected {}", audit.triangle_count, audit.expected_triangles));
    }
    Ok(())
}
