//! Adaptive Gauss-Legendre quadrature of complex-valued functions on real
//! intervals, with error estimates from interval halving.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const ORDER: usize = 20;

/// Nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Fixed-order rule on [a, b].
pub fn fixed<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let (x, w) = rule();
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    let mut s = C64::new(0.0, 0.0);
    for i in 0..x.len() {
        s += f(m + h * x[i]) * w[i];
    }
    s * h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
}

/// Integrates `f` over [a, b] until the halving estimate is below
/// `max(abs_tol, rel_tol·|I|)`; fails after `max_depth` refinements.
pub fn integrate<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: C64::new(0.0, 0.0), error: 0.0 });
    }
    let whole = fixed(f, a, b);
    let coarse_scale = whole.norm();
    let tol = abs_tol.max(rel_tol * coarse_scale);
    let mut err = 0.0;
    let value = refine(f, a, b, whole, tol, 1e-6 * tol, 0, max_depth, &mut err)?;
    Ok(QuadResult { value, error: err })
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    whole: C64,
    tol: f64,
    floor: f64,
    depth: usize,
    max_depth: usize,
    err: &mut f64,
) -> Result<C64> {
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let sum = left + right;
    let e = (sum - whole).norm();
    // The floor stops the halved tolerance from chasing a jump of the branch
    // across an interval of negligible weight.
    if e <= tol.max(floor) || (m - a).abs() < 1e-15 * (a.abs() + b.abs()).max(1e-300) {
        *err += e;
        return Ok(sum);
    }
    if depth >= max_depth {
        return Err(Error::QuadratureStall(format!("[{a}, {b}] error {e:.3e} > {tol:.3e}")));
    }
    let l = refine(f, a, m, left, 0.5 * tol, floor, depth + 1, max_depth, err)?;
    let r = refine(f, m, b, right, 0.5 * tol, floor, depth + 1, max_depth, err)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let f = |x: f64| C64::new(x.powi(39), 0.0);
        let r = fixed(&f, 0.0, 1.0);
        assert!((r.re - 1.0 / 40.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = |x: f64| C64::new(1.0, 0.0) / C64::new(x - 0.3, 1e-3);
        let r = integrate(&f, 0.0, 1.0, 1e-13, 0.0, 40).unwrap();
        let exact = (C64::new(0.7, 1e-3)).ln() - (C64::new(-0.3, 1e-3)).ln();
        assert!((r.value - exact).norm() < 1e-11, "{} vs {}", r.value, exact);
    }

    #[test]
    fn stall_is_reported() {
        let f = |x: f64| C64::new((1.0 / (x - 0.5)).sin() * 1e6, 0.0);
        assert!(matches!(integrate(&f, 0.0, 1.0, 1e-15, 0.0, 3), Err(Error::QuadratureStall(_))));
    }
}
