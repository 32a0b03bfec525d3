//! Dense complex polynomials in ascending coefficient order.

use crate::C64;
use std::f64::consts::PI;

pub fn eval(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Value and first derivative.
pub fn eval_d(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// Drops trailing zero coefficients.
pub fn trim(coeffs: &[C64]) -> Vec<C64> {
    let mut v = coeffs.to_vec();
    while v.len() > 1 && v.last().map_or(false, |c| c.norm() == 0.0) {
        v.pop();
    }
    if v.is_empty() {
        v.push(C64::new(0.0, 0.0));
    }
    v
}

/// Ehrlich-Aberth simultaneous iteration followed by Newton polishing.
/// Coefficients must be trimmed with a nonzero leading term.
pub fn roots(coeffs: &[C64], tol: f64) -> Vec<C64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let lead = coeffs[n];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle.
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r0 = bound.min(
        monic[..n]
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-3),
    );
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(r0, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let deriv = derivative(&monic);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = eval(&monic, z[i]);
            let dp = eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| C64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < tol * 1e-3 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_d(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            *zi -= p / dp;
        }
    }
    z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    z
}

/// Expands ∏(x − r) times `lead`.
pub fn from_roots(lead: C64, roots: &[C64]) -> Vec<C64> {
    let mut c = vec![lead];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

/// The three cube roots of `z`, principal first, then multiplied by ω, ω².
pub fn cube_roots(z: C64) -> [C64; 3] {
    let r = z.norm().cbrt();
    let a = z.arg() / 3.0;
    [
        C64::from_polar(r, a),
        C64::from_polar(r, a + 2.0 * PI / 3.0),
        C64::from_polar(r, a - 2.0 * PI / 3.0),
    ]
}

/// Cube root of `z` nearest in angle to `reference`, with the angular distance.
pub fn nearest_cube_root(z: C64, reference: C64) -> (C64, f64) {
    let r = z.norm().cbrt();
    let base = z.arg() / 3.0;
    let target = reference.arg();
    let step = 2.0 * PI / 3.0;
    let k = ((target - base) / step).round();
    let ang = base + k * step;
    let dev = wrap_pi(target - ang).abs();
    (C64::from_polar(r, ang), dev)
}

/// Wraps an angle into (−π, π].
pub fn wrap_pi(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Reduces an angle into [0, m).
pub fn modulo(a: f64, m: f64) -> f64 {
    let r = a.rem_euclid(m);
    if r >= m { 0.0 } else { r }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roots_recover_expanded_product() {
        let rs = [c(0.3, -1.2), c(-2.0, 0.5), c(1.0, 1.0), c(0.0, 0.0), c(4.0, -0.1)];
        let p = from_roots(c(2.0, -1.0), &rs);
        let found = roots(&p, 1e-12);
        for r in rs {
            let d = found.iter().map(|f| (f - r).norm()).fold(f64::MAX, f64::min);
            assert!(d < 1e-10, "{r} missing, nearest {d}");
        }
    }

    #[test]
    fn nearest_root_tracks_reference() {
        let z = c(-8.0, 0.0);
        let (v, dev) = nearest_cube_root(z, c(1.0, 0.1));
        assert!((v - c(1.0, 3f64.sqrt())).norm() < 1e-12 || (v - c(1.0, -(3f64.sqrt()))).norm() < 1e-12);
        assert!(dev < PI / 3.0);
        let (v, _) = nearest_cube_root(z, c(-1.0, 0.0));
        assert!((v - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eval_d_matches_derivative() {
        let p = [c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, 0.0)];
        let x = c(0.7, -0.4);
        let (v, d) = eval_d(&p, x);
        assert!((v - eval(&p, x)).norm() < 1e-14);
        assert!((d - eval(&derivative(&p), x)).norm() < 1e-13);
    }
}
