//! The parameter space of the normalized degree-three family: reduction to
//! the fundamental domain, the developed core triangle, chamber
//! classification and wall tracing.

use crate::config::Tolerances;
use crate::degeneration::{find_saddles, tag_period, PathTag};
use crate::differential::{CubicDifferential, THIRD_PI};
use crate::error::{Error, Result};
use crate::geometry::fermat_point;
use crate::trajectory::Limits;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Generators of the anharmonic action on t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// t ↦ 1 − t
    A,
    /// t ↦ 1/t
    B,
}

impl Move {
    pub fn apply(self, t: C64) -> C64 {
        match self {
            Move::A => 1.0 - t,
            Move::B => 1.0 / t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalPoint {
    pub t: C64,
    /// Moves applied in order to the input.
    pub orbit_map: Vec<Move>,
}

/// Closed-domain membership with a small tolerance.
pub fn in_t(t: C64, eps: f64) -> bool {
    t.im >= -eps && t.norm() <= 1.0 + eps && (t - 1.0).norm() <= 1.0 + eps
}

/// Maps t into the triangle with vertices 0, 1, e^{iπ/3}.
#[allow(non_snake_case)]
pub fn reduce_to_T(t: C64) -> Result<FundamentalPoint> {
    if t.norm() < 1e-14 || (t - 1.0).norm() < 1e-14 || !t.re.is_finite() || !t.im.is_finite() {
        return Err(Error::NotReducible(format!("{t}")));
    }
    let words: [&[Move]; 6] = [&[], &[Move::A], &[Move::B], &[Move::B, Move::A], &[Move::A, Move::B], &[Move::A, Move::B, Move::A]];
    for eps in [1e-12, 1e-10] {
        for w in words {
            let mut x = t;
            for m in w {
                x = m.apply(x);
            }
            if in_t(x, eps) {
                // Snap boundary jitter.
                if x.im.abs() < eps {
                    x.im = 0.0;
                }
                return Ok(FundamentalPoint { t: x, orbit_map: w.to_vec() });
            }
        }
    }
    Err(Error::NotReducible(format!("{t}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreTriangle {
    /// Developed positions of the zeros 0, 1, ∞ in one branch.
    pub vertices: [C64; 3],
    /// Sides along [1,∞], [−∞,0], [0,1], traversed 1 → ∞ → 0 → 1.
    pub side_vectors: [C64; 3],
    pub closure_residual: f64,
    /// Interior angles at 0, 1, ∞.
    pub angles: [f64; 3],
}

/// Developed vertices of the zeros 0, 1, ∞ (∞ at the origin), using the
/// reference periods continued around ∞ through the lower half x-plane,
/// which is the side facing the core.
fn developed_vertices(phi: &CubicDifferential, tol: &Tolerances) -> Result<(C64, C64, C64)> {
    let w0 = tag_period(phi, PathTag::SegNeg, tol)?.value;
    let w1 = tag_period(phi, PathTag::SegPos, tol)?.value;
    let w01 = tag_period(phi, PathTag::Seg01, tol)?.value;
    let wbar = C64::from_polar(1.0, -2.0 * PI / 3.0);
    Ok((wbar * w0, -w1, wbar * w01))
}

/// Angle at ∞ between the saddles along [1,∞] and [−∞,0] on the side facing
/// the core; in (0, π) when the core is a triangle, in [π, 4π/3] otherwise.
pub fn angle_at_infinity(phi: &CubicDifferential, tol: &Tolerances) -> Result<f64> {
    if !phi.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let (p0, p1, _) = developed_vertices(phi, tol)?;
    Ok((p0 / p1).arg().rem_euclid(2.0 * PI))
}

/// The flat triangle bounded by the three saddles.
pub fn core_triangle(phi: &CubicDifferential, tol: &Tolerances) -> Result<CoreTriangle> {
    if !phi.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let (p0, p1, c01) = developed_vertices(phi, tol)?;
    let pinf = C64::new(0.0, 0.0);
    let a_inf = (p0 / p1).arg().rem_euclid(2.0 * PI);
    if a_inf >= PI {
        return Err(Error::NoTriangle);
    }
    let sides = [pinf - p1, p0 - pinf, c01];
    let closure = (sides[0] + sides[1] + sides[2]).norm();
    let ang = |at: C64, u: C64, v: C64| ((v - at) / (u - at)).arg().abs();
    Ok(CoreTriangle {
        vertices: [p0, p1, pinf],
        side_vectors: sides,
        closure_residual: closure,
        angles: [ang(p0, pinf, p1), ang(p1, p0, pinf), a_inf],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChamberLabel {
    CA,
    CB,
    CC,
    CD,
    Delta1Minus,
    Delta1Plus,
    Delta2,
    Delta3,
    Delta4,
    VertexEpi3,
    VertexHalf,
    VertexZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberReport {
    pub chamber: ChamberLabel,
    pub t_reduced: C64,
    pub saddle_count: usize,
    /// Interior angles at 0, 1, ∞ when the core is a triangle.
    pub angles: Option<[f64; 3]>,
    /// Angle at ∞ between the two persistent saddles.
    pub angle_at_infinity: f64,
}

/// Chamber or wall containing t.
pub fn classify_chamber(t: C64, tol: &Tolerances) -> Result<ChamberReport> {
    let fp = reduce_to_T(t)?;
    let t = fp.t;
    let eq = tol.angle_eq;
    let vertex = |label| ChamberReport { chamber: label, t_reduced: t, saddle_count: 0, angles: None, angle_at_infinity: f64::NAN };
    if (t - C64::from_polar(1.0, THIRD_PI)).norm() < 1e-9 {
        return Ok(vertex(ChamberLabel::VertexEpi3));
    }
    if (t - 0.5).norm() < 1e-9 {
        return Ok(vertex(ChamberLabel::VertexHalf));
    }
    if t.norm() < 1e-9 || (t - 1.0).norm() < 1e-9 {
        return Ok(vertex(ChamberLabel::VertexZero));
    }
    // The real side of T is the whole of Δ₄; its reference path meets the pole.
    if t.im.abs() < 1e-12 {
        return Ok(ChamberReport { chamber: ChamberLabel::Delta4, t_reduced: t, saddle_count: 2, angles: None, angle_at_infinity: 4.0 * THIRD_PI });
    }
    let phi = CubicDifferential::normalized(C64::new(1.0, 0.0), t)?;
    let a_inf = angle_at_infinity(&phi, tol)?;
    let limits = Limits::for_differential(&phi, tol);
    let saddles = find_saddles(&phi, &limits, tol)?;
    let n = saddles.len();
    let mut report = ChamberReport { chamber: ChamberLabel::CD, t_reduced: t, saddle_count: n, angles: None, angle_at_infinity: a_inf };
    if (a_inf - PI).abs() < eq {
        report.chamber = ChamberLabel::Delta3;
        return Ok(report);
    }
    if n <= 2 {
        report.chamber = if (a_inf - 4.0 * THIRD_PI).abs() < eq {
            ChamberLabel::Delta4
        } else if a_inf > PI {
            ChamberLabel::CD
        } else {
            return Err(Error::CoreAssemblyFailure(format!("two saddles but a triangular core at t = {t}")));
        };
        return Ok(report);
    }
    let tri = core_triangle(&phi, tol)?;
    report.angles = Some(tri.angles);
    let max = tri.angles.iter().cloned().fold(0.0, f64::max);
    report.chamber = if (max - 2.0 * THIRD_PI).abs() < eq {
        ChamberLabel::Delta2
    } else if max > 2.0 * THIRD_PI {
        ChamberLabel::CC
    } else {
        let at_third = tri.angles.iter().filter(|a| (*a - THIRD_PI).abs() < eq).count();
        let above = tri.angles.iter().filter(|a| **a > THIRD_PI + eq).count();
        if at_third >= 2 {
            ChamberLabel::VertexEpi3
        } else if at_third == 1 {
            if t.re < 0.5 {
                ChamberLabel::Delta1Minus
            } else {
                ChamberLabel::Delta1Plus
            }
        } else if above == 1 {
            ChamberLabel::CB
        } else {
            ChamberLabel::CA
        }
    };
    Ok(report)
}

/// Upper boundary of T above Re(t) = c.
fn top_of_t(c: f64) -> f64 {
    if c <= 0.5 {
        (1.0 - (1.0 - c) * (1.0 - c)).max(0.0).sqrt()
    } else {
        (1.0 - c * c).max(0.0).sqrt()
    }
}

/// Wall functional: zero on Δ_k, positive below it on each vertical line.
fn wall_function(k: u8, t: C64, tol: &Tolerances) -> Result<f64> {
    let phi = CubicDifferential::normalized(C64::new(1.0, 0.0), t)?;
    let a_inf = angle_at_infinity(&phi, tol)?;
    match k {
        3 => Ok(a_inf - PI),
        1 | 2 => {
            if a_inf >= PI {
                return Ok(1.0);
            }
            let mut a = core_triangle(&phi, tol)?.angles;
            a.sort_by(|x, y| y.partial_cmp(x).unwrap());
            Ok(if k == 2 { a[0] - 2.0 * THIRD_PI } else { THIRD_PI - a[1] })
        }
        _ => Err(Error::InvalidDifferential(format!("no wall functional for k = {k}"))),
    }
}

/// Points of Δ_k in T, ordered by real part, from M vertical scan lines.
pub fn trace_wall(k: u8, samples: usize, tol: &Tolerances) -> Result<Vec<C64>> {
    if k == 4 {
        return Ok((1..=samples).map(|i| C64::new(0.5 * i as f64 / samples as f64, 0.0)).collect());
    }
    let lines: Vec<f64> = (0..samples).map(|i| (i as f64 + 0.5) / samples as f64).collect();
    let found = crate::par::map(&lines, |&c| -> Option<C64> {
        if k == 1 && (c - 0.5).abs() < 1e-12 {
            return None;
        }
        let top = top_of_t(c);
        let mut hi = top * (1.0 - 1e-9);
        let f_hi = wall_function(k, C64::new(c, hi), tol).ok()?;
        // Periods stall close to the real axis, so the lower bracket steps
        // down geometrically and stops at the first failed evaluation.
        let mut lo = 0.05 * top;
        let mut f_lo = wall_function(k, C64::new(c, lo), tol).ok()?;
        while f_lo.signum() == f_hi.signum() {
            lo *= 0.5;
            if lo < 1e-3 * top {
                return None;
            }
            f_lo = wall_function(k, C64::new(c, lo), tol).ok()?;
        }
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            let f = wall_function(k, C64::new(c, mid), tol).ok()?;
            if f.signum() == f_lo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(C64::new(c, 0.5 * (lo + hi)))
    });
    let mut pts: Vec<C64> = found.into_iter().flatten().collect();
    if k == 1 {
        pts.push(C64::from_polar(1.0, THIRD_PI));
    }
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    if pts.is_empty() {
        return Err(Error::WallNotBracketed(format!("Δ{k}")));
    }
    Ok(pts)
}

/// Bisects Δ_k on the vertical line Re(t) = c between two heights.
pub fn wall_on_line(k: u8, c: f64, mut lo: f64, mut hi: f64, tol: &Tolerances) -> Result<C64> {
    let f_lo = wall_function(k, C64::new(c, lo), tol)?;
    let f_hi = wall_function(k, C64::new(c, hi), tol)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::WallNotBracketed(format!("Re t = {c}")));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if wall_function(k, C64::new(c, mid), tol)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(C64::new(c, 0.5 * (lo + hi)))
}

/// Whether t lies on one of the three mirror loci of T's orbit picture.
pub fn symmetric_locus_check(t: C64) -> bool {
    (t.re - 0.5).abs() < 1e-10 || (t.norm() - 1.0).abs() < 1e-10 || ((t - 1.0).norm() - 1.0).abs() < 1e-10
}

/// Relative gap between |w₀| and |w₁|; zero exactly on Re(t) = 1/2 in T.
pub fn period_modulus_gap(t: C64, tol: &Tolerances) -> Result<f64> {
    let phi = CubicDifferential::normalized(C64::new(1.0, 0.0), t)?;
    let w0 = tag_period(&phi, PathTag::SegNeg, tol)?.value.norm();
    let w1 = tag_period(&phi, PathTag::SegPos, tol)?.value.norm();
    Ok((w0 - w1) / w0.max(w1))
}

/// Fermat point and legs of the core triangle, with the tripod phase.
pub fn fermat_data(tri: &CoreTriangle) -> (C64, [C64; 3], f64) {
    let [p0, p1, pinf] = tri.vertices;
    let f = fermat_point(p0, p1, pinf);
    let legs = [f - p0, f - p1, f - pinf];
    (f, legs, crate::degeneration::phase_of(legs[2]))
}
