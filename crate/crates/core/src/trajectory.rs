//! Real trajectories of a rotated cubic differential, traced as polylines by
//! an embedded Dormand-Prince 5(4) integrator in flat arclength.
//!
//! A trajectory of sign ε satisfies `Q(x)(dx/ds)³ = ε` with `s` the flat
//! length, so `dx/ds` is the cube root of `ε/Q(x)` continued from the
//! previous step.

use crate::config::Tolerances;
use crate::differential::{critical_directions, CubeRootBranch, CubicDifferential, Field, Sign};
use crate::geometry::{closest_on_polyline, cross, point_segment, Chunks};
use crate::poly;
use crate::quadrature;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Zero { zero: usize, direction: usize },
    Joint { joint: usize },
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruncReason {
    StepCollapse,
    NearMiss,
    Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    HitZero { zero: usize, distance: f64 },
    EscapedToPole,
    Truncated(TruncReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_flat_length: f64,
    pub escape_radius: f64,
    pub hit_tolerance: f64,
}

impl Limits {
    /// Defaults scaled to the differential. The flat length cap covers both
    /// the longest chord between zeros and the flat distance out to the
    /// escape circle, so that escaping traces are never cut short.
    pub fn for_differential(phi: &CubicDifferential, tol: &Tolerances) -> Limits {
        let scale = phi.scale();
        let escape = tol.escape_radius_rel * scale;
        let field = phi.field(0.0);
        let flat_len = |a: C64, b: C64| -> f64 {
            let f = |u: f64| C64::new(field.eval(a + (b - a) * u).norm().cbrt() * (b - a).norm(), 0.0);
            (0..64).map(|k| quadrature::fixed(&f, k as f64 / 64.0, (k + 1) as f64 / 64.0).re).sum()
        };
        let zs = phi.zero_list();
        let mut chord: f64 = 0.0;
        for (i, a) in zs.iter().enumerate() {
            for b in &zs[i + 1..] {
                chord = chord.max(flat_len(a.chart, b.chart));
            }
        }
        let c = phi.centroid();
        let mut radial: f64 = 0.0;
        for k in 0..8 {
            radial = radial.max(flat_len(c, c + C64::from_polar(escape, PI * k as f64 / 4.0 + 0.1)));
        }
        Limits {
            max_flat_length: tol.max_flat_length_rel * chord.max(radial).max(1e-300),
            escape_radius: escape,
            hit_tolerance: phi.hit_tol(tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub sign: Sign,
    pub origin: Origin,
    pub theta: f64,
    pub points: Vec<C64>,
    pub flat_lengths: Vec<f64>,
    /// `dx/ds` at each point.
    pub velocities: Vec<C64>,
    pub branch_at_end: CubeRootBranch,
    pub verdict: Verdict,
    pub generation: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn flat_length(&self) -> f64 {
        *self.flat_lengths.last().unwrap_or(&0.0)
    }

    pub fn start(&self) -> C64 {
        self.points[0]
    }

    pub fn end(&self) -> C64 {
        *self.points.last().unwrap()
    }

    pub fn hit_zero(&self) -> Option<usize> {
        match self.verdict {
            Verdict::HitZero { zero, .. } => Some(zero),
            _ => None,
        }
    }

    pub fn origin_zero(&self) -> Option<usize> {
        match self.origin {
            Origin::Zero { zero, .. } => Some(zero),
            _ => None,
        }
    }
}

/// The cube root of `ε/Q(x)` nearest to `reference`, rejected when the
/// angular drift exceeds the branch margin.
fn velocity(field: &Field<'_>, x: C64, eps: f64, reference: C64, margin: f64) -> Option<C64> {
    let q = field.eval(x);
    if q.norm() == 0.0 || !q.re.is_finite() {
        return None;
    }
    let (v, dev) = poly::nearest_cube_root(C64::new(eps, 0.0) / q, reference);
    if dev > margin * PI / 3.0 {
        None
    } else {
        Some(v)
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step; `None` if any stage loses the branch.
fn dp_step(field: &Field<'_>, x: C64, v: C64, h: f64, eps: f64, margin: f64) -> Option<(C64, C64, f64)> {
    let mut k = [C64::new(0.0, 0.0); 7];
    k[0] = v;
    for s in 0..6 {
        let mut xs = x;
        for (j, kj) in k.iter().enumerate().take(s + 1) {
            xs += *kj * (h * A[s][j]);
        }
        k[s + 1] = velocity(field, xs, eps, v, margin)?;
    }
    let mut x5 = x;
    let mut e = C64::new(0.0, 0.0);
    for i in 0..7 {
        x5 += k[i] * (h * B5[i]);
        e += k[i] * (h * (B5[i] - B4[i]));
    }
    Some((x5, k[6], e.norm()))
}

/// True once the trace is beyond the escape circle and moving outward.
pub fn pole_escape(phi: &CubicDifferential, point: C64, velocity: C64, escape_radius: f64) -> bool {
    let r = point - phi.centroid();
    r.norm() > escape_radius && crate::geometry::dot(r, velocity) > 0.0
}

/// Traces from `start` with initial direction `direction` (a unit complex
/// number in the chart) until a zero is hit, the pole is reached or a limit
/// fires. `skip_zero` is the zero the trace leaves from, which it cannot
/// return to.
#[allow(clippy::too_many_arguments)]
pub fn trace(
    field: &Field<'_>,
    start: C64,
    direction: C64,
    sign: Sign,
    limits: &Limits,
    tol: &Tolerances,
    origin: Origin,
    skip_zero: Option<usize>,
) -> Trajectory {
    let phi = field.phi;
    let eps = sign.eps();
    let scale = phi.scale();
    let margin = tol.branch_margin;
    let q0 = field.eval(start);
    let (mut v, _) = poly::nearest_cube_root(C64::new(eps, 0.0) / q0, direction);
    let mut traj = Trajectory {
        sign,
        origin,
        theta: field.theta,
        points: vec![start],
        flat_lengths: vec![0.0],
        velocities: vec![v],
        branch_at_end: CubeRootBranch { base_point: start, value: C64::new(eps, 0.0) / v },
        verdict: Verdict::Truncated(TruncReason::Length),
        generation: 0,
    };
    if limits.max_flat_length <= 0.0 {
        return traj;
    }
    let mut x = start;
    let mut s = 0.0;
    let (d0, _) = field.zero_distance(x, None);
    let mut h = 0.05 * d0 / v.norm();
    let mut halvings = 0usize;
    for _ in 0..tol.max_steps {
        let (dnear, _) = field.zero_distance(x, None);
        let speed = v.norm();
        let cap_x = 0.05 * dnear.max(1e-300);
        h = h.min(cap_x / speed).min(limits.max_flat_length - s + 1e-300);
        let tol_x = tol.ode_tol * dnear.min(scale);
        let step = dp_step(field, x, v, h, eps, margin);
        let accepted = match step {
            Some((xn, vn, err)) if err <= tol_x && (xn - x).norm() <= 2.0 * cap_x => Some((xn, vn, err)),
            _ => None,
        };
        let Some((xn, vn, err)) = accepted else {
            h *= 0.5;
            halvings += 1;
            if halvings > 60 {
                let other = field.zero_distance(x, skip_zero).0;
                let reason = if other < 1e3 * limits.hit_tolerance {
                    TruncReason::NearMiss
                } else {
                    TruncReason::StepCollapse
                };
                traj.verdict = Verdict::Truncated(reason);
                break;
            }
            continue;
        };
        halvings = 0;
        // A zero within hit tolerance of the new segment ends the trace.
        let mut hit = None;
        for z in phi.zero_list() {
            if Some(z.id) == skip_zero {
                continue;
            }
            let (d, _) = point_segment(z.chart, x, xn);
            if d < limits.hit_tolerance && hit.map_or(true, |(_, hd)| d < hd) {
                hit = Some((z.id, d));
            }
        }
        s += h;
        if let Some((zid, d)) = hit {
            let zc = phi.zero_chart(zid);
            traj.points.push(zc);
            traj.flat_lengths.push(s.max(traj.flat_lengths.last().unwrap() + 1e-300));
            traj.velocities.push(vn);
            traj.verdict = Verdict::HitZero { zero: zid, distance: d };
            traj.branch_at_end = CubeRootBranch { base_point: zc, value: C64::new(0.0, 0.0) };
            return traj;
        }
        x = xn;
        v = vn;
        traj.points.push(x);
        traj.flat_lengths.push(s);
        traj.velocities.push(v);
        traj.branch_at_end = CubeRootBranch { base_point: x, value: C64::new(eps, 0.0) / v };
        if pole_escape(phi, x, v, limits.escape_radius) {
            traj.verdict = Verdict::EscapedToPole;
            return traj;
        }
        if s >= limits.max_flat_length {
            traj.verdict = Verdict::Truncated(TruncReason::Length);
            return traj;
        }
        let grow = if err > 0.0 { 0.9 * (tol_x / err).powf(0.2) } else { 5.0 };
        h *= grow.clamp(0.2, 5.0);
    }
    traj
}

/// Launch point and direction for critical direction `k` at a zero.
pub fn launch(field: &Field<'_>, zero: usize, k: usize, tol: &Tolerances) -> (C64, C64, Sign) {
    let dirs = critical_directions(field, zero);
    let (d, s) = dirs[k];
    let rho = 10.0 * field.phi.eps_sing(tol);
    (field.phi.zero_chart(zero) + d * rho, d, s)
}

/// Critical direction `k` at `zero` as an angle that is continuous in an
/// unreduced θ: `ψ_k(θ) = (−arg P'(z) + 3θ + kπ)/4`.
pub fn critical_angle_continuous(phi: &CubicDifferential, zero: usize, k: usize, theta: f64) -> f64 {
    let f0 = phi.field(0.0);
    let z = phi.zero_chart(zero);
    let p1 = poly::eval(&f0.dq, z);
    (-p1.arg() + 3.0 * theta + k as f64 * PI) / 4.0
}

/// Traces from a zero along the critical angle `psi` (which must be one of
/// the eight critical angles at this phase).
pub fn trace_from_zero(field: &Field<'_>, zero: usize, k: usize, psi: f64, limits: &Limits, tol: &Tolerances) -> Trajectory {
    let d = C64::from_polar(1.0, psi);
    let sign = if k % 2 == 0 { Sign::Pos } else { Sign::Neg };
    let rho = 10.0 * field.phi.eps_sing(tol);
    let start = field.phi.zero_chart(zero) + d * rho;
    let mut t = trace(field, start, d, sign, limits, tol, Origin::Zero { zero, direction: k % 8 }, Some(zero));
    t.points[0] = field.phi.zero_chart(zero);
    t
}

/// Traces the critical trajectory leaving `zero` along direction `k`.
pub fn trace_critical(field: &Field<'_>, zero: usize, k: usize, limits: &Limits, tol: &Tolerances) -> Trajectory {
    let (start, d, s) = launch(field, zero, k, tol);
    let mut t = trace(field, start, d, s, limits, tol, Origin::Zero { zero, direction: k }, Some(zero));
    t.points[0] = field.phi.zero_chart(zero);
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// The target lies within hit tolerance of the polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub distance: f64,
}

/// Distance from the polyline to `target` and the side on which the target
/// lies relative to the direction of travel.
pub fn closest_approach(traj: &Trajectory, target: C64, hit_tolerance: f64) -> Result<(f64, Side), Hit> {
    let ch = Chunks::new(&traj.points);
    let (d, i, _) = closest_on_polyline(target, &traj.points, &ch);
    if d < hit_tolerance {
        return Err(Hit { distance: d });
    }
    if traj.points.len() < 2 {
        return Ok((d, Side::Left));
    }
    let a = traj.points[i];
    let b = traj.points[i + 1];
    let mut c = cross(b - a, target - a);
    if c.abs() < 1e-14 {
        let j = if i + 2 < traj.points.len() { i + 1 } else { i.saturating_sub(1) };
        c = cross(traj.points[j + 1] - traj.points[j], target - traj.points[j]);
    }
    Ok((d, if c > 0.0 { Side::Left } else { Side::Right }))
}

/// Minimal distance, ignoring the hit threshold.
pub fn distance_to(traj: &Trajectory, target: C64) -> f64 {
    let ch = Chunks::new(&traj.points);
    closest_on_polyline(target, &traj.points, &ch).0
}
