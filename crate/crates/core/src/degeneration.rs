//! Degenerations of the network over the phase circle: periods by
//! quadrature, saddle connections by shooting and bisection, critical
//! tripods from the Fermat point of the core triangle, and the full scan of
//! special phases with the core type on each interval between them.

use crate::config::Tolerances;
use crate::differential::{continue_along, CubeRootBranch, CubicDifferential, Field, Phase, THIRD_PI};
use crate::error::{Error, Result};
use crate::geometry::{crossings, signed_area, Chunks};
use crate::network::refine_crossing;
use crate::par;
use crate::spectralcore::CoreType;
use crate::trajectory::{closest_approach, critical_angle_continuous, distance_to, trace_from_zero, Limits, Side, Trajectory};
use crate::poly;
use crate::quadrature::{integrate, QuadResult};
use crate::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathTag {
    /// Homotopic to [−∞, 0], from zero `0` to zero `∞`.
    SegNeg,
    /// Homotopic to [1, ∞], from zero `1` to zero `∞`.
    SegPos,
    /// Homotopic to [0, 1], from zero `0` to zero `1`.
    Seg01,
    Custom(usize),
}

impl PathTag {
    /// Zero ids (start, end) in the normalized family.
    pub fn endpoints(self) -> Option<(usize, usize)> {
        match self {
            PathTag::SegNeg => Some((0, 2)),
            PathTag::SegPos => Some((1, 2)),
            PathTag::Seg01 => Some((0, 1)),
            PathTag::Custom(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodValue {
    pub value: C64,
    pub path_tag: PathTag,
    pub quadrature_error: f64,
}

fn add(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult { value: a.value + b.value, error: a.error + b.error }
}

/// Relative tolerance for a piece at chart position `x` and distance `d`
/// from a zero: ordinates there carry relative noise ε|x|/d from the chart
/// coordinates, and the tolerance never asks for less.
fn noise_tol(tol: &Tolerances, x: C64, d: f64, scale: f64) -> f64 {
    tol.quad_tol.max(1e2 * f64::EPSILON * (x.norm() + scale) / d.max(1e-300))
}

/// Integral of the branch along a regular segment, split into pieces short
/// enough for nearest-root continuation. `b0` is the branch at `p`.
fn regular_segment(field: &Field<'_>, p: C64, q: C64, b0: C64, tol: &Tolerances) -> Result<(QuadResult, C64)> {
    let mut out = QuadResult { value: C64::new(0.0, 0.0), error: 0.0 };
    let mut x = p;
    let mut b = b0;
    let total = (q - p).norm();
    let mut done = 0.0;
    let scale = field.phi.scale();
    while done < total * (1.0 - 1e-15) {
        let d = field.zero_distance(x, None).0;
        let step = (0.25 * d).max(1e-14 * scale).min(total - done);
        let y = if done + step >= total { q } else { x + (q - p) * (step / total) };
        let seg = y - x;
        let bref = b;
        let f = |u: f64| poly::nearest_cube_root(field.eval(x + seg * u), bref).0 * seg;
        let r = integrate(&f, 0.0, 1.0, noise_tol(tol, x, d, scale), 1e-300, tol.quad_max_depth)?;
        out = add(out, r);
        b = poly::nearest_cube_root(field.eval(y), bref).0;
        x = y;
        done += step;
    }
    Ok((out, b))
}

/// Integral from the zero `a` to `p` with `x = a + (p − a)u³`; `bp` is the
/// branch at `p`, and the radial segment keeps the branch's angle fixed.
fn zero_segment(field: &Field<'_>, a: C64, p: C64, bp: C64, tol: &Tolerances) -> Result<QuadResult> {
    let d = p - a;
    let f = |u: f64| {
        if u == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let x = a + d * (u * u * u);
        poly::nearest_cube_root(field.eval(x), bp).0 * d * (3.0 * u * u)
    };
    let rel = noise_tol(tol, a, d.norm(), field.phi.scale());
    integrate(&f, 0.0, 1.0, rel, 1e-300, tol.quad_max_depth)
}

/// `∫ φ^{1/3}` along a chart polyline with the branch fixed by `initial`,
/// which must sit on a vertex of the path that is not a zero. Endpoints may
/// be zeros.
pub fn period(field: &Field<'_>, path: &[C64], initial: &CubeRootBranch, tol: &Tolerances) -> Result<PeriodValue> {
    let tag = PathTag::Custom(0);
    if path.len() < 2 || path.iter().all(|p| *p == path[0]) {
        return Ok(PeriodValue { value: C64::new(0.0, 0.0), path_tag: tag, quadrature_error: 0.0 });
    }
    let scale = field.phi.scale();
    let at_zero = |x: C64| field.zero_distance(x, None).0 < 1e-9 * scale;
    let n = path.len();
    let k0 = path
        .iter()
        .position(|&p| (p - initial.base_point).norm() <= 1e-14 * (1.0 + p.norm()))
        .ok_or_else(|| Error::InvalidDifferential("initial branch is not on the path".into()))?;
    // Branch values at every non-zero vertex.
    let mut refs: Vec<Option<C64>> = vec![None; n];
    refs[k0] = Some(initial.value);
    let mut b = *initial;
    for k in k0 + 1..n {
        if at_zero(path[k]) {
            break;
        }
        b = continue_along(&b, field, &[path[k]], tol)?;
        refs[k] = Some(b.value);
    }
    let mut b = *initial;
    for k in (0..k0).rev() {
        if at_zero(path[k]) {
            break;
        }
        b = continue_along(&b, field, &[path[k]], tol)?;
        refs[k] = Some(b.value);
    }
    let mut total = QuadResult { value: C64::new(0.0, 0.0), error: 0.0 };
    for i in 0..n - 1 {
        let (p, q) = (path[i], path[i + 1]);
        if p == q {
            continue;
        }
        let zp = at_zero(p);
        let zq = at_zero(q);
        let r = match (zp, zq) {
            (false, false) => regular_segment(field, p, q, refs[i].unwrap(), tol)?.0,
            (true, false) => zero_piece(field, p, q, refs[i + 1].unwrap(), tol)?,
            (false, true) => {
                let r = zero_piece(field, q, p, refs[i].unwrap(), tol)?;
                QuadResult { value: -r.value, error: r.error }
            }
            (true, true) => {
                return Err(Error::InvalidDifferential("segment joins two zeros; add a vertex".into()));
            }
        };
        total = add(total, r);
    }
    Ok(PeriodValue { value: total.value, path_tag: tag, quadrature_error: total.error })
}

/// From zero `a` to the regular point `p` with branch `bp` at `p`.
fn zero_piece(field: &Field<'_>, a: C64, p: C64, bp: C64, tol: &Tolerances) -> Result<QuadResult> {
    let others = field
        .phi
        .zero_list()
        .iter()
        .map(|z| (z.chart - a).norm())
        .filter(|&d| d > 1e-9 * field.phi.scale())
        .fold(f64::INFINITY, f64::min);
    let len = (p - a).norm();
    let r = len.min(0.25 * others);
    let m = a + (p - a) * (r / len);
    if r >= len {
        return zero_segment(field, a, p, bp, tol);
    }
    // Branch at m by continuation from p, then the two pieces.
    let (back, bm) = regular_segment(field, p, m, bp, tol)?;
    let near = zero_segment(field, a, m, bm, tol)?;
    Ok(QuadResult { value: near.value - back.value, error: near.error + back.error })
}

/// Real cube root.
fn rcbrt(x: f64) -> f64 {
    x.cbrt()
}

/// Periods of the three reference classes of the normalized family along
/// real x-paths, with `∛α` principal, the real cube root of `x(x−1)` on the
/// rays to ∞ and the principal cube root on [0, 1].
pub fn tag_period(phi: &CubicDifferential, tag: PathTag, tol: &Tolerances) -> Result<PeriodValue> {
    if !phi.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let a3 = phi.alpha.powf(1.0 / 3.0);
    let t = phi.t;
    let on_path = match tag {
        PathTag::SegNeg => t.re < 0.0,
        PathTag::SegPos => t.re > 1.0,
        _ => (0.0..=1.0).contains(&t.re),
    };
    if t.im.abs() < 1e-12 && on_path {
        return Err(Error::InvalidDifferential(format!("the reference path of {tag:?} meets the pole at t = {t}")));
    }
    let c = |re: f64| C64::new(re, 0.0);
    let real_f = |x: f64| a3 * rcbrt(x * (x - 1.0)) / (c(x) - t).powi(3);
    let prin_f = |x: f64| a3 * c(x * (x - 1.0)).powf(1.0 / 3.0) / (c(x) - t).powi(3);
    let q = |f: &dyn Fn(f64) -> C64| integrate(&f, 0.0, 1.0, tol.quad_tol, 1e-300, tol.quad_max_depth);
    let r = match tag {
        PathTag::SegNeg => {
            let near = q(&|u: f64| real_f(-u * u * u) * (3.0 * u * u))?;
            let far = q(&|s: f64| if s == 0.0 { c(0.0) } else { real_f(-1.0 / (s * s * s)) * (3.0 / (s * s * s * s)) })?;
            add(near, far)
        }
        PathTag::SegPos => {
            let near = q(&|u: f64| real_f(1.0 + u * u * u) * (3.0 * u * u))?;
            let far = q(&|s: f64| if s == 0.0 { c(0.0) } else { real_f(2.0 / (s * s * s)) * (6.0 / (s * s * s * s)) })?;
            add(near, far)
        }
        PathTag::Seg01 => {
            let left = q(&|u: f64| prin_f(0.5 * u * u * u) * (1.5 * u * u))?;
            let right = q(&|u: f64| prin_f(1.0 - 0.5 * u * u * u) * (1.5 * u * u))?;
            add(left, right)
        }
        PathTag::Custom(_) => return Err(Error::InvalidDifferential("custom tags have no reference path".into())),
    };
    Ok(PeriodValue { value: r.value, path_tag: tag, quadrature_error: r.error })
}

/// Reduced phase of a saddle with period `w`.
pub fn phase_of(w: C64) -> f64 {
    poly::modulo(w.arg(), THIRD_PI)
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleConnection {
    pub endpoints: (usize, usize),
    /// Reduced phase.
    pub phase: f64,
    /// Phase at which shooting converged.
    pub shooting_phase: f64,
    pub period: PeriodValue,
    pub path: Vec<C64>,
    pub lattice_class: Option<[i32; 4]>,
}

impl SaddleConnection {
    pub fn flat_length(&self) -> f64 {
        self.period.value.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalTripod {
    pub zeros: [usize; 3],
    pub fermat_point: C64,
    pub phase: f64,
    /// Developed vectors from each zero to the Fermat point in one branch.
    pub leg_periods: [C64; 3],
    /// Flat lengths of the traced legs up to their meeting point.
    pub traced_leg_lengths: [f64; 3],
    /// Angles between consecutive legs at the meeting point.
    pub leg_angles: [f64; 3],
    /// Perimeter of the triangle of pairwise leg crossings.
    pub coincidence: f64,
    pub lattice_class: Option<[i32; 4]>,
}

/// Trace of critical direction `k` from `a` at an unreduced phase.
pub fn shoot(phi: &CubicDifferential, a: usize, k: usize, theta: f64, limits: &Limits, tol: &Tolerances) -> Trajectory {
    let field = phi.field(theta);
    let psi = critical_angle_continuous(phi, a, k, theta);
    trace_from_zero(&field, a, k, psi, limits, tol)
}

enum Probe {
    Hit(Trajectory),
    Side(Side),
}

fn probe(phi: &CubicDifferential, a: usize, k: usize, b: usize, theta: f64, limits: &Limits, tol: &Tolerances) -> Probe {
    let t = shoot(phi, a, k, theta, limits, tol);
    if t.hit_zero() == Some(b) {
        return Probe::Hit(t);
    }
    match closest_approach(&t, phi.zero_chart(b), limits.hit_tolerance) {
        Err(_) => Probe::Hit(t),
        Ok((_, s)) => Probe::Side(s),
    }
}

/// Bisects a side flip of `b` relative to the trace `(a, k)` on [lo, hi].
#[allow(clippy::too_many_arguments)]
fn bisect_flip(
    phi: &CubicDifferential,
    a: usize,
    k: usize,
    b: usize,
    mut lo: f64,
    mut hi: f64,
    side_lo: Side,
    limits: &Limits,
    tol: &Tolerances,
) -> Option<(f64, Trajectory)> {
    let accept = tol.saddle_accept_rel * phi.scale();
    while hi - lo > tol.bisection_tol {
        let mid = 0.5 * (lo + hi);
        match probe(phi, a, k, b, mid, limits, tol) {
            Probe::Hit(t) => return Some((mid, t)),
            Probe::Side(s) => {
                if s == side_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
    }
    let mid = 0.5 * (lo + hi);
    let t = shoot(phi, a, k, mid, limits, tol);
    if t.hit_zero() == Some(b) || distance_to(&t, phi.zero_chart(b)) < accept {
        Some((mid, t))
    } else {
        None
    }
}

/// Window shooting around a candidate phase; `None` without a side flip.
fn shoot_window(
    phi: &CubicDifferential,
    a: usize,
    b: usize,
    theta0: f64,
    limits: &Limits,
    tol: &Tolerances,
) -> Option<(f64, Trajectory)> {
    let traces: Vec<Trajectory> = (0..8).map(|k| shoot(phi, a, k, theta0, limits, tol)).collect();
    if let Some(t) = traces.iter().find(|t| t.hit_zero() == Some(b)) {
        return Some((theta0, t.clone()));
    }
    let zb = phi.zero_chart(b);
    let k = (0..8)
        .min_by(|&i, &j| distance_to(&traces[i], zb).partial_cmp(&distance_to(&traces[j], zb)).unwrap())
        .unwrap();
    let w = tol.saddle_window;
    let lo = probe(phi, a, k, b, theta0 - w, limits, tol);
    let hi = probe(phi, a, k, b, theta0 + w, limits, tol);
    match (lo, hi) {
        (Probe::Hit(t), _) => Some((theta0 - w, t)),
        (_, Probe::Hit(t)) => Some((theta0 + w, t)),
        (Probe::Side(sl), Probe::Side(sh)) if sl != sh => bisect_flip(phi, a, k, b, theta0 - w, theta0 + w, sl, limits, tol),
        _ => None,
    }
}

/// Sweeps `[0, π/3)` at `n` phases for traces from each source zero, and
/// bisects every side flip of a target zero that passes close by.
fn sweep(
    phi: &CubicDifferential,
    sources: &[usize],
    targets: &(dyn Fn(usize) -> Vec<usize> + Sync),
    n: usize,
    limits: &Limits,
    tol: &Tolerances,
) -> Vec<(usize, usize, f64, Trajectory)> {
    let step = THIRD_PI / n as f64;
    let jobs: Vec<(usize, usize, usize)> =
        sources.iter().flat_map(|&a| (0..8).flat_map(move |k| (0..n).map(move |i| (a, k, i)))).collect();
    // For each job: per target, Hit or (side, distance).
    let samples = par::map(&jobs, |&(a, k, i)| {
        let t = shoot(phi, a, k, i as f64 * step, limits, tol);
        let res: Vec<(usize, Option<(Side, f64)>)> = targets(a)
            .into_iter()
            .map(|b| {
                if t.hit_zero() == Some(b) {
                    (b, None)
                } else {
                    match closest_approach(&t, phi.zero_chart(b), limits.hit_tolerance) {
                        Err(_) => (b, None),
                        Ok((d, s)) => (b, Some((s, d))),
                    }
                }
            })
            .collect();
        res
    });
    let idx = |a_pos: usize, k: usize, i: usize| (a_pos * 8 + k) * n + i;
    let near = 0.25 * phi.scale();
    let mut brackets = vec![];
    for (ap, &a) in sources.iter().enumerate() {
        for k in 0..8 {
            for i in 0..n {
                let cur = &samples[idx(ap, k, i)];
                // The trace (a, k) at θ + π/3 is the trace (a, k+1) at θ.
                let (next, theta_hi) = if i + 1 < n {
                    (&samples[idx(ap, k, i + 1)], (i + 1) as f64 * step)
                } else {
                    (&samples[idx(ap, (k + 1) % 8, 0)], THIRD_PI)
                };
                for (m, &(b, s0)) in cur.iter().enumerate() {
                    let s1 = next[m].1;
                    let theta_lo = i as f64 * step;
                    match (s0, s1) {
                        (None, _) => brackets.push((a, k, b, theta_lo, theta_lo, None)),
                        (Some((x, d0)), Some((y, d1))) if x != y && d0.min(d1) < near => {
                            brackets.push((a, k, b, theta_lo, theta_hi, Some(x)))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let found = par::map(&brackets, |&(a, k, b, lo, hi, side)| match side {
        None => Some((a, b, lo, shoot(phi, a, k, lo, limits, tol))),
        Some(s) => bisect_flip(phi, a, k, b, lo, hi, s, limits, tol).map(|(th, t)| (a, b, th, t)),
    });
    found.into_iter().flatten().collect()
}

fn path_period(phi: &CubicDifferential, path: &[C64], tol: &Tolerances) -> Result<PeriodValue> {
    let f0 = phi.field(0.0);
    let base = path[path.len() / 2];
    let path: Vec<C64> = path.to_vec();
    let init = CubeRootBranch::at(&f0, base, C64::new(1.0, 0.0));
    period(&f0, &path, &init, tol)
}

/// Whether a connection passes through a third zero, which makes it a
/// chain of shorter saddles rather than a saddle connection.
fn through_third_zero(phi: &CubicDifferential, s: &SaddleConnection, limits: &Limits) -> bool {
    let ch = Chunks::new(&s.path);
    phi.zero_list().iter().filter(|z| z.id != s.endpoints.0 && z.id != s.endpoints.1).any(|z| {
        crate::geometry::closest_on_polyline(z.chart, &s.path, &ch).0 < 1e3 * limits.hit_tolerance
    })
}

fn push_unique(out: &mut Vec<SaddleConnection>, s: SaddleConnection, tol: f64) {
    let key = |e: (usize, usize)| (e.0.min(e.1), e.0.max(e.1));
    let dup = out.iter().any(|o| {
        key(o.endpoints) == key(s.endpoints) && crate::differential::Phase::new(o.phase).cyclic_distance(crate::differential::Phase::new(s.phase)) < tol
    });
    if !dup {
        out.push(s);
    }
}

/// All saddle connections over the phase circle, sorted by phase then
/// endpoints.
pub fn find_saddles(phi: &CubicDifferential, limits: &Limits, tol: &Tolerances) -> Result<Vec<SaddleConnection>> {
    find_saddles_with(phi, limits, tol, tol.sweep_resolution)
}

/// As [`find_saddles`] with an explicit sweep resolution.
pub fn find_saddles_with(phi: &CubicDifferential, limits: &Limits, tol: &Tolerances, n: usize) -> Result<Vec<SaddleConnection>> {
    let mut out: Vec<SaddleConnection> = vec![];
    let merge = 1e3 * tol.bisection_tol;
    if phi.is_normalized() {
        for tag in [PathTag::SegNeg, PathTag::SegPos, PathTag::Seg01] {
            let (a, b) = tag.endpoints().unwrap();
            let w = tag_period(phi, tag, tol)?;
            let theta0 = phase_of(w.value);
            let hit = match shoot_window(phi, a, b, theta0, limits, tol) {
                Some(h) => Some((h.0, h.1, w)),
                None => {
                    let targets = move |_: usize| vec![b];
                    sweep(phi, &[a], &targets, n, limits, tol).into_iter().next().map(|(_, _, th, t)| {
                        let pv = path_period(phi, &t.points, tol).unwrap_or(w);
                        (th, t, pv)
                    })
                }
            };
            if let Some((th, t, pv)) = hit {
                let phase = if Phase::new(th).cyclic_distance(Phase::new(theta0)) < 1e-6 { theta0 } else { Phase::new(th).value() };
                push_unique(
                    &mut out,
                    SaddleConnection { endpoints: (a, b), phase, shooting_phase: th, period: pv, path: t.points, lattice_class: None },
                    merge,
                );
            }
        }
    } else {
        let nz = phi.zero_list().len();
        let scale = phi.scale();
        for a in 0..nz {
            for b in a + 1..nz {
                let (za, zb) = (phi.zero_chart(a), phi.zero_chart(b));
                let clear = phi.zero_list().iter().filter(|z| z.id != a && z.id != b).all(|z| {
                    crate::geometry::point_segment(z.chart, za, zb).0 > 0.05 * scale
                });
                if !clear {
                    continue;
                }
                let mid = 0.5 * (za + zb);
                let pv = path_period(phi, &[za, mid, zb], tol)?;
                if let Some((th, t)) = shoot_window(phi, a, b, phase_of(pv.value), limits, tol) {
                    let pv = path_period(phi, &t.points, tol)?;
                    push_unique(
                        &mut out,
                        SaddleConnection { endpoints: (a, b), phase: Phase::new(th).value(), shooting_phase: th, period: pv, path: t.points, lattice_class: None },
                        merge,
                    );
                }
            }
        }
        let sources: Vec<usize> = (0..nz).collect();
        let targets = move |a: usize| (0..nz).filter(|&b| b != a).collect::<Vec<_>>();
        for (a, b, th, t) in sweep(phi, &sources, &targets, n, limits, tol) {
            let pv = path_period(phi, &t.points, tol)?;
            push_unique(
                &mut out,
                SaddleConnection { endpoints: (a, b), phase: Phase::new(th).value(), shooting_phase: th, period: pv, path: t.points, lattice_class: None },
                merge,
            );
        }
    }
    out.retain(|s| !through_third_zero(phi, s, limits));
    out.sort_by(|x, y| x.phase.partial_cmp(&y.phase).unwrap().then(x.endpoints.cmp(&y.endpoints)));
    Ok(out)
}


/// Best same-sign triple of critical trajectories from `zeros` at `theta`,
/// by perimeter of the triangle of pairwise crossings.
#[derive(Debug, Clone)]
struct LegFit {
    ks: [usize; 3],
    crossings: [C64; 3],
    perimeter: f64,
    area: f64,
    traces: Vec<Trajectory>,
}

fn leg_crossing(phi: &CubicDifferential, theta: f64, a: &Trajectory, b: &Trajectory) -> Option<C64> {
    let field = phi.field(theta);
    let exclusion = 100.0 * phi.eps_sing(&Tolerances::default()).max(1e-300);
    let ca = Chunks::new(&a.points);
    let cb = Chunks::new(&b.points);
    crossings(&a.points, &ca, &b.points, &cb)
        .into_iter()
        .find(|c| field.zero_distance(c.point, None).0 > exclusion)
        .map(|c| refine_crossing(&field, a, b, &c))
}

fn fit_legs(
    phi: &CubicDifferential,
    theta: f64,
    zeros: [usize; 3],
    fixed: Option<[usize; 3]>,
    limits: &Limits,
    tol: &Tolerances,
) -> Option<LegFit> {
    let traces: Vec<Vec<Trajectory>> =
        zeros.iter().map(|&z| (0..8).map(|k| shoot(phi, z, k, theta, limits, tol)).collect()).collect();
    let mut best: Option<LegFit> = None;
    let choices: Vec<[usize; 3]> = match fixed {
        Some(f) => vec![f],
        None => {
            let mut v = vec![];
            for i in 0..8 {
                for j in 0..8 {
                    for k in 0..8 {
                        if i % 2 == j % 2 && j % 2 == k % 2 {
                            v.push([i, j, k]);
                        }
                    }
                }
            }
            v
        }
    };
    for ks in choices {
        let ta = &traces[0][ks[0]];
        let tb = &traces[1][ks[1]];
        let tc = &traces[2][ks[2]];
        let (Some(p), Some(q), Some(r)) = (leg_crossing(phi, theta, ta, tb), leg_crossing(phi, theta, tb, tc), leg_crossing(phi, theta, tc, ta))
        else {
            continue;
        };
        let per = (p - q).norm() + (q - r).norm() + (r - p).norm();
        if best.as_ref().map_or(true, |b| per < b.perimeter) {
            best = Some(LegFit {
                ks,
                crossings: [p, q, r],
                perimeter: per,
                area: signed_area(&[p, q, r]),
                traces: vec![ta.clone(), tb.clone(), tc.clone()],
            });
        }
    }
    best
}

/// Flat length along `t` up to the point closest to `p`.
fn length_to(t: &Trajectory, p: C64) -> f64 {
    let ch = Chunks::new(&t.points);
    let (_, i, u) = crate::geometry::closest_on_polyline(p, &t.points, &ch);
    t.flat_lengths[i] + u * (t.flat_lengths[i + 1] - t.flat_lengths[i])
}

/// Confirms a predicted tripod phase by shooting the three legs and bisecting
/// the orientation of their crossing triangle until the crossings coincide.
pub fn verify_tripod(
    phi: &CubicDifferential,
    zeros: [usize; 3],
    theta_pred: f64,
    legs: [C64; 3],
    limits: &Limits,
    tol: &Tolerances,
) -> Option<CriticalTripod> {
    let target = tol.tripod_coincidence_rel * phi.scale();
    let mut fit = fit_legs(phi, theta_pred, zeros, None, limits, tol)?;
    let mut theta = theta_pred;
    if fit.perimeter > target {
        let w = tol.tripod_window;
        let ks = fit.ks;
        let lo_fit = fit_legs(phi, theta_pred - w, zeros, Some(ks), limits, tol)?;
        let hi_fit = fit_legs(phi, theta_pred + w, zeros, Some(ks), limits, tol)?;
        if lo_fit.area.signum() == hi_fit.area.signum() {
            return None;
        }
        let (mut lo, mut hi) = (theta_pred - w, theta_pred + w);
        let s_lo = lo_fit.area.signum();
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            let f = fit_legs(phi, mid, zeros, Some(ks), limits, tol)?;
            theta = mid;
            let done = f.perimeter < target;
            if f.area.signum() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            fit = f;
            if done {
                break;
            }
        }
        if fit.perimeter > target {
            return None;
        }
    }
    let point = (fit.crossings[0] + fit.crossings[1] + fit.crossings[2]) / 3.0;
    let field = phi.field(theta);
    let q = field.eval(point);
    let eps = C64::new(fit.traces[0].sign.eps(), 0.0);
    let vs: Vec<C64> = fit
        .traces
        .iter()
        .map(|t| {
            let ch = Chunks::new(&t.points);
            let (_, i, _) = crate::geometry::closest_on_polyline(point, &t.points, &ch);
            poly::nearest_cube_root(eps / q, t.velocities[i]).0
        })
        .collect();
    let ang = |u: C64, v: C64| (v / u).arg().abs();
    Some(CriticalTripod {
        zeros,
        fermat_point: point,
        phase: Phase::new(theta).value(),
        leg_periods: legs,
        traced_leg_lengths: [length_to(&fit.traces[0], point), length_to(&fit.traces[1], point), length_to(&fit.traces[2], point)],
        leg_angles: [ang(vs[0], vs[1]), ang(vs[1], vs[2]), ang(vs[2], vs[0])],
        coincidence: fit.perimeter,
        lattice_class: None,
    })
}

/// Critical tripods. For the normalized family the core triangle comes from
/// the reference periods; otherwise each zero triple joined pairwise by
/// saddles is developed from its centroid.
pub fn find_tripods(phi: &CubicDifferential, saddles: &[SaddleConnection], limits: &Limits, tol: &Tolerances) -> Result<Vec<CriticalTripod>> {
    let mut out = vec![];
    if phi.is_normalized() {
        let tri = match crate::walls::core_triangle(phi, tol) {
            Ok(t) => t,
            Err(Error::NoTriangle) => return Ok(out),
            Err(e) => return Err(e),
        };
        if tri.angles.iter().any(|&a| a >= 2.0 * THIRD_PI) {
            return Ok(out);
        }
        let [p0, p1, pinf] = tri.vertices;
        let f = crate::geometry::fermat_point(p0, p1, pinf);
        let legs = [f - p0, f - p1, f - pinf];
        let theta = phase_of(legs[2]);
        if let Some(t) = verify_tripod(phi, [0, 1, 2], theta, legs, limits, tol) {
            out.push(t);
        }
        return Ok(out);
    }
    let nz = phi.zero_list().len();
    let joined = |a: usize, b: usize| saddles.iter().any(|s| (s.endpoints == (a, b)) || (s.endpoints == (b, a)));
    let f0 = phi.field(0.0);
    for a in 0..nz {
        for b in a + 1..nz {
            for c in b + 1..nz {
                if !(joined(a, b) && joined(b, c) && joined(a, c)) {
                    continue;
                }
                let zs = [phi.zero_chart(a), phi.zero_chart(b), phi.zero_chart(c)];
                let g = (zs[0] + zs[1] + zs[2]) / 3.0;
                let inside_other = phi.zero_list().iter().filter(|z| ![a, b, c].contains(&z.id)).any(|z| {
                    crate::geometry::winding_number(&zs, z.chart) != 0
                });
                if inside_other {
                    continue;
                }
                let init = CubeRootBranch::at(&f0, g, C64::new(1.0, 0.0));
                let mut dev = [C64::new(0.0, 0.0); 3];
                for m in 0..3 {
                    dev[m] = period(&f0, &[g, zs[m]], &init, tol)?.value;
                }
                let area = signed_area(&dev);
                let mut angles = [0.0; 3];
                for m in 0..3 {
                    let p = dev[m];
                    let u = dev[(m + 1) % 3] - p;
                    let v = dev[(m + 2) % 3] - p;
                    angles[m] = (v / u).arg().abs();
                }
                if area == 0.0 || angles.iter().any(|&x| x >= 2.0 * THIRD_PI) {
                    continue;
                }
                let f = crate::geometry::fermat_point(dev[0], dev[1], dev[2]);
                let legs = [f - dev[0], f - dev[1], f - dev[2]];
                if let Some(t) = verify_tripod(phi, [a, b, c], phase_of(legs[0]), legs, limits, tol) {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by(|x, y| x.phase.partial_cmp(&y.phase).unwrap());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// `n` saddle connections at one phase.
    Saddles(usize),
    Tripod,
}

impl EventKind {
    pub fn name(self) -> String {
        match self {
            EventKind::Saddles(1) => "saddle".into(),
            EventKind::Saddles(2) => "twosaddles".into(),
            EventKind::Saddles(3) => "threesaddles".into(),
            EventKind::Saddles(n) => format!("{n}saddles"),
            EventKind::Tripod => "tripod".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPhase {
    pub phase: f64,
    pub kind: EventKind,
    pub saddles: Vec<SaddleConnection>,
    pub tripod: Option<CriticalTripod>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScanItem {
    Special(SpecialPhase),
    /// Open phase interval with the core type sampled at its midpoint, or
    /// the reason classification failed.
    Interval { lo: f64, hi: f64, core_type: std::result::Result<CoreType, String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub items: Vec<ScanItem>,
}

impl PhaseScan {
    /// Event and interval names in cyclic order, e.g. `saddle`, `III`.
    pub fn row(&self) -> Vec<String> {
        self.items
            .iter()
            .map(|it| match it {
                ScanItem::Special(s) => s.kind.name(),
                ScanItem::Interval { core_type: Ok(c), .. } => c.name().to_string(),
                ScanItem::Interval { core_type: Err(_), .. } => "?".to_string(),
            })
            .collect()
    }

    pub fn specials(&self) -> impl Iterator<Item = &SpecialPhase> {
        self.items.iter().filter_map(|it| match it {
            ScanItem::Special(s) => Some(s),
            _ => None,
        })
    }
}

/// Whether two rows agree up to a cyclic rotation.
pub fn cyclic_match<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|r| (0..a.len()).all(|i| a[(i + r) % a.len()].as_ref() == b[i].as_ref()))
}

/// Special phases (saddles and tripods, saddles merged within
/// `event_merge`) in `[0, π/3)`, alternating with intervals whose core type
/// is sampled at the midpoint.
pub fn scan_phases(phi: &CubicDifferential, n: usize, tol: &Tolerances) -> Result<PhaseScan> {
    let limits = Limits::for_differential(phi, tol);
    let saddles = find_saddles_with(phi, &limits, tol, n)?;
    let tripods = find_tripods(phi, &saddles, &limits, tol)?;
    let mut events: Vec<SpecialPhase> = vec![];
    for s in saddles {
        let p = Phase::new(s.phase);
        match events.iter_mut().find(|e| Phase::new(e.phase).cyclic_distance(p) < tol.event_merge) {
            Some(e) => {
                e.saddles.push(s);
                e.kind = EventKind::Saddles(e.saddles.len());
            }
            None => events.push(SpecialPhase { phase: p.value(), kind: EventKind::Saddles(1), saddles: vec![s], tripod: None }),
        }
    }
    for t in tripods {
        events.push(SpecialPhase { phase: Phase::new(t.phase).value(), kind: EventKind::Tripod, saddles: vec![], tripod: Some(t) });
    }
    events.sort_by(|a, b| a.phase.partial_cmp(&b.phase).unwrap());
    let bounds: Vec<(f64, f64)> = if events.is_empty() {
        vec![(0.0, THIRD_PI)]
    } else {
        (0..events.len())
            .map(|i| {
                let lo = events[i].phase;
                let hi = if i + 1 < events.len() { events[i + 1].phase } else { events[0].phase + THIRD_PI };
                (lo, hi)
            })
            .collect()
    };
    let caps = crate::network::Caps::default();
    let types = par::map(&bounds, |&(lo, hi)| {
        let net = crate::network::build(phi, 0.5 * (lo + hi), &caps, &limits, tol);
        crate::spectralcore::compute_spectral_core(&net)
            .and_then(|core| crate::spectralcore::classify_core(&core, tol))
            .map_err(|e| e.to_string())
    });
    let mut items = vec![];
    let mut ev = events.into_iter();
    for ((lo, hi), ct) in bounds.into_iter().zip(types) {
        if let Some(e) = ev.next() {
            items.push(ScanItem::Special(e));
        }
        items.push(ScanItem::Interval { lo, hi, core_type: ct });
    }
    Ok(PhaseScan { items })
}
