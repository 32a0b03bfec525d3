//! The iterative spectral network: critical trajectories from every zero,
//! joints at transversal crossings of same-sign trajectories, and newborn
//! trajectories of the opposite sign launched along the bisector at each
//! joint, repeated until no new joints appear or a cap fires.

use crate::config::Tolerances;
use crate::differential::{CubicDifferential, Field, Sign};
use crate::geometry::{crossings, hausdorff, line_intersection, Chunks, Crossing};
use crate::par;
use crate::poly;
use crate::quadrature;
use crate::trajectory::{trace, trace_critical, Limits, Origin, Trajectory, Verdict};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    pub max_generation: usize,
    pub max_trajectories: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_generation: 8, max_trajectories: 500 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub id: usize,
    pub location: C64,
    pub parents: (usize, usize),
    pub born: Option<usize>,
    pub generation: usize,
    /// Another same-generation crossing fell within the dedup radius.
    pub clustered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Fixpoint(usize),
    GenerationCapped(usize),
    TrajectoryCapped(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralNetwork {
    pub phi: CubicDifferential,
    pub theta: f64,
    pub limits: Limits,
    pub tolerances: Tolerances,
    pub trajectories: Vec<Trajectory>,
    pub joints: Vec<Joint>,
    pub status: Status,
    pub warnings: Vec<String>,
    /// Trajectory pairs found to overlap with opposite orientation.
    pub double_pairs: Vec<(usize, usize)>,
}

impl SpectralNetwork {
    pub fn field(&self) -> Field<'_> {
        self.phi.field(self.theta)
    }

    pub fn generation_count(&self, g: usize) -> usize {
        self.trajectories.iter().filter(|t| t.generation == g).count()
    }

    fn is_double(&self, i: usize) -> bool {
        self.double_pairs.iter().any(|&(a, b)| a == i || b == i)
    }
}

/// Generation 0: one trace per critical direction per zero.
pub fn build_initial(phi: &CubicDifferential, theta: f64, limits: &Limits, tol: &Tolerances) -> SpectralNetwork {
    let field = phi.field(theta);
    let jobs: Vec<(usize, usize)> = (0..phi.zero_list().len()).flat_map(|z| (0..8).map(move |k| (z, k))).collect();
    let trajectories = par::map(&jobs, |&(z, k)| trace_critical(&field, z, k, limits, tol));
    let mut net = SpectralNetwork {
        phi: phi.clone(),
        theta,
        limits: *limits,
        tolerances: tol.clone(),
        trajectories,
        joints: vec![],
        status: Status::Fixpoint(0),
        warnings: vec![],
        double_pairs: vec![],
    };
    net.double_pairs = overlapping_pairs(&net);
    net
}

/// Newborn direction and sign for parents moving along `slope_a`, `slope_b`
/// (forward directions whose difference is ±2π/3): the bisector of the
/// 2π/3 sector between them, with the opposite sign.
pub fn birth_direction(slope_a: f64, slope_b: f64, sign: Sign) -> (C64, Sign) {
    let u = C64::from_polar(1.0, slope_a) + C64::from_polar(1.0, slope_b);
    (u / u.norm(), sign.flip())
}

/// Integral of the branch continued from `b0` at `x0` along [x0, x].
fn developed(field: &Field<'_>, x0: C64, b0: C64, x: C64) -> C64 {
    let d = x - x0;
    let f = |u: f64| poly::nearest_cube_root(field.eval(x0 + d * u), b0).0 * d;
    quadrature::fixed(&f, 0.0, 1.0)
}

/// Refines a polyline crossing to the exact meet of the two trajectories,
/// which are straight lines in a common developed chart.
pub(crate) fn refine_crossing(field: &Field<'_>, a: &Trajectory, b: &Trajectory, c: &Crossing) -> C64 {
    let x0 = a.points[c.i];
    let ba = C64::new(a.sign.eps(), 0.0) / a.velocities[c.i];
    let y0 = b.points[c.j];
    let wy = developed(field, x0, ba, y0);
    let bcont = poly::nearest_cube_root(field.eval(y0), ba).0;
    let bb = C64::new(b.sign.eps(), 0.0) / b.velocities[c.j];
    let ratio = bcont / bb;
    let k = (ratio.arg() / (2.0 * PI / 3.0)).round();
    let unit = C64::from_polar(1.0, k * 2.0 * PI / 3.0);
    let dir_a = C64::new(a.sign.eps(), 0.0);
    let dir_b = unit * b.sign.eps();
    let Some(target) = line_intersection(C64::new(0.0, 0.0), dir_a, wy, dir_b) else {
        return c.point;
    };
    let mut x = c.point;
    for _ in 0..6 {
        let w = developed(field, x0, ba, x);
        let bx = poly::nearest_cube_root(field.eval(x), ba).0;
        let dx = (w - target) / bx;
        x -= dx;
        if dx.norm() < 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    if (x - c.point).norm() > 10.0 * (a.points[c.i + 1] - a.points[c.i]).norm().max((b.points[c.j + 1] - b.points[c.j]).norm()) {
        return c.point;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCandidate {
    pub location: C64,
    pub parents: (usize, usize),
    /// Crossing angle between the parents' forward directions.
    pub angle: f64,
}

/// Raw same-sign crossings among the given pairs, excluding neighbourhoods of
/// zeros and trajectory starts.
pub(crate) fn pair_crossings(net: &SpectralNetwork, chunks: &[Chunks], pairs: &[(usize, usize)]) -> Vec<(usize, usize, Crossing)> {
    let field = net.field();
    let exclusion = 100.0 * net.phi.eps_sing(&net.tolerances);
    let eps_joint = net.tolerances.eps_joint_rel * net.phi.scale();
    let lists = par::map(pairs, |&(i, j)| {
        let a = &net.trajectories[i];
        let b = &net.trajectories[j];
        let mut out = vec![];
        for c in crossings(&a.points, &chunks[i], &b.points, &chunks[j]) {
            if field.zero_distance(c.point, None).0 < exclusion {
                continue;
            }
            if (c.point - a.start()).norm() < eps_joint || (c.point - b.start()).norm() < eps_joint {
                continue;
            }
            out.push((i, j, c));
        }
        out
    });
    lists.into_iter().flatten().collect()
}

/// Transversal crossings between same-sign pairs whose newer member belongs
/// to generation `k`, located in developed coordinates.
pub fn find_joints(net: &SpectralNetwork, k: usize) -> Vec<JointCandidate> {
    let field = net.field();
    let chunks: Vec<Chunks> = net.trajectories.iter().map(|t| Chunks::new(&t.points)).collect();
    let n = net.trajectories.len();
    let mut pairs = vec![];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&net.trajectories[i], &net.trajectories[j]);
            if a.sign != b.sign || a.generation.max(b.generation) != k {
                continue;
            }
            if net.is_double(i) || net.is_double(j) {
                continue;
            }
            pairs.push((i, j));
        }
    }
    let raw = pair_crossings(net, &chunks, &pairs);
    let mut out: Vec<JointCandidate> = raw
        .iter()
        .map(|&(i, j, c)| {
            let (a, b) = (&net.trajectories[i], &net.trajectories[j]);
            let p = refine_crossing(&field, a, b, &c);
            let eps = C64::new(a.sign.eps(), 0.0);
            let q = field.eval(p);
            let va = poly::nearest_cube_root(eps / q, a.velocities[c.i]).0;
            let vb = poly::nearest_cube_root(eps / q, b.velocities[c.j]).0;
            JointCandidate { location: p, parents: (i, j), angle: (vb / va).arg().abs() }
        })
        .collect();
    out.sort_by(|x, y| x.parents.cmp(&y.parents));
    out
}

/// Pairs of opposite-sign trajectories that run along each other: saddle
/// pairs between two zeros and newborns retracing a critical trajectory.
fn overlapping_pairs(net: &SpectralNetwork) -> Vec<(usize, usize)> {
    let tol = net.tolerances.double_tol_rel * net.phi.scale();
    let ts = &net.trajectories;
    let mut out = vec![];
    for (i, a) in ts.iter().enumerate() {
        let Some(end) = a.hit_zero() else { continue };
        for (j, b) in ts.iter().enumerate() {
            if j == i || b.sign == a.sign || b.origin_zero() != Some(end) {
                continue;
            }
            let matches = match a.origin {
                Origin::Zero { zero, .. } => b.hit_zero() == Some(zero),
                _ => crate::trajectory::distance_to(b, a.start()) < tol,
            };
            if matches {
                let key = (i.min(j), i.max(j));
                if !out.contains(&key) {
                    out.push(key);
                }
            }
        }
    }
    out.sort();
    out
}

/// Iterates joint detection and newborn tracing to a fixpoint or a cap.
pub fn build(phi: &CubicDifferential, theta: f64, caps: &Caps, limits: &Limits, tol: &Tolerances) -> SpectralNetwork {
    let mut net = build_initial(phi, theta, limits, tol);
    let eps_joint = tol.eps_joint_rel * phi.scale();
    let centroid = phi.centroid();
    let mut k = 0usize;
    loop {
        let mut cands = find_joints(&net, k);
        for c in &cands {
            if c.angle < 1e-6 {
                net.warnings.push(format!("tangential crossing at {}", c.location));
            }
        }
        cands.retain(|c| c.angle >= 1e-6);
        cands.sort_by(|a, b| {
            (a.location - centroid)
                .norm()
                .partial_cmp(&(b.location - centroid).norm())
                .unwrap()
                .then(a.parents.cmp(&b.parents))
        });
        let mut accepted: Vec<Joint> = vec![];
        for c in cands {
            if net.joints.iter().any(|j| (j.location - c.location).norm() < eps_joint) {
                continue;
            }
            if let Some(prev) = accepted.iter_mut().find(|j| (j.location - c.location).norm() < eps_joint) {
                prev.clustered = true;
                continue;
            }
            accepted.push(Joint {
                id: net.joints.len() + accepted.len(),
                location: c.location,
                parents: c.parents,
                born: None,
                generation: k + 1,
                clustered: false,
            });
        }
        if accepted.is_empty() {
            net.status = Status::Fixpoint(k);
            break;
        }
        if k + 1 > caps.max_generation {
            net.status = Status::GenerationCapped(caps.max_generation);
            break;
        }
        let room = caps.max_trajectories.saturating_sub(net.trajectories.len());
        let capped = accepted.len() > room;
        accepted.truncate(room);
        let field = phi.field(theta);
        let births = par::map(&accepted, |j| {
            let (a, b) = (&net.trajectories[j.parents.0], &net.trajectories[j.parents.1]);
            let eps = C64::new(a.sign.eps(), 0.0);
            let q = field.eval(j.location);
            let va = poly::nearest_cube_root(eps / q, *a.velocities.last().unwrap()).0;
            let va = nearest_velocity(a, j.location, eps / q).unwrap_or(va);
            let vb = nearest_velocity(b, j.location, eps / q).unwrap_or(va);
            let (dir, sign) = birth_direction(va.arg(), vb.arg(), a.sign);
            let mut t = trace(&field, j.location, dir, sign, limits, tol, Origin::Joint { joint: j.id }, None);
            t.generation = k + 1;
            t
        });
        for (mut j, t) in accepted.into_iter().zip(births) {
            j.born = Some(net.trajectories.len());
            net.trajectories.push(t);
            net.joints.push(j);
        }
        net.double_pairs = overlapping_pairs(&net);
        if capped {
            net.status = Status::TrajectoryCapped(caps.max_trajectories);
            break;
        }
        k += 1;
    }
    net
}

/// Velocity of `t` at a point on it, continued from the closest vertex.
fn nearest_velocity(t: &Trajectory, p: C64, target: C64) -> Option<C64> {
    let ch = Chunks::new(&t.points);
    let (_, i, _) = crate::geometry::closest_on_polyline(p, &t.points, &ch);
    let v = t.velocities.get(i)?;
    Some(poly::nearest_cube_root(target, *v).0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DoubleTrajectory {
    SaddleCandidate { zeros: (usize, usize), trajectories: (usize, usize), hausdorff: f64 },
    TripodCandidate { zeros: [usize; 3], point: C64, trajectories: [usize; 3], angles: [f64; 3] },
    Other { trajectories: Vec<usize>, reason: String },
}

/// Overlapping opposite-orientation trajectories and critical tripods.
pub fn find_double_trajectories(net: &SpectralNetwork, tol: f64) -> Vec<DoubleTrajectory> {
    let ts = &net.trajectories;
    let mut out = vec![];
    let mut used = vec![false; ts.len()];
    for (i, a) in ts.iter().enumerate() {
        let (Some(za), Some(zb)) = (a.origin_zero(), a.hit_zero()) else { continue };
        let partner = ts.iter().enumerate().find(|(j, b)| {
            *j != i && b.sign != a.sign && b.origin_zero() == Some(zb) && b.hit_zero() == Some(za)
        });
        match partner {
            Some((j, b)) if j > i => {
                let h = hausdorff(&a.points, &b.points);
                used[i] = true;
                used[j] = true;
                if h < tol {
                    out.push(DoubleTrajectory::SaddleCandidate { zeros: (za, zb), trajectories: (i, j), hausdorff: h });
                } else {
                    out.push(DoubleTrajectory::Other { trajectories: vec![i, j], reason: format!("saddle pair apart by {h:.3e}") });
                }
            }
            Some(_) => {}
            None => {
                used[i] = true;
                out.push(DoubleTrajectory::Other { trajectories: vec![i], reason: "one-sided saddle".into() });
            }
        }
    }
    // Tripods: three critical trajectories of one sign from distinct zeros
    // whose pairwise crossings coincide.
    let chunks: Vec<Chunks> = ts.iter().map(|t| Chunks::new(&t.points)).collect();
    let gen0: Vec<usize> = (0..ts.len()).filter(|&i| ts[i].generation == 0).collect();
    let mut pairs = vec![];
    for (x, &i) in gen0.iter().enumerate() {
        for &j in &gen0[x + 1..] {
            if ts[i].sign == ts[j].sign && ts[i].origin_zero() != ts[j].origin_zero() {
                pairs.push((i, j));
            }
        }
    }
    let raw = pair_crossings(net, &chunks, &pairs);
    let field = net.field();
    let mut seen: Vec<[usize; 3]> = vec![];
    for (x, &(i, j, c1)) in raw.iter().enumerate() {
        for &(k, l, c2) in &raw[x + 1..] {
            if (c1.point - c2.point).norm() > tol {
                continue;
            }
            let mut tri: Vec<usize> = vec![i, j, k, l];
            tri.sort();
            tri.dedup();
            if tri.len() != 3 {
                continue;
            }
            let zs: Vec<usize> = tri.iter().map(|&m| ts[m].origin_zero().unwrap()).collect();
            if zs[0] == zs[1] || zs[1] == zs[2] || zs[0] == zs[2] {
                continue;
            }
            let key = [tri[0], tri[1], tri[2]];
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let p = 0.5 * (c1.point + c2.point);
            let q = field.eval(p);
            let eps = C64::new(ts[tri[0]].sign.eps(), 0.0);
            let vs: Vec<C64> = tri.iter().map(|&m| nearest_velocity(&ts[m], p, eps / q).unwrap()).collect();
            let ang = |u: C64, v: C64| (v / u).arg().abs();
            let angles = [ang(vs[0], vs[1]), ang(vs[1], vs[2]), ang(vs[2], vs[0])];
            if angles.iter().all(|a| (a - 2.0 * PI / 3.0).abs() < 1e-4) {
                for &m in &tri {
                    used[m] = true;
                }
                out.push(DoubleTrajectory::TripodCandidate { zeros: [zs[0], zs[1], zs[2]], point: p, trajectories: key, angles });
            }
        }
    }
    // Newborns that end on a zero retrace a critical trajectory.
    for (i, t) in ts.iter().enumerate() {
        if t.generation > 0 && matches!(t.verdict, Verdict::HitZero { .. }) && !used[i] {
            let explained = out.iter().any(|d| matches!(d, DoubleTrajectory::TripodCandidate { .. }));
            if !explained {
                out.push(DoubleTrajectory::Other { trajectories: vec![i], reason: "newborn ends on a zero".into() });
            }
        }
    }
    out
}

/// Same-sign pairs `(i, j)` where the newborn `j` retraces `i` from its
/// birth point on, within `rel · scale` inside half the escape radius.
pub fn coincident_pairs(net: &SpectralNetwork, rel: f64) -> Vec<(usize, usize)> {
    let ts = &net.trajectories;
    let tol = rel * net.phi.scale();
    let c = net.phi.centroid();
    let reach = 0.5 * net.limits.escape_radius;
    let chunks: Vec<Chunks> = ts.iter().map(|t| Chunks::new(&t.points)).collect();
    let mut out = vec![];
    for (j, b) in ts.iter().enumerate() {
        if b.generation == 0 {
            continue;
        }
        for (i, a) in ts.iter().enumerate() {
            if i == j || a.sign != b.sign || crate::geometry::closest_on_polyline(b.start(), &a.points, &chunks[i]).0 > tol {
                continue;
            }
            let near: Vec<C64> = b.points.iter().copied().filter(|p| (p - c).norm() < reach).collect();
            let h = near.iter().map(|&p| crate::geometry::closest_on_polyline(p, &a.points, &chunks[i]).0).fold(0.0, f64::max);
            if near.len() > 1 && h <= tol {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Number of transversal crossings between two trajectories away from zeros.
pub fn crossing_count(net: &SpectralNetwork, i: usize, j: usize) -> usize {
    let a = &net.trajectories[i];
    let b = &net.trajectories[j];
    let chunks = vec![Chunks::new(&a.points), Chunks::new(&b.points)];
    let field = net.field();
    let exclusion = 100.0 * net.phi.eps_sing(&net.tolerances);
    let eps_joint = net.tolerances.eps_joint_rel * net.phi.scale();
    crossings(&a.points, &chunks[0], &b.points, &chunks[1])
        .into_iter()
        .filter(|c| {
            field.zero_distance(c.point, None).0 >= exclusion
                && (c.point - a.start()).norm() >= eps_joint
                && (c.point - b.start()).norm() >= eps_joint
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birth_direction_examples() {
        let (d, s) = birth_direction(0.0, 2.0 * PI / 3.0, Sign::Pos);
        assert!((d - C64::from_polar(1.0, PI / 3.0)).norm() < 1e-15);
        assert_eq!(s, Sign::Neg);
        let (d, s) = birth_direction(PI / 3.0, PI, Sign::Neg);
        assert!((d - C64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        assert_eq!(s, Sign::Pos);
    }
}
