//! The spectral core: the complement of the images of the maximal admissible
//! half-planes, assembled from the critical trajectories of a network.
//!
//! At a simple zero the eight critical rays are indexed counterclockwise and
//! sector `j` lies between rays `j` and `j + 1`. A maximal half-plane enters
//! a zero along ray `j` and leaves along ray `j + 3`, covering sectors
//! `j, j + 1, j + 2` on its right; when ray `j + 3` is a saddle connection the
//! boundary line continues straight through the next zero. The half-plane is
//! admissible when the region it bounds contains no other zero.

use crate::config::Tolerances;
use crate::differential::{gauss_bonnet_residual, THIRD_PI};
use crate::error::{Error, Result};
use crate::geometry::{boundary_distance, crossings, point_segment, winding_number, Chunks, Crossing};
use crate::network::{refine_crossing, SpectralNetwork};
use crate::poly;
use crate::trajectory::{Origin, Trajectory, Verdict};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const RAYS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CornerKind {
    ZeroCorner(usize),
    RegularCorner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub location: C64,
    pub kind: CornerKind,
    /// Interior angle on the core side.
    pub interior_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreSide {
    /// Polyline from this corner to the next one.
    pub points: Vec<C64>,
    pub saddle: bool,
    /// Unit real-slope defect `Im(Q v³)/|Q v³|` at the side's midpoint.
    pub slope_defect: f64,
}

/// One closed boundary walk, counterclockwise with the core on the left. A
/// component with two zero corners of angle 0 is a single saddle connection
/// with both sides on the polar domain; a single zero corner is a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreComponent {
    pub corners: Vec<Corner>,
    pub sides: Vec<CoreSide>,
    pub interior_zeros: Vec<usize>,
}

impl CoreComponent {
    pub fn is_degenerate(&self) -> bool {
        self.corners.iter().all(|c| c.interior_angle < 1e-9)
    }

    /// Closed boundary polyline.
    pub fn boundary(&self) -> Vec<C64> {
        let mut out: Vec<C64> = vec![];
        for s in &self.sides {
            for &p in &s.points {
                if out.last().map_or(true, |q: &C64| (*q - p).norm() > 0.0) {
                    out.push(p);
                }
            }
        }
        if out.len() > 1 && out[0] == out[out.len() - 1] {
            out.pop();
        }
        out
    }

    pub fn triangle_count(&self) -> i64 {
        if self.is_degenerate() {
            0
        } else {
            self.corners.len() as i64 - 2 + 2 * self.interior_zeros.len() as i64
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        self.corners.iter().map(|c| c.interior_angle).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorePolygon {
    pub theta: f64,
    pub zero_count: usize,
    pub components: Vec<CoreComponent>,
    /// Sides of the polar domain that are saddle connections, counted twice
    /// when both sides face the polar domain.
    pub saddle_sides: usize,
    /// Distinct real saddle connections at this phase.
    pub saddle_count: usize,
    pub scale: f64,
}

impl CorePolygon {
    pub fn triangle_count(&self) -> i64 {
        self.components.iter().map(|c| c.triangle_count()).sum()
    }

    /// Inside or within `tol` of the core.
    pub fn contains(&self, p: C64, tol: f64) -> bool {
        self.components.iter().any(|c| {
            let b = c.boundary();
            if b.len() == 1 {
                return (b[0] - p).norm() <= tol;
            }
            (!c.is_degenerate() && winding_number(&b, p) != 0) || boundary_distance(&b, p) <= tol
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreType {
    I,
    IIminus,
    IIplus,
    III,
    IV,
    Sad1Par,
    Sad1Pent,
    Sad2Quad,
    Sad2Pair,
    Sad3Tri,
    D2Parallelogram,
    D2Saddle,
}

impl CoreType {
    pub fn name(self) -> &'static str {
        match self {
            CoreType::I => "I",
            CoreType::IIminus => "II-",
            CoreType::IIplus => "II+",
            CoreType::III => "III",
            CoreType::IV => "IV",
            CoreType::Sad1Par => "Sad1Par",
            CoreType::Sad1Pent => "Sad1Pent",
            CoreType::Sad2Quad => "Sad2Quad",
            CoreType::Sad2Pair => "Sad2Pair",
            CoreType::Sad3Tri => "Sad3Tri",
            CoreType::D2Parallelogram => "D2Parallelogram",
            CoreType::D2Saddle => "D2Saddle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RayEnd {
    Escaped,
    Saddle { zero: usize, partner: usize },
}

struct Rays<'a> {
    net: &'a SpectralNetwork,
    /// Trajectory index of ray `k` at zero `z`.
    index: Vec<[usize; RAYS]>,
    ends: Vec<[RayEnd; RAYS]>,
    chunks: Vec<[Chunks; RAYS]>,
}

impl<'a> Rays<'a> {
    fn traj(&self, z: usize, k: usize) -> &'a Trajectory {
        &self.net.trajectories[self.index[z][k]]
    }
}

fn collect_rays(net: &SpectralNetwork) -> Result<Rays<'_>> {
    let nz = net.phi.zero_list().len();
    let mut index = vec![[usize::MAX; RAYS]; nz];
    for (i, t) in net.trajectories.iter().enumerate() {
        if let Origin::Zero { zero, direction } = t.origin {
            if t.generation == 0 && direction < RAYS {
                index[zero][direction] = i;
            }
        }
    }
    if index.iter().any(|r| r.contains(&usize::MAX)) {
        return Err(Error::CoreAssemblyFailure("missing critical trajectories".into()));
    }
    let mut ends = vec![[RayEnd::Escaped; RAYS]; nz];
    for z in 0..nz {
        for k in 0..RAYS {
            let t = &net.trajectories[index[z][k]];
            ends[z][k] = match t.verdict {
                Verdict::EscapedToPole => RayEnd::Escaped,
                Verdict::HitZero { zero, .. } => {
                    let back = -*t.velocities.last().unwrap();
                    let partner = (0..RAYS)
                        .max_by(|&a, &b| {
                            let va = net.trajectories[index[zero][a]].velocities[0];
                            let vb = net.trajectories[index[zero][b]].velocities[0];
                            let da = crate::geometry::dot(va / va.norm(), back / back.norm());
                            let db = crate::geometry::dot(vb / vb.norm(), back / back.norm());
                            da.partial_cmp(&db).unwrap()
                        })
                        .unwrap();
                    RayEnd::Saddle { zero, partner }
                }
                Verdict::Truncated(r) => {
                    return Err(Error::CoreAssemblyFailure(format!("critical trajectory ({z}, {k}) truncated: {r:?}")));
                }
            };
        }
    }
    let chunks = (0..nz)
        .map(|z| std::array::from_fn(|k| Chunks::new(&net.trajectories[index[z][k]].points)))
        .collect();
    Ok(Rays { net, index, ends, chunks })
}

/// Boundary line of a maximal half-plane: the zeros it passes through with
/// the ray index it arrives on, and the ray it finally leaves on.
#[derive(Debug, Clone)]
struct Chain {
    links: Vec<(usize, usize)>,
    exit: (usize, usize),
}

fn chains(rays: &Rays<'_>) -> Result<Vec<Chain>> {
    let nz = rays.index.len();
    let mut out = vec![];
    for z in 0..nz {
        for j in 0..RAYS {
            if rays.ends[z][j] != RayEnd::Escaped {
                continue;
            }
            let mut links = vec![(z, j)];
            let exit = loop {
                let (cz, cin) = *links.last().unwrap();
                let out_k = (cin + 3) % RAYS;
                match rays.ends[cz][out_k] {
                    RayEnd::Escaped => break (cz, out_k),
                    RayEnd::Saddle { zero, partner } => {
                        if links.len() > nz {
                            return Err(Error::CoreAssemblyFailure("half-plane boundary does not leave the zeros".into()));
                        }
                        links.push((zero, partner));
                    }
                }
            };
            out.push(Chain { links, exit });
        }
    }
    Ok(out)
}

/// Closed curve around the region to the right of a chain, closed clockwise
/// outside the escape circle.
fn chain_region(rays: &Rays<'_>, chain: &Chain, centroid: C64) -> Vec<C64> {
    let mut pts: Vec<C64> = vec![];
    let (z0, j0) = chain.links[0];
    pts.extend(rays.traj(z0, j0).points.iter().rev());
    for w in chain.links.windows(2) {
        let (cz, cin) = w[0];
        let t = rays.traj(cz, (cin + 3) % RAYS);
        pts.extend(t.points.iter().skip(1));
    }
    let (ez, ek) = chain.exit;
    pts.extend(rays.traj(ez, ek).points.iter().skip(1));
    let e = *pts.last().unwrap() - centroid;
    let s = pts[0] - centroid;
    let sweep = (e.arg() - s.arg()).rem_euclid(2.0 * PI);
    let r = 2.0 * e.norm().max(s.norm());
    for m in 0..=64 {
        let a = e.arg() - sweep * m as f64 / 64.0;
        pts.push(centroid + C64::from_polar(r, a));
    }
    pts
}

/// Covered sectors per zero from the admissible half-planes.
fn covered_sectors(rays: &Rays<'_>, chains: &[Chain]) -> Vec<[bool; RAYS]> {
    let phi = &rays.net.phi;
    let zeros = phi.zero_list();
    let centroid = phi.centroid();
    let admissible = crate::par::map(chains, |c| {
        let region = chain_region(rays, c, centroid);
        zeros
            .iter()
            .filter(|z| !c.links.iter().any(|l| l.0 == z.id))
            .all(|z| winding_number(&region, z.chart) == 0)
    });
    let mut cov = vec![[false; RAYS]; zeros.len()];
    for (c, ok) in chains.iter().zip(admissible) {
        if ok {
            for &(z, j) in &c.links {
                for m in 0..3 {
                    cov[z][(j + m) % RAYS] = true;
                }
            }
        }
    }
    cov
}

/// Maximal cyclic runs of uncovered sectors as (first, length).
fn uncovered_runs(cov: &[bool; RAYS]) -> Vec<(usize, usize)> {
    let Some(start) = (0..RAYS).find(|&k| cov[k]) else {
        return vec![];
    };
    let mut runs = vec![];
    let mut k = 0;
    while k < RAYS {
        let idx = (start + k) % RAYS;
        if cov[idx] {
            k += 1;
            continue;
        }
        let first = idx;
        let mut len = 0;
        while k < RAYS && !cov[(start + k) % RAYS] {
            len += 1;
            k += 1;
        }
        runs.push((first, len));
    }
    runs
}

fn slope_defect(net: &SpectralNetwork, p: C64, v: C64) -> f64 {
    let q = net.field().eval(p) * v * v * v;
    q.im.abs() / q.norm().max(1e-300)
}

fn midpoint_defect(net: &SpectralNetwork, pts: &[C64]) -> f64 {
    if pts.len() < 3 {
        let v = pts[pts.len() - 1] - pts[0];
        return slope_defect(net, 0.5 * (pts[0] + pts[pts.len() - 1]), v);
    }
    let m = pts.len() / 2;
    slope_defect(net, pts[m], pts[m + 1] - pts[m - 1])
}

/// Exact unit velocity of a trajectory at `p`, on the branch of `near`.
fn velocity_at(net: &SpectralNetwork, t: &Trajectory, p: C64, near: C64) -> C64 {
    let q = net.field().eval(p);
    let v = poly::nearest_cube_root(C64::new(t.sign.eps(), 0.0) / q, near).0;
    v / v.norm()
}

/// Assembles the spectral core from the critical trajectories of `net`.
pub fn compute_spectral_core(net: &SpectralNetwork) -> Result<CorePolygon> {
    let phi = &net.phi;
    let zeros = phi.zero_list();
    let nz = zeros.len();
    let scale = phi.scale();
    let rays = collect_rays(net)?;
    let chain_list = chains(&rays)?;
    let cov = covered_sectors(&rays, &chain_list);
    let exclusion = 100.0 * phi.eps_sing(&net.tolerances);

    let mut saddle_count = 0;
    for z in 0..nz {
        for k in 0..RAYS {
            if let RayEnd::Saddle { zero, .. } = rays.ends[z][k] {
                if zero > z {
                    saddle_count += 1;
                }
            }
        }
    }

    // Zero corners: (zero, first uncovered sector, run length).
    let mut corners: Vec<(usize, usize, usize)> = vec![];
    for z in 0..nz {
        for (first, len) in uncovered_runs(&cov[z]) {
            corners.push((z, first, len));
        }
    }
    let interior: Vec<usize> = (0..nz).filter(|&z| cov[z].iter().all(|c| !c)).collect();
    // Ray `k` at `z` arrives at a corner when it closes the run on its cw side.
    let corner_arriving = |z: usize, k: usize| corners.iter().position(|&(cz, f, l)| cz == z && (f + l) % RAYS == k);

    let mut components: Vec<CoreComponent> = vec![];
    let mut saddle_sides = 0;
    let mut visited = vec![false; corners.len()];
    for start in 0..corners.len() {
        if visited[start] {
            continue;
        }
        let mut comp = CoreComponent { corners: vec![], sides: vec![], interior_zeros: vec![] };
        let mut cur = start;
        loop {
            if visited[cur] {
                if cur != start {
                    return Err(Error::CoreAssemblyFailure("boundary walk re-entered a corner".into()));
                }
                break;
            }
            visited[cur] = true;
            let (z, first, len) = corners[cur];
            comp.corners.push(Corner {
                location: zeros[z].chart,
                kind: CornerKind::ZeroCorner(z),
                interior_angle: len as f64 * THIRD_PI,
            });
            let ray = rays.traj(z, first);
            match rays.ends[z][first] {
                RayEnd::Saddle { zero, partner } => {
                    let next = corner_arriving(zero, partner)
                        .ok_or_else(|| Error::CoreAssemblyFailure(format!("saddle from zero {z} ends at no corner")))?;
                    let mut pts = ray.points.clone();
                    *pts.last_mut().unwrap() = zeros[zero].chart;
                    comp.sides.push(CoreSide { slope_defect: midpoint_defect(net, &pts), points: pts, saddle: true });
                    saddle_sides += 1;
                    cur = next;
                }
                RayEnd::Escaped => {
                    // First crossing with a ray arriving at another corner.
                    let mut best: Option<(f64, usize, usize, Crossing)> = None;
                    for (ci, &(cz, cf, cl)) in corners.iter().enumerate() {
                        let ck = (cf + cl) % RAYS;
                        if cz == z || rays.ends[cz][ck] != RayEnd::Escaped {
                            continue;
                        }
                        let other = rays.traj(cz, ck);
                        for c in crossings(&ray.points, &rays.chunks[z][first], &other.points, &rays.chunks[cz][ck]) {
                            if net.field().zero_distance(c.point, None).0 < exclusion {
                                continue;
                            }
                            let along = c.i as f64 + c.s;
                            if best.as_ref().map_or(true, |b| along < b.0) {
                                best = Some((along, ci, ck, c));
                            }
                        }
                    }
                    let (_, next, ck, c) = best.ok_or_else(|| {
                        Error::CoreAssemblyFailure(format!("boundary ray ({z}, {first}) meets no arriving ray"))
                    })?;
                    let nz_ = corners[next].0;
                    let other = rays.traj(nz_, ck);
                    let p = refine_crossing(&net.field(), ray, other, &c);
                    let v_in = velocity_at(net, ray, p, ray.velocities[c.i]);
                    let v_out = -velocity_at(net, other, p, other.velocities[c.j]);
                    let turn = (v_out / v_in).arg();
                    let mut a: Vec<C64> = ray.points[..=c.i].to_vec();
                    a.push(p);
                    let mut b: Vec<C64> = vec![p];
                    b.extend(other.points[..=c.j].iter().rev());
                    comp.sides.push(CoreSide { slope_defect: midpoint_defect(net, &a), points: a, saddle: false });
                    comp.corners.push(Corner { location: p, kind: CornerKind::RegularCorner, interior_angle: PI - turn });
                    comp.sides.push(CoreSide { slope_defect: midpoint_defect(net, &b), points: b, saddle: false });
                    cur = next;
                }
            }
            if comp.corners.len() > 4 * RAYS * nz {
                return Err(Error::CoreAssemblyFailure("boundary walk does not close".into()));
            }
        }
        components.push(comp);
    }

    // Saddles with both sides on the polar domain.
    for z in 0..nz {
        for k in 0..RAYS {
            if let RayEnd::Saddle { zero, partner } = rays.ends[z][k] {
                if zero < z || !(cov[z][k] && cov[z][(k + RAYS - 1) % RAYS]) {
                    continue;
                }
                let _ = partner;
                let mut pts = rays.traj(z, k).points.clone();
                *pts.last_mut().unwrap() = zeros[zero].chart;
                let back: Vec<C64> = pts.iter().rev().cloned().collect();
                let corner = |id: usize| Corner { location: zeros[id].chart, kind: CornerKind::ZeroCorner(id), interior_angle: 0.0 };
                components.push(CoreComponent {
                    corners: vec![corner(z), corner(zero)],
                    sides: vec![
                        CoreSide { slope_defect: midpoint_defect(net, &pts), points: pts, saddle: true },
                        CoreSide { slope_defect: midpoint_defect(net, &back), points: back, saddle: true },
                    ],
                    interior_zeros: vec![],
                });
                saddle_sides += 2;
            }
        }
    }

    for &z in &interior {
        if let Some(c) = components.iter_mut().find(|c| !c.is_degenerate() && winding_number(&c.boundary(), zeros[z].chart) != 0) {
            c.interior_zeros.push(z);
        }
    }
    if components.is_empty() {
        if nz == 1 {
            let p = zeros[0].chart;
            components.push(CoreComponent {
                corners: vec![Corner { location: p, kind: CornerKind::ZeroCorner(0), interior_angle: 0.0 }],
                sides: vec![CoreSide { points: vec![p], saddle: false, slope_defect: 0.0 }],
                interior_zeros: vec![],
            });
        } else {
            return Err(Error::CoreAssemblyFailure("no core boundary found".into()));
        }
    }
    Ok(CorePolygon { theta: net.theta, zero_count: nz, components, saddle_sides, saddle_count, scale })
}

fn is(a: f64, k: f64, tol: f64) -> bool {
    (a - k * THIRD_PI).abs() < tol
}

/// Matches the corner data to the closed classification.
pub fn classify_core(core: &CorePolygon, tol: &Tolerances) -> Result<CoreType> {
    let eq = tol.core_angle_tol;
    let fail = || Error::UnclassifiedCore(format!("{:?}", core.components.iter().map(|c| c.angles()).collect::<Vec<_>>()));
    let polys: Vec<&CoreComponent> = core.components.iter().filter(|c| !c.is_degenerate()).collect();
    let segments = core.components.len() - polys.len();
    match core.zero_count {
        2 => match (polys.len(), segments) {
            (0, 1) => Ok(CoreType::D2Saddle),
            (1, 0) if polys[0].corners.len() == 4 => Ok(CoreType::D2Parallelogram),
            _ => Err(fail()),
        },
        3 if core.saddle_sides == 0 => {
            if polys.len() == 2 && polys.iter().all(|p| p.corners.len() == 4) {
                return Ok(CoreType::IV);
            }
            if polys.len() != 1 || polys[0].corners.len() != 6 {
                return Err(fail());
            }
            let a = polys[0].angles();
            if a.iter().all(|&x| is(x, 2.0, eq)) {
                return Ok(CoreType::I);
            }
            let mult: Vec<i64> = a.iter().map(|x| (x / THIRD_PI).round() as i64).collect();
            if a.iter().zip(&mult).any(|(x, m)| !is(*x, *m as f64, eq)) {
                return Err(fail());
            }
            let rot = |anchor: i64| -> Option<Vec<i64>> {
                let p = mult.iter().position(|&m| m == anchor)?;
                Some((0..6).map(|i| mult[(p + i) % 6]).collect())
            };
            if let Some(r) = rot(4) {
                if r == [4, 2, 1, 2, 1, 2] {
                    return Ok(CoreType::III);
                }
            }
            if let Some(r) = rot(3) {
                if r == [3, 2, 1, 2, 2, 2] {
                    return Ok(CoreType::IIminus);
                }
                if r == [3, 2, 2, 2, 1, 2] {
                    return Ok(CoreType::IIplus);
                }
            }
            Err(fail())
        }
        3 => match (core.saddle_count, polys.len(), segments) {
            (3, 1, 0) if polys[0].corners.len() == 3 => Ok(CoreType::Sad3Tri),
            (2, 1, 0) if polys[0].corners.len() == 4 => Ok(CoreType::Sad2Quad),
            (2, 0, 2) => Ok(CoreType::Sad2Pair),
            (1, 1, 0) if polys[0].corners.len() == 5 => Ok(CoreType::Sad1Pent),
            (1, 1, 1) if polys[0].corners.len() == 4 => Ok(CoreType::Sad1Par),
            _ => Err(fail()),
        },
        _ => Err(fail()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreAudit {
    pub triangle_count: i64,
    pub expected_triangles: i64,
    pub triangles_ok: bool,
    pub alternation_ok: bool,
    pub regular_angles_ok: bool,
    pub angles_multiple_ok: bool,
    pub slopes_real_ok: bool,
    pub gauss_bonnet_max: f64,
    pub gauss_bonnet_ok: bool,
}

impl CoreAudit {
    pub fn passed(&self) -> bool {
        self.triangles_ok && self.alternation_ok && self.regular_angles_ok && self.angles_multiple_ok && self.slopes_real_ok && self.gauss_bonnet_ok
    }
}

/// Triangle count, corner alternation, regular-corner angles, side slopes and
/// the Gauss-Bonnet residual of every non-degenerate component.
pub fn audit_core(core: &CorePolygon, tol: &Tolerances) -> CoreAudit {
    let n = core.zero_count as i64;
    let expected = 2 * n - 2 - core.saddle_sides as i64;
    let count = core.triangle_count();
    let mut alternation = true;
    let mut regular = true;
    let mut multiple = true;
    let mut slopes = true;
    let mut gb: f64 = 0.0;
    for c in &core.components {
        let k = c.corners.len();
        let saddle_free = c.sides.iter().all(|s| !s.saddle);
        if saddle_free && k > 1 {
            for i in 0..k {
                let a = matches!(c.corners[i].kind, CornerKind::RegularCorner);
                let b = matches!(c.corners[(i + 1) % k].kind, CornerKind::RegularCorner);
                alternation &= a != b;
            }
        }
        for corner in &c.corners {
            let m = (corner.interior_angle / THIRD_PI).round();
            multiple &= (corner.interior_angle - m * THIRD_PI).abs() < 1e-4;
            if corner.kind == CornerKind::RegularCorner {
                // 4π/3 on the polar side.
                regular &= (2.0 * PI - corner.interior_angle - 4.0 * THIRD_PI).abs() < 1e-4;
            }
        }
        slopes &= c.sides.iter().all(|s| s.slope_defect < 1e-4);
        if !c.is_degenerate() {
            let orders = vec![1_i64; c.interior_zeros.len()];
            gb = gb.max(gauss_bonnet_residual(&c.angles(), &orders).abs());
        }
    }
    CoreAudit {
        triangle_count: count,
        expected_triangles: expected,
        triangles_ok: count == expected,
        alternation_ok: alternation,
        regular_angles_ok: regular,
        angles_multiple_ok: multiple,
        slopes_real_ok: slopes,
        gauss_bonnet_max: gb,
        gauss_bonnet_ok: gb < tol.polygon_audit,
    }
}

/// Joints of `net` that lie outside `core` by more than `rel · scale`.
pub fn joints_outside(net: &SpectralNetwork, core: &CorePolygon, rel: f64) -> Vec<usize> {
    let tol = rel * core.scale;
    net.joints.iter().filter(|j| !core.contains(j.location, tol)).map(|j| j.id).collect()
}

/// Distance from `p` to the nearest point of any core side.
pub fn distance_to_boundary(core: &CorePolygon, p: C64) -> f64 {
    core.components
        .iter()
        .flat_map(|c| c.sides.iter())
        .flat_map(|s| s.points.windows(2).map(move |w| point_segment(p, w[0], w[1]).0))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_are_cyclic() {
        let mut cov = [true; RAYS];
        cov[7] = false;
        cov[0] = false;
        cov[3] = false;
        assert_eq!(uncovered_runs(&cov), vec![(3, 1), (7, 2)]);
        assert!(uncovered_runs(&[true; RAYS]).is_empty());
    }
}
