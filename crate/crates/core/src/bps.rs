//! BPS structures of the normalized degree-three family: central charges,
//! class identification by central-charge matching, active classes and
//! sector products of BPS automorphisms.
//!
//! A saddle or tripod with developed period `w` lifts to classes with
//! `Z = ±i√3·ωᵏ·w`, `ω = e^{2πi/3}`; the factor `i√3 = 1 − ω` is the
//! difference of two sheets, so `|Z| = √3 × flat length`.

use crate::config::Tolerances;
use crate::degeneration::{find_saddles, find_tripods, period, tag_period, CriticalTripod, PathTag, SaddleConnection};
use crate::differential::{CubeRootBranch, CubicDifferential};
use crate::error::{Error, Result};
use crate::trajectory::Limits;
use crate::twisted::{Automorphism, LatticeClass, TwistedRational};
use crate::walls::{classify_chamber, ChamberLabel};
use crate::{par, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn i_sqrt3() -> C64 {
    C64::new(0.0, 3f64.sqrt())
}

/// Orbit representatives of the saddle and tripod classes.
pub const SADDLE_ORBITS: [[i32; 4]; 3] = [[1, 0, 0, 0], [0, -1, -1, 0], [0, 1, 0, 0]];
pub const TRIPOD_ORBIT: [i32; 4] = [1, 1, 0, 0];

/// The 24 classes that can be active anywhere in the family.
pub fn candidate_classes() -> Vec<LatticeClass> {
    let mut out = vec![];
    for rep in SADDLE_ORBITS.iter().chain(std::iter::once(&TRIPOD_ORBIT)) {
        for g in LatticeClass(*rep).orbit() {
            out.push(g);
            out.push(g.neg());
        }
    }
    out
}

/// `∛((t−1)t)` continued from `t = 1/2 + εi`: the argument of `(t−1)t` is
/// taken in `(−2π, 0]`.
pub fn cbrt_tt1(t: C64) -> C64 {
    let z = t * (t - 1.0);
    let mut a = z.arg();
    if a > 0.0 {
        a -= 2.0 * PI;
    }
    C64::from_polar(z.norm().cbrt(), a / 3.0)
}

/// Closed form of `Z(γ₃)` with principal `∛α`.
pub fn z3_closed_form(t: C64, alpha: C64) -> C64 {
    let a3 = alpha.powf(1.0 / 3.0);
    C64::new(0.0, -2.0 * PI) * a3 * cbrt_tt1(t) * (t * t - t + 1.0) / (9.0 * (t - 1.0).powi(2) * t * t)
}

/// Integral of `φ^{1/3}` over a loop around the pole, positively oriented
/// about it (clockwise in the chart), on the sheet asymptotic to
/// `−∛α·∛((t−1)t)·y`.
pub fn z3_loop(phi: &CubicDifferential, tol: &Tolerances) -> Result<C64> {
    if !phi.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let field = phi.field(0.0);
    let r = 3.0 * phi.zero_list().iter().map(|z| z.chart.norm()).fold(0.0, f64::max) + 1.0;
    let n = 256;
    let mut path: Vec<C64> = (0..=n).map(|k| C64::from_polar(r, -2.0 * PI * k as f64 / n as f64)).collect();
    path[n] = path[0];
    let reference = -phi.alpha.powf(1.0 / 3.0) * cbrt_tt1(phi.t) * path[0];
    let init = CubeRootBranch::at(&field, path[0], reference);
    Ok(period(&field, &path, &init, tol)?.value)
}

/// `(Z₁, Z₂, Z₃, Z₄)` on the generators.
pub fn central_charges(t: C64, alpha: C64, tol: &Tolerances) -> Result<[C64; 4]> {
    let phi = CubicDifferential::normalized(alpha, t)?;
    let w1 = tag_period(&phi, PathTag::SegPos, tol)?.value;
    let w01 = tag_period(&phi, PathTag::Seg01, tol)?.value;
    let z3 = z3_loop(&phi, tol)?;
    Ok([-i_sqrt3() * w1, i_sqrt3() * w01, z3, omega() * z3])
}

pub fn central_charge(z: &[C64; 4], g: LatticeClass) -> C64 {
    (0..4).map(|i| z[i] * g.0[i] as f64).sum()
}

/// Period of a degeneration in developed coordinates: the saddle period, or
/// for a tripod the sum of its legs rotated onto a common direction.
pub fn saddle_value(s: &SaddleConnection) -> C64 {
    s.period.value
}

pub fn tripod_value(t: &CriticalTripod) -> Result<C64> {
    let l = t.leg_periods;
    let dir = l[0] / l[0].norm();
    for v in &l[1..] {
        let q = v / dir;
        let k = (q.arg() / (2.0 * PI / 3.0)).round();
        if (q.arg() - k * 2.0 * PI / 3.0).abs() > 1e-6 {
            return Err(Error::InvalidDifferential("tripod legs are not at 2π/3".into()));
        }
    }
    Ok(dir * l.iter().map(|v| v.norm()).sum::<f64>())
}

fn matches(z: &[C64; 4], g: LatticeClass, w: C64, rel: f64) -> Option<f64> {
    let zg = central_charge(z, g);
    let mut best = f64::INFINITY;
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let target = i_sqrt3() * omega().powu(k) * w * s;
            best = best.min((zg - target).norm() / target.norm());
        }
    }
    (best <= rel).then_some(best)
}

/// Key shared by the six classes `±σⁱγ`.
fn orbit_key(g: LatticeClass) -> LatticeClass {
    g.orbit().into_iter().flat_map(|c| [c, c.neg()]).min().unwrap()
}

fn lattice_box() -> Vec<LatticeClass> {
    let r = -3..=3;
    let mut out = vec![];
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if (a, b, c, d) != (0, 0, 0, 0) {
                        out.push(LatticeClass([a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

/// The class whose central charge is the lift of the degeneration with
/// period `w`. Candidates come from the known class lists, then from the box
/// `[−3,3]⁴`; the matches must form a single `±` orbit. The returned member
/// has `Z = −i√3·w`, so a saddle measured with the reference period of
/// `[1, ∞]` returns `γ₁`.
pub fn identify_class(w: C64, z: &[C64; 4], rel: f64) -> Result<LatticeClass> {
    for pool in [candidate_classes(), lattice_box()] {
        let found: Vec<(LatticeClass, f64)> = pool.iter().filter_map(|&g| matches(z, g, w, rel).map(|e| (g, e))).collect();
        if found.is_empty() {
            continue;
        }
        let mut keys: Vec<LatticeClass> = found.iter().map(|(g, _)| orbit_key(*g)).collect();
        keys.sort();
        keys.dedup();
        if keys.len() > 1 {
            let list: Vec<String> = found.iter().map(|(g, e)| format!("{g} ({e:.1e})")).collect();
            return Err(Error::AmbiguousClass(list.join(", ")));
        }
        let target = -i_sqrt3() * w;
        return Ok(found
            .iter()
            .map(|(g, _)| *g)
            .min_by(|a, b| {
                let da = (central_charge(z, *a) - target).norm();
                let db = (central_charge(z, *b) - target).norm();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap());
    }
    Err(Error::AmbiguousClass(format!("no class matches period {w}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Saddle { endpoints: (usize, usize) },
    Tripod { zeros: [usize; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveClass {
    pub class: LatticeClass,
    pub omega: i32,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BPSStructure {
    pub t: C64,
    pub alpha: C64,
    pub z: [C64; 4],
    pub active: Vec<ActiveClass>,
    pub chamber: ChamberLabel,
    /// Relative mismatch `| |Z(γ)| − √3·length | / (√3·length)` per degeneration.
    pub length_residuals: Vec<f64>,
}

impl BPSStructure {
    pub fn central_charge(&self, g: LatticeClass) -> C64 {
        central_charge(&self.z, g)
    }

    pub fn classes(&self) -> Vec<LatticeClass> {
        let mut v: Vec<LatticeClass> = self.active.iter().map(|a| a.class).collect();
        v.sort();
        v
    }

    pub fn omega_of(&self, g: LatticeClass) -> i32 {
        self.active.iter().find(|a| a.class == g).map_or(0, |a| a.omega)
    }
}

/// Active classes from the saddles and tripods of `φ_t`, each lifted to
/// its `±` orbit under the cover automorphism, all with `Ω = 1`.
pub fn bps_structure(t: C64, alpha: C64, tol: &Tolerances) -> Result<BPSStructure> {
    let phi = CubicDifferential::normalized(alpha, t)?;
    let z = central_charges(t, alpha, tol)?;
    let chamber = classify_chamber(t, tol)?.chamber;
    let limits = Limits::for_differential(&phi, tol);
    let saddles = find_saddles(&phi, &limits, tol)?;
    let tripods = find_tripods(&phi, &saddles, &limits, tol)?;
    let mut seeds = vec![];
    for s in &saddles {
        seeds.push((saddle_value(s), Provenance::Saddle { endpoints: s.endpoints }));
    }
    for tr in &tripods {
        seeds.push((tripod_value(tr)?, Provenance::Tripod { zeros: tr.zeros }));
    }
    let mut active: Vec<ActiveClass> = vec![];
    let mut length_residuals = vec![];
    for (w, provenance) in seeds {
        let g = identify_class(w, &z, tol.class_match_rel)?;
        let len = 3f64.sqrt() * w.norm();
        length_residuals.push((central_charge(&z, g).norm() - len).abs() / len);
        for c in g.orbit() {
            for class in [c, c.neg()] {
                if !active.iter().any(|a| a.class == class) {
                    active.push(ActiveClass { class, omega: 1, provenance });
                }
            }
        }
    }
    active.sort_by_key(|a| a.class);
    Ok(BPSStructure { t, alpha, z, active, chamber, length_residuals })
}

/// Counterclockwise sector `[lo, lo + width]` of the central-charge plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub lo: f64,
    pub hi: f64,
}

impl Sector {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn offset(&self, z: C64) -> f64 {
        (z.arg() - self.lo).rem_euclid(2.0 * PI)
    }
}

const RAY_EQ: f64 = 1e-9;

/// Rays of the active classes inside the sector, counterclockwise, each
/// with its classes.
pub fn sector_rays(bps: &BPSStructure, sector: Sector) -> Result<Vec<Vec<(LatticeClass, i32)>>> {
    if !(sector.width() > 0.0 && sector.width() < PI) {
        return Err(Error::InvalidDifferential(format!("sector [{}, {}] is not acute", sector.lo, sector.hi)));
    }
    let mut inside: Vec<(f64, LatticeClass, i32)> = vec![];
    for a in &bps.active {
        let off = sector.offset(bps.central_charge(a.class));
        if off < RAY_EQ || (off - sector.width()).abs() < RAY_EQ || off > 2.0 * PI - RAY_EQ {
            return Err(Error::BoundaryRayActive(format!("{}", a.class)));
        }
        if off < sector.width() {
            inside.push((off, a.class, a.omega));
        }
    }
    inside.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut rays: Vec<(f64, Vec<(LatticeClass, i32)>)> = vec![];
    for (off, g, om) in inside {
        match rays.last_mut() {
            Some((o, v)) if (off - *o).abs() < RAY_EQ => v.push((g, om)),
            _ => rays.push((off, vec![(g, om)])),
        }
    }
    Ok(rays.into_iter().map(|(_, v)| v).collect())
}

/// Action of the counterclockwise product `S_{ℓ₁}⋯S_{ℓₙ}` on the four
/// generators: `(S_{ℓ₁}⋯S_{ℓₙ})* = S_{ℓₙ}*∘⋯∘S_{ℓ₁}*`.
pub fn sector_product(bps: &BPSStructure, sector: Sector) -> Result<[TwistedRational; 4]> {
    let rays = sector_rays(bps, sector)?;
    let autos: Vec<Automorphism> = rays.into_iter().map(|classes| Automorphism { classes }).collect();
    let gens: Vec<usize> = (0..4).collect();
    let out = par::map(&gens, |&i| {
        let mut f = TwistedRational::x(LatticeClass::basis(i));
        for a in &autos {
            f = a.apply(&f);
        }
        f
    });
    Ok(out.try_into().unwrap())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub generator: usize,
    pub left: String,
    pub right: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WcfReport {
    pub equal: bool,
    pub sector: Sector,
    pub left_rays: Vec<Vec<LatticeClass>>,
    pub right_rays: Vec<Vec<LatticeClass>>,
    pub generators: Vec<GeneratorReport>,
    /// Left and right actions in exact form.
    #[serde(skip)]
    pub actions: Option<([TwistedRational; 4], [TwistedRational; 4])>,
}

fn ray_classes(bps: &BPSStructure, sector: Sector) -> Result<Vec<Vec<LatticeClass>>> {
    Ok(sector_rays(bps, sector)?.into_iter().map(|r| r.into_iter().map(|(g, _)| g).collect()).collect())
}

/// Compares the sector products of two structures exactly.
pub fn verify_wcf_structures(left: &BPSStructure, right: &BPSStructure, sector: Sector) -> Result<WcfReport> {
    let a = sector_product(left, sector)?;
    let b = sector_product(right, sector)?;
    let generators: Vec<GeneratorReport> = (0..4)
        .map(|i| GeneratorReport { generator: i + 1, left: a[i].display(), right: b[i].display(), equal: a[i] == b[i] })
        .collect();
    Ok(WcfReport {
        equal: generators.iter().all(|g| g.equal),
        sector,
        left_rays: ray_classes(left, sector)?,
        right_rays: ray_classes(right, sector)?,
        generators,
        actions: Some((a, b)),
    })
}

pub fn verify_wcf(t_left: C64, t_right: C64, alpha: C64, sector: Sector, tol: &Tolerances) -> Result<WcfReport> {
    let (l, r) = par::join(|| bps_structure(t_left, alpha, tol), || bps_structure(t_right, alpha, tol));
    verify_wcf_structures(&l?, &r?, sector)
}

/// Smallest sector holding the given classes on both sides, padded by half
/// the gap to the nearest other active ray (at most 0.1).
pub fn sector_around(classes: &[LatticeClass], sides: &[&BPSStructure]) -> Result<Sector> {
    let base = sides[0].central_charge(classes[0]).arg();
    let rel = |z: C64| (z.arg() - base + PI).rem_euclid(2.0 * PI) - PI;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in sides {
        for &g in classes {
            let r = rel(s.central_charge(g));
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    let mut gap: f64 = 0.2;
    for s in sides {
        for a in &s.active {
            if classes.contains(&a.class) {
                continue;
            }
            let r = rel(s.central_charge(a.class));
            if r >= lo - RAY_EQ && r <= hi + RAY_EQ {
                return Err(Error::BoundaryRayActive(format!("{} lies between the chosen rays", a.class)));
            }
            gap = gap.min(if r < lo { lo - r } else { r - hi });
        }
    }
    let pad = 0.5 * gap;
    Ok(Sector { lo: base + lo - pad, hi: base + hi + pad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::parse_display;

    #[test]
    fn candidate_tables_are_closed() {
        let c = candidate_classes();
        assert_eq!(c.len(), 24);
        for g in &c {
            assert!(c.contains(&g.neg()));
            assert!(c.contains(&g.sigma()));
        }
    }

    #[test]
    fn empty_sector_is_identity() {
        let bps = BPSStructure {
            t: C64::new(0.5, 0.5),
            alpha: C64::new(1.0, 0.0),
            z: [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0), C64::new(-1.0, 1.0)],
            active: vec![ActiveClass { class: LatticeClass::basis(0), omega: 1, provenance: Provenance::Saddle { endpoints: (1, 2) } }],
            chamber: ChamberLabel::CB,
            length_residuals: vec![],
        };
        let id = sector_product(&bps, Sector { lo: 1.0, hi: 2.0 }).unwrap();
        for (i, f) in id.iter().enumerate() {
            assert_eq!(*f, TwistedRational::x(LatticeClass::basis(i)));
        }
        let one = sector_product(&bps, Sector { lo: -0.5, hi: 0.5 }).unwrap();
        assert_eq!(one[1], parse_display("x2(1 - x1)").unwrap());
        assert!(matches!(sector_product(&bps, Sector { lo: 0.0, hi: 0.5 }), Err(Error::BoundaryRayActive(_))));
    }
}
