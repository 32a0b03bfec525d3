//! Polynomial cubic differentials and the flat-geometry primitives built on
//! them: rotation, zeros, cube-root continuation, critical directions at zeros
//! and the Gauss-Bonnet audit for flat polygons.
//!
//! Every computation runs in one global chart in which `φ = P(y) dy³` with `P`
//! a polynomial. For a generic polynomial this is the identity chart. For the
//! normalized family `α x(x−1)/(x−t)⁹ dx³` it is `y = 1/(x−t)`, where
//! `φ = −α y (t y + 1)((t−1) y + 1) dy³`; the zeros `0, 1, ∞` sit at
//! `−1/t, 1/(1−t), 0` and the order-9 pole at `y = ∞`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::poly;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const THIRD_PI: f64 = PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    /// `+1` or `−1`: a trajectory moves with `Q(x)(dx/ds)³ = eps`.
    pub fn eps(self) -> f64 {
        match self {
            Sign::Pos => 1.0,
            Sign::Neg => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    /// Sign class of a developed slope (multiples of π/3).
    pub fn of_slope(slope: f64) -> Sign {
        let k = (slope / THIRD_PI).round() as i64;
        if k.rem_euclid(2) == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A phase reduced modulo π/3.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Phase(f64);

impl Phase {
    pub fn new(theta: f64) -> Phase {
        Phase(poly::modulo(theta, THIRD_PI))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Distance on the circle R/(π/3)Z.
    pub fn cyclic_distance(self, other: Phase) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(THIRD_PI - d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    GenericPolynomial,
    NormalizedDegree3,
}

/// A zero as seen by the caller: finite point of the x-plane or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZeroPoint {
    Finite(C64),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub id: usize,
    pub label: String,
    /// Position in the computation chart.
    pub chart: C64,
    pub point: ZeroPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicDifferential {
    pub form: Form,
    /// `P(x)` for the generic form; empty for the normalized family.
    pub coefficients: Vec<C64>,
    pub alpha: C64,
    pub t: C64,
    pub degree: usize,
    chart: Vec<C64>,
    zeros: Vec<Zero>,
    scale: f64,
    centroid: C64,
}

fn simple_roots(coeffs: &[C64], tol: f64) -> Result<Vec<C64>> {
    let rs = poly::roots(coeffs, tol);
    let deriv = poly::derivative(coeffs);
    let spread = rs.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for (i, a) in rs.iter().enumerate() {
        for b in &rs[i + 1..] {
            if (a - b).norm() < 1e-5 * spread {
                return Err(Error::MultipleZero(format!("{a}")));
            }
        }
        let lead = coeffs.last().unwrap().norm();
        if poly::eval(&deriv, *a).norm() < 1e-9 * lead * spread.powi(rs.len() as i32 - 1) {
            return Err(Error::MultipleZero(format!("{a}")));
        }
    }
    Ok(rs)
}

fn geometry_of(zeros: &[Zero]) -> (f64, C64) {
    let mut scale: f64 = 0.0;
    for (i, a) in zeros.iter().enumerate() {
        for b in &zeros[i + 1..] {
            scale = scale.max((a.chart - b.chart).norm());
        }
    }
    if scale == 0.0 {
        scale = zeros.first().map_or(1.0, |z| z.chart.norm().max(1.0));
    }
    let centroid = if zeros.is_empty() {
        C64::new(0.0, 0.0)
    } else {
        zeros.iter().map(|z| z.chart).sum::<C64>() / zeros.len() as f64
    };
    (scale, centroid)
}

impl CubicDifferential {
    /// `φ = P(x) dx³` with ascending coefficients.
    pub fn generic(coefficients: &[C64]) -> Result<Self> {
        let c = poly::trim(coefficients);
        if c.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::InvalidDifferential("zero polynomial".into()));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDifferential("non-finite coefficient".into()));
        }
        let rs = if c.len() > 1 { simple_roots(&c, 1e-12)? } else { vec![] };
        let zeros: Vec<Zero> = rs
            .iter()
            .enumerate()
            .map(|(id, &r)| Zero {
                id,
                label: format!("z{id}"),
                chart: r,
                point: ZeroPoint::Finite(r),
            })
            .collect();
        let (scale, centroid) = geometry_of(&zeros);
        Ok(CubicDifferential {
            form: Form::GenericPolynomial,
            degree: c.len() - 1,
            coefficients: c.clone(),
            alpha: *c.last().unwrap(),
            t: C64::new(0.0, 0.0),
            chart: c,
            zeros,
            scale,
            centroid,
        })
    }

    /// `φ = α x(x−1)/(x−t)⁹ dx³`.
    pub fn normalized(alpha: C64, t: C64) -> Result<Self> {
        if alpha.norm() == 0.0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidDifferential("alpha must be nonzero".into()));
        }
        if t.norm() < 1e-12 || (t - 1.0).norm() < 1e-12 || !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::InvalidDifferential("t must avoid 0 and 1".into()));
        }
        let one = C64::new(1.0, 0.0);
        let chart = vec![
            C64::new(0.0, 0.0),
            -alpha,
            -alpha * (2.0 * t - 1.0),
            -alpha * t * (t - 1.0),
        ];
        let zeros = vec![
            Zero { id: 0, label: "0".into(), chart: -one / t, point: ZeroPoint::Finite(C64::new(0.0, 0.0)) },
            Zero { id: 1, label: "1".into(), chart: one / (one - t), point: ZeroPoint::Finite(one) },
            Zero { id: 2, label: "∞".into(), chart: C64::new(0.0, 0.0), point: ZeroPoint::Infinity },
        ];
        let (scale, centroid) = geometry_of(&zeros);
        Ok(CubicDifferential {
            form: Form::NormalizedDegree3,
            coefficients: vec![],
            alpha,
            t,
            degree: 3,
            chart,
            zeros,
            scale,
            centroid,
        })
    }

    pub fn is_normalized(&self) -> bool {
        self.form == Form::NormalizedDegree3
    }

    /// Max pairwise chart distance between zeros.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn centroid(&self) -> C64 {
        self.centroid
    }

    pub fn zero_list(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn zero_chart(&self, id: usize) -> C64 {
        self.zeros[id].chart
    }

    /// Chart polynomial of `e^{−3iθ}φ`.
    pub fn chart_poly(&self, theta: f64) -> Vec<C64> {
        let r = C64::from_polar(1.0, -3.0 * theta);
        self.chart.iter().map(|c| c * r).collect()
    }

    /// Chart coordinate to the x-plane; `None` at the preimage of ∞.
    pub fn to_original(&self, y: C64) -> Option<C64> {
        match self.form {
            Form::GenericPolynomial => Some(y),
            Form::NormalizedDegree3 => {
                if y.norm() == 0.0 {
                    None
                } else {
                    Some(self.t + 1.0 / y)
                }
            }
        }
    }

    pub fn from_original(&self, x: C64) -> C64 {
        match self.form {
            Form::GenericPolynomial => x,
            Form::NormalizedDegree3 => 1.0 / (x - self.t),
        }
    }

    pub fn eps_sing(&self, tol: &Tolerances) -> f64 {
        tol.eps_sing_rel * self.scale
    }

    pub fn hit_tol(&self, tol: &Tolerances) -> f64 {
        tol.hit_tol_rel * self.scale
    }

    /// Zeros with multiplicity; every multiplicity is 1 by construction.
    pub fn zeros(&self) -> Result<Vec<(ZeroPoint, usize)>> {
        if self.zeros.is_empty() {
            return Err(Error::NoZeros);
        }
        Ok(self.zeros.iter().map(|z| (z.point, 1)).collect())
    }

    /// The rotated field `e^{−3iθ}φ` in chart form.
    pub fn field(&self, theta: f64) -> Field<'_> {
        let q = self.chart_poly(theta);
        let dq = poly::derivative(&q);
        Field { phi: self, theta, q, dq }
    }
}

/// `e^{−3iθ}φ`; the scale α (or every coefficient) picks up `e^{−3iθ}`.
pub fn rotate(phi: &CubicDifferential, theta: f64) -> CubicDifferential {
    let r = C64::from_polar(1.0, -3.0 * theta);
    let mut out = phi.clone();
    out.alpha *= r;
    for c in out.coefficients.iter_mut() {
        *c *= r;
    }
    for c in out.chart.iter_mut() {
        *c *= r;
    }
    out
}

/// A rotated differential ready for evaluation.
#[derive(Debug, Clone)]
pub struct Field<'a> {
    pub phi: &'a CubicDifferential,
    pub theta: f64,
    pub q: Vec<C64>,
    pub dq: Vec<C64>,
}

impl<'a> Field<'a> {
    pub fn eval(&self, x: C64) -> C64 {
        poly::eval(&self.q, x)
    }

    pub fn eval_d(&self, x: C64) -> (C64, C64) {
        poly::eval_d(&self.q, x)
    }

    /// Distance to the nearest zero, skipping `skip`.
    pub fn zero_distance(&self, x: C64, skip: Option<usize>) -> (f64, Option<usize>) {
        let mut best = (f64::INFINITY, None);
        for z in &self.phi.zeros {
            if Some(z.id) == skip {
                continue;
            }
            let d = (x - z.chart).norm();
            if d < best.0 {
                best = (d, Some(z.id));
            }
        }
        best
    }
}

/// A chosen value of `Q^{1/3}` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeRootBranch {
    pub base_point: C64,
    pub value: C64,
}

impl CubeRootBranch {
    /// The root at `x` nearest in angle to `reference`.
    pub fn at(field: &Field<'_>, x: C64, reference: C64) -> CubeRootBranch {
        let (v, _) = poly::nearest_cube_root(field.eval(x), reference);
        CubeRootBranch { base_point: x, value: v }
    }

    /// Moves the branch to `next` by nearest-candidate selection.
    pub fn continue_to(&self, field: &Field<'_>, next: C64, tol: &Tolerances) -> Result<CubeRootBranch> {
        continue_branch(self, field, next, tol)
    }
}

pub fn continue_branch(
    branch: &CubeRootBranch,
    field: &Field<'_>,
    next: C64,
    tol: &Tolerances,
) -> Result<CubeRootBranch> {
    let q = field.eval(next);
    if q.norm() == 0.0 {
        return Err(Error::BranchAmbiguity(format!("zero at {next}")));
    }
    let (v, dev) = poly::nearest_cube_root(q, branch.value);
    if dev > tol.branch_margin * THIRD_PI {
        return Err(Error::BranchAmbiguity(format!("{} -> {}", branch.base_point, next)));
    }
    Ok(CubeRootBranch { base_point: next, value: v })
}

/// Continues along a polyline, subdividing steps that are ambiguous.
pub fn continue_along(
    branch: &CubeRootBranch,
    field: &Field<'_>,
    path: &[C64],
    tol: &Tolerances,
) -> Result<CubeRootBranch> {
    let mut b = *branch;
    for &p in path {
        let start = b.base_point;
        let mut pieces = 1usize;
        'retry: loop {
            let mut trial = b;
            for k in 1..=pieces {
                let x = start + (p - start) * (k as f64 / pieces as f64);
                match continue_branch(&trial, field, x, tol) {
                    Ok(nb) => trial = nb,
                    Err(_) if pieces < 1 << 20 => {
                        pieces *= 4;
                        continue 'retry;
                    }
                    Err(e) => return Err(e),
                }
            }
            b = trial;
            break;
        }
    }
    Ok(b)
}

/// The eight critical directions at a simple zero, counterclockwise from the
/// smallest, alternating in sign with the first positive.
pub fn critical_directions(field: &Field<'_>, zero: usize) -> Vec<(C64, Sign)> {
    let z = field.phi.zeros[zero].chart;
    let (_, q1) = field.eval_d(z);
    let base = -q1.arg() / 4.0;
    (0..8)
        .map(|k| {
            let psi = base + k as f64 * PI / 4.0;
            (C64::from_polar(1.0, psi), if k % 2 == 0 { Sign::Pos } else { Sign::Neg })
        })
        .collect()
}

/// Angles of the critical directions, unwrapped to be continuous in θ.
pub fn critical_angle(field: &Field<'_>, zero: usize, k: usize) -> f64 {
    let z = field.phi.zeros[zero].chart;
    let q1 = poly::eval(&field.dq, z);
    (-q1.arg() + k as f64 * PI) / 4.0
}

/// `Σθ − ((k−2)π − (2π/3)Σa)` for a flat disk with `k` corners and interior
/// singularities of orders `a` (zeros +1, poles −b).
pub fn gauss_bonnet_residual(corner_angles: &[f64], interior_orders: &[i64]) -> f64 {
    let k = corner_angles.len() as f64;
    let sum: f64 = corner_angles.iter().sum();
    let a: i64 = interior_orders.iter().sum();
    sum - ((k - 2.0) * PI - 2.0 * PI / 3.0 * a as f64)
}
