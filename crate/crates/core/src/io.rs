//! JSON input specs and result dumps. Complex numbers serialize as
//! `[re, im]`; angles are radians.

use crate::degeneration::{CriticalTripod, PhaseScan, SaddleConnection, ScanItem};
use crate::differential::{CubicDifferential, ZeroPoint};
use crate::error::Result;
use crate::network::{Joint, SpectralNetwork, Status};
use crate::spectralcore::{classify_core, CorePolygon, CornerKind};
use crate::trajectory::{Origin, Verdict};
use crate::{Sign, Tolerances, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum DifferentialSpec {
    /// `P(x) dx³`, ascending coefficients.
    Generic { coefficients: Vec<C64> },
    /// `α x(x−1)/(x−t)⁹ dx³`.
    Normalized { alpha: C64, t: C64 },
}

impl DifferentialSpec {
    pub fn build(&self) -> Result<CubicDifferential> {
        match self {
            DifferentialSpec::Generic { coefficients } => CubicDifferential::generic(coefficients),
            DifferentialSpec::Normalized { alpha, t } => CubicDifferential::normalized(*alpha, *t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDump {
    pub id: usize,
    pub label: String,
    pub chart: C64,
    pub point: ZeroPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDump {
    pub id: usize,
    pub sign: Sign,
    pub generation: usize,
    pub origin: Origin,
    pub verdict: Verdict,
    pub flat_length: f64,
    pub points: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerDump {
    pub location: C64,
    /// Zero id, or `None` for a regular corner.
    pub zero: Option<usize>,
    pub interior_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDump {
    pub corners: Vec<CornerDump>,
    pub boundary: Vec<C64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreDump {
    pub core_type: Option<String>,
    pub triangle_count: i64,
    pub saddle_count: usize,
    pub saddle_sides: usize,
    pub components: Vec<ComponentDump>,
}

impl CoreDump {
    pub fn new(core: &CorePolygon, tol: &Tolerances) -> CoreDump {
        CoreDump {
            core_type: classify_core(core, tol).ok().map(|c| c.name().to_string()),
            triangle_count: core.triangle_count(),
            saddle_count: core.saddle_count,
            saddle_sides: core.saddle_sides,
            components: core
                .components
                .iter()
                .map(|c| ComponentDump {
                    corners: c
                        .corners
                        .iter()
                        .map(|k| CornerDump {
                            location: k.location,
                            zero: match k.kind {
                                CornerKind::ZeroCorner(z) => Some(z),
                                CornerKind::RegularCorner => None,
                            },
                            interior_angle: k.interior_angle,
                        })
                        .collect(),
                    boundary: c.boundary(),
                    degenerate: c.is_degenerate(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDump {
    pub theta: f64,
    pub zeros: Vec<ZeroDump>,
    pub status: Status,
    pub trajectories: Vec<TrajectoryDump>,
    pub joints: Vec<Joint>,
    pub double_pairs: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
    pub core: Option<CoreDump>,
}

impl NetworkDump {
    pub fn new(net: &SpectralNetwork, core: Option<&CorePolygon>) -> NetworkDump {
        NetworkDump {
            theta: net.theta,
            zeros: net
                .phi
                .zero_list()
                .iter()
                .map(|z| ZeroDump { id: z.id, label: z.label.clone(), chart: z.chart, point: z.point })
                .collect(),
            status: net.status,
            trajectories: net
                .trajectories
                .iter()
                .enumerate()
                .map(|(id, t)| TrajectoryDump {
                    id,
                    sign: t.sign,
                    generation: t.generation,
                    origin: t.origin,
                    verdict: t.verdict,
                    flat_length: t.flat_length(),
                    points: t.points.clone(),
                })
                .collect(),
            joints: net.joints.clone(),
            double_pairs: net.double_pairs.clone(),
            warnings: net.warnings.clone(),
            core: core.map(|c| CoreDump::new(c, &net.tolerances)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleDump {
    pub endpoints: (usize, usize),
    pub phase: f64,
    pub period: C64,
    pub flat_length: f64,
    pub lattice_class: Option<[i32; 4]>,
}

impl From<&SaddleConnection> for SaddleDump {
    fn from(s: &SaddleConnection) -> SaddleDump {
        SaddleDump {
            endpoints: s.endpoints,
            phase: s.phase,
            period: s.period.value,
            flat_length: s.flat_length(),
            lattice_class: s.lattice_class,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripodDump {
    pub zeros: [usize; 3],
    pub phase: f64,
    pub fermat_point: C64,
    pub leg_angles: [f64; 3],
    pub coincidence: f64,
}

impl From<&CriticalTripod> for TripodDump {
    fn from(t: &CriticalTripod) -> TripodDump {
        TripodDump { zeros: t.zeros, phase: t.phase, fermat_point: t.fermat_point, leg_angles: t.leg_angles, coincidence: t.coincidence }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanItemDump {
    Special { phase: f64, event: String, saddles: Vec<SaddleDump>, tripod: Option<TripodDump> },
    Interval { lo: f64, hi: f64, core_type: Option<String>, error: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDump {
    /// Cyclic sequence of special phases and core types.
    pub row: Vec<String>,
    pub items: Vec<ScanItemDump>,
}

impl From<&PhaseScan> for ScanDump {
    fn from(s: &PhaseScan) -> ScanDump {
        let items = s
            .items
            .iter()
            .map(|it| match it {
                ScanItem::Special(p) => ScanItemDump::Special {
                    phase: p.phase,
                    event: p.kind.name(),
                    saddles: p.saddles.iter().map(SaddleDump::from).collect(),
                    tripod: p.tripod.as_ref().map(TripodDump::from),
                },
                ScanItem::Interval { lo, hi, core_type } => ScanItemDump::Interval {
                    lo: *lo,
                    hi: *hi,
                    core_type: core_type.as_ref().ok().map(|c| c.name().to_string()),
                    error: core_type.as_ref().err().cloned(),
                },
            })
            .collect();
        ScanDump { row: s.row(), items }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("dump types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let s = DifferentialSpec::Normalized { alpha: C64::new(-13.89, 8.23), t: C64::new(0.5, 0.5) };
        let j = to_json(&s);
        assert!(j.contains("\"form\": \"normalized\""));
        assert_eq!(serde_json::from_str::<DifferentialSpec>(&j).unwrap(), s);
        let g: DifferentialSpec = serde_json::from_str(r#"{"form":"generic","coefficients":[[-1,0],[0,0],[1,0]]}"#).unwrap();
        assert_eq!(g.build().unwrap().degree, 2);
    }
}
