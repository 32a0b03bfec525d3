//! Central tolerance record. Lengths marked `_rel` are multiplied by the
//! characteristic scale of the differential (max pairwise zero distance).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Largest admissible drift of the cube root between steps, as a fraction
    /// of the π/3 half-gap between candidates.
    pub branch_margin: f64,
    pub polygon_audit: f64,
    pub root_tol: f64,
    pub eps_sing_rel: f64,
    pub hit_tol_rel: f64,
    pub escape_radius_rel: f64,
    /// Maximal flat length, as a multiple of the larger of the longest period
    /// estimate and the flat distance to the escape circle.
    pub max_flat_length_rel: f64,
    pub eps_joint_rel: f64,
    pub ode_tol: f64,
    pub max_steps: usize,
    pub quad_tol: f64,
    pub quad_max_depth: usize,
    pub angle_eq: f64,
    pub core_angle_tol: f64,
    pub saddle_window: f64,
    pub saddle_accept_rel: f64,
    pub bisection_tol: f64,
    pub sweep_resolution: usize,
    pub tripod_window: f64,
    pub tripod_coincidence_rel: f64,
    pub double_tol_rel: f64,
    pub event_merge: f64,
    /// Relative mismatch allowed when matching a central charge to a period.
    pub class_match_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            branch_margin: 0.5,
            polygon_audit: 1e-6,
            root_tol: 1e-12,
            eps_sing_rel: 1e-6,
            hit_tol_rel: 1e-7,
            escape_radius_rel: 20.0,
            max_flat_length_rel: 50.0,
            eps_joint_rel: 1e-6,
            ode_tol: 1e-10,
            max_steps: 400_000,
            quad_tol: 1e-13,
            quad_max_depth: 30,
            angle_eq: 1e-7,
            core_angle_tol: 1e-3,
            saddle_window: 0.05,
            saddle_accept_rel: 1e-5,
            bisection_tol: 1e-10,
            sweep_resolution: 720,
            tripod_window: 0.02,
            tripod_coincidence_rel: 1e-8,
            double_tol_rel: 1e-6,
            event_merge: 1e-6,
            class_match_rel: 1e-6,
        }
    }
}

impl Tolerances {
    /// Rejects non-positive overrides.
    pub fn validate(&self) -> Result<(), String> {
        let vals = [
            ("branch_margin", self.branch_margin),
            ("polygon_audit", self.polygon_audit),
            ("root_tol", self.root_tol),
            ("eps_sing_rel", self.eps_sing_rel),
            ("hit_tol_rel", self.hit_tol_rel),
            ("escape_radius_rel", self.escape_radius_rel),
            ("max_flat_length_rel", self.max_flat_length_rel),
            ("eps_joint_rel", self.eps_joint_rel),
            ("ode_tol", self.ode_tol),
            ("quad_tol", self.quad_tol),
            ("angle_eq", self.angle_eq),
            ("core_angle_tol", self.core_angle_tol),
            ("saddle_window", self.saddle_window),
            ("saddle_accept_rel", self.saddle_accept_rel),
            ("bisection_tol", self.bisection_tol),
            ("tripod_window", self.tripod_window),
            ("tripod_coincidence_rel", self.tripod_coincidence_rel),
            ("double_tol_rel", self.double_tol_rel),
            ("event_merge", self.event_merge),
            ("class_match_rel", self.class_match_rel),
        ];
        for (name, v) in vals {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if self.branch_margin >= 1.0 {
            return Err("branch_margin must be below 1".into());
        }
        if self.max_steps == 0 || self.sweep_resolution == 0 || self.quad_max_depth == 0 {
            return Err("step, sweep and depth limits must be at least 1".into());
        }
        Ok(())
    }
}
