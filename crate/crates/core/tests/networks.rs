mod common;

use cubicnet::geometry::{closest_on_polyline, point_segment, Chunks};
use cubicnet::network::{build, find_double_trajectories, Caps, DoubleTrajectory, SpectralNetwork};
use cubicnet::render::{render_svg, Frame};
use cubicnet::trajectory::{Limits, Verdict};
use cubicnet::{CubicDifferential, Tolerances, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn generic(coeffs: &[C64], theta: f64) -> SpectralNetwork {
    let tol = Tolerances::default();
    let phi = CubicDifferential::generic(coeffs).unwrap();
    let limits = Limits::for_differential(&phi, &tol);
    build(&phi, theta, &Caps::default(), &limits, &tol)
}

fn real(coeffs: &[f64]) -> Vec<C64> {
    coeffs.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn normalized(t: C64, theta: f64) -> SpectralNetwork {
    let tol = Tolerances::default();
    let phi = CubicDifferential::normalized(C64::new(1.0, 0.0), t).unwrap();
    let limits = Limits::for_differential(&phi, &tol);
    build(&phi, theta, &Caps::default(), &limits, &tol)
}

/// Two-sided distance between a polyline and the segment [a, b].
fn segment_hausdorff(pts: &[C64], a: C64, b: C64) -> f64 {
    let out = pts.iter().map(|&p| point_segment(p, a, b).0).fold(0.0, f64::max);
    let ch = Chunks::new(pts);
    let back = (0..=400).map(|k| closest_on_polyline(a + (b - a) * (k as f64 / 400.0), pts, &ch).0).fold(0.0, f64::max);
    out.max(back)
}

#[test]
fn degree_zero_is_empty() {
    let n = generic(&real(&[1.0]), 0.3);
    assert!(n.trajectories.is_empty() && n.joints.is_empty());
    let svg = render_svg(&n, None, &[], Frame::Chart);
    assert!(svg.contains("pole at ∞") && !svg.contains("<path id=\"t"));
}

#[test]
fn degree_one_has_eight_escaping_rays() {
    for theta in [0.0, 0.53, 1.0] {
        let n = generic(&real(&[0.0, 1.0]), theta);
        assert_eq!(n.trajectories.len(), 8);
        assert!(n.joints.is_empty());
        assert!(n.trajectories.iter().all(|t| t.verdict == Verdict::EscapedToPole));
        common::audit_network(&n).unwrap();
        let svg = render_svg(&n, None, &[], Frame::Chart);
        assert_eq!(svg.matches("<path id=\"t").count(), 8);
    }
}

#[test]
fn degree_two_degenerates_on_the_segment() {
    for theta in [0.0, PI / 3.0] {
        let n = generic(&real(&[-1.0, 0.0, 1.0]), theta);
        assert_eq!(n.trajectories.len(), 16);
        let saddles: Vec<(usize, usize)> = find_double_trajectories(&n, 1e-6)
            .into_iter()
            .filter_map(|d| match d {
                DoubleTrajectory::SaddleCandidate { trajectories, .. } => Some(trajectories),
                _ => None,
            })
            .collect();
        assert_eq!(saddles.len(), 1);
        let (i, j) = saddles[0];
        for k in [i, j] {
            let h = segment_hausdorff(&n.trajectories[k].points, C64::new(-1.0, 0.0), C64::new(1.0, 0.0));
            assert!(h < 1e-6, "Hausdorff {h}");
        }
        common::audit_network(&n).unwrap();
    }
}

#[test]
fn render_is_deterministic() {
    let a = normalized(C64::new(0.5, 0.5), 0.2);
    let b = normalized(C64::new(0.5, 0.5), 0.2);
    assert_eq!(render_svg(&a, None, &[], Frame::Original), render_svg(&b, None, &[], Frame::Original));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_two_generic_phases_have_eighteen(theta in 0.01f64..(PI / 3.0 - 0.01)) {
        let n = generic(&real(&[-1.0, 0.0, 1.0]), theta);
        prop_assert_eq!(n.trajectories.len(), 18);
        prop_assert_eq!(n.joints.len(), 2);
    }

    #[test]
    fn normalized_networks_pass_audit(re in 0.05f64..0.95, im in 0.05f64..1.2, theta in 0.0f64..(PI / 3.0)) {
        let n = normalized(C64::new(re, im), theta);
        prop_assert!(common::audit_network(&n).is_ok(), "{:?}", common::audit_network(&n));
    }

    #[test]
    fn third_turn_rotation_preserves_counts(theta in 0.01f64..(PI / 3.0 - 0.01)) {
        let t = C64::new(0.4, 0.7);
        let a = normalized(t, theta);
        let b = normalized(t, theta + PI / 3.0);
        prop_assert_eq!(a.trajectories.len(), b.trajectories.len());
        prop_assert_eq!(a.joints.len(), b.joints.len());
    }
}

#[test]
fn roots_of_unity_pass_audit() {
    for d in 3..=6 {
        let mut c = vec![C64::new(0.0, 0.0); d + 1];
        c[0] = C64::new(-1.0, 0.0);
        c[d] = C64::new(1.0, 0.0);
        for theta in [0.1, 0.37] {
            let n = generic(&c, theta);
            let r = common::audit_network(&n);
            assert!(r.is_ok(), "d = {d}: {r:?}");
        }
    }
}
