mod common;

use common::{rel, series_points, w0_closed, w1_closed};
use cubicnet::bps::{central_charges, z3_closed_form, z3_loop};
use cubicnet::degeneration::{tag_period, PathTag};
use cubicnet::walls::period_modulus_gap;
use cubicnet::{CubicDifferential, Tolerances, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn periods(t: C64, alpha: C64) -> (C64, C64) {
    let tol = Tolerances::default();
    let phi = CubicDifferential::normalized(alpha, t).unwrap();
    (tag_period(&phi, PathTag::SegNeg, &tol).unwrap().value, tag_period(&phi, PathTag::SegPos, &tol).unwrap().value)
}

#[test]
fn series_oracle_sanity() {
    // ₂F₁(a, b; b; z) = (1 − z)^{−a}.
    let z = C64::new(0.3, -0.4);
    let lhs = common::hyp2f1(4.0 / 3.0, 3.0, 3.0, z);
    assert!(rel(lhs, (1.0 - z).powf(-4.0 / 3.0)) < 1e-14);
}

#[test]
fn quadrature_matches_closed_forms() {
    for t in series_points(20, 7) {
        let (w0, w1) = periods(t, C64::new(1.0, 0.0));
        assert!(rel(w0, w0_closed(t, C64::new(1.0, 0.0))) < 1e-8, "w0 at {t}");
        assert!(rel(w1, w1_closed(t, C64::new(1.0, 0.0))) < 1e-8, "w1 at {t}");
    }
}

#[test]
fn closed_forms_with_complex_alpha() {
    let alpha = common::alpha_tilted();
    for t in series_points(5, 11) {
        let (w0, w1) = periods(t, alpha);
        assert!(rel(w0, w0_closed(t, alpha)) < 1e-8);
        assert!(rel(w1, w1_closed(t, alpha)) < 1e-8);
    }
}

#[test]
fn frozen_periods() {
    // Direct 30-digit quadrature of the real-root integrand, α = 1.
    let cases = [
        (C64::new(0.5, 2.0), C64::new(0.058737466921796227, 0.16173049142746292), C64::new(-0.058737466921796227, 0.16173049142746292)),
        (C64::new(2.0, 1.0), C64::new(-0.12606365766668563, 0.09999673438327842), C64::new(-0.24213281531720482, -0.07897230008284241)),
    ];
    for (t, w0_ref, w1_ref) in cases {
        let (w0, w1) = periods(t, C64::new(1.0, 0.0));
        assert!(rel(w0, w0_ref) < 1e-10 && rel(w1, w1_ref) < 1e-10, "{t}");
    }
}

#[test]
fn equal_moduli_exactly_on_symmetric_line() {
    let tol = Tolerances::default();
    for im in [0.1, 0.3, 0.5, 0.9, 1.7] {
        let g = period_modulus_gap(C64::new(0.5, im), &tol).unwrap().abs();
        assert!(g < 1e-9, "gap {g} at Im t = {im}");
    }
    for t in [C64::new(0.45, 0.5), C64::new(0.6, 0.3), C64::new(0.2, 1.0), C64::new(0.51, 0.8)] {
        let g = period_modulus_gap(t, &tol).unwrap().abs();
        assert!(g > 1e-6, "gap {g} at {t}");
    }
}

#[test]
fn z3_loop_matches_closed_form() {
    let tol = Tolerances::default();
    for t in [C64::new(0.5, 0.1), C64::new(0.5, 0.5), C64::new(0.3, 0.6), C64::new(0.7, 0.9), C64::new(0.2, 0.3)] {
        for alpha in [C64::new(1.0, 0.0), common::alpha_tilted()] {
            let phi = CubicDifferential::normalized(alpha, t).unwrap();
            let z = z3_loop(&phi, &tol).unwrap();
            assert!(rel(z, z3_closed_form(t, alpha)) < 1e-8, "{t} {alpha}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn fourth_charge_is_third_rotated(re in 0.05f64..0.95, im in 0.05f64..1.5) {
        let z = central_charges(C64::new(re, im), C64::new(1.0, 0.0), &Tolerances::default()).unwrap();
        prop_assert!(rel(z[3], C64::from_polar(1.0, 2.0 * PI / 3.0) * z[2]) < 1e-12);
    }

    #[test]
    fn alpha_phase_rotates_charges(re in 0.1f64..0.9, im in 0.1f64..1.2, psi in -0.5f64..0.5) {
        let tol = Tolerances::default();
        let t = C64::new(re, im);
        let z = central_charges(t, C64::new(1.0, 0.0), &tol).unwrap();
        let zr = central_charges(t, C64::from_polar(1.0, 3.0 * psi), &tol).unwrap();
        for i in 0..4 {
            prop_assert!(rel(zr[i], C64::from_polar(1.0, psi) * z[i]) < 1e-9);
        }
    }
}

#[test]
fn charges_match_series_where_convergent() {
    // Z₁ = −i√3·w₁; the [1, ∞] series converges for |1 − t| > 1.
    let t = C64::new(0.5, 1.2);
    let z = central_charges(t, C64::new(1.0, 0.0), &Tolerances::default()).unwrap();
    let expected = C64::new(0.0, -3f64.sqrt()) * w1_closed(t, C64::new(1.0, 0.0));
    assert!(rel(z[0], expected) < 1e-8);
}
