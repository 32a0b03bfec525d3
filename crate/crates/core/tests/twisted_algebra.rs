use cubicnet::bps::{central_charges, identify_class, sector_product, ActiveClass, BPSStructure, Provenance, Sector};
use cubicnet::twisted::{pairing, parse_display, Automorphism, Laurent, LatticeClass, TwistedRational};
use cubicnet::walls::ChamberLabel;
use cubicnet::{Error, Tolerances, C64};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = LatticeClass> {
    prop::array::uniform4(-2i32..=2).prop_map(LatticeClass)
}

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((class(), -3i128..=3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(Laurent::zero(), |acc, (g, c)| acc.add(&Laurent::monomial(g, c)))
    })
}

fn nonzero_laurent() -> impl Strategy<Value = Laurent> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn product_is_commutative(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn product_distributes(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn division_inverts_product(a in laurent(), d in nonzero_laurent()) {
        prop_assert_eq!(a.mul(&d).exact_div(&d), Some(a));
    }

    #[test]
    fn display_round_trips(n in laurent(), d in nonzero_laurent()) {
        let r = TwistedRational::new(n, d);
        prop_assert_eq!(parse_display(&r.display()).unwrap(), r);
    }

    #[test]
    fn pairing_is_antisymmetric(a in class(), b in class()) {
        prop_assert_eq!(pairing(a, b), -pairing(b, a));
    }

    #[test]
    fn opposite_invariants_cancel(g in class(), target in class()) {
        let up = Automorphism { classes: vec![(g, 1)] };
        let down = Automorphism { classes: vec![(g, -1)] };
        let x = TwistedRational::x(target);
        prop_assert_eq!(down.apply(&up.apply(&x)), x.clone());
        prop_assert_eq!(up.apply(&down.apply(&x)), x);
    }

    #[test]
    fn automorphisms_are_multiplicative(g in class(), a in class(), b in class()) {
        let s = Automorphism { classes: vec![(g, 1)] };
        let (xa, xb) = (TwistedRational::x(a), TwistedRational::x(b));
        prop_assert_eq!(s.apply(&xa.mul(&xb)), s.apply(&xa).mul(&s.apply(&xb)));
    }
}

#[test]
fn single_class_full_turn_is_not_trivial() {
    // A ray and its opposite compose to x_β ↦ (−1)^{⟨γ,β⟩} x_β x_γ^{⟨γ,β⟩}.
    let g = LatticeClass([1, 0, 0, 0]);
    let turn = |f: &TwistedRational| {
        let a = Automorphism { classes: vec![(g, 1)] }.apply(f);
        Automorphism { classes: vec![(g.neg(), 1)] }.apply(&a)
    };
    let x2 = TwistedRational::x(LatticeClass::basis(1));
    assert_eq!(turn(&x2), parse_display("-x1*x2").unwrap());
}

fn charges() -> [C64; 4] {
    let z3 = C64::new(0.2, -0.9);
    [C64::new(1.3, 0.4), C64::new(-0.3, 0.8), z3, C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0) * z3]
}

#[test]
fn identify_recovers_orbit_representative() {
    let z = central_charges(C64::new(0.5, 0.5), C64::new(1.0, 0.0), &Tolerances::default()).unwrap();
    let i_sqrt3 = C64::new(0.0, 3f64.sqrt());
    for g in [[1, 0, 0, 0], [0, -1, -1, 0], [1, 1, 0, 0], [-2, 1, 2, 1]] {
        let g = LatticeClass(g);
        let zg: C64 = (0..4).map(|i| z[i] * g.0[i] as f64).sum();
        let w = -zg / i_sqrt3;
        assert_eq!(identify_class(w, &z, 1e-6).unwrap(), g);
        // The same saddle measured on another sheet.
        let rotated = w * C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let h = identify_class(rotated, &z, 1e-6).unwrap();
        assert!(g.orbit().contains(&h) || g.neg().orbit().contains(&h), "{h} for {g}");
    }
}

#[test]
fn identify_rejects_ambiguity() {
    let z = [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, -0.7)];
    let w = C64::new(1.0, 0.0) / C64::new(0.0, -(3f64.sqrt()));
    assert!(matches!(identify_class(w, &z, 1e-6), Err(Error::AmbiguousClass(_))));
    assert!(matches!(identify_class(C64::new(7.77, 3.1), &z, 1e-9), Err(Error::AmbiguousClass(_))));
}

#[test]
fn sector_rays_reject_boundary_class() {
    let bps = BPSStructure {
        t: C64::new(0.5, 0.5),
        alpha: C64::new(1.0, 0.0),
        z: charges(),
        active: vec![ActiveClass { class: LatticeClass::basis(0), omega: 1, provenance: Provenance::Saddle { endpoints: (1, 2) } }],
        chamber: ChamberLabel::CB,
        length_residuals: vec![],
    };
    let a = charges()[0].arg();
    assert!(matches!(sector_product(&bps, Sector { lo: a, hi: a + 0.5 }), Err(Error::BoundaryRayActive(_))));
    assert!(sector_product(&bps, Sector { lo: 0.0, hi: 3.5 }).is_err());
}
