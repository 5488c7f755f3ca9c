use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use hyplab::hyperbolicity::{
    best_epsilon, classify, classify_with, cor_main_bound, not_hyperbolic_witness, plans, scroll_refined_bound_p2p1,
    special_curve_class, special_curve_genus, survey, SpecialFamily, Status, WitnessKind,
};
use hyplab::oracles::{exhaustive_epsilon_check, surface_curve_genus, SurfaceKind, SurfaceModel};
use hyplab::{make_ambient, AmbientKind, AmbientThreefold, Error, Params};

fn amb(kind: AmbientKind, params: Params) -> AmbientThreefold {
    make_ambient(kind, params).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn status(a: &AmbientThreefold, c: &[i64]) -> Status {
    classify(a, &a.class(c).unwrap()).unwrap().status
}

#[test]
fn cor_main_examples() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    let (a, c) = ([4, 5, 6], [1, 2, 3]);
    let cert = cor_main_bound(&p, &p.class(&a).unwrap(), &p.class(&c).unwrap(), &[p.basis_class(0)]).unwrap();
    let want = (a[0] - 3) * (a[1] * c[2] + a[2] * c[1])
        + (a[1] - 2) * (a[0] * c[2] + a[2] * c[0])
        + (a[2] - 2) * (a[0] * c[1] + a[1] * c[0]);
    assert_eq!(cert.genus_bound, BigInt::from(want));

    for e in 1..=3 {
        let f = amb(AmbientKind::FexP1, Params::e(e));
        let (a1, a2, a3) = (3, 4 + 3 * e, 5);
        let (c1, c2, c3) = (2, 7, 1);
        let l = f.class(&[1, e, 0]).unwrap();
        let cert = cor_main_bound(&f, &f.class(&[a1, a2, a3]).unwrap(), &f.class(&[c1, c2, c3]).unwrap(), &[l]).unwrap();
        let want = (a2 - e * a1 + e - 2) * (a1 * c3 + a3 * c1)
            + (a1 - 3) * (a2 * c3 + a3 * c2)
            + (a3 - 2) * (a1 * c2 + a2 * c1 - e * a1 * c1);
        assert_eq!(cert.genus_bound, BigInt::from(want), "e={e}");
    }

    let cert = cor_main_bound(&p, &p.class(&a).unwrap(), &p.zero(), &[p.basis_class(0)]).unwrap();
    assert!(cert.genus_bound.is_zero() && cert.normal_degree_bound.is_zero());
    assert!(matches!(cor_main_bound(&p, &p.class(&a).unwrap(), &p.zero(), &[]), Err(Error::EmptyCollection)));
}

#[test]
fn scroll_refined_examples() {
    for c in 0..5 {
        for d in 0..5 {
            assert_eq!(scroll_refined_bound_p2p1(4, 3, c, d), BigInt::from(d + 4 * c));
        }
    }
    assert!(scroll_refined_bound_p2p1(4, 7, 0, 0).is_zero());
    assert_eq!(scroll_refined_bound_p2p1(5, 2, 1, 1), BigInt::from(8));
}

#[test]
fn special_curve_genera_match_surface_models() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    let p1p1 = SurfaceModel::new(SurfaceKind::P1xP1);
    for a2 in 2..=8 {
        for a3 in 2..=8 {
            for factor in 0..3 {
                let mut c = vec![a2, a3];
                c.insert(factor, 2);
                let g = special_curve_genus(&p, &p.class(&c).unwrap(), SpecialFamily::FactorRamification { factor }).unwrap();
                assert_eq!(g, surface_curve_genus(&p1p1, &[2 * a2, 2 * a3]).unwrap());
                assert_eq!(g, BigInt::from((2 * a2 - 1) * (2 * a3 - 1)));
            }
        }
    }

    let p2 = amb(AmbientKind::P2xP1, Params::none());
    let plane = SurfaceModel::new(SurfaceKind::P2);
    for a in 1..=9 {
        let g = special_curve_genus(&p2, &p2.class(&[a, 2]).unwrap(), SpecialFamily::PlaneRamification).unwrap();
        assert_eq!(g, surface_curve_genus(&plane, &[2 * a]).unwrap());
        assert_eq!(g, BigInt::from((2 * a - 1) * (2 * a - 2) / 2));
    }

    for e in 1..=4 {
        let f = amb(AmbientKind::FexP1, Params::e(e));
        let fe = SurfaceModel::new(SurfaceKind::Fe(e));
        for a1 in 1..=6 {
            for a2p in 0..=6 {
                let a2 = a2p + e * a1;
                let g = special_curve_genus(&f, &f.class(&[a1, a2, 2]).unwrap(), SpecialFamily::HirzebruchRamification).unwrap();
                assert_eq!(g, surface_curve_genus(&fe, &[2 * a1, 2 * a2]).unwrap(), "e={e} ({a1},{a2})");
            }
        }
        // a1 = 2: a curve of class (2(a2 - e), 2 a3) on E = P1 x P1
        for a2p in 0..=5 {
            for a3 in 1..=6 {
                let a2 = a2p + 2 * e;
                let d = f.class(&[2, a2, a3]).unwrap();
                let g = special_curve_genus(&f, &d, SpecialFamily::RulingRamification).unwrap();
                assert_eq!(g, BigInt::from((2 * (a2 - e) - 1) * (2 * a3 - 1)));
            }
        }
    }

    let bl = amb(AmbientKind::BlP3, Params::none());
    for b in 1..=7 {
        let d = bl.class(&[b + 2, -b]).unwrap();
        let branch = special_curve_genus(&bl, &d, SpecialFamily::BranchCurve).unwrap();
        let deg = 2 * (b + 1);
        assert_eq!(branch, BigInt::from((deg - 1) * (deg - 2) / 2));
        let plane_curve = special_curve_genus(&bl, &d, SpecialFamily::ExceptionalPlaneCurve).unwrap();
        assert_eq!(plane_curve, BigInt::from((b - 1) * (b - 2) / 2));
    }
    let r = special_curve_class(&bl, &bl.class(&[6, -4]).unwrap(), SpecialFamily::ResidualCurve).unwrap();
    assert_eq!(r.coeffs(), &[4, -5]);

    for n in 1..=6 {
        let w = amb(AmbientKind::P111n, Params::n(n));
        let g = special_curve_genus(&w, &w.class(&[2, 0]).unwrap(), SpecialFamily::WeightedRamification).unwrap();
        // branch curve of degree 2n in the plane
        assert_eq!(g, BigInt::from((2 * n - 1) * (2 * n - 2) / 2));
    }

    assert!(matches!(
        special_curve_genus(&p, &p.class(&[3, 3, 3]).unwrap(), SpecialFamily::FactorRamification { factor: 0 }),
        Err(Error::FamilyNotApplicable(_))
    ));
    assert!(matches!(
        special_curve_genus(&p, &p.class(&[2, 3, 3]).unwrap(), SpecialFamily::BranchCurve),
        Err(Error::FamilyNotApplicable(_))
    ));
}

#[test]
fn classify_examples() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    assert_eq!(status(&p, &[3, 3, 3]), Status::Hyperbolic);
    let v = classify(&p, &p.class(&[2, 3, 7]).unwrap()).unwrap();
    assert_eq!(v.status, Status::NotHyperbolic);
    assert_eq!(v.witness.unwrap().kind, WitnessKind::DegeneratingGenus2Family);

    let p2 = amb(AmbientKind::P2xP1, Params::none());
    let v = classify(&p2, &p2.class(&[4, 2]).unwrap()).unwrap();
    assert_eq!(v.status, Status::NotHyperbolic);
    let w = v.witness.unwrap();
    assert_eq!(w.kind, WitnessKind::BitangentPreimage);
    assert_eq!(w.genus_attained, 1);
    assert_eq!(status(&p2, &[5, 0]), Status::NotHyperbolic);
    assert_eq!(status(&p2, &[0, 3]), Status::Invalid);

    let bl = amb(AmbientKind::BlP3, Params::none());
    assert_eq!(status(&bl, &[6, -4]), Status::Hyperbolic);
    assert_eq!(status(&bl, &[3, -4]), Status::Invalid);

    let w3 = amb(AmbientKind::P111n, Params::n(2));
    assert_eq!(status(&w3, &[3, 0]), Status::Open);
    assert_eq!(status(&w3, &[3, 1]), Status::Invalid);

    let f = amb(AmbientKind::FexP1, Params::e(1));
    let v = classify(&f, &f.class(&[2, 4, 5]).unwrap()).unwrap();
    assert_eq!(v.status, Status::NotHyperbolic);
    assert_eq!(v.witness.unwrap().kind, WitnessKind::SingularQuarticFamily);
    // the same class shape is hyperbolic once e > 1
    let f2 = amb(AmbientKind::FexP1, Params::e(2));
    assert_eq!(status(&f2, &[2, 6, 5]), Status::Hyperbolic);

    let other = amb(AmbientKind::P2xP1, Params::none());
    assert!(matches!(classify(&p, &other.class(&[4, 4]).unwrap()), Err(Error::MismatchedAmbient { .. })));
}

#[test]
fn epsilon_examples() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    let d = p.class(&[3, 3, 3]).unwrap();
    let (eps, res) = best_epsilon(&p, &d, None).unwrap();
    assert!(eps >= q(1, 2));
    assert!(exhaustive_epsilon_check(&p, &d, &eps, 200).unwrap().passed);
    assert!(exhaustive_epsilon_check(&p, &d, &q(1, 2), 200).unwrap().passed);
    let too_big = exhaustive_epsilon_check(&p, &d, &q(10, 1), 200).unwrap();
    assert!(!too_big.passed && too_big.violation.is_some());
    assert!(!res.plan.is_empty());

    let bl = amb(AmbientKind::BlP3, Params::none());
    let d = bl.class(&[7, -4]).unwrap();
    let (eps, _) = best_epsilon(&bl, &d, None).unwrap();
    assert!(eps >= q(1, 7));
    assert!(exhaustive_epsilon_check(&bl, &d, &q(1, 7), 200).unwrap().passed);

    assert!(matches!(best_epsilon(&p, &p.class(&[2, 2, 5]).unwrap(), None), Err(Error::NotHyperbolicInput(_))));
    let w = amb(AmbientKind::P111n, Params::n(3));
    assert!(matches!(best_epsilon(&w, &w.class(&[3, 0]).unwrap(), None), Err(Error::NotHyperbolicInput(_))));
}

/// A bound that vanishes on a ray certifies nothing.
#[test]
fn zero_ratio_does_not_certify() {
    // n = 3, m = 3: K + D - H is trivial, so the H bound is 0 on every curve
    let w = amb(AmbientKind::P111n, Params::n(3));
    let d = w.class(&[3, 0]).unwrap();
    let plan = plans(&w, &d).unwrap().into_iter().find(|p| p.name == "H").unwrap();
    for c in [[0, 1], [1, 0], [3, 7]] {
        assert!(plan.forms[0].genus_bound(&w, &d, &w.class(&c).unwrap()).unwrap().is_zero());
    }
    assert_eq!(status(&w, &[3, 0]), Status::Open);
    assert!(matches!(best_epsilon(&w, &d, None), Err(Error::NotHyperbolicInput(_))));
}

#[test]
fn custom_reference_class_scales_epsilon() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    let d = p.class(&[4, 4, 4]).unwrap();
    let base = classify(&p, &d).unwrap();
    let doubled = classify_with(&p, &d, Some(&p.class(&[2, 2, 2]).unwrap())).unwrap();
    let e1 = base.epsilon.unwrap();
    let e2 = doubled.epsilon.unwrap();
    // the degree doubles, so epsilon halves
    assert_eq!(BigInt::from(2) * &e2.num * &e1.den, &e1.num * &e2.den);
}

#[test]
fn survey_examples() {
    let p2 = amb(AmbientKind::P2xP1, Params::none());
    let rows = survey(&p2, &[1..=6, 1..=4]).unwrap();
    assert_eq!(rows.len(), 24);
    let hyperbolic: Vec<Vec<i64>> = rows.iter().filter(|v| v.status == Status::Hyperbolic).map(|v| v.class.clone()).collect();
    let want: Vec<Vec<i64>> = vec![vec![4, 3], vec![4, 4], vec![5, 2], vec![5, 3], vec![5, 4], vec![6, 2], vec![6, 3], vec![6, 4]];
    assert_eq!(hyperbolic, want);
    // lexicographic order
    assert_eq!(rows[0].class, vec![1, 1]);
    assert_eq!(rows[1].class, vec![1, 2]);

    #[allow(clippy::reversed_empty_ranges)]
    let empty = survey(&p2, &[3..=1, 1..=4]).unwrap();
    assert!(empty.is_empty());
    assert!(matches!(survey(&p2, &[1..=2]), Err(Error::ArityMismatch { .. })));

    let p = amb(AmbientKind::P1P1P1, Params::none());
    let rows = survey(&p, &[2..=4, 2..=4, 2..=4]).unwrap();
    for v in &rows {
        let mut sorted = v.class.clone();
        sorted.sort();
        assert_eq!(v.status, status(&p, &sorted), "{:?}", v.class);
    }
}

#[test]
fn plans_are_empty_outside_nl_range() {
    let p = amb(AmbientKind::P1P1P1, Params::none());
    assert!(plans(&p, &p.class(&[1, 5, 5]).unwrap()).unwrap().is_empty());
    assert!(!plans(&p, &p.class(&[3, 3, 3]).unwrap()).unwrap().is_empty());
}

#[test]
fn double_cover_witnesses_on_weighted_planes() {
    for (n, genus) in [(3, 0), (4, 1)] {
        let w = amb(AmbientKind::P111n, Params::n(n));
        let wit = not_hyperbolic_witness(&w, &w.class(&[2, 0]).unwrap()).unwrap();
        assert_eq!(wit.kind, WitnessKind::BitangentPreimage);
        assert_eq!(wit.genus_attained, genus);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verdicts_are_consistent(kind in 0usize..5, x in 0i64..10, y in 0i64..10, z in 0i64..10, param in 1i64..5) {
        let (a, c) = match kind {
            0 => (amb(AmbientKind::P1P1P1, Params::none()), vec![x, y, z]),
            1 => (amb(AmbientKind::P2xP1, Params::none()), vec![x, y]),
            2 => (amb(AmbientKind::FexP1, Params::e(param)), vec![x, y + param * x, z]),
            3 => (amb(AmbientKind::BlP3, Params::none()), vec![x + y, -y]),
            _ => (amb(AmbientKind::P111n, Params::n(param)), vec![x, 0]),
        };
        let d = a.class(&c).unwrap();
        let v = classify(&a, &d).unwrap();
        match v.status {
            Status::Hyperbolic => {
                let (eps, _) = best_epsilon(&a, &d, None).unwrap();
                prop_assert!(eps > q(0, 1));
                prop_assert!(v.witness.is_none());
                prop_assert!(!v.certificates.is_empty());
            }
            Status::NotHyperbolic => {
                let w = v.witness.unwrap();
                prop_assert!(w.genus_attained <= 1);
            }
            Status::Open | Status::Invalid => prop_assert!(v.epsilon.is_none()),
        }
    }

    #[test]
    fn p1p1p1_verdicts_are_permutation_invariant(x in 1i64..9, y in 1i64..9, z in 1i64..9) {
        let p = amb(AmbientKind::P1P1P1, Params::none());
        let base = classify(&p, &p.class(&[x, y, z]).unwrap()).unwrap();
        for c in [[y, x, z], [z, y, x], [x, z, y], [y, z, x], [z, x, y]] {
            let v = classify(&p, &p.class(&c).unwrap()).unwrap();
            prop_assert_eq!(v.status, base.status);
            prop_assert_eq!(v.epsilon.map(|e| e.to_string()), base.epsilon.clone().map(|e| e.to_string()));
        }
    }
}
