use std::sync::Arc;

use hecke_core::bqf::{enumerate_classes, enumerate_classes_with, isp_in, negate_class};
use hecke_core::cfrac::{automorph, expansion};
use hecke_core::json::RpfJson;
use hecke_core::ratfun::{parse_field_element, parse_quad};
use hecke_core::rpf::{build_symmetric, build_theorem3, pole_at_zero, verify, RpfExpression};
use hecke_core::{
    make_field, Budget, Field, FieldElement, FormClassCycle, GroupElement, Polynomial,
    QuadExtElement, QuadField, RationalFunction, Scalar,
};
use proptest::prelude::*;

fn elem(f: &Field, cs: &[i64]) -> FieldElement {
    FieldElement::from_int_coeffs(f, &cs[..f.degree().min(cs.len())])
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, 3)
}

fn word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['S', 's', 'T', 'U', 'u']), 0..7)
        .prop_map(|v| v.into_iter().collect())
}

fn small_poly(f: &Field, cs: &[Vec<i64>]) -> Polynomial<FieldElement> {
    Polynomial::new(f, cs.iter().map(|c| elem(f, c)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_ring_laws(p in prop::sample::select(vec![4i64, 5, 7, 9]), a in coords(), b in coords(), c in coords()) {
        let f = make_field(p).unwrap();
        let (a, b, c) = (elem(&f, &a), elem(&f, &b), elem(&f, &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn sign_matches_float(p in prop::sample::select(vec![4i64, 5, 7, 11]), a in coords()) {
        let f = make_field(p).unwrap();
        let x = elem(&f, &a);
        let v = x.to_f64();
        if v.abs() > 1e-6 {
            prop_assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.sign() == 0, x.is_zero());
    }

    #[test]
    fn sqrt_of_square(p in prop::sample::select(vec![4i64, 5, 7]), a in coords()) {
        let f = make_field(p).unwrap();
        let x = elem(&f, &a);
        let r = (&x * &x).sqrt().unwrap();
        prop_assert_eq!(r, x.abs());
    }

    #[test]
    fn quad_text_round_trip(a in coords(), b in coords(), den in 1i64..7) {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 14)).unwrap();
        let d = FieldElement::from_int(&f, den).inv().unwrap();
        let x = QuadExtElement::new(&qf, &elem(&f, &a) * &d, elem(&f, &b));
        let back = parse_quad(4, Some(qf.radicand()), &x.to_expr_string()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_text_round_trip(p in prop::sample::select(vec![5i64, 7, 9]), a in coords()) {
        let f = make_field(p).unwrap();
        let x = elem(&f, &a);
        prop_assert_eq!(parse_field_element(p, &x.to_expr_string()).unwrap(), x);
    }

    #[test]
    fn slash_right_action_and_sign(p in prop::sample::select(vec![3i64, 4, 5]), k in 1u32..=3, m in word(), n in word(),
                                   num in prop::collection::vec(coords(), 1..4), den in prop::collection::vec(coords(), 1..4)) {
        let f = make_field(p).unwrap();
        let Ok(g) = RationalFunction::new(small_poly(&f, &num), small_poly(&f, &den)) else { return Ok(()); };
        let m = GroupElement::from_word(&f, &m).unwrap();
        let n = GroupElement::from_word(&f, &n).unwrap();
        prop_assert_eq!(g.slash(&m, k).slash(&n, k), g.slash(&(&m * &n), k));
        // -M acts like M in even weight: the group element is already reduced mod -I,
        // so compare with the explicit entry-wise negation applied through the formula.
        let neg = -FieldElement::one(&f);
        let minus_i = GroupElement::new(neg.clone(), FieldElement::zero(&f), FieldElement::zero(&f), neg).unwrap();
        prop_assert_eq!(g.slash(&(&m * &minus_i), k), g.slash(&m, k));
    }

    #[test]
    fn principal_part_removes_pole(p in prop::sample::select(vec![4i64, 5]), a in coords(), m in 1u32..4,
                                   num in prop::collection::vec(coords(), 1..4)) {
        let f = make_field(p).unwrap();
        let a = elem(&f, &a);
        let den = Polynomial::linear_root(&f, &a).pow(m).mul(&Polynomial::new(&f, vec![FieldElement::from_int(&f, 7), FieldElement::zero(&f), FieldElement::one(&f)]));
        let g = RationalFunction::new(small_poly(&f, &num), den).unwrap();
        let pp = g.pp_at(&a).unwrap();
        prop_assert!(pp.order() <= m as usize);
        let rest = g.sub(&pp.to_rational());
        prop_assert!(rest.pp_at(&a).unwrap().is_empty());
        prop_assert!(rest.denominator().eval(&a).sign() != 0);
    }

    #[test]
    fn word_images_share_automorph_class(w in word()) {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 14)).unwrap();
        let alpha = parse_quad(4, Some(qf.radicand()), "(L + r)/2").unwrap();
        let m = GroupElement::from_word(&f, &w).unwrap();
        let Some(x) = m.apply(&alpha) else { return Ok(()); };
        let ax = automorph(&x).unwrap();
        // the automorph of M(alpha) is conjugate to that of alpha
        let conj = &(&m * &automorph(&alpha).unwrap()) * &m.inverse();
        prop_assert_eq!(ax, conj);
        prop_assert_eq!(automorph(&x.conjugate()).unwrap(), automorph(&x).unwrap().inverse());
    }

    #[test]
    fn expansion_orbit_replays(w in word()) {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 14)).unwrap();
        let alpha = parse_quad(4, Some(qf.radicand()), "(L + r)/6").unwrap();
        let m = GroupElement::from_word(&f, &w).unwrap();
        let Some(x) = m.apply(&alpha) else { return Ok(()); };
        let e = expansion(&x, &Budget::default()).unwrap();
        let moves: Vec<_> = e.preperiod.iter().chain(e.period.iter()).collect();
        prop_assert_eq!(e.orbit.len(), moves.len() + 1);
        for (i, mv) in moves.iter().enumerate() {
            prop_assert_eq!(mv.matrix(&f).apply(&e.orbit[i + 1]).unwrap(), e.orbit[i].clone());
        }
    }

    #[test]
    fn linear_combinations_stay_rpf(c1 in -5i64..=5, c2 in -5i64..=5, c3 in -5i64..=5) {
        let f = make_field(4).unwrap();
        let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
        let qf = cs[0].quad_field().unwrap();
        let b = Budget::default();
        let x = build_theorem3(4, 1, &cs[0], &b).unwrap();
        let y = build_theorem3(4, 1, &cs[1], &b).unwrap();
        let z = pole_at_zero(4, 1, QuadExtElement::one(&qf), Some(QuadExtElement::sqrt_d(&qf))).unwrap();
        let lift = |n| QuadExtElement::from_int(&qf, n);
        let combo = RpfExpression::combine(&[(lift(c1), &x), (lift(c2).plus(&QuadExtElement::sqrt_d(&qf)), &y), (lift(c3), &z)]).unwrap();
        prop_assert!(verify(&combo, &b).is_rpf());
    }
}

/// `(p, D)` pairs with hyperbolic classes: `D = tau^2 - 4` for small `tau`.
/// For p = 5 most seeds are aperiodic and expensive to reject, so the box is small.
fn small_discriminants(p: i64) -> Vec<(FieldElement, Vec<FormClassCycle>)> {
    let f = make_field(p).unwrap();
    let budget = Budget {
        coord_bound: if p == 5 { 3 } else { 6 },
        ..Budget::default()
    };
    let wanted = if p == 5 { 1 } else { 2 };
    let mut out = vec![];
    for u in 0..=4 {
        for v in 0..=2 {
            let tau = elem(&f, &[u, v]);
            let d = &(&tau * &tau) - &FieldElement::from_int(&f, 4);
            if d.sign() <= 0 || d.sqrt().is_some() || out.iter().any(|(x, _)| *x == d) {
                continue;
            }
            let Ok(e) = enumerate_classes_with(p, &d, &budget) else {
                continue;
            };
            if !e.classes.is_empty() {
                out.push((d, e.classes));
            }
            if out.len() >= wanted {
                return out;
            }
        }
    }
    out
}

#[test]
fn theorem3_outputs_verify_and_have_no_tail() {
    let b = Budget::default();
    for p in [3, 4, 5] {
        let found = small_discriminants(p);
        assert!(!found.is_empty(), "p = {p}");
        for (d, cs) in found {
            for c in cs.iter().take(2) {
                for k in 1..=4 {
                    let q = build_theorem3(p as u32, k, c, &b).unwrap();
                    let v = verify(&q, &b);
                    assert!(v.is_rpf(), "p={p} D={d} k={k} {}", c.label());
                    assert!(q
                        .realized
                        .pp_at(&QuadExtElement::zero(&q.quad_field))
                        .unwrap()
                        .is_empty());
                }
            }
        }
    }
}

#[test]
fn symmetric_self_negating_classes() {
    let b = Budget::default();
    for p in [3, 4, 5] {
        for (_, cs) in small_discriminants(p) {
            for c in cs.iter().filter(|c| negate_class(c, &b).unwrap() == **c) {
                for k in [1, 3] {
                    let one = FieldElement::one(c.field());
                    let q = build_symmetric(
                        p as u32,
                        k,
                        &[(c.clone(), one)],
                        FieldElement::zero(c.field()),
                    )
                    .unwrap();
                    let v = verify(&q, &b);
                    assert!(
                        v.is_rpf() && v.full_pole_set_symmetric,
                        "p={p} k={k} {}",
                        c.label()
                    );
                }
            }
        }
    }
}

#[test]
fn pole_at_zero_all_small_weights() {
    for p in [3, 4, 5, 6, 7] {
        let f = make_field(p).unwrap();
        let qf = QuadField::trivial(&f);
        for k in 1..=4 {
            let q = pole_at_zero(p as u32, k, QuadExtElement::from_int(&qf, -2), None).unwrap();
            assert!(verify(&q, &Budget::default()).is_rpf(), "p={p} k={k}");
        }
    }
}

#[test]
fn isp_grouping_partitions_poles() {
    let f = make_field(4).unwrap();
    let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
    let qf: Arc<QuadField> = cs[0].quad_field().unwrap();
    let b = Budget::default();
    let q = build_theorem3(4, 2, &cs[0], &b).unwrap();
    let v = verify(&q, &b);
    let nonzero: Vec<_> = v
        .poles
        .finite
        .iter()
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, _)| x.clone())
        .collect();
    let mut grouped: Vec<QuadExtElement> = v
        .isp_report
        .iter()
        .flat_map(|e| e.members.clone())
        .collect();
    grouped.extend(v.unclassified.clone());
    grouped.sort_by(|a, b| a.cmp_value(b));
    assert_eq!(grouped, nonzero);
    for e in &v.isp_report {
        let full = isp_in(&e.class, &qf).unwrap();
        assert!(e.complete);
        assert_eq!(full.elements(), &e.members[..]);
    }
}

#[test]
fn rpf_json_round_trip_for_every_builder() {
    let f = make_field(4).unwrap();
    let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
    let b = Budget::default();
    let one = FieldElement::one(&f);
    let exprs = vec![
        build_theorem3(4, 3, &cs[1], &b).unwrap(),
        build_symmetric(
            4,
            1,
            &[(cs[0].clone(), one.clone()), (cs[1].clone(), one)],
            FieldElement::from_int(&f, 2),
        )
        .unwrap(),
        pole_at_zero(
            4,
            1,
            QuadExtElement::one(&QuadField::trivial(&f)),
            Some(QuadExtElement::from_int(&QuadField::trivial(&f), 3)),
        )
        .unwrap(),
    ];
    for e in exprs {
        let text = serde_json::to_string(&RpfJson::new(&e)).unwrap();
        let doc: RpfJson = serde_json::from_str(&text).unwrap();
        let (back, warnings) = doc.to_expression(&b).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(back, e);
    }
}
