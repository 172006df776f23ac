use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::RpfExpression;
use crate::bqf::{class_of_point, isp_in, FormClassCycle, PoleSet};
use crate::budget::Budget;
use crate::heckegroup::GroupElement;
use crate::numfield::{make_field, QuadExtElement, QuadField};
use crate::ratfun::{sum, PoleReport, RationalFunction};

/// The poles of one class found among the poles of a function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IspEntry {
    pub class: FormClassCycle,
    /// Poles of the function assigned to this class.
    pub members: Vec<QuadExtElement>,
    /// Whether every point of `P_A` is a pole.
    pub complete: bool,
    /// Whether `P_A` is Hecke-symmetric.
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RpfVerdict {
    pub relation1_ok: bool,
    pub relation2_ok: bool,
    /// `q + q|T`.
    pub residual1: RationalFunction<QuadExtElement>,
    /// `q + q|U + ... + q|U^{p-1}`.
    pub residual2: RationalFunction<QuadExtElement>,
    pub poles: PoleReport<QuadExtElement>,
    pub isp_report: Vec<IspEntry>,
    /// Nonzero finite poles that are not in any `P_A`.
    pub unclassified: Vec<QuadExtElement>,
    pub full_pole_set_symmetric: bool,
    pub zero_pole_order: usize,
}

impl RpfVerdict {
    pub fn is_rpf(&self) -> bool {
        self.relation1_ok && self.relation2_ok
    }
}

pub fn verify(q: &RpfExpression, budget: &Budget) -> RpfVerdict {
    verify_function(q.p, q.k, &q.realized, budget)
}

pub fn verify_function(
    p: u32,
    k: u32,
    f: &RationalFunction<QuadExtElement>,
    budget: &Budget,
) -> RpfVerdict {
    let qf = f.ctx();
    let field = make_field(p as i64).expect("valid p");
    let t = GroupElement::t(&field);
    let u = GroupElement::u(&field);
    let residual1 = f.add(&f.slash(&t, k));
    let powers: Vec<GroupElement> = (0..p as i64).map(|i| u.pow(i)).collect();
    let slashed: Vec<_> = powers.par_iter().map(|m| f.slash(m, k)).collect();
    let residual2 = sum(qf, &slashed);

    let poles = f.poles_extended();
    let zero = QuadExtElement::zero(qf);
    let zero_pole_order = poles
        .finite
        .iter()
        .find(|(x, _)| x.is_zero())
        .map_or(0, |(_, m)| *m);
    let nonzero: Vec<QuadExtElement> = poles
        .finite
        .iter()
        .filter(|(x, _)| *x != zero)
        .map(|(x, _)| x.clone())
        .collect();
    let (isp_report, unclassified) = classify(&nonzero, qf, &t, budget);
    let full_pole_set_symmetric = poles.unresolved.is_empty()
        && PoleSet::new(qf, nonzero.clone())
            .map(|s| s.is_hecke_symmetric())
            .unwrap_or(false);
    RpfVerdict {
        relation1_ok: residual1.is_zero(),
        relation2_ok: residual2.is_zero(),
        residual1,
        residual2,
        poles,
        isp_report,
        unclassified,
        full_pole_set_symmetric,
        zero_pole_order,
    }
}

/// Assigns each pole to the class `A` with the pole in `Z_A` (positive poles)
/// or in `T Z_A` (negative poles).
fn classify(
    poles: &[QuadExtElement],
    qf: &Arc<QuadField>,
    t: &GroupElement,
    budget: &Budget,
) -> (Vec<IspEntry>, Vec<QuadExtElement>) {
    let found: Vec<Option<(FormClassCycle, PoleSet)>> = poles
        .par_iter()
        .map(|x| {
            if x.conjugate() == *x {
                return None;
            }
            let y = if x.sign() > 0 { x.clone() } else { t.apply(x)? };
            let cycle = class_of_point(&y, budget).ok()?;
            let set = isp_in(&cycle, qf).ok()?;
            set.contains(x).then_some((cycle, set))
        })
        .collect();
    let mut groups: BTreeMap<String, (FormClassCycle, PoleSet, Vec<QuadExtElement>)> =
        BTreeMap::new();
    let mut unclassified = Vec::new();
    for (x, hit) in poles.iter().zip(found) {
        match hit {
            Some((cycle, set)) => groups
                .entry(cycle.label())
                .or_insert_with(|| (cycle, set, vec![]))
                .2
                .push(x.clone()),
            None => unclassified.push(x.clone()),
        }
    }
    let mut report: Vec<IspEntry> = groups
        .into_values()
        .map(|(class, set, members)| IspEntry {
            complete: members.len() == set.len(),
            symmetric: set.is_hecke_symmetric(),
            class,
            members,
        })
        .collect();
    report.sort_by(|a, b| a.class.forms()[0].cmp_canonical(&b.class.forms()[0]));
    (report, unclassified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::enumerate_classes;
    use crate::numfield::FieldElement;
    use crate::rpf::{build_general, build_symmetric, build_theorem3, pole_at_zero};

    fn setup() -> (Vec<FormClassCycle>, Arc<QuadField>) {
        let f = make_field(4).unwrap();
        let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
        let qf = cs[0].quad_field().unwrap();
        (cs, qf)
    }

    #[test]
    fn symmetric_pair_verifies() {
        let (cs, _) = setup();
        let f = cs[0].field().clone();
        let one = FieldElement::one(&f);
        let q = build_symmetric(
            4,
            1,
            &[(cs[0].clone(), one.clone()), (cs[1].clone(), one)],
            FieldElement::zero(&f),
        )
        .unwrap();
        let v = verify(&q, &Budget::default());
        assert!(v.is_rpf());
        assert!(v.full_pole_set_symmetric);
        assert_eq!(v.isp_report.len(), 2);
        assert!(v.isp_report.iter().all(|e| !e.symmetric && e.complete));
        assert!(v.unclassified.is_empty());
        assert_eq!(v.zero_pole_order, 0);
    }

    #[test]
    fn single_isp_verifies() {
        let (cs, qf) = setup();
        let q = build_general(
            4,
            1,
            &[(cs[0].clone(), QuadExtElement::one(&qf))],
            QuadExtElement::zero(&qf),
            vec![],
            &Budget::default(),
        )
        .unwrap();
        let v = verify(&q, &Budget::default());
        assert!(v.is_rpf());
        assert_eq!(v.isp_report.len(), 1);
        assert!(!v.isp_report[0].symmetric);
        assert!(!v.full_pole_set_symmetric);
        // a perturbed coefficient breaks both relations
        let bad = q.realized.add(
            &RationalFunction::new(
                crate::ratfun::Polynomial::one(&qf),
                crate::ratfun::Polynomial::linear_root(&qf, &cs[0].roots_in(&qf).unwrap()[0]),
            )
            .unwrap(),
        );
        assert!(!verify_function(4, 1, &bad, &Budget::default()).is_rpf());
    }

    #[test]
    fn theorem3_and_zero_pole() {
        let (cs, qf) = setup();
        for k in 1..=2 {
            assert!(verify(
                &build_theorem3(4, k, &cs[1], &Budget::default()).unwrap(),
                &Budget::default()
            )
            .is_rpf());
        }
        let q = pole_at_zero(
            4,
            1,
            QuadExtElement::zero(&qf),
            Some(QuadExtElement::one(&qf)),
        )
        .unwrap();
        let v = verify(&q, &Budget::default());
        assert!(v.is_rpf());
        assert_eq!(v.zero_pole_order, 1);
        assert!(v.isp_report.is_empty() && v.full_pole_set_symmetric);
    }
}
