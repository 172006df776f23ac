//! Rational period functions: constructors for the standard shapes and an
//! exact verifier of the two defining relations.

mod verify;

use std::sync::Arc;

use crate::bqf::{negate_class, FormClassCycle, QuadraticForm};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, QuadExtElement, QuadField, Scalar};
use crate::ratfun::{promote_poly, sum, Polynomial, RationalFunction};

pub use verify::{verify, verify_function, IspEntry, RpfVerdict};

/// One structured summand of an RPF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RpfTerm {
    /// `C (sum_{Z_A} q_{k,a} - sum_{Z_{-A}} q_{k,a'})`.
    PrincipalParts {
        class: FormClassCycle,
        negated: FormClassCycle,
        coeff: QuadExtElement,
    },
    /// `d sum_{Z_A} Q_a(z,1)^{-k}`.
    FormPowers {
        class: FormClassCycle,
        coeff: QuadExtElement,
    },
    /// `a0 (1 - z^{-2k}) + b1 z^{-1}`; `b1` only in weight 2.
    PoleAtZero {
        a0: QuadExtElement,
        b1: Option<QuadExtElement>,
    },
    /// `sum_n c_n z^{-n}` for `n = 1, 2, ...`.
    Tail { coeffs: Vec<QuadExtElement> },
}

/// An RPF candidate: its structured terms and their exact flattened sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RpfExpression {
    pub p: u32,
    pub k: u32,
    pub quad_field: Arc<QuadField>,
    pub terms: Vec<RpfTerm>,
    pub realized: RationalFunction<QuadExtElement>,
}

impl RpfExpression {
    pub fn new(p: u32, k: u32, qf: &Arc<QuadField>, terms: Vec<RpfTerm>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "weight parameter k must be positive".into(),
            ));
        }
        let parts: Vec<_> = terms
            .iter()
            .map(|t| realize_term(t, k, qf))
            .collect::<Result<_>>()?;
        let realized = sum(qf, &parts);
        Ok(RpfExpression {
            p,
            k,
            quad_field: qf.clone(),
            terms,
            realized,
        })
    }

    /// An expression known only through its flattened function.
    pub fn from_function(p: u32, k: u32, f: RationalFunction<QuadExtElement>) -> Self {
        RpfExpression {
            p,
            k,
            quad_field: f.ctx().clone(),
            terms: vec![],
            realized: f,
        }
    }

    /// Exact linear combination of expressions with the same `p`, `k` and extension.
    pub fn combine(parts: &[(QuadExtElement, &RpfExpression)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut f = RationalFunction::zero(&first.quad_field);
        for (c, e) in parts {
            if (e.p, e.k) != (first.p, first.k) {
                return Err(Error::InvalidArgument(
                    "combined expressions differ in p or k".into(),
                ));
            }
            same_ext(&first.quad_field, &e.quad_field)?;
            f = f.add(&e.realized.scale(c));
        }
        Ok(Self::from_function(first.p, first.k, f))
    }
}

fn same_ext(a: &Arc<QuadField>, b: &Arc<QuadField>) -> Result<()> {
    if **a != **b {
        return Err(Error::RadicandMismatch(
            a.radicand().to_expr_string(),
            b.radicand().to_expr_string(),
        ));
    }
    Ok(())
}

fn check_coeff(qf: &Arc<QuadField>, c: &QuadExtElement) -> Result<()> {
    same_ext(qf, c.quad_field())
}

fn z_power(qf: &Arc<QuadField>, c: QuadExtElement, n: i64) -> RationalFunction<QuadExtElement> {
    RationalFunction::monomial(qf, c, n)
}

fn realize_term(
    t: &RpfTerm,
    k: u32,
    qf: &Arc<QuadField>,
) -> Result<RationalFunction<QuadExtElement>> {
    Ok(match t {
        RpfTerm::PrincipalParts {
            class,
            negated,
            coeff,
        } => {
            check_coeff(qf, coeff)?;
            let mut parts = vec![];
            for a in class.roots_in(qf)? {
                parts.push(pp_piece(k, &a)?);
            }
            for a in negated.roots_in(qf)? {
                parts.push(pp_piece(k, &a.conjugate())?.neg());
            }
            sum(qf, &parts).scale(coeff)
        }
        RpfTerm::FormPowers { class, coeff } => {
            check_coeff(qf, coeff)?;
            let parts: Vec<_> = class.forms().iter().map(|q| form_power(q, qf, k)).collect();
            sum(qf, &parts).scale(coeff)
        }
        RpfTerm::PoleAtZero { a0, b1 } => {
            check_coeff(qf, a0)?;
            if b1.is_some() && k != 1 {
                return Err(Error::InvalidArgument(
                    "b1 is only allowed in weight 2".into(),
                ));
            }
            let mut f = z_power(qf, a0.clone(), 0).sub(&z_power(qf, a0.clone(), -2 * k as i64));
            if let Some(b) = b1 {
                check_coeff(qf, b)?;
                f = f.add(&z_power(qf, b.clone(), -1));
            }
            f
        }
        RpfTerm::Tail { coeffs } => {
            if coeffs.len() > 2 * k as usize - 1 {
                return Err(Error::InvalidArgument(format!(
                    "tail has {} terms, at most {} allowed",
                    coeffs.len(),
                    2 * k - 1
                )));
            }
            let mut parts = vec![];
            for (i, c) in coeffs.iter().enumerate() {
                check_coeff(qf, c)?;
                parts.push(z_power(qf, c.clone(), -(i as i64 + 1)));
            }
            sum(qf, &parts)
        }
    })
}

/// `Q(z, 1)^{-k}` over `qf`.
pub fn form_power(
    q: &QuadraticForm,
    qf: &Arc<QuadField>,
    k: u32,
) -> RationalFunction<QuadExtElement> {
    let field = q.field();
    let poly = promote_poly(
        &Polynomial::new(field, vec![q.c().clone(), q.b().clone(), q.a().clone()]),
        qf,
    );
    RationalFunction::new(Polynomial::one(qf), poly.pow(k)).expect("nonzero form")
}

/// The form `Q_x = A(z - x)(z - x')` of discriminant `D` whose `+sqrt D` root is `x`.
pub fn point_form(x: &QuadExtElement) -> Result<QuadraticForm> {
    if x.b().is_zero() {
        return Err(Error::NotHyperbolic(
            x.to_expr_string(),
            "point is its own conjugate".into(),
        ));
    }
    let a = (x.b() + x.b()).inv()?;
    let b = -&x.a().try_div(x.b())?;
    let c = &a * &x.norm();
    QuadraticForm::new(a, b, c)
}

/// `Q_x(z, 1)^{-k}`.
pub fn point_form_power(x: &QuadExtElement, k: u32) -> Result<RationalFunction<QuadExtElement>> {
    Ok(form_power(&point_form(x)?, x.quad_field(), k))
}

/// `q_{k,x} = PP_x[(x - x')^k / ((z - x)^k (z - x')^k)]`, which is
/// `PP_x[D^{k/2} / Q_x(z,1)^k]`.
pub fn pp_piece(k: u32, x: &QuadExtElement) -> Result<RationalFunction<QuadExtElement>> {
    let qf = x.quad_field();
    let xc = x.conjugate();
    if xc == *x {
        return Err(Error::NotHyperbolic(
            x.to_expr_string(),
            "point is its own conjugate".into(),
        ));
    }
    let den = Polynomial::linear_root(qf, x)
        .mul(&Polynomial::linear_root(qf, &xc))
        .pow(k);
    let num = Polynomial::constant(qf, x.minus(&xc).pow(k as i64)?);
    let f = RationalFunction::new(num, den)?;
    Ok(f.pp_at(x)?.to_rational())
}

/// The RPF with a pole only at zero.
pub fn pole_at_zero(
    p: u32,
    k: u32,
    a0: QuadExtElement,
    b1: Option<QuadExtElement>,
) -> Result<RpfExpression> {
    if b1.is_some() && k != 1 {
        return Err(Error::InvalidArgument(
            "b1 is only allowed when 2k = 2".into(),
        ));
    }
    let qf = a0.quad_field().clone();
    RpfExpression::new(p, k, &qf, vec![RpfTerm::PoleAtZero { a0, b1 }])
}

fn check_classes<'a>(p: u32, classes: impl Iterator<Item = &'a FormClassCycle>) -> Result<()> {
    for c in classes {
        if c.p() != p {
            return Err(Error::FieldMismatch(p, c.p()));
        }
    }
    Ok(())
}

/// The general candidate shape
/// `sum_l C_l (sum_{Z_{A_l}} q_{k,a} - sum_{Z_{-A_l}} q_{k,a'}) + c0 q_{k,0} + sum_n c_n z^{-n}`.
///
/// This shape is necessary, not sufficient: run [`verify`] on the result.
pub fn build_general(
    p: u32,
    k: u32,
    classes: &[(FormClassCycle, QuadExtElement)],
    c0: QuadExtElement,
    tail: Vec<QuadExtElement>,
    budget: &Budget,
) -> Result<RpfExpression> {
    check_classes(p, classes.iter().map(|(c, _)| c))?;
    let qf = c0.quad_field().clone();
    let mut terms = Vec::new();
    for (class, coeff) in classes {
        let negated = negate_class(class, budget)?;
        terms.push(RpfTerm::PrincipalParts {
            class: class.clone(),
            negated,
            coeff: coeff.clone(),
        });
    }
    terms.push(RpfTerm::PoleAtZero { a0: c0, b1: None });
    if !tail.is_empty() {
        terms.push(RpfTerm::Tail { coeffs: tail });
    }
    RpfExpression::new(p, k, &qf, terms)
}

/// `sum_l d_l sum_{Z_{A_l}} Q_a(z,1)^{-k} + c0 q_{k,0}` for odd `k`, with coefficients in `K`.
pub fn build_symmetric(
    p: u32,
    k: u32,
    classes: &[(FormClassCycle, FieldElement)],
    c0: FieldElement,
) -> Result<RpfExpression> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "symmetric construction needs odd k, got {k}"
        )));
    }
    check_classes(p, classes.iter().map(|(c, _)| c))?;
    let qf = match classes.first() {
        Some((c, _)) => c.quad_field()?,
        None => QuadField::trivial(c0.field()),
    };
    let lift = |x: &FieldElement| QuadExtElement::from_base(&qf, x);
    let mut terms: Vec<RpfTerm> = classes
        .iter()
        .map(|(class, d)| RpfTerm::FormPowers {
            class: class.clone(),
            coeff: lift(d),
        })
        .collect();
    terms.push(RpfTerm::PoleAtZero {
        a0: lift(&c0),
        b1: None,
    });
    RpfExpression::new(p, k, &qf, terms)
}

/// `sum_{Z_A} Q_a(z,1)^{-k} - (-1)^k sum_{Z_{-A}} Q_a(z,1)^{-k}`, an RPF for every `k`.
pub fn build_theorem3(
    p: u32,
    k: u32,
    class: &FormClassCycle,
    budget: &Budget,
) -> Result<RpfExpression> {
    check_classes(p, std::iter::once(class))?;
    let qf = class.quad_field()?;
    let negated = negate_class(class, budget)?;
    let sign = if k.is_multiple_of(2) { -1 } else { 1 };
    let terms = vec![
        RpfTerm::FormPowers {
            class: class.clone(),
            coeff: QuadExtElement::one(&qf),
        },
        RpfTerm::FormPowers {
            class: negated,
            coeff: QuadExtElement::from_int(&qf, sign),
        },
    ];
    RpfExpression::new(p, k, &qf, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::enumerate_classes;
    use crate::numfield::make_field;

    fn classes(p: i64, d: i64) -> Vec<FormClassCycle> {
        let f = make_field(p).unwrap();
        enumerate_classes(p, &FieldElement::from_int(&f, d)).unwrap()
    }

    #[test]
    fn pole_at_zero_shapes() {
        let f = make_field(4).unwrap();
        let qf = QuadField::trivial(&f);
        let q = pole_at_zero(4, 2, QuadExtElement::one(&qf), None).unwrap();
        assert_eq!(q.realized.to_expr_string(), "(z^4 - 1)/(z^4)");
        let q = pole_at_zero(
            4,
            1,
            QuadExtElement::zero(&qf),
            Some(QuadExtElement::one(&qf)),
        )
        .unwrap();
        assert_eq!(q.realized.to_expr_string(), "(1)/(z)");
        let q = pole_at_zero(
            4,
            1,
            QuadExtElement::zero(&qf),
            Some(QuadExtElement::zero(&qf)),
        )
        .unwrap();
        assert!(q.realized.is_zero());
        assert!(pole_at_zero(
            4,
            2,
            QuadExtElement::one(&qf),
            Some(QuadExtElement::one(&qf))
        )
        .is_err());
    }

    #[test]
    fn weight_two_piece_is_simple_pole() {
        let cs = classes(4, 14);
        let qf = cs[0].quad_field().unwrap();
        for a in cs[0].roots_in(&qf).unwrap() {
            let expect =
                RationalFunction::new(Polynomial::one(&qf), Polynomial::linear_root(&qf, &a))
                    .unwrap();
            assert_eq!(pp_piece(1, &a).unwrap(), expect);
            assert_eq!(
                pp_piece(1, &a.conjugate()).unwrap(),
                RationalFunction::new(
                    Polynomial::one(&qf),
                    Polynomial::linear_root(&qf, &a.conjugate())
                )
                .unwrap()
            );
        }
    }

    #[test]
    fn pieces_pair_up_to_form_power() {
        // q_{k,a} + (-1)^k q_{k,a'} = D^{k/2} Q_a^{-k}
        let cs = classes(4, 14);
        let qf = cs[0].quad_field().unwrap();
        let r = QuadExtElement::sqrt_d(&qf);
        for a in cs.iter().flat_map(|c| c.roots_in(&qf).unwrap()) {
            for k in 1..=3u32 {
                let lhs = pp_piece(k, &a).unwrap();
                let other = pp_piece(k, &a.conjugate()).unwrap();
                let lhs = if k % 2 == 0 {
                    lhs.add(&other)
                } else {
                    lhs.sub(&other)
                };
                let rhs = point_form_power(&a, k)
                    .unwrap()
                    .scale(&r.pow(k as i64).unwrap());
                assert_eq!(lhs, rhs, "k={k} a={a:?}");
            }
        }
    }

    #[test]
    fn point_form_matches_cycle() {
        for c in classes(4, 14).iter().chain(classes(3, 5).iter()) {
            for (q, a) in c.forms().iter().zip(c.roots().unwrap()) {
                assert_eq!(&point_form(&a).unwrap(), q);
            }
        }
    }

    #[test]
    fn theorem3_self_negating_class() {
        let cs = classes(3, 5);
        let b = Budget::default();
        for k in 1..=4 {
            let q = build_theorem3(3, k, &cs[0], &b).unwrap();
            if k % 2 == 0 {
                assert!(q.realized.is_zero());
            } else {
                let two = FieldElement::from_int(cs[0].field(), 2);
                let s = build_symmetric(
                    3,
                    k,
                    &[(cs[0].clone(), two)],
                    FieldElement::zero(cs[0].field()),
                )
                .unwrap();
                assert_eq!(q.realized, s.realized);
            }
        }
    }

    #[test]
    fn bad_arguments() {
        let cs = classes(4, 14);
        let f = cs[0].field().clone();
        assert!(build_symmetric(4, 2, &[], FieldElement::zero(&f)).is_err());
        assert!(build_theorem3(5, 1, &cs[0], &Budget::default()).is_err());
        let qf = QuadField::trivial(&f);
        let q = RpfExpression::new(
            4,
            1,
            &qf,
            vec![RpfTerm::Tail {
                coeffs: vec![QuadExtElement::one(&qf); 2],
            }],
        );
        assert!(q.is_err());
    }
}
