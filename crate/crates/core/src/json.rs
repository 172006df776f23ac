//! JSON documents. Every number is written in the expression grammar of
//! [`crate::ratfun::parse_expression`], so documents parse back exactly.

use serde::{Deserialize, Serialize};

use crate::bqf::{
    cycle_from_form, negate_class, Enumeration, FormClassCycle, PoleSet, QuadraticForm,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::heckegroup::{ElementKind, GroupElement};
use crate::numfield::{make_field, FieldDescriptor, FieldElement, QuadExtElement, QuadField};
use crate::ratfun::{parse_field_element, parse_quad, Polynomial, RationalFunction};
use crate::rpf::{RpfExpression, RpfTerm, RpfVerdict};

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub degree: usize,
    /// Minimal polynomial of lambda, constant term first.
    pub minimal_polynomial: Vec<String>,
    pub lambda: f64,
    pub conjugates: Vec<f64>,
}

impl FieldJson {
    pub fn new(field: &FieldDescriptor) -> Self {
        FieldJson {
            p: field.p(),
            degree: field.degree(),
            minimal_polynomial: field
                .minimal_polynomial()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            lambda: field.conjugates()[0],
            conjugates: field.conjugates().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub p: u32,
    /// `[a, b, c, d]`, normalized modulo `-I`.
    pub mat: [String; 4],
    pub trace: String,
    pub kind: String,
}

impl GroupElementJson {
    pub fn new(m: &GroupElement) -> Self {
        let kind = match m.classify() {
            ElementKind::Identity => "identity",
            ElementKind::Elliptic => "elliptic",
            ElementKind::Parabolic => "parabolic",
            ElementKind::Hyperbolic => "hyperbolic",
        };
        GroupElementJson {
            p: m.p(),
            mat: m.entries().map(|x| x.to_expr_string()),
            trace: m.trace().to_expr_string(),
            kind: kind.into(),
        }
    }

    pub fn to_element(&self) -> Result<GroupElement> {
        let field = make_field(self.p as i64)?;
        let [a, b, c, d] = &self.mat;
        let e = |s: &String| parse_field_element(field.p() as i64, s);
        GroupElement::new(e(a)?, e(b)?, e(c)?, e(d)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FormJson {
    pub A: String,
    pub B: String,
    pub C: String,
}

pub fn form_to_json(q: &QuadraticForm) -> FormJson {
    FormJson {
        A: q.a().to_expr_string(),
        B: q.b().to_expr_string(),
        C: q.c().to_expr_string(),
    }
}

pub fn form_from_json(p: u32, f: &FormJson) -> Result<QuadraticForm> {
    let e = |s: &String| parse_field_element(p as i64, s);
    QuadraticForm::new(e(&f.A)?, e(&f.B)?, e(&f.C)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleJson {
    pub label: String,
    pub forms: Vec<FormJson>,
    /// Positive poles `Z_A`, one per form.
    pub roots: Vec<String>,
}

impl CycleJson {
    pub fn new(c: &FormClassCycle) -> Result<Self> {
        Ok(CycleJson {
            label: c.label(),
            forms: c.forms().iter().map(form_to_json).collect(),
            roots: c.roots()?.iter().map(|x| x.to_expr_string()).collect(),
        })
    }

    pub fn to_cycle(&self, p: u32, budget: &Budget) -> Result<FormClassCycle> {
        let first = self
            .forms
            .first()
            .ok_or_else(|| Error::Parse("empty class".into()))?;
        let cycle = cycle_from_form(&form_from_json(p, first)?, budget)?;
        if cycle.len() != self.forms.len() {
            return Err(Error::Parse(format!(
                "class {} has {} forms, expected {}",
                self.label,
                cycle.len(),
                self.forms.len()
            )));
        }
        Ok(cycle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationJson {
    pub p: u32,
    pub discriminant: String,
    pub class_number: usize,
    pub simple_forms: usize,
    pub classes: Vec<CycleJson>,
    /// 1-based index of `-A` for each class.
    pub negation: Vec<usize>,
    pub candidates: usize,
    pub undecided: usize,
}

impl EnumerationJson {
    pub fn new(e: &Enumeration) -> Result<Self> {
        let classes: Vec<CycleJson> = e
            .classes
            .iter()
            .map(CycleJson::new)
            .collect::<Result<_>>()?;
        let mut negation = Vec::new();
        for c in &e.classes {
            let n = negate_class(c, &e.budget)?;
            negation.push(e.classes.iter().position(|x| *x == n).map_or(0, |i| i + 1));
        }
        Ok(EnumerationJson {
            p: e.p,
            discriminant: e.d.to_expr_string(),
            class_number: e.classes.len(),
            simple_forms: e.classes.iter().map(|c| c.len()).sum(),
            classes,
            negation,
            candidates: e.candidates,
            undecided: e.undecided,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSetJson {
    pub radicand: String,
    pub points: Vec<String>,
    pub hecke_symmetric: bool,
}

impl PoleSetJson {
    pub fn new(s: &PoleSet) -> Self {
        PoleSetJson {
            radicand: s.quad_field().radicand().to_expr_string(),
            points: s.elements().iter().map(|x| x.to_expr_string()).collect(),
            hecke_symmetric: s.is_hecke_symmetric(),
        }
    }
}

/// Numerator and denominator coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RationalFunctionJson {
    pub fn new(f: &RationalFunction<QuadExtElement>) -> Self {
        let cs = |p: &Polynomial<QuadExtElement>| {
            p.coeffs().iter().map(|c| c.to_expr_string()).collect()
        };
        RationalFunctionJson {
            num: cs(f.numerator()),
            den: cs(f.denominator()),
        }
    }

    pub fn to_function(
        &self,
        p: u32,
        qf: &Arc<QuadField>,
    ) -> Result<RationalFunction<QuadExtElement>> {
        let d = qf.radicand();
        let cs = |v: &[String]| -> Result<Polynomial<QuadExtElement>> {
            let items: Vec<_> = v
                .iter()
                .map(|s| parse_quad(p as i64, Some(d), s))
                .collect::<Result<_>>()?;
            Ok(Polynomial::new(qf, items))
        };
        RationalFunction::new(cs(&self.num)?, cs(&self.den)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TermJson {
    PrincipalParts {
        class: Vec<FormJson>,
        coeff: String,
    },
    FormPowers {
        class: Vec<FormJson>,
        coeff: String,
    },
    PoleAtZero {
        a0: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b1: Option<String>,
    },
    Tail {
        coeffs: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpfJson {
    pub p: u32,
    pub k: u32,
    /// `D` of the coefficient field `K(sqrt D)`; `"1"` when no radical is needed.
    pub radicand: String,
    pub terms: Vec<TermJson>,
    pub realized: RationalFunctionJson,
}

impl RpfJson {
    pub fn new(q: &RpfExpression) -> Self {
        let s = |x: &QuadExtElement| x.to_expr_string();
        let forms = |c: &FormClassCycle| c.forms().iter().map(form_to_json).collect();
        let terms = q
            .terms
            .iter()
            .map(|t| match t {
                RpfTerm::PrincipalParts { class, coeff, .. } => TermJson::PrincipalParts {
                    class: forms(class),
                    coeff: s(coeff),
                },
                RpfTerm::FormPowers { class, coeff } => TermJson::FormPowers {
                    class: forms(class),
                    coeff: s(coeff),
                },
                RpfTerm::PoleAtZero { a0, b1 } => TermJson::PoleAtZero {
                    a0: s(a0),
                    b1: b1.as_ref().map(s),
                },
                RpfTerm::Tail { coeffs } => TermJson::Tail {
                    coeffs: coeffs.iter().map(s).collect(),
                },
            })
            .collect();
        RpfJson {
            p: q.p,
            k: q.k,
            radicand: q.quad_field.radicand().to_expr_string(),
            terms,
            realized: RationalFunctionJson::new(&q.realized),
        }
    }

    /// Loads the expression. `realized` is authoritative: when the terms do not
    /// sum to it they are dropped and a warning is returned.
    pub fn to_expression(&self, budget: &Budget) -> Result<(RpfExpression, Vec<String>)> {
        let p = self.p as i64;
        let field = make_field(p)?;
        let d = parse_field_element(p, &self.radicand)?;
        let qf = if d.is_one() {
            QuadField::trivial(&field)
        } else {
            QuadField::new(d)?
        };
        let realized = self.realized.to_function(self.p, &qf)?;
        let mut warnings = Vec::new();
        match self.terms_to_expression(&qf, budget) {
            Ok(e) if e.realized == realized => return Ok((e, warnings)),
            Ok(_) => warnings
                .push("terms do not sum to the realized function; using realized only".into()),
            Err(err) => warnings.push(format!("terms ignored: {err}")),
        }
        Ok((
            RpfExpression::from_function(self.p, self.k, realized),
            warnings,
        ))
    }

    fn terms_to_expression(&self, qf: &Arc<QuadField>, budget: &Budget) -> Result<RpfExpression> {
        let p = self.p;
        let c = |s: &String| parse_quad(p as i64, Some(qf.radicand()), s);
        let cycle = |forms: &Vec<FormJson>| -> Result<FormClassCycle> {
            let first = forms
                .first()
                .ok_or_else(|| Error::Parse("empty class".into()))?;
            cycle_from_form(&form_from_json(p, first)?, budget)
        };
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(match t {
                TermJson::PrincipalParts { class, coeff } => {
                    let class = cycle(class)?;
                    let negated = negate_class(&class, budget)?;
                    RpfTerm::PrincipalParts {
                        class,
                        negated,
                        coeff: c(coeff)?,
                    }
                }
                TermJson::FormPowers { class, coeff } => RpfTerm::FormPowers {
                    class: cycle(class)?,
                    coeff: c(coeff)?,
                },
                TermJson::PoleAtZero { a0, b1 } => RpfTerm::PoleAtZero {
                    a0: c(a0)?,
                    b1: b1.as_ref().map(&c).transpose()?,
                },
                TermJson::Tail { coeffs } => RpfTerm::Tail {
                    coeffs: coeffs.iter().map(&c).collect::<Result<_>>()?,
                },
            });
        }
        RpfExpression::new(p, self.k, qf, terms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleJson {
    pub point: String,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnresolvedJson {
    pub factor: Vec<String>,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IspJson {
    pub class: String,
    pub forms: Vec<FormJson>,
    pub members: Vec<String>,
    pub complete: bool,
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub poles: Vec<PoleJson>,
    pub pole_at_infinity: Option<usize>,
    pub unresolved: Vec<UnresolvedJson>,
    pub zero_pole_order: usize,
    pub isps: Vec<IspJson>,
    pub unclassified: Vec<String>,
    pub full_pole_set_symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub p: u32,
    pub k: u32,
    pub rpf: bool,
    pub relation1_ok: bool,
    pub relation2_ok: bool,
    pub residual1: RationalFunctionJson,
    pub residual2: RationalFunctionJson,
    pub analysis: AnalysisJson,
}

impl AnalysisJson {
    pub fn new(v: &RpfVerdict) -> Self {
        let s = |x: &QuadExtElement| x.to_expr_string();
        AnalysisJson {
            poles: v
                .poles
                .finite
                .iter()
                .map(|(x, m)| PoleJson {
                    point: s(x),
                    order: *m,
                })
                .collect(),
            pole_at_infinity: v.poles.infinity,
            unresolved: v
                .poles
                .unresolved
                .iter()
                .map(|u| UnresolvedJson {
                    factor: u.factor.coeffs().iter().map(s).collect(),
                    order: u.order,
                })
                .collect(),
            zero_pole_order: v.zero_pole_order,
            isps: v
                .isp_report
                .iter()
                .map(|e| IspJson {
                    class: e.class.label(),
                    forms: e.class.forms().iter().map(form_to_json).collect(),
                    members: e.members.iter().map(s).collect(),
                    complete: e.complete,
                    symmetric: e.symmetric,
                })
                .collect(),
            unclassified: v.unclassified.iter().map(s).collect(),
            full_pole_set_symmetric: v.full_pole_set_symmetric,
        }
    }
}

impl VerdictJson {
    pub fn new(p: u32, k: u32, v: &RpfVerdict) -> Self {
        VerdictJson {
            p,
            k,
            rpf: v.is_rpf(),
            relation1_ok: v.relation1_ok,
            relation2_ok: v.relation2_ok,
            residual1: RationalFunctionJson::new(&v.residual1),
            residual2: RationalFunctionJson::new(&v.residual2),
            analysis: AnalysisJson::new(v),
        }
    }
}

/// Parses a constant of `K` given in the expression grammar.
pub fn field_element_from_str(p: u32, s: &str) -> Result<FieldElement> {
    parse_field_element(p as i64, s)
}
