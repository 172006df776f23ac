//! lambda-binary quadratic forms `[A, B, C]` over `Z[lambda]`, class cycles and
//! irreducible systems of poles.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cfrac;
use crate::error::{Error, Result};
use crate::heckegroup::GroupElement;
use crate::numfield::{make_field, Field, FieldElement, QuadExtElement, QuadField};

/// `Q(x, y) = A x^2 + B x y + C y^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
}

impl QuadraticForm {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement) -> Result<Self> {
        for x in [&b, &c] {
            if x.p() != a.p() {
                return Err(Error::FieldMismatch(a.p(), x.p()));
            }
        }
        for x in [&a, &b, &c] {
            if !x.is_integral() {
                return Err(Error::NotIntegral(x.to_expr_string()));
            }
        }
        Ok(QuadraticForm { a, b, c })
    }

    /// Convenience constructor from power-basis integer coordinates.
    pub fn from_coords(field: &Field, a: &[i64], b: &[i64], c: &[i64]) -> Self {
        let g = |v: &[i64]| FieldElement::from_int_coeffs(field, v);
        QuadraticForm {
            a: g(a),
            b: g(b),
            c: g(c),
        }
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }
    pub fn b(&self) -> &FieldElement {
        &self.b
    }
    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn discriminant(&self) -> FieldElement {
        &(&self.b * &self.b) - &(&FieldElement::from_int(self.field(), 4) * &(&self.a * &self.c))
    }

    /// `(Q o M)(x, y) = Q(ax + by, cx + dy)`.
    pub fn act(&self, m: &GroupElement) -> Result<Self> {
        if m.p() != self.p() {
            return Err(Error::FieldMismatch(self.p(), m.p()));
        }
        let [ma, mb, mc, md] = m.entries();
        let two = FieldElement::from_int(self.field(), 2);
        let (qa, qb, qc) = (&self.a, &self.b, &self.c);
        let a = &(&(qa * &(ma * ma)) + &(qb * &(ma * mc))) + &(qc * &(mc * mc));
        let b = &(&(&two * &(qa * &(ma * mb))) + &(qb * &(&(ma * md) + &(mb * mc))))
            + &(&two * &(qc * &(mc * md)));
        let c = &(&(qa * &(mb * mb)) + &(qb * &(mb * md))) + &(qc * &(md * md));
        Ok(QuadraticForm { a, b, c })
    }

    /// `A > 0 > C`.
    pub fn is_simple(&self) -> bool {
        self.a.sign() > 0 && self.c.sign() < 0
    }

    pub fn negate(&self) -> Self {
        QuadraticForm {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }

    /// `(-B + sqrt D) / (2A)` in `K(sqrt D)` for this form's own discriminant.
    pub fn root(&self) -> Result<QuadExtElement> {
        let qf = QuadField::new(self.discriminant())?;
        self.root_in(&qf)
    }

    /// The same root written over another radicand `D0` with `D / D0` a square in `K`.
    pub fn root_in(&self, qf: &Arc<QuadField>) -> Result<QuadExtElement> {
        if self.a.is_zero() {
            return Err(Error::DegenerateForm(self.to_expr_string()));
        }
        let d = self.discriminant();
        if d.sign() <= 0 {
            return Err(Error::NonPositiveRadicand(d.to_expr_string()));
        }
        let ratio = d.try_div(qf.radicand())?;
        let t = ratio.sqrt().map(|t| t.abs()).ok_or_else(|| {
            Error::RadicandMismatch(d.to_expr_string(), qf.radicand().to_expr_string())
        })?;
        let inv = (&FieldElement::from_int(self.field(), 2) * &self.a).inv()?;
        Ok(QuadExtElement::new(qf, &(-&self.b) * &inv, &t * &inv))
    }

    /// Total order by the real values of `(A, B, C)`.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.a
            .cmp_value(&other.a)
            .then_with(|| self.b.cmp_value(&other.b))
            .then_with(|| self.c.cmp_value(&other.c))
    }

    pub fn to_expr_string(&self) -> String {
        format!("[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[p={}]{}", self.p(), self.to_expr_string())
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

/// The form whose roots are the fixed points of `M`: `Q_M(v) = det(v, Mv)`.
pub fn form_of_automorph(m: &GroupElement) -> QuadraticForm {
    QuadraticForm {
        a: m.c().clone(),
        b: m.d() - m.a(),
        c: -m.b(),
    }
}

/// The form attached to a hyperbolic point through its automorph.
pub fn form_of_point(x: &QuadExtElement, budget: &Budget) -> Result<QuadraticForm> {
    Ok(form_of_automorph(&cfrac::automorph_with(x, budget)?))
}

/// The other fixed point of the stabilizer: the algebraic conjugate.
pub fn hecke_conjugate(x: &QuadExtElement) -> QuadExtElement {
    x.conjugate()
}

/// Whether `Q` is the form of its own root, i.e. belongs to a hyperbolic class.
pub fn is_hyperbolic_form(q: &QuadraticForm, budget: &Budget) -> Result<bool> {
    let x = match q.root() {
        Ok(x) => x,
        Err(Error::NonPositiveRadicand(_)) | Err(Error::DegenerateForm(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    match form_of_point(&x, budget) {
        Ok(f) => Ok(f == *q),
        Err(Error::NotHyperbolic(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A class cycle: the simple forms of one hyperbolic class, in walk order,
/// rotated to start at the smallest form.
#[derive(Clone, PartialEq, Eq)]
pub struct FormClassCycle {
    p: u32,
    d: FieldElement,
    forms: Vec<QuadraticForm>,
}

impl FormClassCycle {
    fn from_walk(mut forms: Vec<QuadraticForm>) -> Self {
        let start = (0..forms.len())
            .min_by(|&i, &j| forms[i].cmp_canonical(&forms[j]))
            .expect("nonempty cycle");
        forms.rotate_left(start);
        let d = forms[0].discriminant();
        FormClassCycle {
            p: forms[0].p(),
            d,
            forms,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn discriminant(&self) -> &FieldElement {
        &self.d
    }

    pub fn field(&self) -> &Field {
        self.d.field()
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Opaque identifier: the text of the first form.
    pub fn label(&self) -> String {
        self.forms[0].to_expr_string()
    }

    pub fn contains(&self, q: &QuadraticForm) -> bool {
        self.forms.contains(q)
    }

    pub fn quad_field(&self) -> Result<Arc<QuadField>> {
        QuadField::new(self.d.clone())
    }

    /// `Z_A`: the roots of the simple forms, in cycle order, over `qf`.
    pub fn roots_in(&self, qf: &Arc<QuadField>) -> Result<Vec<QuadExtElement>> {
        self.forms.iter().map(|q| q.root_in(qf)).collect()
    }

    pub fn roots(&self) -> Result<Vec<QuadExtElement>> {
        self.roots_in(&self.quad_field()?)
    }
}

impl fmt::Debug for FormClassCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms.iter().map(|q| q.to_expr_string()).collect();
        write!(
            f,
            "Cycle[p={}, D={}]{{{}}}",
            self.p,
            self.d,
            forms.join(", ")
        )
    }
}

/// The next simple form of the cycle.
pub fn cycle_step(q: &QuadraticForm) -> Result<QuadraticForm> {
    if !q.is_simple() {
        return Err(Error::InvalidArgument(format!("{q} is not simple")));
    }
    let (_, mv) = cfrac::cf_step(&q.root()?)?;
    q.act(&mv.matrix(q.field()))
}

/// The cycle through a simple hyperbolic form.
pub fn cycle_from_form(q: &QuadraticForm, budget: &Budget) -> Result<FormClassCycle> {
    if !is_hyperbolic_form(q, budget)? {
        return Err(Error::NotHyperbolic(
            q.to_expr_string(),
            "form is not the form of its root".into(),
        ));
    }
    if !q.is_simple() {
        return class_of_point(&q.root()?, budget);
    }
    let mut forms = vec![q.clone()];
    loop {
        let next = cycle_step(forms.last().unwrap())?;
        if next == forms[0] {
            return Ok(FormClassCycle::from_walk(forms));
        }
        if forms.len() >= budget.cf_steps {
            return Err(Error::BudgetExceeded(budget.cf_steps));
        }
        forms.push(next);
    }
}

/// The class cycle of the form attached to a hyperbolic point.
pub fn class_of_point(x: &QuadExtElement, budget: &Budget) -> Result<FormClassCycle> {
    let exp = cfrac::expansion(x, budget)?;
    let field = x.field().clone();
    let first = form_of_point(exp.first_periodic(), budget)?;
    let mut forms = vec![first];
    for mv in &exp.period[..exp.period.len() - 1] {
        let next = forms.last().unwrap().act(&mv.matrix(&field))?;
        forms.push(next);
    }
    Ok(FormClassCycle::from_walk(forms))
}

/// `-A`: the class of the negated forms, represented by the simple forms `[-C, B, -A]`.
pub fn negate_class(cycle: &FormClassCycle, budget: &Budget) -> Result<FormClassCycle> {
    let q = &cycle.forms[0];
    let start = QuadraticForm {
        a: -&q.c,
        b: q.b.clone(),
        c: -&q.a,
    };
    cycle_from_form(&start, budget)
}

/// Result of a bounded class search.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub p: u32,
    pub d: FieldElement,
    pub classes: Vec<FormClassCycle>,
    /// Candidate simple forms examined after the arithmetic filters.
    pub candidates: usize,
    /// Candidates whose hyperbolicity could not be decided within the step budget.
    pub undecided: usize,
    pub budget: Budget,
}

/// Hyperbolic class cycles of discriminant `D` found with the default budget.
pub fn enumerate_classes(p: i64, d: &FieldElement) -> Result<Vec<FormClassCycle>> {
    Ok(enumerate_classes_with(p, d, &Budget::default())?.classes)
}

/// Searches simple forms with coordinates in the budget box and groups the
/// hyperbolic ones into cycles.
///
/// A simple hyperbolic form is `Q_M = [c, d - a, -b]` for its automorph, so with
/// `tau = tr M` we have `D + 4 = tau^2`. Discriminants without such a `tau` in
/// `Z[lambda]`, and square discriminants, have no hyperbolic classes.
pub fn enumerate_classes_with(p: i64, d: &FieldElement, budget: &Budget) -> Result<Enumeration> {
    let field = make_field(p)?;
    if d.p() != field.p() {
        return Err(Error::FieldMismatch(field.p(), d.p()));
    }
    if d.sign() <= 0 {
        return Err(Error::NonPositiveRadicand(d.to_expr_string()));
    }
    let mut out = Enumeration {
        p: field.p(),
        d: d.clone(),
        classes: vec![],
        candidates: 0,
        undecided: 0,
        budget: *budget,
    };
    if !d.is_integral() || d.sqrt().is_some() {
        return Ok(out);
    }
    let Some(tau) = (d + &FieldElement::from_int(&field, 4))
        .sqrt()
        .map(|t| t.abs())
    else {
        return Ok(out);
    };
    let candidates = seed_candidates(&field, d, &tau, budget.coord_bound);
    out.candidates = candidates.len();

    let verdicts: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|q| is_hyperbolic_form(q, budget))
        .collect();
    let mut seen: HashSet<QuadraticForm> = HashSet::new();
    for (q, verdict) in candidates.iter().zip(verdicts) {
        match verdict {
            Ok(true) if !seen.contains(q) => {
                let cycle = cycle_from_form(q, budget)?;
                seen.extend(cycle.forms.iter().cloned());
                out.classes.push(cycle);
            }
            Ok(_) => {}
            Err(Error::BudgetExceeded(_)) => out.undecided += 1,
            Err(e) => return Err(e),
        }
    }
    out.classes
        .sort_by(|x, y| x.forms[0].cmp_canonical(&y.forms[0]));
    if out.classes.is_empty() && out.undecided > 0 {
        return Err(Error::BudgetExceeded(budget.cf_steps));
    }
    Ok(out)
}

fn box_points(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Simple forms `[A, B, (B^2 - D)/(4A)]` in the coordinate box passing the
/// parity and integrality conditions, sorted canonically.
fn seed_candidates(
    field: &Field,
    d: &FieldElement,
    tau: &FieldElement,
    bound: i64,
) -> Vec<QuadraticForm> {
    let n = field.degree();
    let points = box_points(n, bound);
    let lam = field.conjugates()[0];
    let approx = |v: &[i64]| v.iter().rev().fold(0.0, |acc, &c| acc * lam + c as f64);
    let sqrt_d = d.to_f64().sqrt();
    let tau_num: Vec<BigInt> = tau.numerators().to_vec();

    let bs: Vec<FieldElement> = points
        .iter()
        .filter(|v| approx(v).abs() < sqrt_d + 1e-9)
        .filter(|v| v.iter().zip(&tau_num).all(|(c, t)| (t - c).is_even()))
        .map(|v| FieldElement::from_int_coeffs(field, v))
        .filter(|b| (&(b * b) - d).sign() < 0)
        .collect();
    let as_: Vec<FieldElement> = points
        .iter()
        .filter(|v| approx(v) > -1e-9)
        .map(|v| FieldElement::from_int_coeffs(field, v))
        .filter(|a| a.sign() > 0)
        .collect();

    let four = FieldElement::from_int(field, 4);
    let two_inv = &FieldElement::from_int(field, 2)
        .inv()
        .expect("2 is invertible");
    let (four, bs, d) = (&four, &bs, d);
    let mut out: Vec<QuadraticForm> = as_
        .par_iter()
        .flat_map_iter(|a| {
            let inv = (four * a).inv().expect("A is nonzero");
            bs.iter().filter_map(move |b| {
                let c = &(&(b * b) - d) * &inv;
                let two_inv: &FieldElement = two_inv;
                if !c.is_integral() {
                    return None;
                }
                let q = QuadraticForm {
                    a: a.clone(),
                    b: b.clone(),
                    c,
                };
                // Shape test on the would-be automorph where membership is decidable.
                let m =
                    GroupElement::new(&(tau - b) * two_inv, -&q.c, a.clone(), &(tau + b) * two_inv)
                        .ok()?;
                (m.is_in_group() != Some(false)).then_some(q)
            })
        })
        .collect();
    out.sort_by(|x, y| x.cmp_canonical(y));
    out.dedup();
    out
}

/// A finite set of hyperbolic points over one quadratic extension, kept sorted
/// by real value.
#[derive(Clone, PartialEq, Eq)]
pub struct PoleSet {
    qf: Arc<QuadField>,
    elements: Vec<QuadExtElement>,
}

impl PoleSet {
    pub fn new(qf: &Arc<QuadField>, elements: Vec<QuadExtElement>) -> Result<Self> {
        let mut conv = Vec::with_capacity(elements.len());
        for x in elements {
            if **x.quad_field() != **qf {
                return Err(Error::RadicandMismatch(
                    x.radicand().to_expr_string(),
                    qf.radicand().to_expr_string(),
                ));
            }
            conv.push(x);
        }
        conv.sort_by(|x, y| x.cmp_value(y));
        conv.dedup();
        Ok(PoleSet {
            qf: qf.clone(),
            elements: conv,
        })
    }

    pub fn quad_field(&self) -> &Arc<QuadField> {
        &self.qf
    }

    pub fn elements(&self) -> &[QuadExtElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &QuadExtElement) -> bool {
        self.elements.contains(x)
    }

    /// `R' = {x' : x in R}`.
    pub fn conjugate(&self) -> Self {
        let els = self.elements.iter().map(|x| x.conjugate()).collect();
        PoleSet::new(&self.qf, els).expect("same extension")
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut els = self.elements.clone();
        els.extend(other.elements.iter().cloned());
        PoleSet::new(&self.qf, els)
    }

    pub fn is_hecke_symmetric(&self) -> bool {
        *self == self.conjugate()
    }
}

impl fmt::Debug for PoleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.elements.iter().map(|x| x.to_expr_string()))
            .finish()
    }
}

pub fn is_hecke_symmetric(r: &PoleSet) -> bool {
    r.is_hecke_symmetric()
}

/// `P_A = Z_A u T Z_A` over the extension `qf`.
pub fn isp_in(cycle: &FormClassCycle, qf: &Arc<QuadField>) -> Result<PoleSet> {
    let roots = cycle.roots_in(qf)?;
    let field = cycle.field();
    let t = GroupElement::t(field);
    let mut els = roots.clone();
    for x in &roots {
        els.push(t.apply(x).ok_or(Error::DivisionByZero)?);
    }
    PoleSet::new(qf, els)
}

pub fn isp(cycle: &FormClassCycle) -> Result<PoleSet> {
    isp_in(cycle, &cycle.quad_field()?)
}
