use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, FieldElement};
use crate::error::{Error, Result};

/// `K(sqrt D)` for a positive radicand `D`. When `D` happens to be a square
/// in `K` the extension is trivial and elements are kept with `b = 0`.
#[derive(Debug)]
pub struct QuadField {
    d: FieldElement,
    root: Option<FieldElement>,
}

impl QuadField {
    pub fn new(d: FieldElement) -> Result<Arc<QuadField>> {
        if d.sign() <= 0 {
            return Err(Error::NonPositiveRadicand(d.to_expr_string()));
        }
        let root = d.sqrt().map(|r| r.abs());
        Ok(Arc::new(QuadField { d, root }))
    }

    /// The split extension `D = 1`, used where no radical is needed.
    pub fn trivial(field: &Field) -> Arc<QuadField> {
        Self::new(FieldElement::one(field)).expect("1 is positive")
    }

    pub fn radicand(&self) -> &FieldElement {
        &self.d
    }

    pub fn base(&self) -> &Field {
        self.d.field()
    }

    /// True when `sqrt D` already lies in `K`.
    pub fn is_split(&self) -> bool {
        self.root.is_some()
    }
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for QuadField {}

/// `a + b sqrt D` with `sqrt D > 0` under the canonical embedding.
#[derive(Clone)]
pub struct QuadExtElement {
    qf: Arc<QuadField>,
    a: FieldElement,
    b: FieldElement,
}

impl QuadExtElement {
    pub fn new(qf: &Arc<QuadField>, a: FieldElement, b: FieldElement) -> Self {
        match &qf.root {
            Some(r) if !b.is_zero() => {
                let a = &a + &(&b * r);
                let zero = FieldElement::zero(a.field());
                QuadExtElement {
                    qf: qf.clone(),
                    a,
                    b: zero,
                }
            }
            _ => QuadExtElement {
                qf: qf.clone(),
                a,
                b,
            },
        }
    }

    pub fn from_base(qf: &Arc<QuadField>, a: &FieldElement) -> Self {
        QuadExtElement {
            qf: qf.clone(),
            a: a.clone(),
            b: FieldElement::zero(a.field()),
        }
    }

    pub fn zero(qf: &Arc<QuadField>) -> Self {
        Self::from_base(qf, &FieldElement::zero(qf.base()))
    }

    pub fn one(qf: &Arc<QuadField>) -> Self {
        Self::from_base(qf, &FieldElement::one(qf.base()))
    }

    pub fn sqrt_d(qf: &Arc<QuadField>) -> Self {
        Self::new(
            qf,
            FieldElement::zero(qf.base()),
            FieldElement::one(qf.base()),
        )
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn radicand(&self) -> &FieldElement {
        &self.qf.d
    }

    pub fn quad_field(&self) -> &Arc<QuadField> {
        &self.qf
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// The element of `K` this equals, if the radical part vanishes.
    pub fn as_base(&self) -> Option<&FieldElement> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadExtElement {
            qf: self.qf.clone(),
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// `a^2 - b^2 D`, the relative norm down to `K`.
    pub fn norm(&self) -> FieldElement {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.qf.d)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.a.p() != other.a.p() {
            return Err(Error::FieldMismatch(self.a.p(), other.a.p()));
        }
        if Arc::ptr_eq(&self.qf, &other.qf) || *self.qf == *other.qf {
            Ok(())
        } else {
            Err(Error::RadicandMismatch(
                self.qf.d.to_expr_string(),
                other.qf.d.to_expr_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        QuadExtElement {
            qf: self.qf.clone(),
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.b.is_zero() && other.b.is_zero() {
            return Self::from_base(&self.qf, &(&self.a * &other.a));
        }
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * &self.qf.d);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        QuadExtElement {
            qf: self.qf.clone(),
            a,
            b,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Self::from_base(&self.qf, &self.a.inv()?));
        }
        let n = self.norm().inv()?;
        Ok(QuadExtElement {
            qf: self.qf.clone(),
            a: &self.a * &n,
            b: -&(&self.b * &n),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.qf);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact sign under the canonical embedding with `sqrt D > 0`.
    pub fn sign(&self) -> i8 {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: the larger of |a| and |b| sqrt D wins.
        let diff = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.qf.d);
        match diff.sign() {
            1 => sa,
            -1 => sb,
            _ => 0,
        }
    }

    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        match (self - other).sign() {
            -1 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.qf.d.to_f64().sqrt()
    }

    /// Text in the expression grammar with `r` standing for `sqrt D`.
    pub fn to_expr_string(&self) -> String {
        let mut terms: Vec<(BigRational, String)> = Vec::new();
        for (i, c) in self.a.coeffs().into_iter().enumerate() {
            terms.push((c, monomial(i, false)));
        }
        for (i, c) in self.b.coeffs().into_iter().enumerate() {
            terms.push((c, monomial(i, true)));
        }
        format_terms(&terms)
    }
}

fn monomial(i: usize, radical: bool) -> String {
    let l = match i {
        0 => String::new(),
        1 => "L".to_string(),
        _ => format!("L^{i}"),
    };
    match (l.is_empty(), radical) {
        (true, true) => "r".to_string(),
        (false, true) => format!("{l}*r"),
        _ => l,
    }
}

pub(crate) fn format_terms(terms: &[(BigRational, String)]) -> String {
    let mut out = String::new();
    for (c, mon) in terms {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if mon.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(mon);
        } else {
            out.push_str(&format!("{mag}*{mon}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl PartialEq for QuadExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && *self.qf == *other.qf
    }
}

impl Eq for QuadExtElement {}

impl Hash for QuadExtElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Debug for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuadExt[p={}, D={}]({})",
            self.a.p(),
            self.qf.d,
            self.to_expr_string()
        )
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a QuadExtElement> for &'a QuadExtElement {
            type Output = QuadExtElement;
            fn $method(self, rhs: &'a QuadExtElement) -> QuadExtElement {
                if let Err(e) = self.check_same(rhs) {
                    panic!("{e}");
                }
                $body(self, rhs)
            }
        }
        impl $trait<QuadExtElement> for QuadExtElement {
            type Output = QuadExtElement;
            fn $method(self, rhs: QuadExtElement) -> QuadExtElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &QuadExtElement, b: &QuadExtElement| a
    .add_unchecked(b));
binop!(Sub, sub, |a: &QuadExtElement, b: &QuadExtElement| a
    .add_unchecked(&-b));
binop!(Mul, mul, |a: &QuadExtElement, b: &QuadExtElement| a
    .mul_unchecked(b));

impl Neg for &QuadExtElement {
    type Output = QuadExtElement;
    fn neg(self) -> QuadExtElement {
        QuadExtElement {
            qf: self.qf.clone(),
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for QuadExtElement {
    type Output = QuadExtElement;
    fn neg(self) -> QuadExtElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    fn setup() -> (Field, Arc<QuadField>) {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 14)).unwrap();
        (f, qf)
    }

    fn half(f: &Field, c: &[i64]) -> FieldElement {
        &FieldElement::from_int_coeffs(f, c) * &FieldElement::from_int(f, 2).inv().unwrap()
    }

    #[test]
    fn conjugate_and_sign() {
        let (f, qf) = setup();
        let alpha = QuadExtElement::new(&qf, half(&f, &[0, 1]), half(&f, &[1]));
        let conj = alpha.conjugate();
        assert_eq!(conj.b(), &half(&f, &[-1]));
        assert_eq!(conj.conjugate(), alpha);
        assert_eq!(alpha.sign(), 1);
        assert_eq!(conj.sign(), -1);
        assert_eq!(alpha.to_expr_string(), "1/2*L + 1/2*r");
    }

    #[test]
    fn inverse_and_identity() {
        let (f, qf) = setup();
        let x = QuadExtElement::new(
            &qf,
            FieldElement::from_int_coeffs(&f, &[1, 3]),
            FieldElement::from_int(&f, -2),
        );
        assert_eq!(&x * &QuadExtElement::one(&qf), x);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, QuadExtElement::one(&qf));
        let r = QuadExtElement::sqrt_d(&qf);
        assert_eq!((&r * &r).as_base(), Some(&FieldElement::from_int(&f, 14)));
    }

    #[test]
    fn radicand_checks() {
        let (f, qf) = setup();
        assert!(QuadField::new(FieldElement::from_int(&f, -3)).is_err());
        let other = QuadField::new(FieldElement::from_int(&f, 3)).unwrap();
        let x = QuadExtElement::sqrt_d(&qf);
        let y = QuadExtElement::sqrt_d(&other);
        assert!(matches!(x.try_add(&y), Err(Error::RadicandMismatch(..))));
    }

    #[test]
    fn split_extension_collapses() {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 8)).unwrap();
        assert!(qf.is_split());
        let r = QuadExtElement::sqrt_d(&qf);
        assert_eq!(
            r.as_base(),
            Some(&FieldElement::from_int_coeffs(&f, &[0, 2]))
        );
    }
}
