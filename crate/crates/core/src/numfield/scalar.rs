//! The coefficient interface shared by `K` and `K(sqrt D)`, so polynomial and
//! rational-function code is written once.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{Field, FieldElement, QuadExtElement, QuadField};
use crate::error::Result;

pub trait Scalar:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Whatever is needed to build constants: the field or the extension.
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn same_ctx(a: &Self::Ctx, b: &Self::Ctx) -> bool;
    fn base_field(ctx: &Self::Ctx) -> Field;

    fn from_base(ctx: &Self::Ctx, x: &FieldElement) -> Self;
    fn zero_in(ctx: &Self::Ctx) -> Self {
        Self::from_base(ctx, &FieldElement::zero(&Self::base_field(ctx)))
    }
    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::from_base(ctx, &FieldElement::one(&Self::base_field(ctx)))
    }
    fn from_int(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_base(ctx, &FieldElement::from_int(&Self::base_field(ctx), v))
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn sign(&self) -> i8;

    /// Dimension over Q, which is also the number of complex embeddings.
    fn q_dimension(ctx: &Self::Ctx) -> usize;
    /// Value under the `j`-th complex embedding; index 0 is the canonical real one.
    fn embed(&self, j: usize) -> Complex64;
    /// `basis_embeddings(ctx)[j][i]` is embedding `j` of Q-basis vector `i`.
    fn basis_embeddings(ctx: &Self::Ctx) -> Vec<Vec<Complex64>>;
    fn q_coords(&self) -> Vec<BigRational>;
    fn from_q_coords(ctx: &Self::Ctx, coords: &[BigRational]) -> Self;
    fn to_expr_string(&self) -> String;
}

impl Scalar for FieldElement {
    type Ctx = Field;

    fn ctx(&self) -> Field {
        self.field().clone()
    }
    fn same_ctx(a: &Field, b: &Field) -> bool {
        a.p() == b.p()
    }
    fn base_field(ctx: &Field) -> Field {
        ctx.clone()
    }
    fn from_base(_ctx: &Field, x: &FieldElement) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn sign(&self) -> i8 {
        FieldElement::sign(self)
    }
    fn q_dimension(ctx: &Field) -> usize {
        ctx.degree()
    }
    fn embed(&self, j: usize) -> Complex64 {
        Complex64::new(FieldElement::embed(self, j), 0.0)
    }
    fn basis_embeddings(ctx: &Field) -> Vec<Vec<Complex64>> {
        let n = ctx.degree();
        ctx.conjugates()
            .iter()
            .map(|&x| {
                (0..n)
                    .map(|i| Complex64::new(x.powi(i as i32), 0.0))
                    .collect()
            })
            .collect()
    }
    fn q_coords(&self) -> Vec<BigRational> {
        self.coeffs()
    }
    fn from_q_coords(ctx: &Field, coords: &[BigRational]) -> Self {
        FieldElement::from_coeffs(ctx, coords)
    }
    fn to_expr_string(&self) -> String {
        FieldElement::to_expr_string(self)
    }
}

impl Scalar for QuadExtElement {
    type Ctx = Arc<QuadField>;

    fn ctx(&self) -> Arc<QuadField> {
        self.quad_field().clone()
    }
    fn same_ctx(a: &Arc<QuadField>, b: &Arc<QuadField>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
    fn base_field(ctx: &Arc<QuadField>) -> Field {
        ctx.base().clone()
    }
    fn from_base(ctx: &Arc<QuadField>, x: &FieldElement) -> Self {
        QuadExtElement::from_base(ctx, x)
    }
    fn is_zero(&self) -> bool {
        QuadExtElement::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.b().is_zero() && self.a().is_one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn sign(&self) -> i8 {
        QuadExtElement::sign(self)
    }
    fn q_dimension(ctx: &Arc<QuadField>) -> usize {
        let n = ctx.base().degree();
        if ctx.is_split() {
            n
        } else {
            2 * n
        }
    }
    fn embed(&self, j: usize) -> Complex64 {
        if self.quad_field().is_split() {
            return Complex64::new(self.a().embed(j), 0.0);
        }
        let (sigma, eps) = (j / 2, if j.is_multiple_of(2) { 1.0 } else { -1.0 });
        let root = Complex64::new(self.radicand().embed(sigma), 0.0).sqrt();
        Complex64::new(self.a().embed(sigma), 0.0) + root * (eps * self.b().embed(sigma))
    }
    fn basis_embeddings(ctx: &Arc<QuadField>) -> Vec<Vec<Complex64>> {
        let field = ctx.base();
        let base = <FieldElement as Scalar>::basis_embeddings(field);
        if ctx.is_split() {
            return base;
        }
        let mut out = Vec::new();
        for (sigma, row) in base.iter().enumerate() {
            let root = Complex64::new(ctx.radicand().embed(sigma), 0.0).sqrt();
            for eps in [1.0, -1.0] {
                let mut r = row.clone();
                r.extend(row.iter().map(|v| v * root * eps));
                out.push(r);
            }
        }
        out
    }
    fn q_coords(&self) -> Vec<BigRational> {
        let mut c = self.a().coeffs();
        if !self.quad_field().is_split() {
            c.extend(self.b().coeffs());
        }
        c
    }
    fn from_q_coords(ctx: &Arc<QuadField>, coords: &[BigRational]) -> Self {
        let field = ctx.base();
        let n = field.degree();
        let a = FieldElement::from_coeffs(field, &coords[..n]);
        if ctx.is_split() {
            return QuadExtElement::from_base(ctx, &a);
        }
        let b = FieldElement::from_coeffs(field, &coords[n..2 * n]);
        QuadExtElement::new(ctx, a, b)
    }
    fn to_expr_string(&self) -> String {
        QuadExtElement::to_expr_string(self)
    }
}
