//! Exact rational functions in `z` over `K` or `K(sqrt D)`, the weight-`2k`
//! slash operator, principal parts and pole reports.

mod parse;
mod poly;
mod roots;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::heckegroup::GroupElement;
use crate::numfield::{FieldElement, QuadExtElement, QuadField, Scalar};

pub use parse::{parse_expression, parse_field_element, parse_quad, ParsedExpression};
pub use poly::Polynomial;
pub use roots::{complex_roots, PoleReport, UnresolvedFactor};

/// `num / den` with `gcd(num, den) = 1` and `den` monic; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction<T: Scalar> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        } else {
            (num, den)
        };
        Ok(Self::normalized(num, den))
    }

    /// Assumes coprime input; only fixes the leading coefficient of `den`.
    fn normalized(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        if num.is_zero() {
            return Self::zero(den.ctx());
        }
        let lead = den.lead();
        if lead.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lead.inverse().expect("nonzero denominator");
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        let one = Polynomial::one(p.ctx());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(ctx: &T::Ctx) -> Self {
        Self::from_poly(Polynomial::zero(ctx))
    }

    pub fn constant(ctx: &T::Ctx, c: T) -> Self {
        Self::from_poly(Polynomial::constant(ctx, c))
    }

    /// `c z^n` for any integer `n`.
    pub fn monomial(ctx: &T::Ctx, c: T, n: i64) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        if n >= 0 {
            Self::from_poly(Polynomial::monomial(ctx, c, n as usize))
        } else {
            RationalFunction {
                num: Polynomial::constant(ctx, c),
                den: Polynomial::monomial(ctx, T::one_in(ctx), n.unsigned_abs() as usize),
            }
        }
    }

    pub fn ctx(&self) -> &T::Ctx {
        self.num.ctx()
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Henrici's addition: only the common factor of the denominators can cancel.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&other.den);
        if g.degree() == 0 {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Self::normalized(num, self.den.mul(&other.den));
        }
        let b1 = self.den.exact_div(&g).unwrap();
        let d1 = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero(self.ctx());
        }
        let den = b1.mul(&other.den);
        let h = num.gcd(&g);
        if h.degree() == 0 {
            Self::normalized(num, den)
        } else {
            Self::normalized(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx());
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let q = |a: &Polynomial<T>, g: &Polynomial<T>| {
            if g.degree() == 0 {
                a.clone()
            } else {
                a.exact_div(g).unwrap()
            }
        };
        let num = q(&self.num, &g1).mul(&q(&other.num, &g2));
        let den = q(&self.den, &g2).mul(&q(&other.den, &g1));
        Self::normalized(num, den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Non-negative powers stay reduced without a gcd.
    pub fn pow(&self, n: u32) -> Self {
        Self::normalized(self.num.pow(n), self.den.pow(n))
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x).times(&d.inverse().ok()?))
    }

    /// `(f | M)(z) = (cz + d)^{-2k} f(Mz)`.
    ///
    /// With `X = az + b`, `Y = cz + d` and homogenizations `N_h`, `D_h` of the
    /// numerator and denominator, `f | M = N_h Y^{deg D - deg N - 2k} / D_h`.
    /// Neither `N_h` nor `D_h` shares a root with `Y` or with each other, so the
    /// result needs no gcd.
    pub fn slash(&self, m: &GroupElement, k: u32) -> Self {
        let ctx = self.ctx();
        if self.is_zero() {
            return self.clone();
        }
        let lift = |x: &FieldElement| T::from_base(ctx, x);
        let [a, b, c, d] = m.entries();
        let x = Polynomial::new(ctx, vec![lift(b), lift(a)]);
        let y = Polynomial::new(ctx, vec![lift(d), lift(c)]);
        let (n, dd) = (self.num.degree(), self.den.degree());
        let mut ypow = vec![Polynomial::one(ctx)];
        for i in 1..=n.max(dd) {
            let next = ypow[i - 1].mul(&y);
            ypow.push(next);
        }
        let homog = |p: &Polynomial<T>| {
            let deg = p.degree();
            let mut h = Polynomial::constant(ctx, p.lead());
            for i in (0..deg).rev() {
                h = h.mul(&x).add(&ypow[deg - i].scale(&p.coeff(i)));
            }
            h
        };
        let (nh, dh) = (homog(&self.num), homog(&self.den));
        let e = dd as i64 - n as i64 - 2 * k as i64;
        if e >= 0 {
            Self::normalized(nh.mul(&y.pow(e as u32)), dh)
        } else {
            Self::normalized(nh, dh.mul(&y.pow((-e) as u32)))
        }
    }

    /// The principal part at `a`; empty when `a` is not a pole.
    pub fn pp_at(&self, a: &T) -> Result<PrincipalPart<T>> {
        let (m, cof) = self.den.root_multiplicity(a);
        let ctx = self.ctx();
        if m == 0 {
            return Ok(PrincipalPart {
                point: a.clone(),
                coeffs: vec![],
            });
        }
        let nt = self.num.taylor_at(a, m);
        let et = cof.taylor_at(a, m);
        let e0_inv = et[0].inverse()?;
        let mut g: Vec<T> = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = nt[j].clone();
            for l in 1..=j {
                acc = acc.minus(&et[l].times(&g[j - l]));
            }
            g.push(acc.times(&e0_inv));
        }
        // c_i multiplies (z - a)^{-i} and equals g_{m - i}.
        let coeffs: Vec<T> = (1..=m).map(|i| g[m - i].clone()).collect();
        let _ = ctx;
        Ok(PrincipalPart {
            point: a.clone(),
            coeffs,
        })
    }

    pub fn map<U: Scalar>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> RationalFunction<U> {
        RationalFunction::normalized(self.num.map(ctx, &f), self.den.map(ctx, &f))
    }

    pub fn to_expr_string(&self) -> String {
        if self.den.is_one() {
            return self.num.to_expr_string();
        }
        format!(
            "({})/({})",
            self.num.to_expr_string(),
            self.den.to_expr_string()
        )
    }
}

impl<T: Scalar> fmt::Debug for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.to_expr_string())
    }
}

impl<T: Scalar> fmt::Display for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

/// Exact sum of several functions.
pub fn sum<T: Scalar>(ctx: &T::Ctx, terms: &[RationalFunction<T>]) -> RationalFunction<T> {
    terms
        .iter()
        .fold(RationalFunction::zero(ctx), |acc, t| acc.add(t))
}

/// Decides whether `sum terms` vanishes identically without forming the sum.
///
/// The numerator of the sum over the product of the denominators has degree at
/// most `B = max_i (deg N_i + sum_{j != i} deg D_j)`, so vanishing at `B + 1`
/// points where every denominator is nonzero proves it is zero.
pub fn sum_is_zero<T: Scalar>(ctx: &T::Ctx, terms: &[RationalFunction<T>]) -> bool {
    let live: Vec<&RationalFunction<T>> = terms.iter().filter(|t| !t.is_zero()).collect();
    if live.is_empty() {
        return true;
    }
    let total_den: usize = live.iter().map(|t| t.den.degree()).sum();
    let bound = live
        .iter()
        .map(|t| t.num.degree() + total_den - t.den.degree())
        .max()
        .unwrap();
    let mut needed = bound + 1;
    let mut z = 0i64;
    while needed > 0 {
        let x = T::from_int(ctx, z);
        z += 1;
        let mut acc = T::zero_in(ctx);
        let mut pole = false;
        for t in &live {
            match t.eval(&x) {
                Some(v) => acc = acc.plus(&v),
                None => {
                    pole = true;
                    break;
                }
            }
        }
        if pole {
            continue;
        }
        if !acc.is_zero() {
            return false;
        }
        needed -= 1;
    }
    true
}

/// `sum_{i=1}^m c_i (z - point)^{-i}` with `c_m != 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct PrincipalPart<T: Scalar> {
    pub point: T,
    /// `coeffs[i - 1] = c_i`.
    pub coeffs: Vec<T>,
}

impl<T: Scalar> PrincipalPart<T> {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_rational(&self) -> RationalFunction<T> {
        let ctx = self.point.ctx();
        let m = self.coeffs.len();
        if m == 0 {
            return RationalFunction::zero(&ctx);
        }
        let lin = Polynomial::linear_root(&ctx, &self.point);
        // sum c_i (z - a)^{m - i} over (z - a)^m
        let mut num = Polynomial::zero(&ctx);
        for c in self.coeffs.iter() {
            num = num.mul(&lin).add(&Polynomial::constant(&ctx, c.clone()));
        }
        RationalFunction::new(num, lin.pow(m as u32)).expect("nonzero denominator")
    }
}

impl<T: Scalar> fmt::Debug for PrincipalPart<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_expr_string()).collect();
        write!(f, "PP[{}]({})", self.point.to_expr_string(), cs.join(", "))
    }
}

pub fn promote_poly(
    p: &Polynomial<FieldElement>,
    qf: &Arc<QuadField>,
) -> Polynomial<QuadExtElement> {
    p.map(qf, |c| QuadExtElement::from_base(qf, c))
}

pub fn promote(
    f: &RationalFunction<FieldElement>,
    qf: &Arc<QuadField>,
) -> RationalFunction<QuadExtElement> {
    f.map(qf, |c| QuadExtElement::from_base(qf, c))
}

/// Drops back to `K` when every coefficient has zero radical part.
pub fn demote(f: &RationalFunction<QuadExtElement>) -> Option<RationalFunction<FieldElement>> {
    let field = QuadExtElement::base_field(f.ctx());
    let down = |p: &Polynomial<QuadExtElement>| -> Option<Polynomial<FieldElement>> {
        let cs: Option<Vec<FieldElement>> =
            p.coeffs().iter().map(|c| c.as_base().cloned()).collect();
        Some(Polynomial::new(&field, cs?))
    };
    Some(RationalFunction::normalized(down(&f.num)?, down(&f.den)?))
}
