use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numfield::Scalar;

/// Dense univariate polynomial in `z`, ascending coefficients, no trailing zeros.
#[derive(Clone)]
pub struct Polynomial<T: Scalar> {
    ctx: T::Ctx,
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(ctx: &T::Ctx, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &T::Ctx) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            coeffs: vec![],
        }
    }

    pub fn one(ctx: &T::Ctx) -> Self {
        Self::constant(ctx, T::one_in(ctx))
    }

    pub fn constant(ctx: &T::Ctx, c: T) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `c z^n`.
    pub fn monomial(ctx: &T::Ctx, c: T, n: usize) -> Self {
        let mut v = vec![T::zero_in(ctx); n];
        v.push(c);
        Self::new(ctx, v)
    }

    /// `z - a`.
    pub fn linear_root(ctx: &T::Ctx, a: &T) -> Self {
        Self::new(ctx, vec![a.negated(), T::one_in(ctx)])
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| T::zero_in(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> T {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| T::zero_in(&self.ctx))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(&self.ctx, v)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(T::negated).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut v = vec![T::zero_in(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(&self.ctx, v)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division.
    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self)> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv_lead = other.lead().inverse()?;
        let mut rem = self.coeffs.clone();
        let dd = other.degree();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![T::zero_in(&self.ctx); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dd].times(&inv_lead);
            if !q.is_zero() {
                for (j, c) in other.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].minus(&q.times(c));
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(&self.ctx, quot), Self::new(&self.ctx, rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, other: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(other)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inverse().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&T::from_int(&self.ctx, i as i64)))
            .collect();
        Self::new(&self.ctx, v)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero_in(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// Coefficients of the expansion in powers of `(z - a)`, ascending.
    pub fn taylor_at(&self, a: &T, count: usize) -> Vec<T> {
        let mut cur = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if cur.is_empty() {
                out.push(T::zero_in(&self.ctx));
                continue;
            }
            // Synthetic division by (z - a): remainder is the next coefficient.
            let mut carry = T::zero_in(&self.ctx);
            let mut quot = vec![T::zero_in(&self.ctx); cur.len() - 1];
            for i in (0..cur.len()).rev() {
                carry = carry.times(a).plus(&cur[i]);
                if i > 0 {
                    quot[i - 1] = carry.clone();
                }
            }
            out.push(carry);
            cur = quot;
        }
        out
    }

    /// Multiplicity of `a` as a root, together with the cofactor.
    pub fn root_multiplicity(&self, a: &T) -> (usize, Self) {
        let lin = Self::linear_root(&self.ctx, a);
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() && cur.eval(a).is_zero() {
            cur = cur.exact_div(&lin).expect("linear divisor");
            m += 1;
        }
        (m, cur)
    }

    /// Yun's square-free decomposition: `self = lead * prod f_i^i`, returned as `(i, f_i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = df.exact_div(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((i, a.clone()));
            }
            b = b.exact_div(&a).unwrap();
            if b.degree() == 0 {
                break;
            }
            c = d.exact_div(&a).unwrap();
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn embed(&self, j: usize) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.embed(j)).collect()
    }

    pub fn map<U: Scalar>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(ctx, self.coeffs.iter().map(f).collect())
    }

    /// Text such as `z^2 - (L)*z - 3`.
    pub fn to_expr_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_expr_string();
            let neg = s.starts_with('-') && !s[1..].contains([' ']);
            if neg {
                s.remove(0);
            }
            let compound = s.contains(' ');
            let mon = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let body = match (mon.is_empty(), s == "1", compound) {
                (true, _, true) => format!("({s})"),
                (true, _, false) => s,
                (false, true, _) => mon,
                (false, false, true) => format!("({s})*{mon}"),
                (false, false, false) => format!("{s}*{mon}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl<T: Scalar> PartialEq for Polynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<T: Scalar> Eq for Polynomial<T> {}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_expr_string())
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}
