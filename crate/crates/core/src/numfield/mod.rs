//! Exact arithmetic in `K = Q(lambda_p)`, `lambda_p = 2cos(pi/p)`, and in
//! quadratic extensions `K(sqrt D)`.

mod embedding;
mod minpoly;
mod quad;
mod scalar;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use embedding::Enclosure;
pub use quad::{QuadExtElement, QuadField};
pub use scalar::Scalar;

/// Everything that depends only on `p`.
#[derive(Debug)]
pub struct FieldDescriptor {
    p: u32,
    minpoly: Vec<BigInt>,
    /// Real conjugates `2cos(j pi/p)`, `j` odd and coprime to `p`; index 0 is lambda.
    conjugates: Vec<f64>,
    enclosure: Mutex<Enclosure>,
}

pub type Field = Arc<FieldDescriptor>;

/// Returns the (process-wide shared) descriptor for `Q(lambda_p)`.
pub fn make_field(p: i64) -> Result<Field> {
    if !(3..=10_000).contains(&p) {
        return Err(Error::InvalidIndex(p));
    }
    let p = p as u32;
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("field cache poisoned");
    let field = guard.entry(p).or_insert_with(|| {
        let minpoly = minpoly::lambda_minpoly(p);
        let conjugates: Vec<f64> = (1..p)
            .step_by(2)
            .filter(|j| j.gcd(&p) == 1)
            .map(|j| 2.0 * (std::f64::consts::PI * j as f64 / p as f64).cos())
            .collect();
        debug_assert_eq!(conjugates.len() + 1, minpoly.len());
        let enclosure = Enclosure::initial(&minpoly, conjugates[0]);
        Arc::new(FieldDescriptor {
            p,
            minpoly,
            conjugates,
            enclosure: Mutex::new(enclosure),
        })
    });
    Ok(field.clone())
}

impl FieldDescriptor {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Ascending coefficients of the monic minimal polynomial of lambda.
    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Floating-point values of all real conjugates of lambda; index 0 is the canonical one.
    pub fn conjugates(&self) -> &[f64] {
        &self.conjugates
    }

    /// Dyadic enclosure `[lo, hi] * 2^-prec` of lambda with at least `prec` bits.
    pub fn enclosure(&self, prec: u32) -> (u32, BigInt, BigInt) {
        let mut enc = self.enclosure.lock().expect("enclosure poisoned");
        enc.refine_to(&self.minpoly, prec);
        (enc.prec, enc.lo.clone(), enc.hi.clone())
    }
}

/// Element of `Q(lambda_p)`: `(sum num[i] lambda^i) / den` with `den > 0` and
/// `gcd(den, num...) = 1`.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    fn from_parts(field: &Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        let n = field.degree();
        if num.len() > n {
            reduce_mod(&mut num, &field.minpoly);
        }
        num.resize(n, BigInt::zero());
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        FieldElement {
            field: field.clone(),
            num,
            den,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, v: impl Into<BigInt>) -> Self {
        Self::from_parts(field, vec![v.into()], BigInt::one())
    }

    pub fn from_rational(field: &Field, r: &BigRational) -> Self {
        Self::from_parts(field, vec![r.numer().clone()], r.denom().clone())
    }

    /// `lambda` itself.
    pub fn lambda(field: &Field) -> Self {
        Self::from_parts(field, vec![BigInt::zero(), BigInt::one()], BigInt::one())
    }

    /// Builds an element from power-basis coordinates; longer vectors are reduced.
    pub fn from_coeffs(field: &Field, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(field, num, den)
    }

    pub fn from_int_coeffs(field: &Field, coeffs: &[i64]) -> Self {
        Self::from_parts(
            field,
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    /// Power-basis coordinates, length equal to the field degree.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Membership in `Z[lambda]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.p == other.field.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.p, other.field.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self, subtract: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { -other } else { other.clone() };
        }
        let (den, fa, fb) = if self.den == other.den {
            (self.den.clone(), BigInt::one(), BigInt::one())
        } else {
            let l = self.den.lcm(&other.den);
            let fa = &l / &self.den;
            let fb = &l / &other.den;
            (l, fa, fb)
        };
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if subtract {
                    a * &fa - b * &fb
                } else {
                    a * &fa + b * &fb
                }
            })
            .collect();
        Self::from_parts(&self.field, num, den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let n = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_parts(&self.field, prod, &self.den * &other.den)
    }

    /// Multiplicative inverse, by solving `x * y = 1` on the multiplication matrix.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        if n == 1 {
            return Ok(Self::from_parts(
                &self.field,
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        // Column j holds the coordinates of num * lambda^j.
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.num.clone();
        for _ in 0..n {
            cols.push(cur.clone());
            cur.insert(0, BigInt::zero());
            reduce_mod(&mut cur, &self.field.minpoly);
            cur.truncate(n);
        }
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(cols[j][i].clone()))
                    .collect();
                row.push(BigRational::from_integer(if i == 0 {
                    self.den.clone()
                } else {
                    BigInt::zero()
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !rows[r][col].is_zero())
                .expect("nonzero element has invertible matrix");
            rows.swap(col, pivot);
            let pv = rows[col][col].clone();
            for v in rows[col].iter_mut() {
                *v /= &pv;
            }
            for r in 0..n {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (v, pvv) in rows[r].iter_mut().zip(&pivot_row) {
                        *v -= &f * pvv;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = rows.into_iter().map(|mut r| r.pop().unwrap()).collect();
        Ok(Self::from_coeffs(&self.field, &sol))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
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

    /// Value under the `j`-th real embedding (floating point).
    pub fn embed(&self, j: usize) -> f64 {
        let x = self.field.conjugates[j];
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = 0.0;
        for c in self.num.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / den
    }

    /// Value under the canonical embedding (floating point).
    pub fn to_f64(&self) -> f64 {
        self.embed(0)
    }

    /// Exact sign under `lambda -> 2cos(pi/p)`.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.num.len() == 1 {
            return if self.num[0].is_positive() { 1 } else { -1 };
        }
        if let Some(s) = self.float_sign() {
            return s;
        }
        let mut prec = 64;
        loop {
            let (actual, lo, hi) = self.field.enclosure(prec);
            if let Some(s) = embedding::interval_sign(&self.num, actual, &lo, &hi) {
                return s;
            }
            prec = actual * 2;
        }
    }

    fn float_sign(&self) -> Option<i8> {
        if self.num.iter().any(|c| c.bits() > 900) {
            return None;
        }
        let x = self.field.conjugates[0];
        let (mut v, mut mag, mut xp) = (0.0f64, 0.0f64, 1.0f64);
        for c in &self.num {
            let cf = c.to_f64()?;
            v += cf * xp;
            mag += cf.abs() * xp;
            xp *= x;
        }
        let bound = mag * 1e-12;
        if v > bound {
            Some(1)
        } else if v < -bound {
            Some(-1)
        } else {
            None
        }
    }

    /// Exact order under the canonical embedding.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Smallest integer `n` with `n >= self` (exact).
    pub fn ceil(&self) -> BigInt {
        let guess = BigInt::from(self.to_f64().ceil() as i64);
        let mut n = guess;
        loop {
            let lower = FieldElement::from_int(&self.field, &n - 1);
            if self.cmp_value(&lower) != Ordering::Greater {
                n -= 1;
                continue;
            }
            let upper = FieldElement::from_int(&self.field, n.clone());
            if self.cmp_value(&upper) == Ordering::Greater {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Square root inside `K` when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // sqrt(num/den) = sqrt(num*den)/den, and num*den lies in Z[lambda],
        // which is integrally closed, so its root is integral too.
        let scaled: Vec<BigInt> = self.num.iter().map(|c| c * &self.den).collect();
        let root = embedding::integral_sqrt(&self.field, &scaled)?;
        Some(Self::from_parts(&self.field, root, self.den.clone()))
    }

    /// Compact text in the expression grammar, e.g. `3 - 2*L`.
    pub fn to_expr_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = match i {
                0 => String::new(),
                1 => "L".to_string(),
                _ => format!("L^{i}"),
            };
            if mon.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mon);
            } else {
                out.push_str(&format!("{mag}*{mon}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Reduce an ascending integer polynomial modulo a monic polynomial, in place.
fn reduce_mod(poly: &mut Vec<BigInt>, modulus: &[BigInt]) {
    let n = modulus.len() - 1;
    while poly.len() > n {
        let top = poly.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = poly.len() - n;
        for (j, m) in modulus[..n].iter().enumerate() {
            if !m.is_zero() {
                poly[shift + j] -= &top * m;
            }
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldElement[p={}]({})",
            self.field.p,
            self.to_expr_string()
        )
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

// Operator impls panic on mismatched fields; the `try_*` methods report it instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                assert_eq!(self.field.p, rhs.field.p, "field mismatch");
                $body(self, rhs)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &FieldElement, b: &FieldElement| a
    .add_unchecked(b, false));
binop!(Sub, sub, |a: &FieldElement, b: &FieldElement| a
    .add_unchecked(b, true));
binop!(Mul, mul, |a: &FieldElement, b: &FieldElement| a
    .mul_unchecked(b));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Parses a rational written as `a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.sign() == Sign::NoSign {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: i64, c: &[i64]) -> FieldElement {
        FieldElement::from_int_coeffs(&make_field(p).unwrap(), c)
    }

    #[test]
    fn rejects_small_index() {
        assert_eq!(make_field(2).unwrap_err(), Error::InvalidIndex(2));
    }

    #[test]
    fn lambda_squared() {
        let l = el(4, &[0, 1]);
        assert_eq!(&l * &l, el(4, &[2]));
        let l5 = el(5, &[0, 1]);
        assert_eq!(&(&l5 * &l5) - &l5, el(5, &[1]));
        let l3 = el(3, &[0, 1]);
        assert_eq!(l3, el(3, &[1]));
    }

    #[test]
    fn inverse_roundtrip() {
        for p in [4, 5, 7, 9] {
            let x = el(p, &[3, -2, 5]);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(el(4, &[0]).inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn signs() {
        assert_eq!(el(4, &[0]).sign(), 0);
        assert_eq!(el(4, &[-1, 1]).sign(), 1);
        assert_eq!(el(4, &[-4, 3]).sign(), 1);
        // 99/70 is a convergent of sqrt 2 from above: 70 sqrt2 - 99 < 0.
        assert_eq!(el(4, &[-99, 70]).sign(), -1);
        assert_eq!(el(4, &[-8119, 5741]).sign(), 1);
        // Huge Pell-type cancellation forces the exact interval path.
        let (mut a, mut b) = (BigInt::from(1), BigInt::from(1));
        for _ in 0..80 {
            let na = &a + BigInt::from(2) * &b;
            let nb = &a + &b;
            a = na;
            b = nb;
        }
        let f = make_field(4).unwrap();
        let x = FieldElement::from_parts(&f, vec![-a.clone(), b.clone()], BigInt::one());
        let expected = if (&a * &a - BigInt::from(2) * &b * &b).is_positive() {
            -1
        } else {
            1
        };
        assert_eq!(x.sign(), expected);
    }

    #[test]
    fn sqrt_detection() {
        let x = el(4, &[3, 2]); // (1 + sqrt2)^2
        assert_eq!(x.sqrt(), Some(el(4, &[1, 1])));
        assert_eq!(el(4, &[14]).sqrt(), None);
        assert_eq!(el(4, &[18]).sqrt(), Some(el(4, &[0, 3])));
        assert_eq!(el(3, &[9]).sqrt(), Some(el(3, &[3])));
        let y = el(7, &[1, -1, 2]);
        assert_eq!((&y * &y).sqrt().map(|s| s.abs()), Some(y.abs()));
        let quarter = FieldElement::from_rational(
            &make_field(5).unwrap(),
            &BigRational::new(9.into(), 4.into()),
        );
        assert_eq!(quarter.sqrt().unwrap().to_expr_string(), "3/2");
    }

    #[test]
    fn ceil_exact() {
        assert_eq!(el(4, &[0, 1]).ceil(), BigInt::from(2));
        assert_eq!(el(4, &[2]).ceil(), BigInt::from(2));
        assert_eq!(el(4, &[0, -1]).ceil(), BigInt::from(-1));
    }

    #[test]
    fn expr_string() {
        assert_eq!(el(4, &[3, -2]).to_expr_string(), "3 - 2*L");
        assert_eq!(el(7, &[0, -1, 1]).to_expr_string(), "-L + L^2");
        assert_eq!(el(4, &[0]).to_expr_string(), "0");
    }
}
