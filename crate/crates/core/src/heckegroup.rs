//! The Hecke group `G_p = <S, T>` as determinant-one matrices over `Z[lambda]`
//! modulo `+-I`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numfield::{make_field, Field, FieldElement, Scalar};

/// Matrix `[[a, b], [c, d]]` in normal form: the first nonzero of
/// `(a + d, c, b)` is positive, so equality in PSL is plain equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A point of `F u {oo}` for a coefficient field `F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedPoint<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> ExtendedPoint<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtendedPoint::Finite(x) => Some(x),
            ExtendedPoint::Infinity => None,
        }
    }
}

impl<T: Scalar> fmt::Display for ExtendedPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::Finite(x) => write!(f, "{x}"),
            ExtendedPoint::Infinity => f.write_str("oo"),
        }
    }
}

impl GroupElement {
    /// Checks integrality and determinant, then normalizes the sign.
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let p = a.p();
        for x in [&b, &c, &d] {
            if x.p() != p {
                return Err(Error::FieldMismatch(p, x.p()));
            }
        }
        for x in [&a, &b, &c, &d] {
            if !x.is_integral() {
                return Err(Error::NotIntegral(x.to_expr_string()));
            }
        }
        let det = &(&a * &d) - &(&b * &c);
        if !det.is_one() {
            return Err(Error::BadDeterminant(det.to_expr_string()));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        let tr = &a + &d;
        let s = match tr.sign() {
            0 => match c.sign() {
                0 => b.sign(),
                s => s,
            },
            s => s,
        };
        if s < 0 {
            GroupElement {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            GroupElement { a, b, c, d }
        }
    }

    pub fn identity(field: &Field) -> Self {
        let (o, z) = (FieldElement::one(field), FieldElement::zero(field));
        GroupElement {
            a: o.clone(),
            b: z.clone(),
            c: z,
            d: o,
        }
    }

    /// `S = [[1, lambda], [0, 1]]`.
    pub fn s(field: &Field) -> Self {
        let (o, z) = (FieldElement::one(field), FieldElement::zero(field));
        GroupElement {
            a: o.clone(),
            b: FieldElement::lambda(field),
            c: z,
            d: o,
        }
    }

    /// `T = [[0, -1], [1, 0]]`.
    pub fn t(field: &Field) -> Self {
        let (o, z) = (FieldElement::one(field), FieldElement::zero(field));
        Self::normalized(z.clone(), -&o, o, z)
    }

    /// `U = S T = [[lambda, -1], [1, 0]]`.
    pub fn u(field: &Field) -> Self {
        Self::u_power(field, 1)
    }

    /// `U^t = [[g(t+1), -g(t)], [g(t), -g(t-1)]]` with `g(0) = 0`, `g(1) = 1`,
    /// `g(t+1) = lambda g(t) - g(t-1)`; `g` has period `2p`.
    pub fn u_power(field: &Field, t: i64) -> Self {
        let gamma = gammas(field);
        let period = 2 * field.p() as i64;
        let g = |i: i64| gamma[i.rem_euclid(period) as usize].clone();
        Self::normalized(g(t + 1), -g(t), g(t), -g(t - 1))
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
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
    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::FieldMismatch(self.p(), other.p()));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let a = &(&self.a * &o.a) + &(&self.b * &o.c);
        let b = &(&self.a * &o.b) + &(&self.b * &o.d);
        let c = &(&self.c * &o.a) + &(&self.d * &o.c);
        let d = &(&self.c * &o.b) + &(&self.d * &o.d);
        debug_assert!((&(&a * &d) - &(&b * &c)).is_one());
        Self::normalized(a, b, c, d)
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.field());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    pub fn classify(&self) -> ElementKind {
        if self.is_identity() {
            return ElementKind::Identity;
        }
        let tr = self.trace();
        match (&(&tr * &tr) - &FieldElement::from_int(self.field(), 4)).sign() {
            1 => ElementKind::Hyperbolic,
            0 => ElementKind::Parabolic,
            _ => ElementKind::Elliptic,
        }
    }

    /// Moebius action `z -> (az + b)/(cz + d)` on the extended line.
    pub fn mobius<T: Scalar>(&self, z: &ExtendedPoint<T>, ctx: &T::Ctx) -> ExtendedPoint<T> {
        let lift = |x: &FieldElement| T::from_base(ctx, x);
        match z {
            ExtendedPoint::Infinity => {
                if self.c.is_zero() {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::Finite(
                        lift(&self.a).times(&lift(&self.c).inverse().expect("c nonzero")),
                    )
                }
            }
            ExtendedPoint::Finite(x) => {
                let den = lift(&self.c).times(x).plus(&lift(&self.d));
                if den.is_zero() {
                    return ExtendedPoint::Infinity;
                }
                let num = lift(&self.a).times(x).plus(&lift(&self.b));
                ExtendedPoint::Finite(num.times(&den.inverse().expect("den nonzero")))
            }
        }
    }

    /// Moebius action on a finite point that is known not to hit the pole.
    pub fn apply<T: Scalar>(&self, x: &T) -> Option<T> {
        let ctx = x.ctx();
        match self.mobius(&ExtendedPoint::Finite(x.clone()), &ctx) {
            ExtendedPoint::Finite(y) => Some(y),
            ExtendedPoint::Infinity => None,
        }
    }

    /// Evaluates a word over `S, s, T, t, U, u` (lowercase = inverse).
    pub fn from_word(field: &Field, word: &str) -> Result<Self> {
        let mut acc = Self::identity(field);
        for ch in word.chars().filter(|c| !c.is_whitespace()) {
            let g = match ch {
                'S' => Self::s(field),
                's' => Self::s(field).inverse(),
                'T' | 't' => Self::t(field),
                'U' => Self::u(field),
                'u' => Self::u_power(field, -1),
                'I' => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "unexpected letter {ch:?} in group word"
                    )))
                }
            };
            acc = acc.mul_unchecked(&g);
        }
        Ok(acc)
    }

    /// Membership in `G_p` where it is decidable by shape: `p = 3` (the modular
    /// group), `p = 4, 6` (lambda is `sqrt 2`, `sqrt 3`). `None` elsewhere.
    pub fn is_in_group(&self) -> Option<bool> {
        match self.p() {
            3 => Some(true),
            4 | 6 => {
                let rational =
                    |x: &FieldElement| x.numerators()[1].sign() == num_bigint::Sign::NoSign;
                let pure = |x: &FieldElement| x.numerators()[0].sign() == num_bigint::Sign::NoSign;
                let diag = rational(&self.a) && rational(&self.d) && pure(&self.b) && pure(&self.c);
                let anti = pure(&self.a) && pure(&self.d) && rational(&self.b) && rational(&self.c);
                Some(diag || anti)
            }
            _ => None,
        }
    }

    pub fn to_expr_string(&self) -> String {
        format!("[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn gammas(field: &Field) -> Vec<FieldElement> {
    let n = 2 * field.p() as usize;
    let l = FieldElement::lambda(field);
    let mut g = vec![FieldElement::zero(field), FieldElement::one(field)];
    while g.len() < n {
        let m = g.len();
        let next = &(&l * &g[m - 1]) - &g[m - 2];
        g.push(next);
    }
    g
}

/// `(S, T, U)` for `G_p`.
pub fn generators(p: i64) -> Result<(GroupElement, GroupElement, GroupElement)> {
    let f = make_field(p)?;
    Ok((
        GroupElement::s(&f),
        GroupElement::t(&f),
        GroupElement::u(&f),
    ))
}

/// The vertex `U^s(0)`; `s = 1` gives infinity.
pub fn u_vertex(field: &Field, s: i64) -> ExtendedPoint<FieldElement> {
    let z = ExtendedPoint::Finite(FieldElement::zero(field));
    GroupElement::u_power(field, s).mobius(&z, field)
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.p(), rhs.p(), "field mismatch");
        self.mul_unchecked(rhs)
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement[p={}]{}", self.p(), self.to_expr_string())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{QuadExtElement, QuadField};

    fn fe(f: &Field, c: &[i64]) -> FieldElement {
        FieldElement::from_int_coeffs(f, c)
    }

    fn mat(f: &Field, e: [&[i64]; 4]) -> GroupElement {
        GroupElement::new(fe(f, e[0]), fe(f, e[1]), fe(f, e[2]), fe(f, e[3])).unwrap()
    }

    #[test]
    fn generator_shapes() {
        let f = make_field(4).unwrap();
        let (s, t, u) = generators(4).unwrap();
        assert_eq!(u, mat(&f, [&[0, 1], &[-1], &[1], &[0]]));
        assert_eq!(&s * &t, u);
        assert!((&t * &t).is_identity());
        let f3 = make_field(3).unwrap();
        assert_eq!(GroupElement::s(&f3), mat(&f3, [&[1], &[1], &[0], &[1]]));
    }

    #[test]
    fn relations_for_many_p() {
        for p in 3..=12 {
            let f = make_field(p).unwrap();
            assert!(GroupElement::u(&f).pow(p).is_identity(), "p = {p}");
            assert!(GroupElement::u_power(&f, p).is_identity());
            assert!(GroupElement::t(&f).pow(2).is_identity());
            for s in -7..7 {
                for t in -7..7 {
                    assert_eq!(
                        GroupElement::u_power(&f, s + t),
                        &GroupElement::u_power(&f, s) * &GroupElement::u_power(&f, t)
                    );
                }
            }
        }
    }

    #[test]
    fn u_squared_p4() {
        let f = make_field(4).unwrap();
        let u2 = mat(&f, [&[1], &[0, -1], &[0, 1], &[-1]]);
        assert_eq!(&GroupElement::u(&f) * &GroupElement::u(&f), u2);
        assert_eq!(GroupElement::u_power(&f, 2), u2);
    }

    #[test]
    fn gamma_boundary_values() {
        for p in 3..=12 {
            let f = make_field(p).unwrap();
            let g = gammas(&f);
            assert!(g[p as usize].is_zero());
            assert!(g[p as usize - 1].is_one());
        }
    }

    #[test]
    fn classification() {
        let f = make_field(4).unwrap();
        assert_eq!(GroupElement::t(&f).classify(), ElementKind::Elliptic);
        assert_eq!(GroupElement::s(&f).classify(), ElementKind::Parabolic);
        assert_eq!(GroupElement::identity(&f).classify(), ElementKind::Identity);
        let m = mat(&f, [&[0, 2], &[3], &[1], &[0, 1]]);
        assert_eq!(m.classify(), ElementKind::Hyperbolic);
    }

    #[test]
    fn rejects_bad_matrices() {
        let f = make_field(4).unwrap();
        assert!(matches!(
            GroupElement::new(fe(&f, &[2]), fe(&f, &[0]), fe(&f, &[0]), fe(&f, &[1])),
            Err(Error::BadDeterminant(_))
        ));
        let half = FieldElement::from_int(&f, 2).inv().unwrap();
        assert!(matches!(
            GroupElement::new(half, fe(&f, &[0]), fe(&f, &[0]), fe(&f, &[2])),
            Err(Error::NotIntegral(_))
        ));
    }

    #[test]
    fn mobius_conventions() {
        let f = make_field(4).unwrap();
        let t = GroupElement::t(&f);
        let zero = ExtendedPoint::Finite(FieldElement::zero(&f));
        assert_eq!(t.mobius(&zero, &f), ExtendedPoint::Infinity);
        // U^{p-t+1}(0) = 1/U^t(0) with p = 4, t = 2.
        let v2 = u_vertex(&f, 2);
        let v3 = u_vertex(&f, 3);
        let (ExtendedPoint::Finite(x2), ExtendedPoint::Finite(x3)) = (v2, v3) else {
            panic!()
        };
        assert!((&x2 * &x3).is_one());
        assert_eq!(u_vertex(&f, 1), ExtendedPoint::Infinity);
        assert!(u_vertex(&f, 4).finite().unwrap().is_zero());
    }

    #[test]
    fn automorph_fixes_alpha() {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(fe(&f, &[14])).unwrap();
        let half = FieldElement::from_int(&f, 2).inv().unwrap();
        let alpha = QuadExtElement::new(&qf, &fe(&f, &[0, 1]) * &half, half.clone());
        let m = mat(&f, [&[0, 2], &[3], &[1], &[0, 1]]);
        assert_eq!(m.apply(&alpha), Some(alpha));
    }

    #[test]
    fn words() {
        let f = make_field(5).unwrap();
        let w = GroupElement::from_word(&f, "USUt").unwrap();
        let u = GroupElement::u(&f);
        let s = GroupElement::s(&f);
        let t = GroupElement::t(&f);
        assert_eq!(w, &(&(&u * &s) * &u) * &t);
        assert!(GroupElement::from_word(&f, "SsUu").unwrap().is_identity());
        assert!(GroupElement::from_word(&f, "SX").is_err());
    }

    #[test]
    fn membership_shapes() {
        let f = make_field(4).unwrap();
        assert_eq!(
            mat(&f, [&[0, 2], &[3], &[1], &[0, 1]]).is_in_group(),
            Some(true)
        );
        assert_eq!(
            GroupElement::from_word(&f, "SUStU").unwrap().is_in_group(),
            Some(true)
        );
        assert_eq!(mat(&f, [&[1], &[1], &[0], &[1]]).is_in_group(), Some(false));
        let f5 = make_field(5).unwrap();
        assert_eq!(GroupElement::s(&f5).is_in_group(), None);
    }
}
