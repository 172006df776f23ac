//! A lambda-continued-fraction walk on hyperbolic points and the automorph it yields.
//!
//! The walk follows the tessellation of the upper half plane by translates of
//! the ideal `p`-gon with vertices `U^s(0)`. A point `x` is simple when
//! `x' < 0 < x`. For simple `x` in the arc `U^{s+1}(0) < x < U^s(0)` the step
//! is `x -> T U^{-s} x`, which is again simple; all other points are first
//! driven to a simple one. On simple points the step is a bijection of each
//! class cycle, so the orbit is eventually periodic and the product of the moves
//! over one period fixes the first periodic point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::heckegroup::GroupElement;
use crate::numfield::{Field, FieldElement, QuadExtElement};

/// One move of the walk: `x = move(x_next)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `S^r`
    Translate(BigInt),
    /// `U^s`
    U(u32),
    /// `U^s T`
    UT(u32),
    /// `T`
    T,
}

impl Move {
    pub fn matrix(&self, field: &Field) -> GroupElement {
        match self {
            Move::Translate(r) => {
                let (o, z) = (FieldElement::one(field), FieldElement::zero(field));
                let b = &FieldElement::lambda(field) * &FieldElement::from_int(field, r.clone());
                GroupElement::new(o.clone(), b, z, o).expect("translation is in the group")
            }
            Move::U(s) => GroupElement::u_power(field, *s as i64),
            Move::UT(s) => &GroupElement::u_power(field, *s as i64) * &GroupElement::t(field),
            Move::T => GroupElement::t(field),
        }
    }

    /// Word over `S, T, U` with exponents, e.g. `U^2T`.
    pub fn word(&self) -> String {
        match self {
            Move::Translate(r) if r.is_one() => "S".into(),
            Move::Translate(r) => format!("S^{r}"),
            Move::U(1) => "U".into(),
            Move::U(s) => format!("U^{s}"),
            Move::UT(1) => "UT".into(),
            Move::UT(s) => format!("U^{s}T"),
            Move::T => "T".into(),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Recorded data of the walk from a point to its periodic part.
#[derive(Debug, Clone)]
pub struct CfExpansion {
    pub point: QuadExtElement,
    pub preperiod: Vec<Move>,
    pub period: Vec<Move>,
    /// `orbit[0] = point` and `orbit[n] = moves[n](orbit[n + 1])`, where the moves
    /// are the preperiod followed by one period; the last entry equals the
    /// first periodic point.
    pub orbit: Vec<QuadExtElement>,
}

impl CfExpansion {
    /// The simple points visited by one period, starting at the first periodic one.
    pub fn period_points(&self) -> &[QuadExtElement] {
        let start = self.preperiod.len();
        &self.orbit[start..start + self.period.len()]
    }

    pub fn first_periodic(&self) -> &QuadExtElement {
        &self.orbit[self.preperiod.len()]
    }

    pub fn period_product(&self, field: &Field) -> GroupElement {
        product(&self.period, field)
    }

    pub fn preperiod_product(&self, field: &Field) -> GroupElement {
        product(&self.preperiod, field)
    }
}

fn product(moves: &[Move], field: &Field) -> GroupElement {
    moves.iter().fold(GroupElement::identity(field), |acc, m| {
        &acc * &m.matrix(field)
    })
}

/// Vertices `U^s(0)` for `s = 2..=p`, decreasing from lambda to 0.
pub(crate) fn vertices(field: &Field) -> Vec<FieldElement> {
    (2..=field.p() as i64)
        .map(|s| {
            crate::heckegroup::u_vertex(field, s)
                .finite()
                .expect("finite vertex")
                .clone()
        })
        .collect()
}

fn cmp_base(x: &QuadExtElement, v: &FieldElement) -> Ordering {
    x.cmp_value(&QuadExtElement::from_base(x.quad_field(), v))
}

/// The `s` in `1..p` with `U^{s+1}(0) < x < U^s(0)`, for `x > 0` not a vertex.
fn arc_index(x: &QuadExtElement, verts: &[FieldElement]) -> Result<u32> {
    for (i, v) in verts.iter().enumerate() {
        // verts[i] = U^{i+2}(0)
        match cmp_base(x, v) {
            Ordering::Greater => return Ok(i as u32 + 1),
            Ordering::Equal => return Err(not_hyperbolic(x, "lands on a cusp")),
            Ordering::Less => {}
        }
    }
    Err(not_hyperbolic(x, "is not positive"))
}

fn not_hyperbolic(x: &QuadExtElement, why: &str) -> Error {
    Error::NotHyperbolic(x.to_expr_string(), why.to_string())
}

fn ceil_quad(x: &QuadExtElement) -> BigInt {
    let qf = x.quad_field();
    let int =
        |n: &BigInt| QuadExtElement::from_base(qf, &FieldElement::from_int(qf.base(), n.clone()));
    let mut n = BigInt::from(x.to_f64().ceil().to_i64().unwrap_or(0));
    loop {
        if x.cmp_value(&int(&(&n - 1))) != Ordering::Greater {
            n -= 1;
        } else if x.cmp_value(&int(&n)) == Ordering::Greater {
            n += 1;
        } else {
            return n;
        }
    }
}

fn check_irrational(x: &QuadExtElement) -> Result<()> {
    if x.quad_field().is_split() || x.b().is_zero() {
        Err(not_hyperbolic(x, "lies in the base field"))
    } else {
        Ok(())
    }
}

fn step_with(x: &QuadExtElement, verts: &[FieldElement]) -> Result<(QuadExtElement, Move)> {
    check_irrational(x)?;
    let field = x.field().clone();
    let xc = x.conjugate();
    let (sx, sc) = (x.sign(), xc.sign());
    let mv = match (sx, sc) {
        (1, -1) => Move::UT(arc_index(x, verts)?),
        (-1, 1) | (-1, -1) => Move::T,
        (1, 1) => {
            let lambda = QuadExtElement::from_base(x.quad_field(), &FieldElement::lambda(&field));
            let m = if x.cmp_value(&xc) == Ordering::Less {
                x.clone()
            } else {
                xc.clone()
            };
            if m.cmp_value(&lambda) == Ordering::Greater {
                let q = &m * &lambda.inv()?;
                Move::Translate(ceil_quad(&q) - 1)
            } else {
                let (s, t) = (arc_index(x, verts)?, arc_index(&xc, verts)?);
                Move::U(if s == t { s } else { t })
            }
        }
        _ => return Err(not_hyperbolic(x, "has a zero conjugate")),
    };
    let next = mv
        .matrix(&field)
        .inverse()
        .apply(x)
        .ok_or_else(|| not_hyperbolic(x, "maps to infinity"))?;
    Ok((next, mv))
}

/// One step of the walk: returns `x_next` and the move with `x = move(x_next)`.
pub fn cf_step(x: &QuadExtElement) -> Result<(QuadExtElement, Move)> {
    step_with(x, &vertices(x.field()))
}

pub fn is_simple_point(x: &QuadExtElement) -> bool {
    x.sign() > 0 && x.conjugate().sign() < 0
}

fn height_bits(x: &QuadExtElement) -> u64 {
    [x.a(), x.b()]
        .into_iter()
        .flat_map(|e| {
            e.numerators()
                .iter()
                .chain(std::iter::once(e.denominator()))
        })
        .map(|n| n.bits())
        .max()
        .unwrap_or(0)
}

/// Walks from `alpha` until the first simple point recurs.
pub fn expansion(alpha: &QuadExtElement, budget: &Budget) -> Result<CfExpansion> {
    check_irrational(alpha)?;
    let verts = vertices(alpha.field());
    let mut orbit = vec![alpha.clone()];
    let mut moves = Vec::new();
    let mut first_simple: Option<usize> = None;
    let mut x = alpha.clone();
    let limit = budget.height_bits + 2 * height_bits(alpha);
    for _ in 0..budget.cf_steps {
        if first_simple.is_none() && is_simple_point(&x) {
            first_simple = Some(orbit.len() - 1);
        }
        let (next, mv) = step_with(&x, &verts)?;
        if height_bits(&next) > limit {
            return Err(Error::BudgetExceeded(budget.cf_steps));
        }
        moves.push(mv);
        orbit.push(next.clone());
        if let Some(i) = first_simple {
            if next == orbit[i] {
                let period = moves.split_off(i);
                return Ok(CfExpansion {
                    point: alpha.clone(),
                    preperiod: moves,
                    period,
                    orbit,
                });
            }
        }
        x = next;
    }
    Err(Error::BudgetExceeded(budget.cf_steps))
}

/// The primitive hyperbolic element with positive trace fixing `alpha` attractingly.
pub fn automorph(alpha: &QuadExtElement) -> Result<GroupElement> {
    automorph_with(alpha, &Budget::default())
}

pub fn automorph_with(alpha: &QuadExtElement, budget: &Budget) -> Result<GroupElement> {
    let exp = expansion(alpha, budget)?;
    let field = alpha.field().clone();
    let w = exp.preperiod_product(&field);
    let m = &(&w * &exp.period_product(&field)) * &w.inverse();
    if m.classify() != crate::heckegroup::ElementKind::Hyperbolic {
        return Err(not_hyperbolic(alpha, "period product is not hyperbolic"));
    }
    debug_assert_eq!(m.apply(alpha).as_ref(), Some(alpha));
    // Attracting at alpha iff |c alpha + d| > 1, i.e. (c alpha + d)^2 > 1.
    let qf = alpha.quad_field();
    let lift = |v: &FieldElement| QuadExtElement::from_base(qf, v);
    let j = &(&lift(m.c()) * alpha) + &lift(m.d());
    let attracting = (&(&j * &j) - &QuadExtElement::one(qf)).sign() > 0;
    Ok(if attracting { m } else { m.inverse() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{make_field, QuadField};

    fn quad(p: i64, d: i64, a: &[i64], b: &[i64], den: i64) -> QuadExtElement {
        let f = make_field(p).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, d)).unwrap();
        let inv = FieldElement::from_int(&f, den).inv().unwrap();
        QuadExtElement::new(
            &qf,
            &FieldElement::from_int_coeffs(&f, a) * &inv,
            &FieldElement::from_int_coeffs(&f, b) * &inv,
        )
    }

    fn mat(p: i64, e: [&[i64]; 4]) -> GroupElement {
        let f = make_field(p).unwrap();
        let g = |c: &[i64]| FieldElement::from_int_coeffs(&f, c);
        GroupElement::new(g(e[0]), g(e[1]), g(e[2]), g(e[3])).unwrap()
    }

    #[test]
    fn example_orbit_p4() {
        let a1 = quad(4, 14, &[0, 1], &[1], 2);
        let a2 = quad(4, 14, &[0, -1], &[1], 2);
        let exp = expansion(&a1, &Budget::default()).unwrap();
        assert!(exp.preperiod.is_empty());
        assert_eq!(exp.period_points(), &[a1.clone(), a2]);
        let b1 = quad(4, 14, &[0, 1], &[1], 6);
        assert_eq!(expansion(&b1, &Budget::default()).unwrap().period.len(), 2);
    }

    #[test]
    fn automorph_example() {
        let a1 = quad(4, 14, &[0, 1], &[1], 2);
        let m = automorph(&a1).unwrap();
        assert_eq!(m, mat(4, [&[0, 2], &[3], &[1], &[0, 1]]));
        assert_eq!(automorph(&a1.conjugate()).unwrap(), m.inverse());
    }

    #[test]
    fn golden_ratio_modular_group() {
        let phi = quad(3, 5, &[1], &[1], 2);
        let exp = expansion(&phi, &Budget::default()).unwrap();
        assert!(exp.preperiod.is_empty());
        assert_eq!(automorph(&phi).unwrap(), mat(3, [&[2], &[1], &[1], &[1]]));
    }

    #[test]
    fn orbit_replays() {
        // A non-simple start exercises the preperiod moves.
        let a1 = quad(4, 14, &[0, 1], &[1], 2);
        let w = GroupElement::from_word(a1.field(), "SSUTSuS").unwrap();
        let x = w.apply(&a1).unwrap();
        assert!(!is_simple_point(&x));
        let exp = expansion(&x, &Budget::default()).unwrap();
        let moves: Vec<&Move> = exp.preperiod.iter().chain(&exp.period).collect();
        assert_eq!(moves.len() + 1, exp.orbit.len());
        for (n, mv) in moves.iter().enumerate() {
            assert_eq!(
                mv.matrix(x.field()).apply(&exp.orbit[n + 1]).as_ref(),
                Some(&exp.orbit[n])
            );
        }
        assert!(is_simple_point(exp.first_periodic()));
        let m = automorph(&x).unwrap();
        assert_eq!(m.apply(&x), Some(x.clone()));
        assert!(m.trace().sign() > 0);
    }

    #[test]
    fn rejects_rational_points() {
        let f = make_field(4).unwrap();
        let qf = QuadField::new(FieldElement::from_int(&f, 2)).unwrap();
        let x = QuadExtElement::sqrt_d(&qf);
        assert!(matches!(cf_step(&x), Err(Error::NotHyperbolic(..))));
    }

    #[test]
    fn budget_is_enforced() {
        let a1 = quad(4, 14, &[0, 1], &[1], 2);
        let x = GroupElement::from_word(a1.field(), "SSSUTSuS")
            .unwrap()
            .apply(&a1)
            .unwrap();
        let tight = Budget {
            cf_steps: 2,
            ..Budget::default()
        };
        assert_eq!(expansion(&x, &tight).unwrap_err(), Error::BudgetExceeded(2));
    }
}
