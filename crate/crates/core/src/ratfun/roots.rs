//! Pole location on the extended line.
//!
//! Roots of a square-free denominator factor are located numerically in every
//! complex embedding, lifted to exact coordinates by rational reconstruction
//! and kept only after an exact check. What cannot be lifted is reported as a
//! factor.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Polynomial, RationalFunction};
use crate::heckegroup::ExtendedPoint;
use crate::numfield::Scalar;

/// Cap on embedding-root combinations tried per factor.
const COMBINATION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedFactor<T: Scalar> {
    pub factor: Polynomial<T>,
    pub order: usize,
}

/// Poles with their orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleReport<T: Scalar> {
    /// Poles in the coefficient field, sorted by real value.
    pub finite: Vec<(T, usize)>,
    /// Order of the pole at infinity, if any.
    pub infinity: Option<usize>,
    /// Denominator factors whose roots lie outside the coefficient field.
    pub unresolved: Vec<UnresolvedFactor<T>>,
}

impl<T: Scalar> PoleReport<T> {
    pub fn points(&self) -> Vec<(ExtendedPoint<T>, usize)> {
        let mut out: Vec<_> = self
            .finite
            .iter()
            .map(|(x, m)| (ExtendedPoint::Finite(x.clone()), *m))
            .collect();
        if let Some(m) = self.infinity {
            out.push((ExtendedPoint::Infinity, m));
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

impl<T: Scalar> RationalFunction<T> {
    pub fn poles_extended(&self) -> PoleReport<T> {
        let infinity = (self.num.degree() > self.den.degree() && !self.num.is_zero())
            .then(|| self.num.degree() - self.den.degree());
        let mut finite = Vec::new();
        let mut unresolved = Vec::new();
        for (order, factor) in self.den.squarefree_decomposition() {
            let (roots, rest) = roots_in_field(&factor);
            finite.extend(roots.into_iter().map(|r| (r, order)));
            if rest.degree() > 0 {
                unresolved.push(UnresolvedFactor {
                    factor: rest,
                    order,
                });
            }
        }
        finite.sort_by(|a, b| a.0.minus(&b.0).sign().cmp(&0));
        PoleReport {
            finite,
            infinity,
            unresolved,
        }
    }
}

/// Roots of a square-free polynomial inside its coefficient field, and the cofactor left over.
pub fn roots_in_field<T: Scalar>(p: &Polynomial<T>) -> (Vec<T>, Polynomial<T>) {
    let ctx = p.ctx().clone();
    let mut rest = p.monic();
    let mut found = Vec::new();
    if rest.degree() == 0 {
        return (found, rest);
    }
    if rest.degree() == 1 {
        found.push(rest.coeff(0).negated());
        return (found, Polynomial::one(&ctx));
    }
    let dim = T::q_dimension(&ctx);
    let basis = T::basis_embeddings(&ctx);
    let Some(binv) = invert(&basis) else {
        return (found, rest);
    };
    let per_embedding: Vec<Vec<Complex64>> =
        (0..dim).map(|j| complex_roots(&rest.embed(j))).collect();
    let mut budget = COMBINATION_CAP;
    for r0 in &per_embedding[0] {
        if r0.im.abs() > 1e-6 * (1.0 + r0.re.abs()) {
            continue;
        }
        let mut chosen = vec![*r0];
        if let Some(x) = search(&rest, &per_embedding, &binv, &mut chosen, &mut budget) {
            rest = rest
                .exact_div(&Polynomial::linear_root(&ctx, &x))
                .expect("linear divisor");
            found.push(x);
            if rest.degree() == 0 {
                break;
            }
        }
    }
    (found, rest)
}

fn search<T: Scalar>(
    p: &Polynomial<T>,
    roots: &[Vec<Complex64>],
    binv: &[Vec<Complex64>],
    chosen: &mut Vec<Complex64>,
    budget: &mut usize,
) -> Option<T> {
    if *budget == 0 {
        return None;
    }
    let j = chosen.len();
    if j == roots.len() {
        *budget -= 1;
        let coords: Option<Vec<BigRational>> = binv
            .iter()
            .map(|row| {
                let v: Complex64 = row.iter().zip(chosen.iter()).map(|(a, b)| a * b).sum();
                if v.im.abs() > 1e-6 * (1.0 + v.re.abs()) {
                    None
                } else {
                    rationalize(v.re)
                }
            })
            .collect();
        let x = T::from_q_coords(p.ctx(), &coords?);
        return p.eval(&x).is_zero().then_some(x);
    }
    for r in &roots[j] {
        chosen.push(*r);
        let hit = search(p, roots, binv, chosen, budget);
        chosen.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Best rational approximation with modest denominator, if one is very close.
fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let tol = 1e-10 * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..60 {
        let a = r.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > 10_000 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h2), BigInt::from(k2)));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn invert(m: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let pv = a[col][col];
        for v in a[col].iter_mut() {
            *v /= pv;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Complex64::zero() {
                    let pr = a[col].clone();
                    for (v, w) in a[r].iter_mut().zip(pr) {
                        *v -= f * w;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots by the Aberth-Ehrlich iteration, then Newton polishing.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return vec![];
    }
    let lead = *c.last().unwrap();
    for x in c.iter_mut() {
        *x /= lead;
    }
    let n = c.len() - 1;
    if n == 1 {
        return vec![-c[0]];
    }
    let radius = (0..n)
        .map(|i| c[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zi);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z
}
