//! Real embeddings: a dyadic enclosure of lambda for exact sign decisions and
//! floating-point conjugates for candidate generation.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, Zero};

use super::{FieldDescriptor, FieldElement};

/// `lo * 2^-prec < lambda < hi * 2^-prec`.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub prec: u32,
    pub lo: BigInt,
    pub hi: BigInt,
}

/// `2^(prec * deg) * f(a / 2^prec)`, an integer.
fn scaled_eval(minpoly: &[BigInt], a: &BigInt, prec: u32) -> BigInt {
    let n = minpoly.len() - 1;
    let mut acc = minpoly[n].clone();
    for i in (0..n).rev() {
        acc = acc * a + (&minpoly[i] << (prec as usize * (n - i)));
    }
    acc
}

impl Enclosure {
    pub(super) fn initial(minpoly: &[BigInt], approx: f64) -> Self {
        let prec = 64;
        let scale = 2f64.powi(prec as i32);
        if minpoly.len() == 2 {
            // lambda = 1 exactly
            let one = BigInt::from(1) << prec;
            return Enclosure {
                prec,
                lo: &one - 1,
                hi: one + 1,
            };
        }
        let mut margin = 1e-9;
        loop {
            let lo = BigInt::from_f64(((approx - margin) * scale).floor()).unwrap();
            let hi = BigInt::from_f64(((approx + margin) * scale).ceil()).unwrap();
            // lambda is the largest root of a monic polynomial: f < 0 just below, f > 0 above.
            if scaled_eval(minpoly, &lo, prec).is_negative()
                && scaled_eval(minpoly, &hi, prec).is_positive()
            {
                return Enclosure { prec, lo, hi };
            }
            margin /= 16.0;
            assert!(margin > 1e-18, "could not isolate lambda numerically");
        }
    }

    pub(super) fn refine_to(&mut self, minpoly: &[BigInt], prec: u32) {
        if minpoly.len() == 2 {
            while self.prec < prec {
                self.prec *= 2;
                let one = BigInt::from(1) << self.prec as usize;
                self.lo = &one - 1;
                self.hi = one + 1;
            }
            return;
        }
        while self.prec < prec {
            let s = self.prec as usize;
            self.lo <<= s;
            self.hi <<= s;
            self.prec *= 2;
            while &self.hi - &self.lo > BigInt::from(1) {
                let mid: BigInt = (&self.lo + &self.hi) >> 1usize;
                if scaled_eval(minpoly, &mid, self.prec).is_negative() {
                    self.lo = mid;
                } else {
                    self.hi = mid;
                }
            }
        }
    }
}

/// Sign of `sum num[i] lambda^i` when the interval evaluation decides it.
pub(super) fn interval_sign(num: &[BigInt], prec: u32, lo: &BigInt, hi: &BigInt) -> Option<i8> {
    let one = BigInt::from(1) << prec as usize;
    let (mut plo, mut phi) = (one.clone(), one);
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    for (i, c) in num.iter().enumerate() {
        if i > 0 {
            plo = (&plo * lo) >> prec as usize;
            let t = &phi * hi;
            let q: BigInt = &t >> prec as usize;
            phi = if (&q << prec as usize) == t { q } else { q + 1 };
        }
        if c.is_positive() {
            sum_lo += c * &plo;
            sum_hi += c * &phi;
        } else if c.is_negative() {
            sum_lo += c * &phi;
            sum_hi += c * &plo;
        }
    }
    if sum_lo.is_positive() {
        Some(1)
    } else if sum_hi.is_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Solves `V c = rhs` for the real Vandermonde-type matrix `v` by Gaussian elimination.
pub(crate) fn solve_real(mut v: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| v[a][col].abs().total_cmp(&v[b][col].abs()))?;
        if v[piv][col].abs() < 1e-300 {
            return None;
        }
        v.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = v[r][col] / v[col][col];
            for c in col..n {
                v[r][c] -= f * v[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| v[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / v[r][r];
    }
    Some(x)
}

/// Root of an element of `Z[lambda]` given by its coordinates, if it is a square.
pub(super) fn integral_sqrt(
    field: &std::sync::Arc<FieldDescriptor>,
    coords: &[BigInt],
) -> Option<Vec<BigInt>> {
    let n = field.degree();
    if n == 1 {
        let c = &coords[0];
        if c.is_negative() {
            return None;
        }
        let r = c.sqrt();
        return (&r * &r == *c).then(|| vec![r]);
    }
    let target = FieldElement::from_parts(field, coords.to_vec(), BigInt::from(1));
    let values: Vec<f64> = (0..n).map(|j| target.embed(j)).collect();
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return None;
    }
    let roots: Vec<f64> = values.iter().map(|v| v.sqrt()).collect();
    let vander: Vec<Vec<f64>> = field
        .conjugates
        .iter()
        .map(|&x| (0..n).map(|i| x.powi(i as i32)).collect())
        .collect();
    // Fix the sign at the canonical embedding; the other signs are searched.
    for mask in 0u64..(1u64 << (n - 1)) {
        let rhs: Vec<f64> = (0..n)
            .map(|j| {
                if j > 0 && mask >> (j - 1) & 1 == 1 {
                    -roots[j]
                } else {
                    roots[j]
                }
            })
            .collect();
        let Some(sol) = solve_real(vander.clone(), rhs) else {
            continue;
        };
        if sol.iter().any(|c| !c.is_finite() || c.abs() > 1e15) {
            continue;
        }
        let cand: Vec<BigInt> = sol
            .iter()
            .map(|c| BigInt::from_f64(c.round()).unwrap())
            .collect();
        let s = FieldElement::from_parts(field, cand.clone(), BigInt::from(1));
        if &s * &s == target {
            return Some(cand);
        }
    }
    None
}
