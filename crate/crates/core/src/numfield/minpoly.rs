//! Minimal polynomial of `2cos(pi/p)`.
//!
//! `lambda_p = zeta + zeta^-1` with `zeta` a primitive `2p`-th root of unity, so
//! the minimal polynomial is obtained from the cyclotomic polynomial
//! `Phi_{2p}` by rewriting its palindromic form in the Chebyshev-type
//! polynomials `C_m(zeta + zeta^-1) = zeta^m + zeta^-m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Ascending integer coefficients of the `n`-th cyclotomic polynomial.
pub(crate) fn cyclotomic(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic(d));
        }
    }
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd].clone();
        if !q.is_zero() {
            for (j, c) in den.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
        }
        quot[i] = q;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// `C_m` with `C_0 = 2`, `C_1 = x`, `C_{m+1} = x C_m - C_{m-1}`.
fn chebyshev_family(max: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> =
        vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    while out.len() <= max {
        let m = out.len();
        let mut next = vec![BigInt::zero(); m + 1];
        for (i, c) in out[m - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in out[m - 2].iter().enumerate() {
            next[i] -= c;
        }
        out.push(next);
    }
    out
}

/// Monic minimal polynomial of `2cos(pi/p)` over the rationals, ascending.
pub(crate) fn lambda_minpoly(p: u32) -> Vec<BigInt> {
    let phi = cyclotomic(2 * p);
    let total = phi.len() - 1;
    debug_assert!(total.is_even());
    let h = total / 2;
    let cheb = chebyshev_family(h);
    let mut out = vec![BigInt::zero(); h + 1];
    out[0] += &phi[h];
    for m in 1..=h {
        let a = &phi[h + m];
        for (i, c) in cheb[m].iter().enumerate() {
            out[i] += a * c;
        }
    }
    out
}

/// Euler's totient, used only to cross-check the degree.
#[cfg(test)]
pub(crate) fn totient(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(10), ints(&[1, -1, 1, -1, 1]));
    }

    #[test]
    fn known_minimal_polynomials() {
        assert_eq!(lambda_minpoly(3), ints(&[-1, 1]));
        assert_eq!(lambda_minpoly(4), ints(&[-2, 0, 1]));
        assert_eq!(lambda_minpoly(5), ints(&[-1, -1, 1]));
        assert_eq!(lambda_minpoly(6), ints(&[-3, 0, 1]));
        assert_eq!(lambda_minpoly(7), ints(&[1, -2, -1, 1]));
    }

    #[test]
    fn degree_is_half_totient() {
        for p in 3..=30 {
            assert_eq!(
                lambda_minpoly(p).len() as u32 - 1,
                totient(2 * p) / 2,
                "p = {p}"
            );
        }
    }

    #[test]
    fn numerical_root() {
        for p in 3..=20u32 {
            let x = 2.0 * (std::f64::consts::PI / p as f64).cos();
            let v: f64 = lambda_minpoly(p)
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_string().parse::<f64>().unwrap() * x.powi(i as i32))
                .sum();
            assert!(v.abs() < 1e-9, "p = {p}: residual {v}");
        }
    }
}
