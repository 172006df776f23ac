//! LaTeX rendering. `lambda` prints as `\sqrt{2}` on `G_4` and `\sqrt{3}` on `G_6`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bqf::QuadraticForm;
use crate::heckegroup::GroupElement;
use crate::numfield::{FieldElement, QuadExtElement};
use crate::ratfun::{Polynomial, RationalFunction};
use crate::rpf::{RpfExpression, RpfTerm};

fn lambda_symbol(p: u32) -> &'static str {
    match p {
        4 => r"\sqrt{2}",
        6 => r"\sqrt{3}",
        _ => r"\lambda",
    }
}

fn rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!(r"\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

/// Signed sum of `coefficient * symbol` terms.
fn terms(items: &[(BigRational, String)]) -> String {
    let mut out = String::new();
    for (c, sym) in items {
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
        if sym.is_empty() {
            out.push_str(&rational(&mag));
        } else if mag.is_one() {
            out.push_str(sym);
        } else {
            out.push_str(&rational(&mag));
            out.push_str(sym);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn power_symbol(p: u32, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => lambda_symbol(p).into(),
        _ if p == 4 || p == 6 => format!(r"({})^{{{i}}}", lambda_symbol(p)),
        _ => format!(r"\lambda^{{{i}}}"),
    }
}

pub fn field_element(x: &FieldElement) -> String {
    let items: Vec<_> = x
        .coeffs()
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, power_symbol(x.p(), i)))
        .collect();
    terms(&items)
}

fn radical(x: &QuadExtElement) -> String {
    let d = x.radicand();
    match d.as_rational() {
        Some(r) => format!(r"\sqrt{{{}}}", rational(&r)),
        None => format!(r"\sqrt{{{}}}", field_element(d)),
    }
}

pub fn quad_element(x: &QuadExtElement) -> String {
    let p = x.field().p();
    let r = radical(x);
    let mut items: Vec<_> = x
        .a()
        .coeffs()
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, power_symbol(p, i)))
        .collect();
    items.extend(
        x.b()
            .coeffs()
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, format!("{}{r}", power_symbol(p, i)))),
    );
    terms(&items)
}

fn is_compound(s: &str) -> bool {
    s.trim_start_matches('-').contains([' ', '+'])
}

pub fn polynomial(f: &Polynomial<QuadExtElement>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mut s = quad_element(c);
        let neg = s.starts_with('-') && !is_compound(&s);
        if neg {
            s.remove(0);
        }
        let mon = match i {
            0 => String::new(),
            1 => "z".into(),
            _ => format!("z^{{{i}}}"),
        };
        let body = match (mon.is_empty(), s == "1", is_compound(&s)) {
            (true, _, _) if out.is_empty() || !is_compound(&s) => s,
            (true, _, _) => format!(r"\left({s}\right)"),
            (false, true, _) => mon,
            (false, false, true) => format!(r"\left({s}\right){mon}"),
            (false, false, false) => format!("{s}{mon}"),
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

pub fn rational_function(f: &RationalFunction<QuadExtElement>) -> String {
    if f.denominator().degree() == 0 {
        return polynomial(f.numerator());
    }
    format!(
        r"\frac{{{}}}{{{}}}",
        polynomial(f.numerator()),
        polynomial(f.denominator())
    )
}

pub fn form(q: &QuadraticForm) -> String {
    format!(
        "[{}, {}, {}]",
        field_element(q.a()),
        field_element(q.b()),
        field_element(q.c())
    )
}

pub fn group_element(m: &GroupElement) -> String {
    let [a, b, c, d] = m.entries().map(field_element);
    format!(r"\begin{{pmatrix}} {a} & {b} \\ {c} & {d} \end{{pmatrix}}")
}

/// `Q(z,1)` as a polynomial in `z`.
fn form_in_z(q: &QuadraticForm) -> String {
    let items = [(q.a(), "z^{2}"), (q.b(), "z"), (q.c(), "")];
    let mut out = String::new();
    for (c, mon) in items {
        if c.is_zero() {
            continue;
        }
        let mut s = field_element(c);
        let neg = s.starts_with('-') && !is_compound(&s);
        if neg {
            s.remove(0);
        }
        let body = if mon.is_empty() {
            s
        } else if s == "1" {
            mon.into()
        } else if is_compound(&s) {
            format!(r"\left({s}\right){mon}")
        } else {
            format!("{s}{mon}")
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

fn coefficient_prefix(c: &QuadExtElement) -> Option<String> {
    if *c == QuadExtElement::one(c.quad_field()) {
        return Some(String::new());
    }
    if c.is_zero() {
        return None;
    }
    if -c == QuadExtElement::one(c.quad_field()) {
        return Some("-".into());
    }
    let s = quad_element(c);
    Some(if is_compound(&s) {
        format!(r"\left({s}\right)")
    } else {
        s
    })
}

fn term(t: &RpfTerm, k: u32) -> Option<String> {
    let kk = if k == 1 {
        String::new()
    } else {
        format!("^{{{k}}}")
    };
    match t {
        RpfTerm::FormPowers { class, coeff } => {
            let pre = coefficient_prefix(coeff)?;
            let power = |q: &QuadraticForm| {
                if k == 1 {
                    format!(r"\frac{{1}}{{{}}}", form_in_z(q))
                } else {
                    format!(r"\frac{{1}}{{({}){kk}}}", form_in_z(q))
                }
            };
            let parts: Vec<String> = class.forms().iter().map(power).collect();
            Some(if pre.is_empty() {
                parts.join(" + ")
            } else {
                format!(r"{pre}\left({}\right)", parts.join(" + "))
            })
        }
        RpfTerm::PrincipalParts {
            class,
            negated,
            coeff,
        } => {
            let pre = coefficient_prefix(coeff)?;
            let qf = coeff.quad_field();
            let piece = |x: &QuadExtElement| {
                if k == 1 {
                    format!(r"\frac{{1}}{{z - \left({}\right)}}", quad_element(x))
                } else {
                    format!(r"q_{{{k},{}}}(z)", quad_element(x))
                }
            };
            let plus: Vec<String> = class.roots_in(qf).ok()?.iter().map(piece).collect();
            let minus: Vec<String> = negated
                .roots_in(qf)
                .ok()?
                .iter()
                .map(|x| piece(&x.conjugate()))
                .collect();
            let body = format!("{} - {}", plus.join(" + "), minus.join(" - "));
            Some(if pre.is_empty() {
                body
            } else {
                format!(r"{pre}\left({body}\right)")
            })
        }
        RpfTerm::PoleAtZero { a0, b1 } => {
            let mut parts = vec![];
            if let Some(pre) = coefficient_prefix(a0) {
                parts.push(format!(r"{pre}\left(1 - z^{{-{}}}\right)", 2 * k));
            }
            if let Some(pre) = b1.as_ref().and_then(coefficient_prefix) {
                parts.push(format!(
                    r"\frac{{{}}}{{z}}",
                    if pre.is_empty() { "1".into() } else { pre }
                ));
            }
            (!parts.is_empty()).then(|| parts.join(" + "))
        }
        RpfTerm::Tail { coeffs } => {
            let parts: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter_map(|(i, c)| {
                    let pre = coefficient_prefix(c)?;
                    let den = if i == 0 {
                        "z".into()
                    } else {
                        format!("z^{{{}}}", i + 1)
                    };
                    Some(format!(
                        r"\frac{{{}}}{{{den}}}",
                        if pre.is_empty() { "1".into() } else { pre }
                    ))
                })
                .collect();
            (!parts.is_empty()).then(|| parts.join(" + "))
        }
    }
}

/// `q(z) = <structured terms> = <flattened function>`.
pub fn rpf(q: &RpfExpression) -> String {
    let parts: Vec<String> = q.terms.iter().filter_map(|t| term(t, q.k)).collect();
    let flat = rational_function(&q.realized);
    if parts.is_empty() {
        format!("q(z) = {flat}")
    } else {
        let mut sum = String::new();
        for (i, part) in parts.iter().enumerate() {
            match (i, part.strip_prefix('-')) {
                (0, _) => sum.push_str(part),
                (_, Some(rest)) => sum += &format!(" - {rest}"),
                (_, None) => sum += &format!(" + {part}"),
            }
        }
        format!("q(z) = {sum} = {flat}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::enumerate_classes;
    use crate::numfield::{make_field, QuadField};
    use crate::rpf::build_symmetric;

    #[test]
    fn renders_lambda_by_group() {
        let f4 = make_field(4).unwrap();
        assert_eq!(
            field_element(&FieldElement::from_int_coeffs(&f4, &[3, -2])),
            r"3 - 2\sqrt{2}"
        );
        let f5 = make_field(5).unwrap();
        assert_eq!(
            field_element(&FieldElement::from_int_coeffs(&f5, &[0, 1])),
            r"\lambda"
        );
        let qf = QuadField::new(FieldElement::from_int(&f4, 14)).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let x = QuadExtElement::new(
            &qf,
            FieldElement::from_coeffs(&f4, &[BigRational::zero(), half.clone()]),
            FieldElement::from_rational(&f4, &half),
        );
        assert_eq!(
            quad_element(&x),
            r"\frac{1}{2}\sqrt{2} + \frac{1}{2}\sqrt{14}"
        );
    }

    #[test]
    fn symmetric_display() {
        let f = make_field(4).unwrap();
        let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
        let one = FieldElement::one(&f);
        let q = build_symmetric(
            4,
            1,
            &[(cs[0].clone(), one.clone()), (cs[1].clone(), one)],
            FieldElement::zero(&f),
        )
        .unwrap();
        let s = rpf(&q);
        assert!(
            s.starts_with(
                r"q(z) = \frac{1}{z^{2} - \sqrt{2}z - 3} + \frac{1}{z^{2} + \sqrt{2}z - 3}"
            ),
            "{s}"
        );
        assert!(s.contains(r"\frac{1}{3z^{2} - \sqrt{2}z - 1}"));
    }

    #[test]
    fn negative_coefficient_is_subtracted() {
        let f = make_field(4).unwrap();
        let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
        let q = crate::rpf::build_theorem3(4, 2, &cs[0], &crate::Budget::default()).unwrap();
        let s = rpf(&q);
        assert!(s.contains(r"- 3)^{2}} - \left(\frac{1}{(3z^{2}"), "{s}");
        assert!(!s.contains("+ -"));
    }
}
