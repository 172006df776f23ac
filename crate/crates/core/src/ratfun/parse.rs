//! Expression grammar for rational functions and constants.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary | unary)*      juxtaposition multiplies
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" ["-"] digits)?
//! atom   := digits | "L" | "lambda" | "r" | "sqrtD" | "sqrt" digits
//!         | "sqrt(" digits ")" | "z" | "(" expr ")"
//! ```
//!
//! `L` is lambda, `r` and `sqrtD` stand for the square root of the active
//! radicand. `sqrtN` is `sqrt(N)`: it lies in `K`, or is a `K`-multiple of
//! `sqrt D`, or (when no radicand is active yet) makes `N` the radicand.

use std::sync::Arc;

use num_bigint::BigInt;

use super::RationalFunction;
use crate::error::{Error, Result};
use crate::numfield::{make_field, Field, FieldElement, QuadExtElement, QuadField};

#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    Lambda,
    Radical,
    Sqrt(BigInt),
    Z,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            // sqrt14 splits into the function name and its argument
            if let Some(rest) = word.strip_prefix("sqrt") {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    out.push(Tok::Ident("sqrt".into()));
                    out.push(Tok::Int(rest.parse().expect("digits")));
                    continue;
                }
            }
            out.push(Tok::Ident(word));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Bin('+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Bin('-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Bin('/', Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(
                self.peek(),
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('('))
            ) {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.next() {
            Some(Tok::Int(n)) => {
                let e: i64 = n
                    .try_into()
                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            other => Err(Error::Parse(format!(
                "expected integer exponent, found {other:?}"
            ))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(w)) => match w.as_str() {
                "L" | "lambda" => Ok(Expr::Lambda),
                "r" | "sqrtD" => Ok(Expr::Radical),
                "z" => Ok(Expr::Z),
                "sqrt" => {
                    let paren = self.eat('(');
                    let n = match self.next() {
                        Some(Tok::Int(n)) => n,
                        other => {
                            return Err(Error::Parse(format!(
                                "sqrt expects an integer, found {other:?}"
                            )))
                        }
                    };
                    if paren && !self.eat(')') {
                        return Err(Error::Parse(
                            "missing closing parenthesis after sqrt".into(),
                        ));
                    }
                    Ok(Expr::Sqrt(n))
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn collect(e: &Expr, sqrts: &mut Vec<BigInt>, radical: &mut bool, z: &mut bool) {
    match e {
        Expr::Sqrt(n) => sqrts.push(n.clone()),
        Expr::Radical => *radical = true,
        Expr::Z => *z = true,
        Expr::Neg(a) | Expr::Pow(a, _) => collect(a, sqrts, radical, z),
        Expr::Bin(_, a, b) => {
            collect(a, sqrts, radical, z);
            collect(b, sqrts, radical, z);
        }
        Expr::Int(_) | Expr::Lambda => {}
    }
}

/// A parsed expression together with the extension it lives in.
#[derive(Debug, Clone)]
pub struct ParsedExpression {
    pub value: RationalFunction<QuadExtElement>,
    pub quad_field: Arc<QuadField>,
    pub uses_z: bool,
}

/// Parses over `K(sqrt D)`; with `d = None` the radicand is inferred from `sqrtN` terms.
pub fn parse_expression(p: i64, d: Option<&FieldElement>, text: &str) -> Result<ParsedExpression> {
    let field = make_field(p)?;
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    if parser.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let ast = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {:?}",
            parser.toks[parser.pos]
        )));
    }
    let (mut sqrts, mut radical, mut uses_z) = (vec![], false, false);
    collect(&ast, &mut sqrts, &mut radical, &mut uses_z);
    let mut radicand = d.cloned();
    for n in &sqrts {
        let v = FieldElement::from_int(&field, n.clone());
        if radicand.is_none() && v.sqrt().is_none() {
            radicand = Some(v);
        }
    }
    if radical && radicand.is_none() {
        return Err(Error::Parse("`r` used but no radicand is known".into()));
    }
    let qf = match radicand {
        Some(d) => QuadField::new(d)?,
        None => QuadField::trivial(&field),
    };
    let value = eval(&ast, &field, &qf)?;
    Ok(ParsedExpression {
        value,
        quad_field: qf,
        uses_z,
    })
}

fn sqrt_value(field: &Field, qf: &Arc<QuadField>, n: &BigInt) -> Result<QuadExtElement> {
    let v = FieldElement::from_int(field, n.clone());
    if let Some(r) = v.sqrt() {
        return Ok(QuadExtElement::from_base(qf, &r.abs()));
    }
    let ratio = v.try_div(qf.radicand())?;
    match ratio.sqrt() {
        Some(t) => Ok(QuadExtElement::new(qf, FieldElement::zero(field), t.abs())),
        None => Err(Error::Parse(format!(
            "sqrt{n} is not in K(sqrt({}))",
            qf.radicand()
        ))),
    }
}

fn eval(e: &Expr, field: &Field, qf: &Arc<QuadField>) -> Result<RationalFunction<QuadExtElement>> {
    let constant = |x: QuadExtElement| RationalFunction::constant(qf, x);
    Ok(match e {
        Expr::Int(n) => constant(QuadExtElement::from_base(
            qf,
            &FieldElement::from_int(field, n.clone()),
        )),
        Expr::Lambda => constant(QuadExtElement::from_base(qf, &FieldElement::lambda(field))),
        Expr::Radical => constant(QuadExtElement::sqrt_d(qf)),
        Expr::Sqrt(n) => constant(sqrt_value(field, qf, n)?),
        Expr::Z => RationalFunction::monomial(qf, QuadExtElement::one(qf), 1),
        Expr::Neg(a) => eval(a, field, qf)?.neg(),
        Expr::Pow(a, k) => {
            let base = eval(a, field, qf)?;
            let pw = base.pow(k.unsigned_abs() as u32);
            if *k < 0 {
                pw.inv()?
            } else {
                pw
            }
        }
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval(a, field, qf)?, eval(b, field, qf)?);
            match op {
                '+' => x.add(&y),
                '-' => x.sub(&y),
                '*' => x.mul(&y),
                _ => x.div(&y)?,
            }
        }
    })
}

fn as_constant(parsed: &ParsedExpression, text: &str) -> Result<QuadExtElement> {
    let v = &parsed.value;
    if parsed.uses_z && (v.numerator().degree() > 0 || v.denominator().degree() > 0) {
        return Err(Error::Parse(format!("{text:?} depends on z")));
    }
    Ok(v.numerator().coeff(0))
}

/// Parses a constant of `K`.
pub fn parse_field_element(p: i64, text: &str) -> Result<FieldElement> {
    let parsed = parse_expression(p, None, text)?;
    let c = as_constant(&parsed, text)?;
    c.as_base()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("{text:?} is not in Q(lambda)")))
}

/// Parses a constant of `K(sqrt D)`; the radicand is inferred when `d` is `None`.
pub fn parse_quad(p: i64, d: Option<&FieldElement>, text: &str) -> Result<QuadExtElement> {
    let parsed = parse_expression(p, d, text)?;
    as_constant(&parsed, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let x = parse_field_element(4, "3 - 2L").unwrap();
        assert_eq!(x.to_expr_string(), "3 - 2*L");
        assert_eq!(
            parse_field_element(4, "sqrt2").unwrap(),
            FieldElement::lambda(&make_field(4).unwrap())
        );
        assert_eq!(
            parse_field_element(5, "L^2 - L").unwrap().to_expr_string(),
            "1"
        );
        assert_eq!(
            parse_field_element(4, "-1/2 + 3*L")
                .unwrap()
                .to_expr_string(),
            "-1/2 + 3*L"
        );
        assert!(parse_field_element(4, "sqrt14").is_err());
        assert!(parse_field_element(4, "1/0").is_err());
    }

    #[test]
    fn radicals() {
        let a = parse_quad(4, None, "(sqrt2+sqrt14)/2").unwrap();
        assert_eq!(a.to_expr_string(), "1/2*L + 1/2*r");
        assert_eq!(a.radicand().to_expr_string(), "14");
        let f = make_field(4).unwrap();
        let d = FieldElement::from_int(&f, 14);
        let b = parse_quad(4, Some(&d), "(L + r)/2").unwrap();
        assert_eq!(a, b);
        // sqrt 56 = 2 sqrt 14
        let c = parse_quad(4, Some(&d), "sqrt(56)").unwrap();
        assert_eq!(c.to_expr_string(), "2*r");
        assert!(parse_quad(4, None, "r").is_err());
        assert!(parse_quad(4, Some(&d), "sqrt3").is_err());
    }

    #[test]
    fn functions() {
        let e = parse_expression(4, None, "1/(z^2 - L*z - 3)").unwrap();
        assert_eq!(e.value.to_expr_string(), "(1)/(z^2 - L*z - 3)");
        let e = parse_expression(4, None, "2z^-2 + 1").unwrap();
        assert_eq!(e.value.to_expr_string(), "(z^2 + 2)/(z^2)");
        assert!(parse_expression(4, None, "z +").is_err());
        assert!(parse_expression(4, None, "(z").is_err());
        assert!(parse_expression(4, None, "w").is_err());
    }
}
