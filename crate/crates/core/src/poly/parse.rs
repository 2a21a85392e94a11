//! Text grammar for polynomials:
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ['^' integer]
//! primary := integer ['/' integer] | 'x' integer | 't' | '(' expr ')'
//! ```
//!
//! `t` is the generator of an extension field and fractions are only
//! accepted over Q. Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AffinePoly, HomogPoly};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem, FieldKind};

const MAX_EXPONENT: u32 = 64;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_integer(&mut self, what: &str, max: u64) -> Result<u64> {
        let start = self.pos;
        let n = self.integer()?;
        match u64::try_from(&n) {
            Ok(v) if v <= max => Ok(v),
            _ => {
                self.pos = start;
                self.err(format!("{what} out of range"))
            }
        }
    }

    fn expr(&mut self) -> Result<AffinePoly> {
        let mut acc = AffinePoly::zero(self.field, self.nvars);
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t)? } else { acc.add(&t)? };
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AffinePoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.multiply(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AffinePoly> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let e = self.small_integer("exponent", MAX_EXPONENT as u64)?;
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<AffinePoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return self.err("expected variable index after 'x'");
                }
                let i = self.small_integer("variable index", u32::MAX as u64)? as usize;
                if i >= self.nvars {
                    self.pos = start;
                    return self.err(format!(
                        "unknown variable x{i} (only {} variables)",
                        self.nvars
                    ));
                }
                AffinePoly::variable(self.field, self.nvars, i)
            }
            Some(b't') => {
                if self.field.kind() != FieldKind::Extension {
                    return self.err(format!("'t' is not defined over {}", self.field));
                }
                self.pos += 1;
                Ok(AffinePoly::constant(&self.field.generator()?, self.nvars))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some(b'/') {
                    if self.field.kind() != FieldKind::Rationals {
                        return self.err("fractions are only accepted over Q");
                    }
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    let r = BigRational::new(n, d);
                    return Ok(AffinePoly::constant(
                        &self.field.from_rational(&r)?,
                        self.nvars,
                    ));
                }
                Ok(AffinePoly::constant(
                    &self.field.from_bigint(&n),
                    self.nvars,
                ))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an arbitrary polynomial in `nvars` variables.
pub fn parse_affine(src: &str, field: &Field, nvars: usize) -> Result<AffinePoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        field,
        nvars,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a homogeneous polynomial in `nvars` variables.
pub fn parse_poly(src: &str, field: &Field, nvars: usize) -> Result<HomogPoly> {
    parse_affine(src, field, nvars)?.to_homogeneous()
}

/// Parses a field constant such as `3`, `-1/2` or `(1+2*t)`.
pub fn parse_element(src: &str, field: &Field) -> Result<FieldElem> {
    let a = parse_affine(src, field, 0)?;
    let c = a.terms().next().map(|(_, c)| c.clone());
    Ok(c.unwrap_or_else(|| field.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let f5 = Field::prime(5).unwrap();
        let q = parse_poly("x0*x1 - x2^2", &f5, 3).unwrap();
        assert_eq!(q.degree(), 2);
        assert_eq!(q.num_terms(), 2);
        assert_eq!(parse_poly("x0 + x1^2", &f5, 2), Err(Error::NotHomogeneous));

        let f9 = Field::extension(3, 2).unwrap();
        let h = parse_poly("(1+2*t)*x0 + t*x1", &f9, 2).unwrap();
        let c = h.linear_coefficients().unwrap();
        let t = f9.generator().unwrap();
        assert_eq!(c[0], &f9.one() + &(&f9.from_i64(2) * &t));
        assert_eq!(c[1], t);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            parse_poly("x0 + x3", &f5, 3).unwrap_err(),
            Error::Parse {
                pos: 6,
                msg: "unknown variable x3 (only 3 variables)".into()
            }
        );
        assert!(matches!(
            parse_poly("x0 +* x1", &f5, 3),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("1/2*x0", &f5, 1),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_poly("t*x0", &f5, 1),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_poly("(x0", &f5, 1),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parse_rationals_and_elements() {
        let q = Field::rationals();
        let g = parse_poly(" 1/2 * x0 ^2 -  3*x1*x0", &q, 2).unwrap();
        assert_eq!(g.to_string(), "1/2*x0^2 - 3*x0*x1");
        assert_eq!(parse_element("-1/2", &q).unwrap().to_string(), "-1/2");
        let f9 = Field::extension(3, 2).unwrap();
        assert_eq!(parse_element("(1+2*t)", &f9).unwrap().to_string(), "1+2*t");
        assert_eq!(parse_element("t^2", &f9).unwrap(), f9.from_i64(2));
    }

    fn arb_poly(field: Field, nvars: usize, degree: u32) -> impl Strategy<Value = HomogPoly> {
        let q = field.order().unwrap() as u32;
        prop::collection::vec((prop::collection::vec(0u32..=degree, nvars), 0..q), 0..6).prop_map(
            move |raw| {
                let terms = raw.into_iter().filter_map(|(mut e, c)| {
                    // rebalance the exponent onto the last variable
                    let s: u32 = e[..nvars - 1].iter().sum();
                    if s > degree {
                        return None;
                    }
                    e[nvars - 1] = degree - s;
                    Some((e, field.element(c).unwrap()))
                });
                HomogPoly::from_terms(&field, nvars, degree, terms).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(
            g in arb_poly(Field::extension(3, 2).unwrap(), 3, 3),
            h in arb_poly(Field::prime(7).unwrap(), 4, 2),
        ) {
            prop_assume!(!g.is_zero() && !h.is_zero());
            prop_assert_eq!(parse_poly(&g.to_string(), g.field(), 3).unwrap(), g);
            prop_assert_eq!(parse_poly(&h.to_string(), h.field(), 4).unwrap(), h);
        }
    }
}
