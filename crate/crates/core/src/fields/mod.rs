//! Exact arithmetic over the base fields: the rationals, odd prime fields
//! and their extensions `F_p[t]/(modulus)`.
//!
//! Finite-field elements are encoded as an index `sum c_i p^i` where `c_i` is
//! the coefficient of `t^i` in the monomial basis. Prime fields use the
//! residue itself. Extension multiplication goes through exp/log tables
//! built once per field.

mod unipoly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest extension order for which exp/log tables are built.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime,
    Extension,
}

#[derive(Debug)]
pub(crate) struct Finite {
    pub(crate) p: u32,
    pub(crate) m: u32,
    pub(crate) q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Finite {
    fn new(p: u32, modulus: Vec<u32>) -> Result<Finite> {
        let m = (modulus.len() - 1) as u32;
        let q64 = (p as u64).pow(m);
        if m > 1 && q64 > MAX_EXTENSION_ORDER {
            return Err(Error::InvalidField(format!(
                "extension of order {q64} exceeds {MAX_EXTENSION_ORDER}"
            )));
        }
        let q = q64 as u32;
        let mut f = Finite {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if m > 1 {
            f.build_tables()?;
        }
        Ok(f)
    }

    fn digits(&self, mut a: u32) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d as u64
            })
            .collect()
    }

    fn compose_digits(&self, digits: &[u64]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d as u32)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let modulus: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let prod = unipoly::mul(&self.digits(a), &self.digits(b), p);
        let mut r = unipoly::rem(&prod, &modulus, p);
        r.resize(self.m as usize, 0);
        self.compose_digits(&r)
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = self.q - 1;
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut primitive = true;
            for k in 0..order {
                if k > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = self.slow_mul(x, g);
            }
            if primitive && x == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return Ok(());
            }
        }
        Err(Error::Defect("no primitive element found".into()))
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.m {
                let d = (a % self.p + b % self.p) % self.p;
                out += d * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut a = a;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.m {
                let d = a % self.p;
                out += ((self.p - d) % self.p) * place;
                place *= self.p;
                a /= self.p;
            }
            out
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let order = self.q - 1;
            let s = self.log[a as usize] + self.log[b as usize];
            self.exp[(if s >= order { s - order } else { s }) as usize]
        }
    }

    pub(crate) fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else if self.m == 1 {
            Some(self.pow(a, (self.p - 2) as u64))
        } else {
            let order = self.q - 1;
            Some(self.exp[((order - self.log[a as usize]) % order) as usize])
        }
    }

    /// Reduces an integer into the prime subfield.
    pub(crate) fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

#[derive(Debug)]
enum Repr {
    Rationals,
    Finite(Finite),
}

/// The data behind a [`Field`] handle.
#[derive(Debug)]
pub struct FieldSpec {
    repr: Repr,
}

/// Cheap-to-clone handle to a base field.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    Ok(())
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldSpec {
            repr: Repr::Rationals,
        }))
    }

    pub fn prime(p: u32) -> Result<Field> {
        check_odd_prime(p)?;
        Ok(Field(Arc::new(FieldSpec {
            repr: Repr::Finite(Finite::new(p, vec![0, 1])?),
        })))
    }

    /// `F_{p^m}` with the lexicographically smallest monic irreducible
    /// modulus of degree `m`, where coefficient vectors are compared from
    /// `t^{m-1}` down to the constant term. `m = 1` gives the prime field.
    pub fn extension(p: u32, m: u32) -> Result<Field> {
        check_odd_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Field::prime(p);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("F_{p}^{m} is too large")))?;
        for k in 0..q {
            let mut coeffs: Vec<u64> = Vec::with_capacity(m as usize + 1);
            let mut rest = k;
            for _ in 0..m {
                coeffs.push(rest % p as u64);
                rest /= p as u64;
            }
            coeffs.push(1);
            if unipoly::is_irreducible(&coeffs, p as u64) {
                let modulus = coeffs.iter().map(|&c| c as u32).collect();
                return Field::with_modulus(p, modulus);
            }
        }
        Err(Error::Defect(format!(
            "no irreducible of degree {m} over F_{p}"
        )))
    }

    /// Extension with an explicit monic modulus, coefficients low degree first.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        check_odd_prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus coefficients must lie in [0, p)".into(),
            ));
        }
        if modulus.len() == 2 {
            return Field::prime(p);
        }
        let wide: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !unipoly::is_irreducible(&wide, p as u64) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Field(Arc::new(FieldSpec {
            repr: Repr::Finite(Finite::new(p, modulus)?),
        })))
    }

    pub fn kind(&self) -> FieldKind {
        match &self.0.repr {
            Repr::Rationals => FieldKind::Rationals,
            Repr::Finite(f) if f.m == 1 => FieldKind::Prime,
            Repr::Finite(_) => FieldKind::Extension,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.repr, Repr::Finite(_))
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u32 {
        self.finite().map_or(0, |f| f.p)
    }

    /// Extension degree over the prime field (1 for Q and F_p).
    pub fn degree(&self) -> u32 {
        self.finite().map_or(1, |f| f.m)
    }

    pub fn order(&self) -> Option<u64> {
        self.finite().map(|f| f.q as u64)
    }

    /// Monic modulus, low degree first; `None` unless this is a proper extension.
    pub fn modulus(&self) -> Option<&[u32]> {
        match &self.0.repr {
            Repr::Finite(f) if f.m > 1 => Some(&f.modulus),
            _ => None,
        }
    }

    pub(crate) fn finite(&self) -> Option<&Finite> {
        match &self.0.repr {
            Repr::Finite(f) => Some(f),
            Repr::Rationals => None,
        }
    }

    pub(crate) fn require_finite(&self) -> Result<&Finite> {
        self.finite().ok_or(Error::NotFinite)
    }

    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    fn wrap(&self, value: Value) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &self.0.repr {
            Repr::Rationals => self.wrap(Value::Rational(BigRational::zero())),
            Repr::Finite(_) => self.wrap(Value::Finite(0)),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match &self.0.repr {
            Repr::Rationals => self.wrap(Value::Rational(BigRational::from_integer(v.into()))),
            Repr::Finite(f) => self.wrap(Value::Finite(f.reduce_i64(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match &self.0.repr {
            Repr::Rationals => self.wrap(Value::Rational(BigRational::from_integer(v.clone()))),
            Repr::Finite(f) => {
                let p = BigInt::from(f.p);
                let r = ((v % &p) + &p) % &p;
                self.wrap(Value::Finite(r.to_u32().unwrap()))
            }
        }
    }

    /// Exact rational; over a finite field the denominator must be invertible.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElem> {
        match &self.0.repr {
            Repr::Rationals => Ok(self.wrap(Value::Rational(r.clone()))),
            Repr::Finite(_) => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                n.checked_div(&d)
            }
        }
    }

    /// Element with the given index (finite fields only).
    pub fn element(&self, index: u32) -> Result<FieldElem> {
        let f = self.require_finite()?;
        if index >= f.q {
            return Err(Error::InvalidField(format!(
                "index {index} out of range for field of order {}",
                f.q
            )));
        }
        Ok(self.wrap(Value::Finite(index)))
    }

    /// The class of `t` in `F_p[t]/(modulus)`.
    pub fn generator(&self) -> Result<FieldElem> {
        let f = self.require_finite()?;
        if f.m == 1 {
            return Err(Error::InvalidField(format!("F_{} has no generator t", f.p)));
        }
        Ok(self.wrap(Value::Finite(f.p)))
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElem> + '_> {
        let q = self.require_finite()?.q;
        Ok((0..q).map(move |i| self.wrap(Value::Finite(i))))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.repr, &other.0.repr) {
            (Repr::Rationals, Repr::Rationals) => true,
            (Repr::Finite(a), Repr::Finite(b)) => a.p == b.p && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.repr {
            Repr::Rationals => write!(out, "Q"),
            Repr::Finite(f) if f.m == 1 => write!(out, "F_{}", f.p),
            Repr::Finite(f) => {
                let modulus: Vec<u32> = f.modulus.clone();
                write!(out, "F_{}[t]/({})", f.p, format_t_poly(&modulus))
            }
        }
    }
}

fn format_t_poly(coeffs: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        parts.push(match (i, c) {
            (0, _) => c.to_string(),
            (_, 1) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rational(BigRational),
    Finite(u32),
}

/// Element of a [`Field`], always in canonical form.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem> {
    a.field.ensure_same(&b.field)?;
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Index in the finite-field encoding.
    pub fn index(&self) -> Option<u32> {
        match self.value {
            Value::Finite(v) => Some(v),
            Value::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Finite(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Finite(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_one(),
            Value::Finite(v) => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        match &self.value {
            Value::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(self.field.wrap(Value::Rational(r.recip())))
                }
            }
            Value::Finite(v) => {
                let f = self.field.finite().unwrap();
                f.inv(*v)
                    .map(|i| self.field.wrap(Value::Finite(i)))
                    .ok_or(Error::DivisionByZero)
            }
        }
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.field.ensure_same(&other.field)?;
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        match &self.value {
            Value::Finite(v) => {
                let f = self.field.finite().unwrap();
                self.field.wrap(Value::Finite(f.pow(*v, e)))
            }
            Value::Rational(_) => {
                let mut acc = self.field.one();
                let mut base = self.clone();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = &acc * &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// `a -> a^p`, the generator of Gal(F_{p^m}/F_p).
    pub fn frobenius(&self) -> Result<FieldElem> {
        let f = self.field.require_finite()?;
        Ok(self.pow(f.p as u64))
    }

    /// Square test for a nonzero element of a finite field, with the first
    /// root in index order.
    pub fn is_square(&self) -> Result<Option<FieldElem>> {
        let f = self.field.require_finite()?;
        if self.is_zero() {
            return Err(Error::Precondition("is_square of zero".into()));
        }
        let v = self.index().unwrap();
        if f.pow(v, ((f.q - 1) / 2) as u64) != 1 {
            return Ok(None);
        }
        let root = (1..f.q)
            .find(|&r| f.mul(r, r) == v)
            .ok_or_else(|| Error::Defect("Euler criterion and root search disagree".into()))?;
        Ok(Some(self.field.wrap(Value::Finite(root))))
    }

    /// Square root in any supported field, zero included.
    pub fn sqrt(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match &self.value {
            Value::Finite(_) => self.is_square().ok().flatten(),
            Value::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(self.field.wrap(Value::Rational(BigRational::new(n, d))))
                } else {
                    None
                }
            }
        }
    }

    /// Whether the element lies in the prime subfield `F_p` (or Q).
    pub fn in_prime_field(&self) -> bool {
        match (&self.value, self.field.finite()) {
            (Value::Finite(v), Some(f)) => *v < f.p,
            _ => true,
        }
    }

    /// Coefficients of `t^0 .. t^{m-1}` (finite fields).
    pub fn coordinates(&self) -> Option<Vec<u32>> {
        let f = self.field.finite()?;
        let v = self.index()?;
        Some(f.digits(v).into_iter().map(|d| d as u32).collect())
    }

    /// Symmetric lift of a prime-field residue into (-p/2, p/2].
    pub(crate) fn symmetric_residue(&self) -> Option<i64> {
        let f = self.field.finite()?;
        if f.m != 1 {
            return None;
        }
        let v = self.index()? as i64;
        let p = f.p as i64;
        Some(if v > p / 2 { v - p } else { v })
    }

    fn binary(&self, other: &FieldElem, op: ArithOp) -> FieldElem {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => a / b,
            }),
            (Value::Finite(a), Value::Finite(b)) => {
                let f = self.field.finite().unwrap();
                Value::Finite(match op {
                    ArithOp::Add => f.add(*a, *b),
                    ArithOp::Sub => f.sub(*a, *b),
                    ArithOp::Mul => f.mul(*a, *b),
                    ArithOp::Div => f.mul(*a, f.inv(*b).expect("division by zero")),
                })
            }
            _ => unreachable!("value kind disagrees with field"),
        };
        self.field.wrap(value)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &FieldElem) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => write!(out, "{r}"),
            Value::Finite(v) => {
                let f = self.field.finite().unwrap();
                if f.m == 1 {
                    write!(out, "{v}")
                } else {
                    let digits: Vec<u32> = f.digits(*v).into_iter().map(|d| d as u32).collect();
                    write!(out, "{}", format_t_poly(&digits))
                }
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.binary(rhs, $op)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.binary(&rhs, $op)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.binary(rhs, $op)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match &self.value {
            Value::Rational(r) => self.field.wrap(Value::Rational(-r)),
            Value::Finite(v) => {
                let f = self.field.finite().unwrap();
                self.field.wrap(Value::Finite(f.neg(*v)))
            }
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        Field::extension(3, 2).unwrap()
    }

    #[test]
    fn arith_examples() {
        let f5 = Field::prime(5).unwrap();
        let r = arith(&f5.from_i64(3), &f5.from_i64(4), ArithOp::Mul).unwrap();
        assert_eq!(r, f5.from_i64(2));
        let f7 = Field::prime(7).unwrap();
        let r = arith(&f7.from_i64(1), &f7.from_i64(2), ArithOp::Div).unwrap();
        assert_eq!(r, f7.from_i64(4));
        let t = f9().generator().unwrap();
        assert_eq!(arith(&t, &t, ArithOp::Mul).unwrap(), f9().from_i64(2));
    }

    #[test]
    fn arith_errors() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        assert_eq!(
            arith(&f5.one(), &f5.zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert!(matches!(
            arith(&f5.one(), &f7.one(), ArithOp::Add),
            Err(Error::FieldMismatch(..))
        ));
        let q = Field::rationals();
        assert_eq!(q.one().checked_div(&q.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        let f = f9();
        let t = f.generator().unwrap();
        assert_eq!(t.frobenius().unwrap(), &f.from_i64(2) * &t);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(4).frobenius().unwrap(), f5.from_i64(4));
        let one_t = &f.one() + &t;
        // (1+t)^3 by repeated multiplication
        let cubed = &(&one_t * &one_t) * &one_t;
        assert_eq!(one_t.frobenius().unwrap(), cubed);
        assert_eq!(cubed, &f.one() + &(&f.from_i64(2) * &t));
        assert_eq!(Field::rationals().one().frobenius(), Err(Error::NotFinite));
    }

    #[test]
    fn square_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.from_i64(2).is_square().unwrap(), Some(f7.from_i64(3)));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.from_i64(2).is_square().unwrap(), None);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(4).is_square().unwrap(), Some(f5.from_i64(2)));
        assert!(f5.zero().is_square().is_err());
        assert!(Field::rationals().one().is_square().is_err());
    }

    #[test]
    fn rational_sqrt() {
        let q = Field::rationals();
        let r = q
            .from_rational(&BigRational::new(9.into(), 4.into()))
            .unwrap();
        assert_eq!(
            r.sqrt().unwrap(),
            q.from_rational(&BigRational::new(3.into(), 2.into()))
                .unwrap()
        );
        assert!(q.from_i64(2).sqrt().is_none());
        assert!(q.from_i64(-4).sqrt().is_none());
    }

    /// Exhaustive trial division by every monic polynomial of degree 1..=m/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        for d in 1..=m / 2 {
            for k in 0..p.pow(d as u32) {
                let mut g: Vec<u64> = (0..d).map(|i| (k / p.pow(i as u32)) % p).collect();
                g.push(1);
                if unipoly::rem(&f.to_vec(), &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn build_extension_examples() {
        assert_eq!(f9().modulus().unwrap(), &[1, 0, 1]);
        // t^2 + 1 is rootless over F_3 and t^2 is the only smaller candidate
        assert!(irreducible_by_trial_division(&[1, 0, 1], 3));
        assert!(!irreducible_by_trial_division(&[0, 0, 1], 3));

        let f5 = Field::extension(5, 1).unwrap();
        assert_eq!(f5.kind(), FieldKind::Prime);
        assert!(f5.modulus().is_none());

        let f27 = Field::extension(3, 3).unwrap();
        let modulus: Vec<u64> = f27.modulus().unwrap().iter().map(|&c| c as u64).collect();
        assert!(irreducible_by_trial_division(&modulus, 3));
        assert_eq!(f27.order(), Some(27));

        assert_eq!(
            Field::extension(2, 3).unwrap_err(),
            Error::CharacteristicTwo
        );
        assert!(matches!(Field::prime(9), Err(Error::InvalidField(_))));
    }

    #[test]
    fn lexicographic_choice_matches_trial_division() {
        for (p, m) in [(3u32, 2u32), (3, 3), (5, 2), (5, 3), (7, 2)] {
            let field = Field::extension(p, m).unwrap();
            let chosen: Vec<u64> = field.modulus().unwrap().iter().map(|&c| c as u64).collect();
            let first = (0..(p as u64).pow(m))
                .map(|k| {
                    let mut c: Vec<u64> =
                        (0..m).map(|i| (k / (p as u64).pow(i)) % p as u64).collect();
                    c.push(1);
                    c
                })
                .find(|c| irreducible_by_trial_division(c, p as u64))
                .unwrap();
            assert_eq!(chosen, first, "F_{p}^{m}");
        }
    }

    #[test]
    fn exhaustive_group_laws() {
        for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (7, 2), (3, 3)] {
            let f = Field::extension(p, m).unwrap();
            let q = f.order().unwrap();
            let mut squares = 0;
            for a in f.elements().unwrap().filter(|a| !a.is_zero()) {
                assert!((&a * &a.inv().unwrap()).is_one());
                assert!(a.pow(q - 1).is_one());
                let mut b = a.clone();
                for _ in 0..m {
                    b = b.frobenius().unwrap();
                }
                assert_eq!(b, a, "frobenius^m on {a} in {f}");
                if let Some(r) = a.is_square().unwrap() {
                    assert_eq!(&r * &r, a);
                    squares += 1;
                }
            }
            assert_eq!(squares, (q - 1) / 2);
        }
    }

    #[test]
    fn frobenius_is_multiplicative_and_additive() {
        let f = Field::extension(5, 2).unwrap();
        let elems: Vec<_> = f.elements().unwrap().collect();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(5) {
                let fa = a.frobenius().unwrap();
                let fb = b.frobenius().unwrap();
                assert_eq!((a * b).frobenius().unwrap(), &fa * &fb);
                assert_eq!((a + b).frobenius().unwrap(), &fa + &fb);
            }
        }
    }

    #[test]
    fn display_forms() {
        let f = f9();
        let t = f.generator().unwrap();
        assert_eq!((&f.one() + &(&f.from_i64(2) * &t)).to_string(), "1+2*t");
        assert_eq!(f.to_string(), "F_3[t]/(1+t^2)");
        assert_eq!(Field::prime(5).unwrap().to_string(), "F_5");
    }
}
