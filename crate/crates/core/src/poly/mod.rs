//! Sparse homogeneous polynomials and their affine charts.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors. Since every term of
//! a [`HomogPoly`] has the same total degree, graded-lex order is plain lex
//! order on the exponent vectors; iteration via [`HomogPoly::terms`] yields
//! the largest monomial (`x0^d`) first.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem, FieldKind};
use crate::linalg::Matrix;

pub use parse::{parse_affine, parse_element, parse_poly};

pub type Exponent = Vec<u32>;

fn insert_term(terms: &mut BTreeMap<Exponent, FieldElem>, exp: Exponent, c: FieldElem) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&exp) {
        Some(existing) => {
            let sum = &*existing + &c;
            if sum.is_zero() {
                terms.remove(&exp);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(exp, c);
        }
    }
}

fn check_index(index: usize, nvars: usize) -> Result<()> {
    if index < nvars {
        Ok(())
    } else {
        Err(Error::VariableIndex { index, nvars })
    }
}

/// Homogeneous polynomial in `nvars` variables with an explicit degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, FieldElem>,
}

impl HomogPoly {
    pub fn zero(field: &Field, nvars: usize, degree: u32) -> HomogPoly {
        HomogPoly {
            field: field.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: &FieldElem, nvars: usize) -> HomogPoly {
        let mut p = HomogPoly::zero(c.field(), nvars, 0);
        insert_term(&mut p.terms, vec![0; nvars], c.clone());
        p
    }

    pub fn variable(field: &Field, nvars: usize, index: usize) -> Result<HomogPoly> {
        check_index(index, nvars)?;
        let mut exp = vec![0; nvars];
        exp[index] = 1;
        Ok(HomogPoly::monomial(field.one(), exp))
    }

    pub fn monomial(coeff: FieldElem, exp: Exponent) -> HomogPoly {
        let degree = exp.iter().sum();
        let mut p = HomogPoly::zero(coeff.field(), exp.len(), degree);
        insert_term(&mut p.terms, exp, coeff);
        p
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(field: &Field, coeffs: &[FieldElem]) -> HomogPoly {
        let nvars = coeffs.len();
        let mut p = HomogPoly::zero(field, nvars, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; nvars];
            exp[i] = 1;
            insert_term(&mut p.terms, exp, c.clone());
        }
        p
    }

    /// Builds a polynomial from terms, all of total degree `degree`.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, FieldElem)>,
    ) -> Result<HomogPoly> {
        let mut p = HomogPoly::zero(field, nvars, degree);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::Dimension(format!(
                    "exponent of length {} in {nvars} variables",
                    exp.len()
                )));
            }
            if exp.iter().sum::<u32>() != degree {
                return Err(Error::NotHomogeneous);
            }
            field.ensure_same(c.field())?;
            insert_term(&mut p.terms, exp, c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &FieldElem)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exp: &[u32]) -> FieldElem {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElem> {
        self.terms.values().next_back()
    }

    pub fn uses_variable(&self, index: usize) -> bool {
        self.terms.keys().any(|e| e[index] > 0)
    }

    fn compatible(&self, other: &HomogPoly) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if self.nvars != other.nvars {
            return Err(Error::Dimension(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            insert_term(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomogPoly {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &FieldElem) -> HomogPoly {
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree);
        for (e, a) in &self.terms {
            insert_term(&mut out.terms, e.clone(), a * c);
        }
        out
    }

    pub fn multiply(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.compatible(other)?;
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                insert_term(&mut out.terms, e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        let mut acc = HomogPoly::constant(&self.field.one(), self.nvars);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        for v in point {
            self.field.ensure_same(v.field())?;
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// `g(x) = f(M x)`.
    pub fn linear_substitute(&self, m: &Matrix) -> Result<HomogPoly> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} variables",
                m.rows(),
                m.cols(),
                self.nvars
            )));
        }
        self.field.ensure_same(m.field())?;
        let images: Vec<HomogPoly> = (0..self.nvars)
            .map(|i| HomogPoly::linear(&self.field, &m.row(i)))
            .collect();
        let mut powers: Vec<Vec<HomogPoly>> = images
            .iter()
            .map(|l| {
                vec![
                    HomogPoly::constant(&self.field.one(), self.nvars),
                    l.clone(),
                ]
            })
            .collect();
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree);
        for (e, c) in &self.terms {
            let mut t = HomogPoly::constant(c, self.nvars);
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().multiply(&images[i])?;
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.multiply(&powers[i][k])?;
                }
            }
            for (te, tc) in t.terms {
                insert_term(&mut out.terms, te, tc);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, index: usize) -> Result<HomogPoly> {
        check_index(index, self.nvars)?;
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[index] -= 1;
            insert_term(&mut out.terms, d, c * &self.field.from_i64(e[index] as i64));
        }
        Ok(out)
    }

    /// All partial derivatives, in variable order.
    pub fn gradient(&self) -> Vec<HomogPoly> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).unwrap())
            .collect()
    }

    /// `(f_0, ..., f_d)` with `f = sum_k x_i^k f_k`. Every `f_k` keeps all
    /// `nvars` variables (with `x_i` absent) and has declared degree `d - k`.
    pub fn split_by_variable(&self, index: usize) -> Result<Vec<HomogPoly>> {
        check_index(index, self.nvars)?;
        let mut parts: Vec<HomogPoly> = (0..=self.degree)
            .map(|k| HomogPoly::zero(&self.field, self.nvars, self.degree - k))
            .collect();
        for (e, c) in &self.terms {
            let k = e[index] as usize;
            let mut rest = e.clone();
            rest[index] = 0;
            insert_term(&mut parts[k].terms, rest, c.clone());
        }
        Ok(parts)
    }

    /// Substitutes `x_index = 0`, keeping the variable count.
    pub fn set_zero(&self, index: usize) -> Result<HomogPoly> {
        check_index(index, self.nvars)?;
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree);
        for (e, c) in &self.terms {
            if e[index] == 0 {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Removes a variable that does not occur, shifting later indices down.
    pub fn drop_variable(&self, index: usize) -> Result<HomogPoly> {
        check_index(index, self.nvars)?;
        if self.uses_variable(index) {
            return Err(Error::Precondition(format!(
                "x{index} occurs in {self} and cannot be dropped"
            )));
        }
        let mut out = HomogPoly::zero(&self.field, self.nvars - 1, self.degree);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.remove(index);
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    /// Keeps only the first `k` variables; the rest must not occur.
    pub fn truncate_variables(&self, k: usize) -> Result<HomogPoly> {
        let mut out = self.clone();
        for i in (k..self.nvars).rev() {
            out = out.drop_variable(i)?;
        }
        Ok(out)
    }

    /// Inserts a fresh variable at position `index`.
    pub fn insert_variable(&self, index: usize) -> Result<HomogPoly> {
        check_index(index, self.nvars + 1)?;
        let mut out = HomogPoly::zero(&self.field, self.nvars + 1, self.degree);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.insert(index, 0);
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    /// Renames variables: old variable `i` becomes `new_index[i]` in a ring of
    /// `new_nvars` variables.
    pub fn reindex(&self, new_index: &[usize], new_nvars: usize) -> Result<HomogPoly> {
        if new_index.len() != self.nvars {
            return Err(Error::Dimension("reindex map length".into()));
        }
        let mut out = HomogPoly::zero(&self.field, new_nvars, self.degree);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_nvars];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    check_index(new_index[i], new_nvars)?;
                    ne[new_index[i]] += k;
                }
            }
            insert_term(&mut out.terms, ne, c.clone());
        }
        Ok(out)
    }

    /// Sets `x_index = 1`.
    pub fn dehomogenize(&self, index: usize) -> Result<AffinePoly> {
        check_index(index, self.nvars)?;
        let mut out = AffinePoly::zero(&self.field, self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.remove(index);
            insert_term(&mut out.terms, e, c.clone());
        }
        Ok(out)
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coefficients(&self) -> Option<Vec<FieldElem>> {
        if self.degree != 1 {
            return None;
        }
        Some(
            (0..self.nvars)
                .map(|i| {
                    let mut e = vec![0; self.nvars];
                    e[i] = 1;
                    self.coefficient(&e)
                })
                .collect(),
        )
    }

    /// Scales so the leading graded-lex coefficient is 1.
    pub fn monic(&self) -> HomogPoly {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Applies `f` to every coefficient, landing in `target`.
    pub fn map_coefficients(
        &self,
        target: &Field,
        mut f: impl FnMut(&FieldElem) -> Result<FieldElem>,
    ) -> Result<HomogPoly> {
        let mut out = HomogPoly::zero(target, self.nvars, self.degree);
        for (e, c) in &self.terms {
            let v = f(c)?;
            target.ensure_same(v.field())?;
            insert_term(&mut out.terms, e.clone(), v);
        }
        Ok(out)
    }
}

fn fmt_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{k}")
            }
        })
        .collect();
    parts.join("*")
}

/// (negative, magnitude text) for a coefficient in the text grammar.
fn coefficient_text(c: &FieldElem) -> (bool, String) {
    match c.field().kind() {
        FieldKind::Prime => {
            let s = c.symmetric_residue().unwrap();
            (s < 0, s.abs().to_string())
        }
        FieldKind::Rationals => {
            let r = c.as_rational().unwrap();
            let neg = r < &num_rational::BigRational::from_integer(0.into());
            let abs = if neg { -r } else { r.clone() };
            (neg, abs.to_string())
        }
        FieldKind::Extension => {
            let text = c.to_string();
            if text.contains('+') {
                (false, format!("({text})"))
            } else {
                (false, text)
            }
        }
    }
}

fn write_terms<'a>(
    out: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Exponent, &'a FieldElem)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let (neg, mag) = coefficient_text(c);
        let mono = fmt_monomial(e);
        let body = if mono.is_empty() {
            mag
        } else if mag == "1" {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        match (first, neg) {
            (true, false) => write!(out, "{body}")?,
            (true, true) => write!(out, "-{body}")?,
            (false, false) => write!(out, " + {body}")?,
            (false, true) => write!(out, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(out, "0")?;
    }
    Ok(())
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(out, self.terms())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HomogPoly[{} over {}; deg {}]({self})",
            self.nvars, self.field, self.degree
        )
    }
}

/// Inhomogeneous polynomial, the result of passing to an affine chart.
#[derive(Clone, PartialEq, Eq)]
pub struct AffinePoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exponent, FieldElem>,
}

impl AffinePoly {
    pub fn zero(field: &Field, nvars: usize) -> AffinePoly {
        AffinePoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: &FieldElem, nvars: usize) -> AffinePoly {
        let mut p = AffinePoly::zero(c.field(), nvars);
        insert_term(&mut p.terms, vec![0; nvars], c.clone());
        p
    }

    pub fn variable(field: &Field, nvars: usize, index: usize) -> Result<AffinePoly> {
        check_index(index, nvars)?;
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = AffinePoly::zero(field, nvars);
        p.terms.insert(e, field.one());
        Ok(p)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Terms in graded-lex order, largest first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &FieldElem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v.into_iter()
    }

    fn compatible(&self, other: &AffinePoly) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if self.nvars != other.nvars {
            return Err(Error::Dimension(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AffinePoly) -> Result<AffinePoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            insert_term(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> AffinePoly {
        self.scale(&-self.field.one())
    }

    pub fn sub(&self, other: &AffinePoly) -> Result<AffinePoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> AffinePoly {
        let mut out = AffinePoly::zero(&self.field, self.nvars);
        for (e, a) in &self.terms {
            insert_term(&mut out.terms, e.clone(), a * c);
        }
        out
    }

    pub fn multiply(&self, other: &AffinePoly) -> Result<AffinePoly> {
        self.compatible(other)?;
        let mut out = AffinePoly::zero(&self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                insert_term(&mut out.terms, e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> AffinePoly {
        let mut acc = AffinePoly::constant(&self.field.one(), self.nvars);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Homogenizes to the maximal total degree with a new variable inserted
    /// at `index`.
    pub fn homogenize(&self, index: usize) -> Result<HomogPoly> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        self.homogenize_to_degree(index, d)
    }

    /// Homogenizes to degree `degree`, which must be at least the total degree.
    pub fn homogenize_to_degree(&self, index: usize, degree: u32) -> Result<HomogPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        check_index(index, self.nvars + 1)?;
        let d = self.total_degree().unwrap();
        if degree < d {
            return Err(Error::WrongDegree {
                expected: d,
                got: degree,
            });
        }
        let mut out = HomogPoly::zero(&self.field, self.nvars + 1, degree);
        for (e, c) in &self.terms {
            let s: u32 = e.iter().sum();
            let mut ne = e.clone();
            ne.insert(index, degree - s);
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Converts to a homogeneous polynomial if every term has the same degree.
    pub fn to_homogeneous(&self) -> Result<HomogPoly> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let degree = match degrees.next() {
            Some(d) => d,
            None => return Ok(HomogPoly::zero(&self.field, self.nvars, 0)),
        };
        if degrees.any(|d| d != degree) {
            return Err(Error::NotHomogeneous);
        }
        HomogPoly::from_terms(
            &self.field,
            self.nvars,
            degree,
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

impl fmt::Display for AffinePoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(out, self.terms())
    }
}

impl fmt::Debug for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffinePoly[{} over {}]({self})", self.nvars, self.field)
    }
}
