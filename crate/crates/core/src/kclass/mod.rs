//! Class expressions in the Grothendieck ring: an integer polynomial in `L`
//! plus `L`-shifted residual atoms.

mod trace;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};

use crate::count::{count_points, CountQuery};
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::poly::HomogPoly;

pub use trace::{Check, CountTerm, Identity, Step, Trace, Verdict};

/// A subvariety of `P^ambient` cut out by homogeneous generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyAtom {
    pub field: Field,
    pub ambient: usize,
    pub generators: Vec<HomogPoly>,
    pub label: String,
    /// False when the engine had to stop early (for instance no rational
    /// point was found over Q) rather than by design.
    pub resolved: bool,
}

impl VarietyAtom {
    pub fn new(
        label: impl Into<String>,
        ambient: usize,
        generators: Vec<HomogPoly>,
    ) -> VarietyAtom {
        let field = generators
            .first()
            .map(|g| g.field().clone())
            .expect("variety atom needs at least one generator");
        VarietyAtom {
            field,
            ambient,
            generators,
            label: label.into(),
            resolved: true,
        }
    }

    pub fn unresolved(mut self) -> VarietyAtom {
        self.resolved = false;
        self
    }

    pub fn query(&self) -> CountQuery {
        CountQuery::new(&self.field, self.ambient).with_all(self.generators.iter().cloned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// Spectrum of a product of field extensions of the given degrees.
    Etale {
        degrees: Vec<u32>,
    },
    Variety(VarietyAtom),
}

impl Atom {
    pub fn etale(mut degrees: Vec<u32>) -> Atom {
        assert!(
            degrees.iter().all(|&d| d >= 1),
            "etale degrees are positive"
        );
        degrees.sort_unstable();
        Atom::Etale { degrees }
    }

    pub fn label(&self) -> String {
        match self {
            Atom::Etale { degrees } => {
                let d: Vec<String> = degrees.iter().map(u32::to_string).collect();
                format!("etale{{{}}}", d.join(","))
            }
            Atom::Variety(v) => v.label.clone(),
        }
    }

    /// Number of degree-one factors, for etale atoms.
    pub fn rational_points(&self) -> Option<i64> {
        match self {
            Atom::Etale { degrees } => Some(degrees.iter().filter(|&&d| d == 1).count() as i64),
            Atom::Variety(_) => None,
        }
    }

    fn sort_key(&self) -> (String, String) {
        let detail = match self {
            Atom::Etale { .. } => String::new(),
            Atom::Variety(v) => {
                let g: Vec<String> = v.generators.iter().map(|g| g.to_string()).collect();
                format!("{}|{}|{}", v.field, v.ambient, g.join(","))
            }
        };
        (self.label(), detail)
    }

    pub fn to_json(&self) -> Json {
        match self {
            Atom::Etale { degrees } => json!({ "kind": "etale", "degrees": degrees }),
            Atom::Variety(v) => json!({
                "kind": "variety",
                "label": v.label,
                "field": v.field.to_string(),
                "ambient": v.ambient,
                "generators": v.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "resolved": v.resolved,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub coeff: i64,
    pub shift: u32,
    pub atom: Atom,
}

/// Residue of a class modulo `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue {
    Value(i64),
    Indeterminate,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Value(v) => write!(f, "{v}"),
            Residue::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// `sum c_i L^i + sum coeff_j L^(shift_j) [atom_j]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassExpr {
    coeffs: BTreeMap<u32, i64>,
    residuals: Vec<Residual>,
}

impl ClassExpr {
    pub fn zero() -> ClassExpr {
        ClassExpr::default()
    }

    pub fn constant(c: i64) -> ClassExpr {
        ClassExpr::monomial(c, 0)
    }

    pub fn one() -> ClassExpr {
        ClassExpr::constant(1)
    }

    /// `c * L^k`.
    pub fn monomial(c: i64, k: u32) -> ClassExpr {
        let mut e = ClassExpr::zero();
        if c != 0 {
            e.coeffs.insert(k, c);
        }
        e
    }

    /// `L^shift [atom]`.
    pub fn atom(atom: Atom, shift: u32) -> ClassExpr {
        ClassExpr {
            coeffs: BTreeMap::new(),
            residuals: vec![Residual {
                coeff: 1,
                shift,
                atom,
            }],
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    pub fn residuals(&self) -> &[Residual] {
        &self.residuals
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.residuals.is_empty()
    }

    /// No residuals other than etale atoms.
    pub fn is_fully_resolved(&self) -> bool {
        self.residuals
            .iter()
            .all(|r| matches!(r.atom, Atom::Etale { .. }))
    }

    /// Pure polynomial in `L`, with no residuals at all.
    pub fn is_polynomial(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn add(&self, other: &ClassExpr) -> ClassExpr {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &ClassExpr) -> ClassExpr {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: i64) -> ClassExpr {
        ClassExpr::zero().combine(self, c)
    }

    fn combine(&self, other: &ClassExpr, sign: i64) -> ClassExpr {
        let mut out = self.clone();
        for (&k, &c) in &other.coeffs {
            let v = out.coeffs.entry(k).or_insert(0);
            *v += sign * c;
            if *v == 0 {
                out.coeffs.remove(&k);
            }
        }
        for r in &other.residuals {
            match out
                .residuals
                .iter_mut()
                .find(|x| x.shift == r.shift && x.atom == r.atom)
            {
                Some(x) => x.coeff += sign * r.coeff,
                None => out.residuals.push(Residual {
                    coeff: sign * r.coeff,
                    ..r.clone()
                }),
            }
        }
        out.normalize();
        out
    }

    /// Multiplication by `L^k`.
    pub fn lshift(&self, k: u32) -> ClassExpr {
        ClassExpr {
            coeffs: self.coeffs.iter().map(|(&i, &c)| (i + k, c)).collect(),
            residuals: self
                .residuals
                .iter()
                .map(|r| Residual {
                    shift: r.shift + k,
                    ..r.clone()
                })
                .collect(),
        }
    }

    fn normalize(&mut self) {
        self.residuals.retain(|r| r.coeff != 0);
        self.residuals.sort_by(|a, b| {
            a.shift
                .cmp(&b.shift)
                .then_with(|| a.atom.sort_key().cmp(&b.atom.sort_key()))
                .then(Ordering::Equal)
        });
    }

    /// Constant term, when no variety atom sits at shift 0.
    pub fn residue_mod_l(&self) -> Residue {
        let mut value = self.coeff(0);
        for r in self.residuals.iter().filter(|r| r.shift == 0) {
            match r.atom.rational_points() {
                Some(n) => value += r.coeff * n,
                None => return Residue::Indeterminate,
            }
        }
        Residue::Value(value)
    }

    /// Image under the counting measure `L -> q`. Variety atoms are counted
    /// by enumeration and must live over `F_q`.
    pub fn count_measure(&self, q: u64, budget: u64) -> Result<i128> {
        let q = q as i128;
        let mut total: i128 = self
            .coeffs
            .iter()
            .map(|(&k, &c)| c as i128 * q.pow(k))
            .sum();
        for r in &self.residuals {
            let n = match &r.atom {
                Atom::Etale { .. } => r.atom.rational_points().unwrap() as i128,
                Atom::Variety(v) => {
                    if !v.field.is_finite() {
                        return Err(Error::UncountableAtom(v.label.clone()));
                    }
                    if v.field.order() != Some(q as u64) {
                        return Err(Error::FieldMismatch(
                            v.field.to_string(),
                            format!("q = {q}"),
                        ));
                    }
                    count_points(&v.query(), budget)? as i128
                }
            };
            total += r.coeff as i128 * q.pow(r.shift) * n;
        }
        Ok(total)
    }

    /// `{"coeffs": {"0": 1, ...}, "residuals": [{"coeff", "shift", "atom"}]}`.
    pub fn to_json(&self) -> Json {
        let coeffs: serde_json::Map<String, Json> = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.to_string(), json!(c)))
            .collect();
        let residuals: Vec<Json> = self
            .residuals
            .iter()
            .map(|r| json!({ "coeff": r.coeff, "shift": r.shift, "atom": r.atom.to_json() }))
            .collect();
        json!({ "coeffs": coeffs, "residuals": residuals })
    }
}

/// `[P^n] = 1 + L + ... + L^n`.
pub fn projective_space_class(n: i64) -> Result<ClassExpr> {
    if n < 0 {
        return Err(Error::Precondition(format!("P^{n} has negative dimension")));
    }
    Ok(projective_space(n))
}

/// Like [`projective_space_class`] but with `[P^n] = 0` for `n < 0`.
pub(crate) fn projective_space(n: i64) -> ClassExpr {
    let mut e = ClassExpr::zero();
    for i in 0..=n {
        e.coeffs.insert(i as u32, 1);
    }
    e
}

fn power_text(k: u32) -> String {
    match k {
        0 => String::new(),
        1 => "L".into(),
        _ => format!("L^{k}"),
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(i64, String)> = Vec::new();
        for (&k, &c) in &self.coeffs {
            pieces.push((c, power_text(k)));
        }
        for r in &self.residuals {
            let p = power_text(r.shift);
            let a = format!("[{}]", r.atom.label());
            pieces.push((r.coeff, if p.is_empty() { a } else { format!("{p}*{a}") }));
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, body)) in pieces.iter().enumerate() {
            let mag = c.unsigned_abs();
            let term = match (mag, body.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => body.clone(),
                _ => format!("{mag}*{body}"),
            };
            match (i, *c < 0) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{projective_count, DEFAULT_BUDGET};
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn poly(coeffs: &[(u32, i64)]) -> ClassExpr {
        coeffs.iter().fold(ClassExpr::zero(), |acc, &(k, c)| {
            acc.add(&ClassExpr::monomial(c, k))
        })
    }

    fn z_atom() -> Atom {
        let f3 = Field::prime(3).unwrap();
        Atom::Variety(VarietyAtom::new(
            "Z",
            1,
            vec![parse_poly("x0^2 + x1^2", &f3, 2).unwrap()],
        ))
    }

    #[test]
    fn ring_examples() {
        let a = poly(&[(0, 1), (1, 2)]);
        assert_eq!(a.add(&ClassExpr::one()), poly(&[(0, 2), (1, 2)]));
        let z = ClassExpr::one().add(&ClassExpr::atom(z_atom(), 0));
        let shifted = z.lshift(2);
        assert_eq!(shifted.to_string(), "L^2 + L^2*[Z]");
        let b = poly(&[(0, 1), (1, 1)]);
        assert!(b.sub(&b).is_zero());
        let x = ClassExpr::atom(z_atom(), 1);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn projective_space_examples() {
        assert_eq!(projective_space_class(0).unwrap(), ClassExpr::one());
        assert_eq!(
            projective_space_class(2).unwrap().to_string(),
            "1 + L + L^2"
        );
        assert_eq!(projective_space_class(1).unwrap().to_string(), "1 + L");
        assert!(projective_space_class(-1).is_err());
        assert!(projective_space(-1).is_zero());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(poly(&[(0, 1), (1, 2)]).residue_mod_l(), Residue::Value(1));
        let e = ClassExpr::one().add(&ClassExpr::atom(z_atom(), 1));
        assert_eq!(e.residue_mod_l(), Residue::Value(1));
        let et = ClassExpr::atom(Atom::etale(vec![2]), 0);
        assert_eq!(et.residue_mod_l(), Residue::Value(0));
        assert_eq!(
            ClassExpr::atom(z_atom(), 0).residue_mod_l(),
            Residue::Indeterminate
        );
        let split = ClassExpr::atom(Atom::etale(vec![1, 1]), 0);
        assert_eq!(split.residue_mod_l(), Residue::Value(2));
    }

    #[test]
    fn count_measure_examples() {
        assert_eq!(
            poly(&[(0, 1), (1, 2)])
                .count_measure(3, DEFAULT_BUDGET)
                .unwrap(),
            7
        );
        let e = ClassExpr::one().add(&ClassExpr::atom(Atom::etale(vec![2]), 1));
        assert_eq!(e.count_measure(5, DEFAULT_BUDGET).unwrap(), 1);
        let p3 = projective_space_class(3).unwrap();
        assert_eq!(p3.count_measure(3, DEFAULT_BUDGET).unwrap(), 40);
        // V(x0^2 + x1^2) over F_3 is empty
        let z = ClassExpr::one().add(&ClassExpr::atom(z_atom(), 1));
        assert_eq!(z.count_measure(3, DEFAULT_BUDGET).unwrap(), 1);
        let q = Field::rationals();
        let rat = Atom::Variety(VarietyAtom::new(
            "W",
            1,
            vec![parse_poly("x0", &q, 2).unwrap()],
        ));
        assert!(matches!(
            ClassExpr::atom(rat, 0).count_measure(3, DEFAULT_BUDGET),
            Err(Error::UncountableAtom(_))
        ));
    }

    #[test]
    fn display_and_json() {
        let e = poly(&[(0, 1), (1, -2), (2, 1)]).sub(&ClassExpr::atom(z_atom(), 1));
        assert_eq!(e.to_string(), "1 - 2*L + L^2 - L*[Z]");
        let j = e.to_json();
        assert_eq!(j["coeffs"]["1"], json!(-2));
        assert_eq!(j["residuals"][0]["shift"], json!(1));
        assert_eq!(
            j["residuals"][0]["atom"]["generators"][0],
            json!("x0^2 + x1^2")
        );
        assert_eq!(ClassExpr::zero().to_string(), "0");
    }

    #[test]
    fn projective_space_matches_enumeration() {
        for q in [3u64, 5, 7] {
            for n in 0..=4 {
                let field = Field::prime(q as u32).unwrap();
                let c = count_points(&CountQuery::new(&field, n), DEFAULT_BUDGET).unwrap();
                assert_eq!(c as u128, projective_count(q, n as i64));
                let m = projective_space_class(n as i64).unwrap();
                assert_eq!(m.count_measure(q, DEFAULT_BUDGET).unwrap(), c as i128);
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = ClassExpr> {
        let etale = prop_oneof![
            Just(Atom::etale(vec![1, 1])),
            Just(Atom::etale(vec![2])),
            Just(Atom::etale(vec![1, 2])),
        ];
        (
            prop::collection::vec((0u32..4, -5i64..6), 0..5),
            prop::collection::vec((-3i64..4, 0u32..3, etale), 0..3),
        )
            .prop_map(|(cs, rs)| {
                let mut e = ClassExpr::zero();
                for (k, c) in cs {
                    e = e.add(&ClassExpr::monomial(c, k));
                }
                for (c, s, a) in rs {
                    e = e.add(&ClassExpr::atom(a, s).scale(c));
                }
                e
            })
    }

    proptest! {
        #[test]
        fn counting_measure_is_a_homomorphism(
            a in arb_expr(),
            b in arb_expr(),
            k in 0u32..4,
            q in prop_oneof![Just(3u64), Just(5), Just(7)],
        ) {
            let m = |e: &ClassExpr| e.count_measure(q, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(m(&a.add(&b)), m(&a) + m(&b));
            prop_assert_eq!(m(&a.sub(&b)), m(&a) - m(&b));
            prop_assert_eq!(m(&a.lshift(k)), m(&a) * (q as i128).pow(k));
            if let Residue::Value(r) = a.residue_mod_l() {
                prop_assert_eq!((m(&a) - r as i128).rem_euclid(q as i128), 0);
            }
        }
    }
}
