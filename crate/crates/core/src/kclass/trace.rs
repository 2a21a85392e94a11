//! Audit trail of a stratification: each step carries a point-count
//! statement that can be checked by enumeration.

use serde_json::{json, Value as Json};

use crate::count::{count_points, enumerate_points, CountQuery};
use crate::error::Result;
use crate::poly::HomogPoly;

use super::ClassExpr;

/// `coeff * q^q_power * #locus`, or `coeff * q^q_power` without a locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTerm {
    pub coeff: i64,
    pub q_power: u32,
    pub locus: Option<CountQuery>,
}

impl CountTerm {
    pub fn locus(coeff: i64, q_power: u32, locus: CountQuery) -> CountTerm {
        CountTerm {
            coeff,
            q_power,
            locus: Some(locus),
        }
    }

    pub fn constant(coeff: i64, q_power: u32) -> CountTerm {
        CountTerm {
            coeff,
            q_power,
            locus: None,
        }
    }

    fn describe(&self) -> String {
        let mut s = String::new();
        if self.coeff != 1 {
            s.push_str(&format!("{}*", self.coeff));
        }
        if self.q_power > 0 || self.locus.is_none() {
            s.push_str(&format!("q^{}", self.q_power));
        }
        if let Some(l) = &self.locus {
            if !s.is_empty() && !s.ends_with('*') {
                s.push('*');
            }
            s.push_str(&format!("#[{}]", l.describe()));
        }
        s
    }

    fn evaluate(&self, q: i128, budget: u64) -> Result<i128> {
        let n = match &self.locus {
            Some(l) => count_points(l, budget)? as i128,
            None => 1,
        };
        Ok(self.coeff as i128 * q.pow(self.q_power) * n)
    }
}

/// `sum(lhs) = sum(rhs)` after counting every locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Vec<CountTerm>,
    pub rhs: Vec<CountTerm>,
}

impl Identity {
    pub fn new(lhs: Vec<CountTerm>, rhs: Vec<CountTerm>) -> Identity {
        Identity { lhs, rhs }
    }

    /// `#[P^n] = 1 + q + ... + q^n` as a list of constant terms.
    pub fn projective_terms(n: i64, coeff: i64) -> Vec<CountTerm> {
        (0..=n)
            .map(|k| CountTerm::constant(coeff, k as u32))
            .collect()
    }

    pub fn describe(&self) -> String {
        let side = |ts: &[CountTerm]| {
            if ts.is_empty() {
                "0".to_string()
            } else {
                ts.iter()
                    .map(CountTerm::describe)
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        format!("{} = {}", side(&self.lhs), side(&self.rhs))
    }

    fn field_order(&self) -> Option<u64> {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .find_map(|t| t.locus.as_ref().map(|l| l.field.order()))
            .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    None,
    Identity(Identity),
    /// Every point of `locus` is a singular point of `V(poly)`.
    SingularContainment {
        locus: CountQuery,
        poly: HomogPoly,
    },
    /// `count_measure(class) = #locus`.
    Class {
        class: ClassExpr,
        locus: CountQuery,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass { lhs: i128, rhs: i128 },
    Fail { lhs: i128, rhs: i128 },
    Skipped(String),
}

impl Verdict {
    fn compare(lhs: i128, rhs: i128) -> Verdict {
        if lhs == rhs {
            Verdict::Pass { lhs, rhs }
        } else {
            Verdict::Fail { lhs, rhs }
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn to_json(&self) -> Json {
        match self {
            Verdict::Pass { lhs, rhs } => {
                json!({"status": "pass", "lhs": lhs.to_string(), "rhs": rhs.to_string()})
            }
            Verdict::Fail { lhs, rhs } => {
                json!({"status": "fail", "lhs": lhs.to_string(), "rhs": rhs.to_string()})
            }
            Verdict::Skipped(why) => json!({"status": "skipped", "reason": why}),
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass { lhs, rhs } => write!(f, "pass ({lhs} = {rhs})"),
            Verdict::Fail { lhs, rhs } => write!(f, "FAIL ({lhs} != {rhs})"),
            Verdict::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// Short name of the rule applied, e.g. `quadric.smooth`.
    pub rule: String,
    pub description: String,
    pub depth: usize,
    pub check: Check,
}

impl Step {
    pub fn verify(&self, budget: u64) -> Result<Verdict> {
        match &self.check {
            Check::None => Ok(Verdict::Skipped("no countable statement".into())),
            Check::Identity(id) => {
                let Some(q) = id.field_order() else {
                    return Ok(Verdict::Skipped("not over a finite field".into()));
                };
                let q = q as i128;
                let sum = |ts: &[CountTerm]| -> Result<i128> {
                    ts.iter().map(|t| t.evaluate(q, budget)).sum()
                };
                Ok(Verdict::compare(sum(&id.lhs)?, sum(&id.rhs)?))
            }
            Check::SingularContainment { locus, poly } => {
                if !locus.field.is_finite() {
                    return Ok(Verdict::Skipped("not over a finite field".into()));
                }
                let grad = poly.gradient();
                let mut total = 0i128;
                let mut singular = 0i128;
                for pt in enumerate_points(locus, budget)? {
                    total += 1;
                    let sing = poly.evaluate(&pt)?.is_zero()
                        && grad
                            .iter()
                            .all(|g| g.evaluate(&pt).is_ok_and(|v| v.is_zero()));
                    if sing {
                        singular += 1;
                    }
                }
                Ok(Verdict::compare(total, singular))
            }
            Check::Class { class, locus } => {
                let Some(q) = locus.field.order() else {
                    return Ok(Verdict::Skipped("not over a finite field".into()));
                };
                let lhs = class.count_measure(q, budget)?;
                let rhs = count_points(locus, budget)? as i128;
                Ok(Verdict::compare(lhs, rhs))
            }
        }
    }

    pub fn check_text(&self) -> Option<String> {
        match &self.check {
            Check::None => None,
            Check::Identity(id) => Some(id.describe()),
            Check::SingularContainment { locus, poly } => {
                Some(format!("[{}] in Sing V({poly})", locus.describe()))
            }
            Check::Class { class, locus } => Some(format!("{class} ~ #[{}]", locus.describe())),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    steps: Vec<Step>,
}

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, rule: &str, description: impl Into<String>, depth: usize, check: Check) {
        self.steps.push(Step {
            rule: rule.into(),
            description: description.into(),
            depth,
            check,
        });
    }

    pub fn identity(
        &mut self,
        rule: &str,
        description: impl Into<String>,
        depth: usize,
        lhs: Vec<CountTerm>,
        rhs: Vec<CountTerm>,
    ) {
        self.push(
            rule,
            description,
            depth,
            Check::Identity(Identity::new(lhs, rhs)),
        );
    }

    /// Appends the steps of a sub-computation, nested `depth` levels deeper.
    pub fn extend_nested(&mut self, other: &Trace, depth: usize) {
        for s in &other.steps {
            let mut s = s.clone();
            s.depth += depth;
            self.steps.push(s);
        }
    }

    pub fn verify(&self, budget: u64) -> Result<Vec<Verdict>> {
        self.steps.iter().map(|s| s.verify(budget)).collect()
    }
}
