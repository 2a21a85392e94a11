//! The stratification engine. Each operation returns a class expression
//! together with a trace whose steps can be re-checked by point counting.

mod arrangement;
mod cone;
mod cubic;
mod quadric;
mod two_quadrics;

use serde_json::{json, Value as Json};

use crate::count::{CountQuery, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::kclass::{Check, ClassExpr, Residue, Step, Trace, VarietyAtom, Verdict};
use crate::poly::HomogPoly;

pub use arrangement::{arrangement_inclusion_exclusion, class_of_arrangement, dedupe_linear};
pub use cone::class_of_cone;
pub use cubic::{class_of_singular_cubic, find_singular_rational_point, PointSearch};
pub use quadric::class_of_quadric;
pub use two_quadrics::class_of_two_quadric_union;

/// Knobs shared by all engine operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Maximum number of coordinate tuples per point count or search.
    pub budget: u64,
    /// Height bound for rational point searches over Q.
    pub height: u32,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            budget: DEFAULT_BUDGET,
            height: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratResult {
    pub class: ClassExpr,
    pub trace: Trace,
    pub residue: Residue,
    pub hypotheses: Vec<Hypothesis>,
    pub warnings: Vec<String>,
    /// The variety whose class was computed.
    pub input: CountQuery,
}

impl StratResult {
    pub fn new(class: ClassExpr, trace: Trace, input: CountQuery) -> StratResult {
        StratResult {
            residue: class.residue_mod_l(),
            class,
            trace,
            hypotheses: Vec::new(),
            warnings: Vec::new(),
            input,
        }
    }

    pub fn hypothesis(&mut self, name: impl Into<String>, holds: bool) {
        self.hypotheses.push(Hypothesis {
            name: name.into(),
            holds,
        });
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// Records `d <= n`; a violation is kept as a warning, not an error.
    pub(crate) fn degree_hypothesis(&mut self, d: usize, n: usize) {
        let holds = d <= n;
        self.hypothesis(format!("degree {d} <= n = {n}"), holds);
        if !holds {
            self.warn(format!(
                "degree {d} exceeds n = {n}: the class is a valid identity but residue 1 is not guaranteed"
            ));
        }
    }

    pub fn hypotheses_json(&self) -> Json {
        Json::Array(
            self.hypotheses
                .iter()
                .map(|h| json!({"name": h.name, "holds": h.holds}))
                .collect(),
        )
    }
}

/// Outcome of re-checking a result by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub steps: Vec<Verdict>,
    /// `count_measure(class) = #input`.
    pub master: Verdict,
}

impl Verification {
    pub fn passed(&self) -> bool {
        !self.master.is_fail() && self.steps.iter().all(|v| !v.is_fail())
    }
}

pub fn verify(result: &StratResult, budget: u64) -> Result<Verification> {
    let master = Step {
        rule: "master".into(),
        description: "counting measure of the class".into(),
        depth: 0,
        check: Check::Class {
            class: result.class.clone(),
            locus: result.input.clone(),
        },
    };
    Ok(Verification {
        steps: result.trace.verify(budget)?,
        master: master.verify(budget)?,
    })
}

fn variety(ambient: usize, generators: Vec<HomogPoly>) -> VarietyAtom {
    let g: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
    VarietyAtom::new(
        format!("V({}) in P^{ambient}", g.join(", ")),
        ambient,
        generators,
    )
}

fn hypersurface(f: &HomogPoly) -> CountQuery {
    CountQuery::hypersurface(f)
}

fn locus(ambient: usize, gens: &[&HomogPoly]) -> CountQuery {
    let field = gens[0].field();
    CountQuery::new(field, ambient).with_all(gens.iter().map(|g| (*g).clone()))
}

fn require_same_ring(polys: &[&HomogPoly]) -> Result<()> {
    let first = polys[0];
    for p in &polys[1..] {
        first.field().ensure_same(p.field())?;
        if p.nvars() != first.nvars() {
            return Err(Error::Dimension(format!(
                "{} has {} variables, expected {}",
                p,
                p.nvars(),
                first.nvars()
            )));
        }
    }
    Ok(())
}
