use crate::error::{Error, Result};
use crate::fields::FieldElem;
use crate::kclass::{projective_space, Atom, Check, ClassExpr, CountTerm, Trace};
use crate::linalg::rank_of;
use crate::poly::HomogPoly;

use super::{locus, require_same_ring, variety, Options, StratResult};

/// Class of the cone in `P^n` with apex `[0:...:0:1]` over
/// `Z = V(generators)` in `P^(n-1)`: `1 + L*[Z]`.
pub fn class_of_cone(z_generators: &[HomogPoly], _opts: &Options) -> Result<StratResult> {
    if z_generators.is_empty() {
        return Err(Error::Precondition(
            "the cone needs at least one generator".into(),
        ));
    }
    require_same_ring(&z_generators.iter().collect::<Vec<_>>())?;
    let field = z_generators[0].field().clone();
    let nz = z_generators[0].nvars();
    if nz == 0 {
        return Err(Error::Dimension("Z must live in P^m with m >= 0".into()));
    }
    let n = nz;
    let x_gens: Vec<HomogPoly> = z_generators
        .iter()
        .map(|g| g.insert_variable(n))
        .collect::<Result<_>>()?;
    let z_refs: Vec<&HomogPoly> = z_generators.iter().collect();
    let x_refs: Vec<&HomogPoly> = x_gens.iter().collect();
    let z_locus = locus(n - 1, &z_refs);
    let x_locus = locus(n, &x_refs);
    let mut trace = Trace::new();
    trace.identity(
        "cone.fibration",
        "apex plus an A^1 bundle over Z (the complement of the apex)",
        0,
        vec![CountTerm::locus(1, 0, x_locus.clone())],
        vec![
            CountTerm::constant(1, 0),
            CountTerm::locus(1, 1, z_locus.clone()),
        ],
    );
    let all_linear = z_generators.iter().all(|g| g.degree() == 1 || g.is_zero());
    let z_class = if all_linear {
        let rows: Vec<Vec<FieldElem>> = z_generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.linear_coefficients().unwrap())
            .collect();
        let r = rank_of(&field, &rows)? as i64;
        let c = projective_space(n as i64 - 1 - r);
        trace.push(
            "cone.linear_base",
            format!("Z is a linear space of codimension {r}: [Z] = {c}"),
            1,
            Check::Class {
                class: c.clone(),
                locus: z_locus,
            },
        );
        c
    } else if z_generators.iter().any(|g| g.degree() == 0 && !g.is_zero()) {
        ClassExpr::zero()
    } else {
        ClassExpr::atom(Atom::Variety(variety(n - 1, z_generators.to_vec())), 0)
    };
    let class = ClassExpr::one().add(&z_class.lshift(1));
    Ok(StratResult::new(class, trace, x_locus))
}
