use crate::error::{Error, Result};
use crate::fields::FieldElem;
use crate::kclass::{projective_space, Check, ClassExpr, CountTerm, Identity, Trace};
use crate::linalg::{extend_to_basis, normalize_leading, rank_of, Matrix};
use crate::poly::HomogPoly;

use super::{hypersurface, require_same_ring, Options, StratResult};

const MAX_FORMS: usize = 20;

fn check_linear(forms: &[HomogPoly]) -> Result<()> {
    if forms.is_empty() {
        return Err(Error::Precondition("empty list of linear forms".into()));
    }
    require_same_ring(&forms.iter().collect::<Vec<_>>())?;
    for h in forms {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if h.degree() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                got: h.degree(),
            });
        }
    }
    Ok(())
}

/// Removes forms proportional to an earlier one, keeping first occurrences.
pub fn dedupe_linear(forms: &[HomogPoly]) -> Result<Vec<HomogPoly>> {
    check_linear(forms)?;
    let mut seen: Vec<Vec<FieldElem>> = Vec::new();
    let mut out = Vec::new();
    for h in forms {
        let mut v = h.linear_coefficients().unwrap();
        normalize_leading(&mut v);
        if !seen.contains(&v) {
            seen.push(v);
            out.push(h.clone());
        }
    }
    Ok(out)
}

fn product(forms: &[HomogPoly]) -> Result<HomogPoly> {
    let mut f = HomogPoly::constant(&forms[0].field().one(), forms[0].nvars());
    for h in forms {
        f = f.multiply(h)?;
    }
    Ok(f)
}

/// `sum_S (-1)^(|S|+1) [P^(n - rank S)]` over nonempty subsets `S`.
pub fn arrangement_inclusion_exclusion(forms: &[HomogPoly]) -> Result<ClassExpr> {
    let forms = dedupe_linear(forms)?;
    if forms.len() > MAX_FORMS {
        return Err(Error::Precondition(format!(
            "inclusion-exclusion over {} forms is too large (max {MAX_FORMS})",
            forms.len()
        )));
    }
    let field = forms[0].field().clone();
    let n = forms[0].nvars() as i64 - 1;
    let rows: Vec<Vec<FieldElem>> = forms
        .iter()
        .map(|h| h.linear_coefficients().unwrap())
        .collect();
    let mut total = ClassExpr::zero();
    for mask in 1u32..(1 << forms.len()) {
        let subset: Vec<Vec<FieldElem>> = (0..forms.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| rows[i].clone())
            .collect();
        let r = rank_of(&field, &subset)? as i64;
        let sign = if subset.len() % 2 == 1 { 1 } else { -1 };
        total = total.add(&projective_space(n - r).scale(sign));
    }
    Ok(total)
}

/// Class of a union of hyperplanes: a cone with vertex `P^(n-r)` over an
/// essential arrangement in `P^(r-1)`, where `r` is the rank of the forms.
pub fn class_of_arrangement(forms: &[HomogPoly], _opts: &Options) -> Result<StratResult> {
    let reduced = dedupe_linear(forms)?;
    let field = reduced[0].field().clone();
    let nv = reduced[0].nvars();
    let n = nv as i64 - 1;
    let mut trace = Trace::new();
    let f = product(forms)?;
    let fr = product(&reduced)?;
    if reduced.len() < forms.len() {
        trace.identity(
            "arrangement.dedupe",
            format!("{} forms, {} up to scalars", forms.len(), reduced.len()),
            0,
            vec![CountTerm::locus(1, 0, hypersurface(&f))],
            vec![CountTerm::locus(1, 0, hypersurface(&fr))],
        );
    }
    let a = Matrix::from_rows(
        &field,
        reduced
            .iter()
            .map(|h| h.linear_coefficients().unwrap())
            .collect(),
    )?;
    let rref = a.rref();
    let r = rref.rank;
    let basis: Vec<Vec<FieldElem>> = (0..r).map(|i| rref.matrix.row(i)).collect();
    let t = extend_to_basis(&field, &basis, nv)?.transpose();
    let tinv = t.invert()?;
    let moved: Vec<HomogPoly> = reduced
        .iter()
        .map(|h| h.linear_substitute(&tinv))
        .collect::<Result<_>>()?;
    let essential: Vec<HomogPoly> = moved
        .iter()
        .map(|h| {
            h.truncate_variables(r).map_err(|_| {
                Error::Defect(format!(
                    "{h} is not in the span of the first {r} coordinates"
                ))
            })
        })
        .collect::<Result<_>>()?;
    let fm = product(&moved)?;
    let fz = product(&essential)?;
    trace.identity(
        "arrangement.coordinates",
        format!("rank {r}: the forms span the first {r} coordinates after a change of basis"),
        0,
        vec![CountTerm::locus(1, 0, hypersurface(&fr))],
        vec![CountTerm::locus(1, 0, hypersurface(&fm))],
    );
    let vertex = n - r as i64;
    let mut rhs = Identity::projective_terms(vertex, 1);
    rhs.push(CountTerm::locus(1, (vertex + 1) as u32, hypersurface(&fz)));
    trace.identity(
        "arrangement.fibration",
        format!(
            "vertex P^{vertex} plus an A^{} bundle over Z = V({fz}) in P^{}",
            vertex + 1,
            r - 1
        ),
        0,
        vec![CountTerm::locus(1, 0, hypersurface(&fm))],
        rhs,
    );
    let z = arrangement_inclusion_exclusion(&essential)?;
    trace.push(
        "arrangement.scissor",
        format!("[Z] = {z} by inclusion-exclusion over the intersection lattice"),
        1,
        Check::Class {
            class: z.clone(),
            locus: hypersurface(&fz),
        },
    );
    let class = projective_space(vertex).add(&z.lshift((vertex + 1) as u32));
    let mut out = StratResult::new(class, trace, hypersurface(&f));
    out.degree_hypothesis(reduced.len(), n as usize);
    Ok(out)
}
