use crate::count::{first_point, first_rational_zero, height_search_cost, CountQuery};
use crate::error::{Error, Result};
use crate::fields::FieldElem;
use crate::kclass::{projective_space, Atom, Check, ClassExpr, CountTerm, Identity, Trace};
use crate::linalg::{extend_to_basis, Matrix};
use crate::poly::HomogPoly;

use super::{class_of_cone, class_of_quadric, hypersurface, locus, variety, Options, StratResult};

/// Outcome of a singular point search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSearch {
    pub point: Option<Vec<FieldElem>>,
    pub warnings: Vec<String>,
}

/// First point (in enumeration or height order) where `f` and all of its
/// partial derivatives vanish.
pub fn find_singular_rational_point(f: &HomogPoly, opts: &Options) -> Result<PointSearch> {
    let field = f.field();
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient().into_iter().filter(|g| !g.is_zero()));
    let nv = f.nvars();
    if field.is_finite() {
        let q = CountQuery::new(field, nv - 1).with_all(gens);
        return Ok(PointSearch {
            point: first_point(&q, opts.budget)?,
            warnings: Vec::new(),
        });
    }
    let cost = height_search_cost(nv, opts.height);
    if cost > opts.budget as u128 {
        return Ok(PointSearch {
            point: None,
            warnings: vec![format!(
                "height {} search needs {cost} candidates, over the budget {}",
                opts.height, opts.budget
            )],
        });
    }
    Ok(PointSearch {
        point: first_rational_zero(field, nv, &gens, opts.height)?,
        warnings: Vec::new(),
    })
}

fn is_singular(f: &HomogPoly, x: &[FieldElem]) -> Result<bool> {
    for g in f.gradient() {
        if !g.evaluate(x)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Class of a cubic hypersurface with a rational singular point `x`.
///
/// With `x = [0:...:0:1]` the cubic reads `x_n f2 + f3`; projecting from `x`
/// gives `1 + ([P^(n-1)] - [V(f2)]) + L [V(f2, f3)]`.
pub fn class_of_singular_cubic(
    f: &HomogPoly,
    point: Option<&[FieldElem]>,
    opts: &Options,
) -> Result<StratResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() != 3 {
        return Err(Error::WrongDegree {
            expected: 3,
            got: f.degree(),
        });
    }
    let field = f.field().clone();
    let nv = f.nvars();
    if nv < 3 {
        return Err(Error::Precondition("a singular cubic needs n >= 2".into()));
    }
    let n = nv - 1;
    let mut warnings = Vec::new();
    let x = match point {
        Some(x) => {
            if x.len() != nv {
                return Err(Error::Dimension(format!("point needs {nv} coordinates")));
            }
            if x.iter().all(FieldElem::is_zero) || !f.evaluate(x)?.is_zero() {
                return Err(Error::PointNotOnVariety);
            }
            if !is_singular(f, x)? {
                return Err(Error::PointNotSingular);
            }
            x.to_vec()
        }
        None => {
            let search = find_singular_rational_point(f, opts)?;
            warnings.extend(search.warnings);
            search.point.ok_or_else(|| {
                Error::NoRationalPoint(format!("no singular rational point on {f}"))
            })?
        }
    };
    let e = extend_to_basis(&field, std::slice::from_ref(&x), nv)?;
    let mut cols: Vec<Vec<FieldElem>> = (1..nv).map(|j| e.col(j)).collect();
    cols.push(x.clone());
    let m = Matrix::from_columns(&field, &cols, nv)?;
    let g = f.linear_substitute(&m)?;
    let parts = g.split_by_variable(n)?;
    if !parts[3].is_zero() || !parts[2].is_zero() {
        return Err(Error::Defect(format!(
            "after moving the singular point to the apex, {g} still has x{n}^3 or x{n}^2 terms"
        )));
    }
    let f3 = parts[0].drop_variable(n)?;
    let f2 = parts[1].drop_variable(n)?;
    let pt: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    let mut trace = Trace::new();
    trace.identity(
        "cubic.coordinates",
        format!(
            "singular point ({}) moved to [0:...:0:1]: {f} becomes {g}",
            pt.join(", ")
        ),
        0,
        vec![CountTerm::locus(1, 0, hypersurface(f))],
        vec![CountTerm::locus(1, 0, hypersurface(&g))],
    );
    let mut out = if f2.is_zero() {
        let cone = class_of_cone(std::slice::from_ref(&f3), opts)?;
        trace.push(
            "cubic.cone",
            format!("f2 = 0: V({g}) is the cone over V({f3})"),
            0,
            Check::None,
        );
        trace.extend_nested(&cone.trace, 1);
        StratResult::new(cone.class, trace, hypersurface(f))
    } else {
        let quad = class_of_quadric(&f2, opts)?;
        let mut rhs = vec![CountTerm::constant(1, 0)];
        rhs.extend(Identity::projective_terms(n as i64 - 1, 1));
        rhs.push(CountTerm::locus(-1, 0, hypersurface(&f2)));
        rhs.push(CountTerm::locus(1, 1, locus(n - 1, &[&f2, &f3])));
        trace.identity(
            "cubic.strata",
            format!(
                "apex, a section over P^{} minus V({f2}), and an A^1 bundle over V({f2}, {f3})",
                n - 1
            ),
            0,
            vec![CountTerm::locus(1, 0, hypersurface(&g))],
            rhs,
        );
        trace.push(
            "cubic.quadric",
            format!("[V({f2})] = {}", quad.class),
            1,
            Check::Class {
                class: quad.class.clone(),
                locus: hypersurface(&f2),
            },
        );
        trace.extend_nested(&quad.trace, 2);
        warnings.extend(quad.warnings.iter().map(|w| format!("f2: {w}")));
        let z = variety(n - 1, vec![f2.clone(), f3.clone()]);
        let class = ClassExpr::one()
            .add(&projective_space(n as i64 - 1))
            .sub(&quad.class)
            .add(&ClassExpr::atom(Atom::Variety(z), 1));
        StratResult::new(class, trace, hypersurface(f))
    };
    out.hypothesis("singular rational point", true);
    out.degree_hypothesis(3, n);
    out.warnings.extend(warnings);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_points, DEFAULT_BUDGET};
    use crate::fields::Field;
    use crate::kclass::Residue;
    use crate::poly::parse_poly;
    use crate::strat::verify;

    fn ints(field: &crate::fields::Field, v: &[i64]) -> Vec<FieldElem> {
        v.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn singular_point_search() {
        let o = Options::default();
        let f5 = Field::prime(5).unwrap();
        let node = parse_poly("x1^2*x2 - x0^3 - x0^2*x2", &f5, 3).unwrap();
        let s = find_singular_rational_point(&node, &o).unwrap();
        assert_eq!(s.point, Some(ints(&f5, &[0, 0, 1])));
        let conic = parse_poly("x0*x1 - x2^2", &f5, 3).unwrap();
        assert_eq!(
            find_singular_rational_point(&conic, &o).unwrap().point,
            None
        );
        let f3 = Field::prime(3).unwrap();
        let cubic = parse_poly("x3*(x0*x1 - x2^2) + x0^3", &f3, 4).unwrap();
        let s = find_singular_rational_point(&cubic, &o).unwrap();
        // the apex is singular, but [0:1:0:0] comes first in enumeration order
        assert_eq!(s.point, Some(ints(&f3, &[0, 1, 0, 0])));
        assert!(is_singular(&cubic, &ints(&f3, &[0, 0, 0, 1])).unwrap());
        let q = Field::rationals();
        let node = parse_poly("x1^2*x2 - x0^3 - x0^2*x2", &q, 3).unwrap();
        let s = find_singular_rational_point(&node, &o).unwrap();
        assert_eq!(s.point, Some(ints(&q, &[0, 0, 1])));
    }

    #[test]
    fn cubic_example_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let f = parse_poly("x3*(x0*x1 - x2^2) + x0^3", &f3, 4).unwrap();
        let x = ints(&f3, &[0, 0, 0, 1]);
        let r = class_of_singular_cubic(&f, Some(&x), &Options::default()).unwrap();
        assert_eq!(r.class.count_measure(3, DEFAULT_BUDGET).unwrap(), 13);
        assert_eq!(count_points(&r.input, DEFAULT_BUDGET).unwrap(), 13);
        assert_eq!(r.residue, Residue::Value(1));
        assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());
    }

    #[test]
    fn cubic_rank_two_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let f = parse_poly("x3*x0*x1 + x0^3", &f5, 4).unwrap();
        let r = class_of_singular_cubic(&f, None, &Options::default()).unwrap();
        assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());
        assert_eq!(r.residue, Residue::Value(1));
    }

    #[test]
    fn cone_subcase_and_errors() {
        let f5 = Field::prime(5).unwrap();
        let o = Options::default();
        let f = parse_poly("x0^3 + x1^3 + x2^3", &f5, 4).unwrap();
        let apex = ints(&f5, &[0, 0, 0, 1]);
        let r = class_of_singular_cubic(&f, Some(&apex), &o).unwrap();
        assert!(r.trace.steps().iter().any(|s| s.rule == "cubic.cone"));
        assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());

        let smooth_pt = ints(&f5, &[1, 4, 0, 0]);
        assert_eq!(
            class_of_singular_cubic(&f, Some(&smooth_pt), &o).unwrap_err(),
            Error::PointNotSingular
        );
        let off = ints(&f5, &[1, 0, 0, 0]);
        assert_eq!(
            class_of_singular_cubic(&f, Some(&off), &o).unwrap_err(),
            Error::PointNotOnVariety
        );
        let q = parse_poly("x0^2", &f5, 4).unwrap();
        assert!(matches!(
            class_of_singular_cubic(&q, None, &o),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn nodal_plane_cubic() {
        for p in [5u32, 7] {
            let field = Field::prime(p).unwrap();
            let node = parse_poly("x1^2*x2 - x0^3 - x0^2*x2", &field, 3).unwrap();
            let r = class_of_singular_cubic(&node, None, &Options::default()).unwrap();
            assert_eq!(r.residue, Residue::Value(0));
            let c = count_points(&r.input, DEFAULT_BUDGET).unwrap();
            assert_eq!(c % p as u64, 0);
            assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());
        }
    }
}
