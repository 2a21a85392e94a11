use crate::count::{count_points, first_point, Chart, CountQuery};
use crate::error::{Error, Result};
use crate::fields::FieldElem;
use crate::kclass::{projective_space, Atom, Check, ClassExpr, CountTerm, Trace};
use crate::linalg::rank_of;
use crate::poly::HomogPoly;
use crate::quadform::{gram_from_poly, hyperbolic_normalize};

use super::{
    class_of_quadric, class_of_singular_cubic, find_singular_rational_point, hypersurface, locus,
    require_same_ring, variety, Options, StratResult,
};

/// Class of `V(q1 * q2)` in `P^n` over a finite field, for `Q1 = V(q1)`
/// smooth and `n >= 4`.
///
/// In coordinates where `q1 = x0*x1 - h` and `q2 = x0*L0 + x1*L1 + R`, the
/// intersection `Q1 ∩ Q2` is cut into the chart `x0 != 0`, isomorphic to an
/// open part of the cubic `Y = V(y1^2 L0 + h L1 + y1 R)` in `P^(n-1)`, and
/// the boundary `x0 = 0`.
pub fn class_of_two_quadric_union(
    q1: &HomogPoly,
    q2: &HomogPoly,
    opts: &Options,
) -> Result<StratResult> {
    require_same_ring(&[q1, q2])?;
    if q1.is_zero() || q2.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = q1.field().clone();
    let qform = gram_from_poly(q1)?;
    gram_from_poly(q2)?;
    if !field.is_finite() {
        return Err(Error::NotFinite);
    }
    let nv = q1.nvars();
    let n = nv - 1;
    if n < 4 {
        return Err(Error::Precondition(format!(
            "two quadrics need n >= 4, got n = {n}"
        )));
    }
    if !qform.is_nondegenerate() {
        return Err(Error::NotSmooth);
    }
    let union = q1.multiply(q2)?;
    if q1.monic() == q2.monic() {
        let mut r = class_of_quadric(q1, opts)?;
        r.trace.push(
            "two_quadrics.equal",
            "Q1 = Q2: the union is a single quadric",
            0,
            Check::None,
        );
        r.input = hypersurface(&union);
        r.hypothesis("Q1 = Q2", true);
        return Ok(r);
    }

    let both = locus(n, &[q1, q2]);
    let x = first_point(&both, opts.budget)?
        .ok_or_else(|| Error::NoRationalPoint("Q1 ∩ Q2 has no rational point".into()))?;
    let (m, qprime) = hyperbolic_normalize(&qform, &x)?;
    let q1t = q1.linear_substitute(&m)?;
    let q2t = q2.linear_substitute(&m)?;
    let h_low = qprime.to_poly().neg();

    let by_x1 = q2t.split_by_variable(1)?;
    if !by_x1[2].is_zero() {
        return Err(Error::Defect(format!("{q2t} has an x1^2 term")));
    }
    let l1 = by_x1[1].clone();
    if l1.is_zero() {
        return Err(Error::Unsupported("L1 vanishes identically".into()));
    }
    let by_x0 = by_x1[0].split_by_variable(0)?;
    let r = by_x0[0].clone();
    let x0 = HomogPoly::variable(&field, nv, 0)?;
    let l0 = by_x0[1].add(&by_x0[2].multiply(&x0)?)?;
    let rebuilt = x0
        .multiply(&l0)?
        .add(&HomogPoly::variable(&field, nv, 1)?.multiply(&l1)?)?
        .add(&r)?;
    if rebuilt != q2t {
        return Err(Error::Defect(format!("split of {q2t} does not reassemble")));
    }

    // Y lives in P^(n-1) with coordinates (y1, x2, ..., xn); y1 replaces x0.
    let l0y = l0.drop_variable(1)?;
    let l1y = l1.drop_variable(1)?;
    let ry = r.drop_variable(1)?;
    let hy = h_low.insert_variable(0)?;
    let y1 = HomogPoly::variable(&field, n, 0)?;
    let gbar = y1
        .pow(2)
        .multiply(&l0y)?
        .add(&hy.multiply(&l1y)?)?
        .add(&y1.multiply(&ry)?)?;
    // Boundary x0 = 0 lives in P^(n-2) with coordinates (x2, ..., xn).
    let l1_low = l1.set_zero(0)?.drop_variable(1)?.drop_variable(0)?;
    let r_low = r.drop_variable(1)?.drop_variable(0)?;

    let chart_open = CountQuery::new(&field, n)
        .with(q1t.clone())
        .with(q2t.clone())
        .chart(0, Chart::NonZero);
    let chart_closed = CountQuery::new(&field, n)
        .with(q1t.clone())
        .with(q2t.clone())
        .chart(0, Chart::Zero);
    let y = CountQuery::new(&field, n - 1).with(gbar.clone());
    let y_cap = y.clone().with(y1.clone());
    let open_count = count_points(&chart_open, opts.budget)? as i64;
    let y_open = count_points(&y, opts.budget)? as i64 - count_points(&y_cap, opts.budget)? as i64;
    if open_count != y_open {
        return Err(Error::Unsupported(format!(
            "chart x0 != 0 has {open_count} points but Y minus V(y1) has {y_open}"
        )));
    }

    let mut trace = Trace::new();
    let one = |l: CountQuery| CountTerm::locus(1, 0, l);
    trace.identity(
        "two_quadrics.union",
        "[X] = [Q1] + [Q2] - [Q1 ∩ Q2]",
        0,
        vec![one(hypersurface(&union))],
        vec![
            one(hypersurface(q1)),
            one(hypersurface(q2)),
            CountTerm::locus(-1, 0, both.clone()),
        ],
    );
    let pt: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    let both_t = locus(n, &[&q1t, &q2t]);
    trace.identity(
        "two_quadrics.coordinates",
        format!(
            "point ({}) on Q1 ∩ Q2: q1 becomes {q1t}, q2 becomes {q2t}",
            pt.join(", ")
        ),
        0,
        vec![one(both)],
        vec![one(both_t.clone())],
    );
    trace.identity(
        "two_quadrics.charts",
        "split along x0 != 0 and x0 = 0",
        0,
        vec![one(both_t)],
        vec![one(chart_open.clone()), one(chart_closed.clone())],
    );
    trace.identity(
        "two_quadrics.affine_chart",
        format!("on x0 != 0, x1 = h and the rest is Y = V({gbar})"),
        0,
        vec![one(chart_open)],
        vec![one(y.clone()), CountTerm::locus(-1, 0, y_cap.clone())],
    );
    let h_y1 = locus(n - 1, &[&hy, &y1]);
    let l1_y1 = locus(n - 1, &[&l1y, &y1]);
    let h_l1_y1 = locus(n - 1, &[&hy, &l1y, &y1]);
    trace.identity(
        "two_quadrics.hyperplane_section",
        format!("Y ∩ V(y1) = V(h, y1) ∪ V(L1, y1) with h = {h_low}, L1 = {l1}"),
        0,
        vec![one(y_cap)],
        vec![
            one(h_y1.clone()),
            one(l1_y1.clone()),
            CountTerm::locus(-1, 0, h_l1_y1.clone()),
        ],
    );
    let h_b = hypersurface(&h_low);
    let h_l1_b = locus(n - 2, &[&h_low, &l1_low]);
    let b_gens = vec![l1_low.clone(), r_low.clone(), h_low.clone()];
    let b = CountQuery::new(&field, n - 2).with_all(b_gens.clone());
    trace.identity(
        "two_quadrics.boundary",
        format!("on x0 = 0: h = 0, then x1*L1 + R = 0 with R = {r_low}, plus the point itself"),
        0,
        vec![one(chart_closed)],
        vec![
            one(h_b.clone()),
            CountTerm::locus(-1, 0, h_l1_b.clone()),
            CountTerm::locus(1, 1, b.clone()),
            CountTerm::constant(1, 0),
        ],
    );
    let s = CountQuery::new(&field, n - 1)
        .with(y1.clone())
        .with(hy.clone())
        .with(l1y.clone())
        .with(ry.clone());
    trace.push(
        "two_quadrics.singular",
        "S = V(y1, h, L1, R) lies in Sing(Y)",
        0,
        Check::SingularContainment {
            locus: s,
            poly: gbar.clone(),
        },
    );
    trace.identity(
        "two_quadrics.cancel",
        "the V(h) pieces of the hyperplane section and the boundary coincide",
        0,
        vec![one(h_y1), CountTerm::locus(-1, 0, h_l1_y1)],
        vec![one(h_b), CountTerm::locus(-1, 0, h_l1_b)],
    );

    let r1 = class_of_quadric(q1, opts)?;
    let r2 = class_of_quadric(q2, opts)?;
    for (name, res, f) in [("Q1", &r1, q1), ("Q2", &r2, q2)] {
        trace.push(
            "two_quadrics.quadric",
            format!("[{name}] = {}", res.class),
            1,
            Check::Class {
                class: res.class.clone(),
                locus: hypersurface(f),
            },
        );
        trace.extend_nested(&res.trace, 2);
    }
    let rows: Vec<Vec<FieldElem>> = [&l1y, &y1]
        .iter()
        .map(|g| g.linear_coefficients().unwrap())
        .collect();
    let line_rank = rank_of(&field, &rows)? as i64;
    let l1_class = projective_space(n as i64 - 1 - line_rank);
    trace.push(
        "two_quadrics.linear",
        format!("[V(L1, y1)] = {l1_class}"),
        1,
        Check::Class {
            class: l1_class.clone(),
            locus: l1_y1,
        },
    );

    let mut warnings = Vec::new();
    let mut y_singular = false;
    let y_class = if gbar.is_zero() {
        projective_space(n as i64 - 1)
    } else {
        let search = find_singular_rational_point(&gbar, opts)?;
        warnings.extend(search.warnings);
        match search.point {
            Some(p) => {
                y_singular = true;
                let cubic = class_of_singular_cubic(&gbar, Some(&p), opts)?;
                trace.push(
                    "two_quadrics.cubic",
                    format!("[Y] = {}", cubic.class),
                    1,
                    Check::Class {
                        class: cubic.class.clone(),
                        locus: y.clone(),
                    },
                );
                trace.extend_nested(&cubic.trace, 2);
                warnings.extend(cubic.warnings.iter().map(|w| format!("Y: {w}")));
                cubic.class
            }
            None => {
                warnings.push("Y has no singular rational point; [Y] is kept as an atom".into());
                ClassExpr::atom(Atom::Variety(variety(n - 1, vec![gbar.clone()])), 0)
            }
        }
    };
    let b_atom = ClassExpr::atom(Atom::Variety(variety(n - 2, b_gens)), 1);
    let class = r1
        .class
        .add(&r2.class)
        .sub(&y_class)
        .add(&l1_class)
        .sub(&ClassExpr::one())
        .sub(&b_atom);
    let mut out = StratResult::new(class, trace, hypersurface(&union));
    out.hypothesis("finite field", true);
    out.hypothesis("n >= 4", true);
    out.hypothesis("Q1 smooth", true);
    out.hypothesis("rational point on Q1 ∩ Q2", true);
    out.hypothesis("L1 not identically zero", true);
    out.hypothesis("chart x0 != 0 matches Y minus V(y1)", true);
    out.hypothesis(
        "Y has a singular rational point",
        y_singular || gbar.is_zero(),
    );
    out.warnings.extend(warnings);
    Ok(out)
}
