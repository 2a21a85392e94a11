use crate::error::{Error, Result};
use crate::kclass::{projective_space, Atom, ClassExpr, CountTerm, Identity, Trace};
use crate::linalg::Matrix;
use crate::poly::HomogPoly;
use crate::quadform::{
    diagonalize, find_projective_point, gram_from_poly, hyperbolic_normalize, QuadForm,
};

use super::{hypersurface, variety, Options, StratResult};

/// Class of the quadric `V(f)`.
///
/// The radical is split off first (diagonalization), then a rational point
/// on the nondegenerate part gives hyperbolic coordinates and the recursion
/// continues on the complementary form.
pub fn class_of_quadric(f: &HomogPoly, opts: &Options) -> Result<StratResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = gram_from_poly(f)?;
    let n = f.nvars() - 1;
    let mut rec = Recursion {
        opts,
        trace: Trace::new(),
        warnings: Vec::new(),
    };
    let class = rec.class(&q, 0)?;
    let mut out = StratResult::new(class, rec.trace, hypersurface(f));
    out.hypothesis("characteristic is not 2", true);
    out.degree_hypothesis(2, n);
    out.warnings.extend(rec.warnings);
    Ok(out)
}

struct Recursion<'a> {
    opts: &'a Options,
    trace: Trace,
    warnings: Vec<String>,
}

impl Recursion<'_> {
    fn class(&mut self, q: &QuadForm, depth: usize) -> Result<ClassExpr> {
        let nv = q.nvars();
        if nv == 0 {
            return Ok(ClassExpr::zero());
        }
        let n = nv as i64 - 1;
        let f = q.to_poly();
        if f.is_zero() {
            self.trace.identity(
                "quadric.zero",
                format!("zero form: all of P^{n}"),
                depth,
                vec![CountTerm::locus(1, 0, hypersurface(&f))],
                Identity::projective_terms(n, 1),
            );
            return Ok(projective_space(n));
        }
        let d = diagonalize(q);
        let rank = d.rank();
        if rank < nv {
            return self.degenerate(q, &d.m, &d.diag[..rank], depth);
        }
        match nv {
            1 => {
                self.trace.identity(
                    "quadric.point",
                    format!("{f} has no zero in P^0"),
                    depth,
                    vec![CountTerm::locus(1, 0, hypersurface(&f))],
                    vec![],
                );
                Ok(ClassExpr::zero())
            }
            2 => self.binary(q, &f, depth),
            _ => self.smooth(q, &f, depth),
        }
    }

    fn degenerate(
        &mut self,
        q: &QuadForm,
        m: &Matrix,
        diag: &[crate::fields::FieldElem],
        depth: usize,
    ) -> Result<ClassExpr> {
        let field = q.field();
        let nv = q.nvars();
        let n = nv as i64 - 1;
        let rank = diag.len() as i64;
        let f = q.to_poly();
        let g = f.linear_substitute(m)?;
        let y = QuadForm::from_gram(Matrix::diagonal(field, diag))?;
        let yp = y.to_poly();
        self.trace.identity(
            "quadric.diagonalize",
            format!("change of coordinates: {f} becomes {g}"),
            depth,
            vec![CountTerm::locus(1, 0, hypersurface(&f))],
            vec![CountTerm::locus(1, 0, hypersurface(&g))],
        );
        let cone_dim = n - rank;
        let mut rhs = Identity::projective_terms(cone_dim, 1);
        rhs.push(CountTerm::locus(
            1,
            (cone_dim + 1) as u32,
            hypersurface(&yp),
        ));
        self.trace.identity(
            "quadric.degenerate",
            format!(
                "rank {rank}: P^{cone_dim} of vertices plus an A^{} bundle over V({yp}) in P^{}",
                cone_dim + 1,
                rank - 1
            ),
            depth,
            vec![CountTerm::locus(1, 0, hypersurface(&g))],
            rhs,
        );
        let sub = self.class(&y, depth + 1)?;
        Ok(projective_space(cone_dim).add(&sub.lshift((cone_dim + 1) as u32)))
    }

    fn binary(&mut self, q: &QuadForm, f: &HomogPoly, depth: usize) -> Result<ClassExpr> {
        let disc = -q.determinant();
        let split = disc.sqrt().is_some();
        let (class, points, text) = if split {
            (
                ClassExpr::constant(2),
                2,
                "square: etale{1,1}, two rational points",
            )
        } else {
            (
                ClassExpr::atom(Atom::etale(vec![2]), 0),
                0,
                "non-square: etale{2}, a conjugate pair",
            )
        };
        self.trace.identity(
            "quadric.binary",
            format!("{f}: -det = {disc} is a {text}"),
            depth,
            vec![CountTerm::locus(1, 0, hypersurface(f))],
            vec![CountTerm::constant(points, 0)],
        );
        Ok(class)
    }

    fn smooth(&mut self, q: &QuadForm, f: &HomogPoly, depth: usize) -> Result<ClassExpr> {
        let nv = q.nvars();
        let n = nv as i64 - 1;
        let Some(x) = find_projective_point(q, self.opts.budget, self.opts.height)? else {
            if q.field().is_finite() {
                return Err(Error::Defect(format!(
                    "no point on the rank {nv} form {f} over {}",
                    q.field()
                )));
            }
            self.warnings.push(format!(
                "no rational point on {f} up to height {}; kept as an atom",
                self.opts.height
            ));
            self.trace.push(
                "quadric.unresolved",
                format!("no rational point on {f} up to height {}", self.opts.height),
                depth,
                crate::kclass::Check::None,
            );
            let atom = variety(n as usize, vec![f.clone()]).unresolved();
            return Ok(ClassExpr::atom(Atom::Variety(atom), 0));
        };
        let (m, qp) = hyperbolic_normalize(q, &x)?;
        let g = f.linear_substitute(&m)?;
        let qpp = qp.to_poly();
        let pt: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        self.trace.identity(
            "quadric.normalize",
            format!("rational point ({}): {f} becomes {g}", pt.join(", ")),
            depth,
            vec![CountTerm::locus(1, 0, hypersurface(f))],
            vec![CountTerm::locus(1, 0, hypersurface(&g))],
        );
        self.trace.identity(
            "quadric.smooth",
            format!(
                "point, A^1 bundle over V({qpp}) in P^{}, and an A^{} cell",
                n - 2,
                n - 1
            ),
            depth,
            vec![CountTerm::locus(1, 0, hypersurface(&g))],
            vec![
                CountTerm::constant(1, 0),
                CountTerm::locus(1, 1, hypersurface(&qpp)),
                CountTerm::constant(1, (n - 1) as u32),
            ],
        );
        let sub = self.class(&qp, depth + 1)?;
        Ok(ClassExpr::one()
            .add(&sub.lshift(1))
            .add(&ClassExpr::monomial(1, (n - 1) as u32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_points, DEFAULT_BUDGET};
    use crate::fields::Field;
    use crate::kclass::Residue;
    use crate::poly::parse_poly;
    use crate::strat::verify;

    fn run(src: &str, field: &Field, nvars: usize) -> StratResult {
        class_of_quadric(&parse_poly(src, field, nvars).unwrap(), &Options::default()).unwrap()
    }

    #[test]
    fn quadric_examples() {
        let f3 = Field::prime(3).unwrap();
        let r = run("x0*x1 - x2*x3", &f3, 4);
        assert_eq!(r.class.to_string(), "1 + 2*L + L^2");
        assert_eq!(r.class.count_measure(3, DEFAULT_BUDGET).unwrap(), 16);
        assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());

        let f5 = Field::prime(5).unwrap();
        let r = run("x0^2 + x1^2", &f5, 4);
        assert_eq!(r.class.to_string(), "1 + L + 2*L^2");
        assert_eq!(r.class.count_measure(5, DEFAULT_BUDGET).unwrap(), 56);
        assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());

        let r = run("x0^2 + x1^2", &f3, 2);
        assert_eq!(r.class.to_string(), "[etale{2}]");
        assert_eq!(r.residue, Residue::Value(0));
        assert_eq!(r.class.count_measure(3, DEFAULT_BUDGET).unwrap(), 0);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn quadric_errors() {
        let f3 = Field::prime(3).unwrap();
        let o = Options::default();
        assert_eq!(
            class_of_quadric(&HomogPoly::zero(&f3, 3, 2), &o).unwrap_err(),
            Error::ZeroPolynomial
        );
        let c = parse_poly("x0^3", &f3, 2).unwrap();
        assert!(matches!(
            class_of_quadric(&c, &o),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn rational_quadrics() {
        let q = Field::rationals();
        let r = run("x0^2 + x1^2 - x2^2", &q, 3);
        assert_eq!(r.class.to_string(), "1 + L");
        assert_eq!(r.residue, Residue::Value(1));

        let r = run("x0^2 + x1^2 + x2^2", &q, 3);
        assert_eq!(r.residue, Residue::Indeterminate);
        assert!(!r.class.is_fully_resolved());

        let r = run("x0^2 + x1^2 + x2^2", &q, 4);
        assert_eq!(r.residue, Residue::Value(1));
    }

    #[test]
    fn invariant_under_coordinate_change() {
        let f7 = Field::prime(7).unwrap();
        let f = parse_poly("x0^2 + 3*x1*x2 - x3^2 + 2*x0*x3", &f7, 4).unwrap();
        let m = Matrix::from_ints(
            &f7,
            &[&[1, 2, 0, 1], &[0, 1, 3, 0], &[1, 0, 1, 0], &[0, 0, 2, 5]],
        );
        assert!(m.invert().is_ok());
        let g = f.linear_substitute(&m).unwrap();
        let o = Options::default();
        let a = class_of_quadric(&f, &o).unwrap();
        let b = class_of_quadric(&g, &o).unwrap();
        assert_eq!(a.class, b.class);
        let n = count_points(&hypersurface(&f), DEFAULT_BUDGET).unwrap();
        assert_eq!(a.class.count_measure(7, DEFAULT_BUDGET).unwrap(), n as i128);
    }
}
