//! Quadratic forms via their Gram matrices.

use crate::count::{first_point, first_rational_zero, CountQuery};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem};
use crate::linalg::{normalize_leading, Matrix};
use crate::poly::HomogPoly;

/// `q(x) = x^T G x` with `G` symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    gram: Matrix,
}

/// Result of [`diagonalize`]: `m^T G m = diag(diag)`, zeros last.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub m: Matrix,
    pub diag: Vec<FieldElem>,
}

impl Diagonalization {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

impl QuadForm {
    pub fn from_gram(gram: Matrix) -> Result<QuadForm> {
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(Error::Dimension(
                "Gram matrix must be square and symmetric".into(),
            ));
        }
        if gram.field().characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(QuadForm { gram })
    }

    pub fn from_poly(f: &HomogPoly) -> Result<QuadForm> {
        gram_from_poly(f)
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn nvars(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.nvars()
    }

    pub fn determinant(&self) -> FieldElem {
        self.gram.determinant().expect("square")
    }

    /// `u^T G v`.
    pub fn bilinear(&self, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
        let gv = self.gram.mul_vec(v).expect("dimension");
        u.iter()
            .zip(&gv)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn value(&self, v: &[FieldElem]) -> FieldElem {
        self.bilinear(v, v)
    }

    /// The form `x -> q(M x)`, i.e. Gram matrix `M^T G M`.
    pub fn transform(&self, m: &Matrix) -> Result<QuadForm> {
        let g = m.transpose().mul(&self.gram)?.mul(m)?;
        QuadForm::from_gram(g)
    }

    pub fn to_poly(&self) -> HomogPoly {
        poly_from_gram(self)
    }
}

/// Gram matrix of a quadratic form: `x_i^2` coefficient on the diagonal,
/// half the `x_i x_j` coefficient off it.
pub fn gram_from_poly(f: &HomogPoly) -> Result<QuadForm> {
    let field = f.field();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if f.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: f.degree(),
        });
    }
    let n = f.nvars();
    let half = field.from_i64(2).inv()?;
    let mut g = Matrix::zeros(field, n, n);
    for (e, c) in f.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            g.set(i, i, c.clone());
        } else {
            let h = c * &half;
            g.set(i, j, h.clone());
            g.set(j, i, h);
        }
    }
    QuadForm::from_gram(g)
}

pub fn poly_from_gram(q: &QuadForm) -> HomogPoly {
    let field = q.field();
    let n = q.nvars();
    let two = field.from_i64(2);
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i..n {
            let g = q.gram.get(i, j);
            if g.is_zero() {
                continue;
            }
            let mut e = vec![0u32; n];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j { g.clone() } else { g * &two };
            terms.push((e, c));
        }
    }
    HomogPoly::from_terms(field, n, 2, terms).expect("degree-2 terms")
}

/// Symmetric Gaussian elimination. At each step the first nonzero diagonal
/// entry is moved into place; if there is none, the first pair `(i, j)` with
/// a nonzero off-diagonal entry is mixed via `e_i += e_j`.
pub fn diagonalize(q: &QuadForm) -> Diagonalization {
    let field = q.field().clone();
    let n = q.nvars();
    let mut m = Matrix::identity(&field, n);
    let current = |m: &Matrix| q.transform(m).expect("dimension").gram;
    for k in 0..n {
        let mut g = current(&m);
        let pivot = (k..n).find(|&i| !g.get(i, i).is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let pair = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !g.get(i, j).is_zero());
                let Some((i, j)) = pair else { break };
                add_column(&mut m, i, j, &field.one());
                g = current(&m);
                debug_assert!(!g.get(i, i).is_zero());
                i
            }
        };
        if pivot != k {
            swap_columns(&mut m, k, pivot);
            g = current(&m);
        }
        let inv = g.get(k, k).inv().expect("pivot");
        for j in k + 1..n {
            let c = g.get(k, j) * &inv;
            if !c.is_zero() {
                add_column(&mut m, j, k, &-c);
            }
        }
    }
    let g = current(&m);
    let diag = (0..n).map(|i| g.get(i, i).clone()).collect();
    Diagonalization { m, diag }
}

/// `col_dst += c * col_src`.
fn add_column(m: &mut Matrix, dst: usize, src: usize, c: &FieldElem) {
    for r in 0..m.rows() {
        let v = m.get(r, dst) + &(c * m.get(r, src));
        m.set(r, dst, v);
    }
}

fn swap_columns(m: &mut Matrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// A zero of the form in projective space, first nonzero coordinate 1.
///
/// Finite fields use the canonical enumeration order; over Q the search is
/// bounded by `max_height`.
pub fn find_projective_point(
    q: &QuadForm,
    budget: u64,
    max_height: u32,
) -> Result<Option<Vec<FieldElem>>> {
    let f = q.to_poly();
    let field = q.field();
    if q.nvars() == 0 {
        return Ok(None);
    }
    if field.is_finite() {
        first_point(&CountQuery::new(field, q.nvars() - 1).with(f), budget)
    } else {
        first_rational_zero(field, q.nvars(), &[f], max_height)
    }
}

/// Coordinates in which a nondegenerate form reads `x0*x1 + q'(x2..xn)`.
///
/// Returns `(M, q')` with `q(M y) = y0*y1 + q'(y2..yn)` and `M e_1 = x`.
pub fn hyperbolic_normalize(q: &QuadForm, x: &[FieldElem]) -> Result<(Matrix, QuadForm)> {
    let field = q.field().clone();
    let n = q.nvars();
    if x.len() != n {
        return Err(Error::Dimension(format!("point needs {n} coordinates")));
    }
    if !q.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if x.iter().all(FieldElem::is_zero) || !q.value(x).is_zero() {
        return Err(Error::PointNotOnVariety);
    }
    let v = x.to_vec();
    let unit = |j: usize| {
        let mut e = vec![field.zero(); n];
        e[j] = field.one();
        e
    };
    let w = (0..n)
        .map(unit)
        .find(|w| !q.bilinear(&v, w).is_zero())
        .expect("nondegenerate form pairs nontrivially with x");
    let bvw = q.bilinear(&v, &w);
    let two = field.from_i64(2);
    let c = q.bilinear(&w, &w).checked_div(&(&two * &bvw))?;
    let u: Vec<FieldElem> = w.iter().zip(&v).map(|(a, b)| a - &(&c * b)).collect();
    let scale = (&two * &q.bilinear(&u, &v)).inv()?;
    let c0: Vec<FieldElem> = u.iter().map(|a| a * &scale).collect();
    let c1 = v;
    let gt = q.gram.transpose();
    let constraints = Matrix::from_rows(&field, vec![gt.mul_vec(&c0)?, gt.mul_vec(&c1)?])?;
    let complement = constraints.nullspace();
    let mut cols = vec![c0, c1];
    cols.extend(complement.iter().cloned());
    let m = Matrix::from_columns(&field, &cols, n)?;
    let nmat = Matrix::from_columns(&field, &complement, n)?;
    let qprime = q.transform(&nmat)?;
    Ok((m, qprime))
}

/// Normalizes a projective point so its first nonzero coordinate is 1.
pub fn normalize_point(mut v: Vec<FieldElem>) -> Vec<FieldElem> {
    normalize_leading(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_points, DEFAULT_BUDGET};
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn form(src: &str, field: &Field, nvars: usize) -> QuadForm {
        gram_from_poly(&parse_poly(src, field, nvars).unwrap()).unwrap()
    }

    fn ints(field: &Field, v: &[i64]) -> Vec<FieldElem> {
        v.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn gram_examples() {
        let f5 = Field::prime(5).unwrap();
        let q = form("x0*x1", &f5, 2);
        assert_eq!(q.gram().get(0, 1), &f5.from_i64(3));
        assert_eq!(q.gram().get(1, 0), &f5.from_i64(3));
        let sq = form("x0^2", &f5, 3);
        assert_eq!(
            sq.gram(),
            &Matrix::from_ints(&f5, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]])
        );
        let cubic = parse_poly("x0^3", &f5, 2).unwrap();
        assert_eq!(
            gram_from_poly(&cubic),
            Err(Error::WrongDegree {
                expected: 2,
                got: 3
            })
        );
        let f = parse_poly("x0*x1 - x2^2 + 3*x0*x2", &f5, 3).unwrap();
        assert_eq!(gram_from_poly(&f).unwrap().to_poly(), f);
    }

    #[test]
    fn diagonalize_examples() {
        let f5 = Field::prime(5).unwrap();
        let d = diagonalize(&form("x0^2 + 2*x1^2", &f5, 2));
        assert_eq!(d.m, Matrix::identity(&f5, 2));
        assert_eq!(d.diag, ints(&f5, &[1, 2]));

        let h = form("x0*x1", &f5, 2);
        let d = diagonalize(&h);
        assert_eq!(d.rank(), 2);
        let g = h.transform(&d.m).unwrap();
        assert!(g.gram().is_diagonal());

        let d = diagonalize(&form("x0^2", &f5, 3));
        assert_eq!(d.diag, ints(&f5, &[1, 0, 0]));
    }

    #[test]
    fn find_point_examples() {
        let f3 = Field::prime(3).unwrap();
        let find = |q: &QuadForm| find_projective_point(q, DEFAULT_BUDGET, 10).unwrap();
        assert_eq!(
            find(&form("x0*x1 - x2*x3", &f3, 4)),
            Some(ints(&f3, &[1, 0, 0, 0]))
        );
        assert_eq!(find(&form("x0^2 + x1^2", &f3, 2)), None);
        assert_eq!(
            find(&form("x0^2 + x1^2 + x2^2", &f3, 3)),
            Some(ints(&f3, &[1, 1, 1]))
        );
    }

    #[test]
    fn hyperbolic_examples() {
        let f5 = Field::prime(5).unwrap();
        let q = form("x0*x1", &f5, 2);
        let (m, qp) = hyperbolic_normalize(&q, &ints(&f5, &[0, 1])).unwrap();
        assert_eq!(m, Matrix::identity(&f5, 2));
        assert_eq!(qp.nvars(), 0);

        let q = form("x0*x1 - x2*x3", &f5, 4);
        let x = ints(&f5, &[1, 0, 0, 0]);
        let (m, qp) = hyperbolic_normalize(&q, &x).unwrap();
        assert_eq!(qp.rank(), 2);
        let sub = q.to_poly().linear_substitute(&m).unwrap();
        let mut expected = parse_poly("x0*x1", &f5, 4).unwrap();
        expected = expected
            .add(
                &qp.to_poly()
                    .insert_variable(0)
                    .unwrap()
                    .insert_variable(0)
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(sub, expected);
        assert_eq!(
            m.invert().unwrap().mul_vec(&x).unwrap(),
            ints(&f5, &[0, 1, 0, 0])
        );

        assert_eq!(
            hyperbolic_normalize(&q, &ints(&f5, &[1, 1, 0, 0])).unwrap_err(),
            Error::PointNotOnVariety
        );
        let deg = form("x0*x1", &f5, 3);
        assert_eq!(
            hyperbolic_normalize(&deg, &ints(&f5, &[1, 0, 0])).unwrap_err(),
            Error::Degenerate
        );
    }

    fn random_symmetric(field: &Field, n: usize, raw: &[i64]) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let v = field.from_i64(raw[k]);
                k += 1;
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        m
    }

    fn arb_field() -> impl Strategy<Value = Field> {
        prop_oneof![
            Just(Field::prime(3).unwrap()),
            Just(Field::prime(5).unwrap()),
            Just(Field::prime(7).unwrap()),
            Just(Field::rationals()),
        ]
    }

    proptest! {
        #[test]
        fn diagonalization_is_congruence(
            field in arb_field(),
            n in 1usize..6,
            raw in prop::collection::vec(-4i64..5, 21),
        ) {
            let g = random_symmetric(&field, n, &raw);
            let q = QuadForm::from_gram(g.clone()).unwrap();
            let d = diagonalize(&q);
            let t = q.transform(&d.m).unwrap();
            prop_assert!(t.gram().is_diagonal());
            prop_assert_eq!(d.rank(), g.rank());
            prop_assert!(d.m.invert().is_ok());
            let first_zero = d.diag.iter().position(|x| x.is_zero()).unwrap_or(n);
            prop_assert!(d.diag[first_zero..].iter().all(|x| x.is_zero()));
        }

        #[test]
        fn hyperbolic_shape(
            p in prop_oneof![Just(3u32), Just(5), Just(7)],
            n in 2usize..6,
            raw in prop::collection::vec(-4i64..5, 21),
        ) {
            let field = Field::prime(p).unwrap();
            let q = QuadForm::from_gram(random_symmetric(&field, n, &raw)).unwrap();
            prop_assume!(q.is_nondegenerate());
            let Some(x) = find_projective_point(&q, DEFAULT_BUDGET, 0).unwrap() else {
                prop_assert!(n == 2);
                return Ok(());
            };
            let (m, qp) = hyperbolic_normalize(&q, &x).unwrap();
            let sub = q.transform(&m).unwrap();
            let g = sub.gram();
            let half = field.from_i64(2).inv().unwrap();
            prop_assert!(g.get(0, 0).is_zero() && g.get(1, 1).is_zero());
            prop_assert_eq!(g.get(0, 1), &half);
            for j in 2..n {
                prop_assert!(g.get(0, j).is_zero() && g.get(1, j).is_zero());
            }
            prop_assert!(qp.is_nondegenerate());
            prop_assert_eq!(qp.nvars(), n - 2);
        }

        #[test]
        fn point_search_agrees_with_count(
            p in prop_oneof![Just(3u32), Just(5), Just(7)],
            n in 1usize..5,
            raw in prop::collection::vec(-4i64..5, 15),
        ) {
            let field = Field::prime(p).unwrap();
            let q = QuadForm::from_gram(random_symmetric(&field, n, &raw)).unwrap();
            prop_assume!(q.rank() > 0);
            let f = q.to_poly();
            let count = count_points(&CountQuery::hypersurface(&f), DEFAULT_BUDGET).unwrap();
            let pt = find_projective_point(&q, DEFAULT_BUDGET, 0).unwrap();
            prop_assert_eq!(pt.is_none(), count == 0);
            if let Some(x) = pt {
                prop_assert!(f.evaluate(&x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rank_three_forms_are_isotropic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 200 {
            let p = [3u32, 5, 7][tested % 3];
            let field = Field::prime(p).unwrap();
            let n = rng.gen_range(3..6);
            let raw: Vec<i64> = (0..21).map(|_| rng.gen_range(0..p as i64)).collect();
            let q = QuadForm::from_gram(random_symmetric(&field, n, &raw)).unwrap();
            if q.rank() < 3 {
                continue;
            }
            assert!(find_projective_point(&q, DEFAULT_BUDGET, 0)
                .unwrap()
                .is_some());
            tested += 1;
        }
    }
}
