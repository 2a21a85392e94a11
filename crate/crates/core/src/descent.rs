//! Galois descent of hyperplane arrangements along `F_{p^m} / F_p`.
//!
//! A set of linear forms over the extension whose span is stable under
//! Frobenius defines a 1-cocycle of Gal(F_{p^m}/F_p) in `GL_r`. Hilbert 90
//! trivializes it, `alpha_sigma = B sigma(B)^-1`, and `B^-1` applied to the
//! chosen basis yields a basis with coefficients in `F_p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::CountQuery;
use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem, FieldKind};
use crate::kclass::{
    projective_space, Atom, Check, ClassExpr, CountTerm, Identity, Trace, VarietyAtom,
};
use crate::linalg::{extend_to_basis, rank_of, Matrix};
use crate::poly::HomogPoly;
use crate::strat::{dedupe_linear, Options, StratResult};

/// Number of random averaging attempts in [`h90_trivialize`].
pub const H90_RETRIES: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisContext {
    base: Field,
    ext: Field,
    m: u32,
}

impl GaloisContext {
    /// `ext` must be a finite field of the same characteristic as the prime
    /// field `base`.
    pub fn new(base: &Field, ext: &Field) -> Result<GaloisContext> {
        if base.kind() != FieldKind::Prime {
            return Err(Error::InvalidField(format!(
                "descent base must be a prime field, got {base}"
            )));
        }
        if !ext.is_finite() || ext.characteristic() != base.characteristic() {
            return Err(Error::InvalidField(format!(
                "{ext} is not an extension of {base}"
            )));
        }
        Ok(GaloisContext {
            base: base.clone(),
            ext: ext.clone(),
            m: ext.degree(),
        })
    }

    /// `F_{p^m} / F_p` with the default modulus.
    pub fn build(p: u32, m: u32) -> Result<GaloisContext> {
        GaloisContext::new(&Field::prime(p)?, &Field::extension(p, m)?)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    /// Order of the Galois group.
    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn sigma(&self, a: &FieldElem) -> FieldElem {
        a.frobenius().expect("finite field")
    }

    pub fn sigma_pow(&self, a: &FieldElem, i: u32) -> FieldElem {
        (0..i % self.m).fold(a.clone(), |x, _| self.sigma(&x))
    }

    pub fn sigma_matrix(&self, a: &Matrix) -> Matrix {
        a.map(|x| self.sigma(x))
    }

    pub fn sigma_pow_matrix(&self, a: &Matrix, i: u32) -> Matrix {
        a.map(|x| self.sigma_pow(x, i))
    }

    pub fn sigma_poly(&self, f: &HomogPoly) -> HomogPoly {
        f.map_coefficients(&self.ext, |c| Ok(self.sigma(c)))
            .unwrap()
    }

    pub fn embed(&self, a: &FieldElem) -> FieldElem {
        self.ext.element(a.index().expect("finite")).unwrap()
    }

    /// The base-field element equal to `a`, if `a` is Frobenius-fixed.
    pub fn restrict(&self, a: &FieldElem) -> Option<FieldElem> {
        a.in_prime_field()
            .then(|| self.base.element(a.index().unwrap()).unwrap())
    }

    pub fn embed_poly(&self, f: &HomogPoly) -> HomogPoly {
        f.map_coefficients(&self.ext, |c| Ok(self.embed(c)))
            .unwrap()
    }

    pub fn restrict_poly(&self, f: &HomogPoly) -> Result<HomogPoly> {
        f.map_coefficients(&self.base, |c| {
            self.restrict(c).ok_or(Error::NotDefinedOverBase)
        })
    }
}

/// The images `alpha_{sigma^0}, ..., alpha_{sigma^(m-1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    images: Vec<Matrix>,
}

impl Cocycle {
    /// Extends `alpha_sigma` by `alpha_{sigma^(i+1)} = alpha_sigma sigma(alpha_{sigma^i})`.
    pub fn from_generator(ctx: &GaloisContext, alpha: &Matrix) -> Result<Cocycle> {
        let mut images = vec![Matrix::identity(&ctx.ext, alpha.rows())];
        for i in 1..ctx.m as usize {
            let next = alpha.mul(&ctx.sigma_matrix(&images[i - 1]))?;
            images.push(next);
        }
        Ok(Cocycle { images })
    }

    /// Unchecked constructor.
    pub fn from_images(images: Vec<Matrix>) -> Cocycle {
        Cocycle { images }
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn generator(&self) -> &Matrix {
        &self.images[1 % self.images.len()]
    }

    pub fn is_trivial(&self) -> bool {
        self.images
            .iter()
            .all(|a| *a == Matrix::identity(a.field(), a.rows()))
    }

    /// `alpha_{sigma^(i+j)} = alpha_{sigma^i} sigma^i(alpha_{sigma^j})` for all
    /// `i, j`, exponents mod `m`.
    pub fn check(&self, ctx: &GaloisContext) -> Result<()> {
        let m = ctx.m as usize;
        if self.images.len() != m {
            return Err(Error::NotCocycle);
        }
        for i in 0..m {
            for j in 0..m {
                let rhs = self.images[i].mul(&ctx.sigma_pow_matrix(&self.images[j], i as u32))?;
                if self.images[(i + j) % m] != rhs {
                    return Err(Error::NotCocycle);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable {
        /// Basis `t_1..t_r` of the span, as rows: the first independent input forms.
        basis: Matrix,
        /// `A` with `sigma(t) = A t`.
        action: Matrix,
        cocycle: Cocycle,
    },
    Unstable,
}

fn coefficient_matrix(ctx: &GaloisContext, forms: &[HomogPoly]) -> Result<Matrix> {
    let reduced = dedupe_linear(forms)?;
    ctx.ext.ensure_same(reduced[0].field())?;
    Matrix::from_rows(
        &ctx.ext,
        reduced
            .iter()
            .map(|h| h.linear_coefficients().unwrap())
            .collect(),
    )
}

/// Whether Frobenius maps the span of the forms to itself; if so, the
/// cocycle `alpha_sigma = A^-1` where `sigma(t) = A t` on a basis `t` made of
/// the first independent input forms.
pub fn frobenius_stability_check(ctx: &GaloisContext, forms: &[HomogPoly]) -> Result<Stability> {
    let all = coefficient_matrix(ctx, forms)?;
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for i in 0..all.rows() {
        let mut trial = rows.clone();
        trial.push(all.row(i));
        if rank_of(&ctx.ext, &trial)? == trial.len() {
            rows = trial;
        }
    }
    let r = rows.len();
    let basis = Matrix::from_rows(&ctx.ext, rows)?;
    let pivots = basis.rref().pivots;
    let square = Matrix::from_columns(
        &ctx.ext,
        &pivots.iter().map(|&j| basis.col(j)).collect::<Vec<_>>(),
        r,
    )?;
    let solve = square.invert()?;
    let mut action = Matrix::zeros(&ctx.ext, r, r);
    for i in 0..r {
        let image: Vec<FieldElem> = basis.row(i).iter().map(|c| ctx.sigma(c)).collect();
        let at_pivots: Vec<FieldElem> = pivots.iter().map(|&j| image[j].clone()).collect();
        let coeffs = solve.transpose().mul_vec(&at_pivots)?;
        if basis.transpose().mul_vec(&coeffs)? != image {
            return Ok(Stability::Unstable);
        }
        for (j, c) in coeffs.into_iter().enumerate() {
            action.set(i, j, c);
        }
    }
    let alpha = action.invert()?;
    let cocycle = Cocycle::from_generator(ctx, &alpha)?;
    Ok(Stability::Stable {
        basis,
        action,
        cocycle,
    })
}

/// `B` with `alpha_sigma sigma(B) = B`, by averaging
/// `B = sum_i alpha_{sigma^i} sigma^i(C)` over random `C`.
pub fn h90_trivialize(ctx: &GaloisContext, c: &Cocycle, seed: u64) -> Result<Matrix> {
    c.check(ctx)?;
    let r = c.images[0].rows();
    if c.is_trivial() {
        return Ok(Matrix::identity(&ctx.ext, r));
    }
    let q = ctx.ext.order().unwrap() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = c.generator();
    for _ in 0..H90_RETRIES {
        let mut cm = Matrix::zeros(&ctx.ext, r, r);
        for i in 0..r {
            for j in 0..r {
                cm.set(i, j, ctx.ext.element(rng.gen_range(0..q)).unwrap());
            }
        }
        let mut b = Matrix::zeros(&ctx.ext, r, r);
        for (i, a) in c.images.iter().enumerate() {
            let term = a.mul(&ctx.sigma_pow_matrix(&cm, i as u32))?;
            b = add(&b, &term);
        }
        if b.invert().is_err() {
            continue;
        }
        if alpha.mul(&ctx.sigma_matrix(&b))? != b {
            return Err(Error::Defect(
                "averaged matrix does not trivialize the cocycle".into(),
            ));
        }
        return Ok(b);
    }
    Err(Error::RetryExhausted {
        tries: H90_RETRIES,
        seed,
    })
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j) + b.get(i, j));
        }
    }
    out
}

/// Basis of `V ∩ F_p^(n+1)` for the span `V` of the rows of `basis`,
/// found by solving the membership equations coordinatewise over `F_p`.
pub fn fixed_point_basis(ctx: &GaloisContext, basis: &Matrix) -> Result<Vec<Vec<FieldElem>>> {
    let dim = basis.cols();
    let annihilator = basis.nullspace();
    let m = ctx.m as usize;
    let mut rows = Vec::new();
    for k in &annihilator {
        for c in 0..m {
            rows.push(
                k.iter()
                    .map(|e| {
                        let d = e.coordinates().unwrap();
                        ctx.base.from_i64(d.get(c).copied().unwrap_or(0) as i64)
                    })
                    .collect(),
            );
        }
    }
    if rows.is_empty() {
        let id = Matrix::identity(&ctx.base, dim);
        return Ok((0..dim).map(|i| id.row(i)).collect());
    }
    Ok(Matrix::from_rows(&ctx.base, rows)?.nullspace())
}

fn echelon(field: &Field, rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
    let r = Matrix::from_rows(field, rows)?.rref();
    Matrix::from_rows(field, (0..r.rank).map(|i| r.matrix.row(i)).collect())
}

/// A basis over the base field of the span of the forms, in reduced
/// echelon form.
pub fn descend_subspace(
    ctx: &GaloisContext,
    forms: &[HomogPoly],
    seed: u64,
) -> Result<Vec<HomogPoly>> {
    let Stability::Stable { basis, cocycle, .. } = frobenius_stability_check(ctx, forms)? else {
        return Err(Error::Unstable);
    };
    let b = h90_trivialize(ctx, &cocycle, seed)?;
    let moved = b.invert()?.mul(&basis)?;
    let mut rows = Vec::new();
    for i in 0..moved.rows() {
        let row: Option<Vec<FieldElem>> = moved.row(i).iter().map(|c| ctx.restrict(c)).collect();
        rows.push(row.ok_or_else(|| {
            Error::Defect("descended basis has coefficients outside the base field".into())
        })?);
    }
    let descended = echelon(&ctx.base, rows)?;
    let oracle = echelon(&ctx.base, fixed_point_basis(ctx, &basis)?)?;
    if descended != oracle {
        return Err(Error::Defect(
            "descended basis disagrees with the fixed-point solver".into(),
        ));
    }
    let forms = (0..descended.rows())
        .map(|i| HomogPoly::linear(&ctx.base, &descended.row(i)))
        .collect();
    Ok(forms)
}

/// Class of `X = V(h_1 ... h_d)` over the base field, for linear forms over
/// the extension whose product is defined over the base.
pub fn class_of_descended_arrangement(
    ctx: &GaloisContext,
    forms: &[HomogPoly],
    opts: &Options,
) -> Result<StratResult> {
    let reduced = dedupe_linear(forms)?;
    ctx.ext.ensure_same(reduced[0].field())?;
    let nv = reduced[0].nvars();
    let n = nv as i64 - 1;
    let mut product = HomogPoly::constant(&ctx.ext.one(), nv);
    for h in &reduced {
        product = product.multiply(h)?;
    }
    let f = ctx.restrict_poly(&product.monic())?;
    let descended = descend_subspace(ctx, &reduced, opts.seed)?;
    let basis: Vec<Vec<FieldElem>> = descended
        .iter()
        .map(|h| h.linear_coefficients().unwrap())
        .collect();
    let r = basis.len();
    let t = extend_to_basis(&ctx.base, &basis, nv)?.transpose();
    let g = f.linear_substitute(&t.invert()?)?;
    let z = g.truncate_variables(r).map_err(|_| {
        Error::Defect(format!(
            "{g} is not a polynomial in the first {r} coordinates"
        ))
    })?;

    let mut trace = Trace::new();
    let gens: Vec<String> = descended.iter().map(|h| h.to_string()).collect();
    trace.push(
        "descent.h90",
        format!(
            "span of the forms is Frobenius-stable; Hilbert 90 gives the base-field basis {{{}}}",
            gens.join(", ")
        ),
        0,
        Check::None,
    );
    trace.identity(
        "descent.coordinates",
        format!("the descended span becomes the first {r} coordinates: {f} becomes {g}"),
        0,
        vec![CountTerm::locus(1, 0, CountQuery::hypersurface(&f))],
        vec![CountTerm::locus(1, 0, CountQuery::hypersurface(&g))],
    );
    let vertex = n - r as i64;
    let mut rhs = Identity::projective_terms(vertex, 1);
    rhs.push(CountTerm::locus(
        1,
        (vertex + 1) as u32,
        CountQuery::hypersurface(&z),
    ));
    trace.identity(
        "descent.fibration",
        format!(
            "(Y/G) = P^{vertex} plus an A^{} bundle over Z = V({z}) in P^{}",
            vertex + 1,
            r as i64 - 1
        ),
        0,
        vec![CountTerm::locus(1, 0, CountQuery::hypersurface(&g))],
        rhs,
    );
    let atom = Atom::Variety(VarietyAtom::new(
        format!("V({z}) in P^{}", r - 1),
        r - 1,
        vec![z],
    ));
    let class = projective_space(vertex).add(&ClassExpr::atom(atom, (vertex + 1) as u32));
    let mut out = StratResult::new(class, trace, CountQuery::hypersurface(&f));
    out.hypothesis("product defined over the base field", true);
    out.hypothesis("span Frobenius-stable", true);
    out.hypothesis("alpha_sigma * sigma(B) = B", true);
    out.hypothesis("(Y/G)(k) nonempty, so X(k) nonempty", vertex >= 0);
    out.degree_hypothesis(reduced.len(), n as usize);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_points, DEFAULT_BUDGET};
    use crate::kclass::Residue;
    use crate::poly::parse_poly;
    use crate::strat::verify;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn f9() -> GaloisContext {
        GaloisContext::build(3, 2).unwrap()
    }

    fn forms(ctx: &GaloisContext, srcs: &[&str], nv: usize) -> Vec<HomogPoly> {
        srcs.iter()
            .map(|s| parse_poly(s, ctx.ext(), nv).unwrap())
            .collect()
    }

    #[test]
    fn conjugate_pair_over_f9() {
        let ctx = f9();
        let o = Options::default();
        for (nv, expected) in [(3, 1), (4, 4)] {
            let r = class_of_descended_arrangement(
                &ctx,
                &forms(&ctx, &["x0 + t*x1", "x0 - t*x1"], nv),
                &o,
            )
            .unwrap();
            assert_eq!(r.class.count_measure(3, DEFAULT_BUDGET).unwrap(), expected);
            assert_eq!(
                count_points(&r.input, DEFAULT_BUDGET).unwrap(),
                expected as u64
            );
            assert_eq!(r.residue, Residue::Value(1));
            assert!(verify(&r, DEFAULT_BUDGET).unwrap().passed());
        }
        let r =
            class_of_descended_arrangement(&ctx, &forms(&ctx, &["x0 + t*x1", "x0 - t*x1"], 3), &o)
                .unwrap();
        assert_eq!(r.class.to_string(), "1 + L*[V(x0^2 + x1^2) in P^1]");
    }

    #[test]
    fn swap_cocycle() {
        let ctx = f9();
        let pair = forms(&ctx, &["x0 + t*x1", "x0 - t*x1"], 3);
        let Stability::Stable {
            action, cocycle, ..
        } = frobenius_stability_check(&ctx, &pair).unwrap()
        else {
            panic!("conjugate pair must be stable");
        };
        let swap = Matrix::from_ints(ctx.ext(), &[&[0, 1], &[1, 0]]);
        assert_eq!(action, swap);
        assert_eq!(cocycle.generator(), &swap);
        assert!(cocycle.check(&ctx).is_ok());
        let b = h90_trivialize(&ctx, &cocycle, 7).unwrap();
        assert_eq!(cocycle.generator().mul(&ctx.sigma_matrix(&b)).unwrap(), b);

        let rational = forms(&ctx, &["x0", "x1"], 3);
        let Stability::Stable { cocycle, .. } = frobenius_stability_check(&ctx, &rational).unwrap()
        else {
            panic!("rational forms must be stable");
        };
        assert!(cocycle.is_trivial());
        assert_eq!(
            h90_trivialize(&ctx, &cocycle, 0).unwrap(),
            Matrix::identity(ctx.ext(), 2)
        );
    }

    #[test]
    fn frobenius_has_order_m() {
        for (p, m) in [(3, 2), (5, 2), (3, 3)] {
            let ctx = GaloisContext::build(p, m).unwrap();
            for a in ctx.ext().elements().unwrap() {
                let back = (0..m).fold(a.clone(), |x, _| ctx.sigma(&x));
                assert_eq!(back, a);
                assert_eq!(ctx.sigma(&a) == a, a.in_prime_field());
            }
        }
    }

    #[test]
    fn descended_span() {
        let ctx = f9();
        let d = descend_subspace(&ctx, &forms(&ctx, &["x0 + t*x1", "x0 - t*x1"], 3), 0).unwrap();
        let s: Vec<String> = d.iter().map(|h| h.to_string()).collect();
        assert_eq!(s, ["x0", "x1"]);
        let d = descend_subspace(&ctx, &forms(&ctx, &["x0", "x2"], 3), 0).unwrap();
        let s: Vec<String> = d.iter().map(|h| h.to_string()).collect();
        assert_eq!(s, ["x0", "x2"]);
    }

    #[test]
    fn unstable_and_undefined() {
        let ctx = f9();
        let single = forms(&ctx, &["x0 + t*x1"], 3);
        assert_eq!(
            frobenius_stability_check(&ctx, &single).unwrap(),
            Stability::Unstable
        );
        assert_eq!(
            descend_subspace(&ctx, &single, 0).unwrap_err(),
            Error::Unstable
        );
        assert_eq!(
            class_of_descended_arrangement(&ctx, &single, &Options::default()).unwrap_err(),
            Error::NotDefinedOverBase
        );
    }

    #[test]
    fn cocycle_checks() {
        let ctx = f9();
        let t = ctx.ext().element(3).unwrap();
        let c = Cocycle::from_generator(&ctx, &Matrix::diagonal(ctx.ext(), &[t])).unwrap();
        assert!(c.check(&ctx).is_ok());
        let one_plus_t = ctx.ext().element(4).unwrap();
        assert!(!one_plus_t.pow(4).is_one());
        let broken = Cocycle::from_images(vec![
            Matrix::identity(ctx.ext(), 1),
            Matrix::diagonal(ctx.ext(), &[one_plus_t]),
        ]);
        assert_eq!(broken.check(&ctx).unwrap_err(), Error::NotCocycle);
        assert_eq!(
            h90_trivialize(&ctx, &broken, 0).unwrap_err(),
            Error::NotCocycle
        );
    }

    #[test]
    fn context_rejects_bad_fields() {
        let f9 = Field::extension(3, 2).unwrap();
        assert!(GaloisContext::new(&f9, &f9).is_err());
        assert!(GaloisContext::new(&Field::prime(5).unwrap(), &f9).is_err());
        assert!(GaloisContext::new(&Field::prime(3).unwrap(), &Field::rationals()).is_err());
    }

    fn scrambled(ctx: &GaloisContext, seed: u64, nv: usize) -> (Matrix, Vec<HomogPoly>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ctx.base().characteristic();
        let q = ctx.ext().order().unwrap() as u32;
        let r = rng.gen_range(1..=nv);
        let w = loop {
            let rows: Vec<Vec<FieldElem>> = (0..r)
                .map(|_| {
                    (0..nv)
                        .map(|_| ctx.base().element(rng.gen_range(0..p)).unwrap())
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(ctx.base(), rows).unwrap();
            if m.rank() == r {
                break m;
            }
        };
        let g = loop {
            let rows: Vec<Vec<FieldElem>> = (0..r)
                .map(|_| {
                    (0..r)
                        .map(|_| ctx.ext().element(rng.gen_range(0..q)).unwrap())
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(ctx.ext(), rows).unwrap();
            if m.rank() == r {
                break m;
            }
        };
        let lifted = w.map_to(ctx.ext(), |c| ctx.embed(c));
        let mixed = g.mul(&lifted).unwrap();
        let forms = (0..r)
            .map(|i| HomogPoly::linear(ctx.ext(), &mixed.row(i)))
            .collect();
        (
            echelon(ctx.base(), (0..r).map(|i| w.row(i)).collect()).unwrap(),
            forms,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn descent_recovers_base_span(seed in any::<u64>(), nv in 2usize..5, ext in 0usize..3) {
            let ctx = [(3, 2), (5, 2), (3, 3)][ext];
            let ctx = GaloisContext::build(ctx.0, ctx.1).unwrap();
            let (w, forms) = scrambled(&ctx, seed, nv);
            let d = descend_subspace(&ctx, &forms, seed).unwrap();
            let rows: Vec<Vec<FieldElem>> = d.iter().map(|h| h.linear_coefficients().unwrap()).collect();
            prop_assert_eq!(Matrix::from_rows(ctx.base(), rows).unwrap(), w);
        }

        #[test]
        fn h90_solves_coboundaries(seed in any::<u64>(), r in 1usize..4) {
            let ctx = f9();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b0 = loop {
                let rows: Vec<Vec<FieldElem>> = (0..r)
                    .map(|_| (0..r).map(|_| ctx.ext().element(rng.gen_range(0..9)).unwrap()).collect())
                    .collect();
                let m = Matrix::from_rows(ctx.ext(), rows).unwrap();
                if m.rank() == r {
                    break m;
                }
            };
            let alpha = b0.mul(&ctx.sigma_matrix(&b0).invert().unwrap()).unwrap();
            let c = Cocycle::from_generator(&ctx, &alpha).unwrap();
            prop_assert!(c.check(&ctx).is_ok());
            let b = h90_trivialize(&ctx, &c, seed).unwrap();
            prop_assert_eq!(alpha.mul(&ctx.sigma_matrix(&b)).unwrap(), b);
        }
    }
}
