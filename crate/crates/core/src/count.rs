//! Brute-force point counting on projective varieties over finite fields.
//!
//! Points of `P^n(F_q)` are enumerated through canonical representatives:
//! the first nonzero coordinate is 1. Representatives with leading index
//! `k` form a block of `q^(n-k)` tuples, ordered lexicographically with
//! `x_{k+1}` most significant and field elements in index order. Counting
//! splits blocks into disjoint ranges summed in parallel; enumeration is
//! sequential in that fixed order.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem, Finite};
use crate::poly::HomogPoly;

/// Default number of coordinate tuples a single count may touch.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const PAR_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chart {
    Zero,
    NonZero,
}

/// A locus `{x in P^n : g(x) = 0 for all generators, chart constraints hold}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountQuery {
    pub field: Field,
    pub ambient: usize,
    pub generators: Vec<HomogPoly>,
    pub constraints: Vec<(usize, Chart)>,
}

impl CountQuery {
    pub fn new(field: &Field, ambient: usize) -> CountQuery {
        CountQuery {
            field: field.clone(),
            ambient,
            generators: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn hypersurface(f: &HomogPoly) -> CountQuery {
        CountQuery::new(f.field(), f.nvars() - 1).with(f.clone())
    }

    pub fn with(mut self, g: HomogPoly) -> CountQuery {
        self.generators.push(g);
        self
    }

    pub fn with_all(mut self, gs: impl IntoIterator<Item = HomogPoly>) -> CountQuery {
        self.generators.extend(gs);
        self
    }

    pub fn chart(mut self, index: usize, chart: Chart) -> CountQuery {
        self.constraints.push((index, chart));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.generators {
            self.field.ensure_same(g.field())?;
            if g.nvars() != self.ambient + 1 {
                return Err(Error::Dimension(format!(
                    "generator {g} has {} variables, ambient P^{} needs {}",
                    g.nvars(),
                    self.ambient,
                    self.ambient + 1
                )));
            }
        }
        for &(i, _) in &self.constraints {
            if i > self.ambient {
                return Err(Error::VariableIndex {
                    index: i,
                    nvars: self.ambient + 1,
                });
            }
        }
        Ok(())
    }

    /// Human-readable description, e.g. `V(x0*x1, x2) & x0!=0 in P^3`.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let mut s = if gens.is_empty() {
            format!("P^{}", self.ambient)
        } else {
            format!("V({}) in P^{}", gens.join(", "), self.ambient)
        };
        for (i, c) in &self.constraints {
            s.push_str(&match c {
                Chart::Zero => format!(" & x{i}=0"),
                Chart::NonZero => format!(" & x{i}!=0"),
            });
        }
        s
    }
}

/// `#P^n(F_q)`; zero for negative `n`.
pub fn projective_count(q: u64, n: i64) -> u128 {
    if n < 0 {
        0
    } else {
        ((q as u128).pow(n as u32 + 1) - 1) / (q as u128 - 1)
    }
}

/// Coefficient index and `(variable, exponent)` factors of one term.
type CompiledTerm = (u32, Vec<(usize, u32)>);

struct Compiled<'a> {
    fin: &'a Finite,
    polys: Vec<Vec<CompiledTerm>>,
    constraints: Vec<(usize, Chart)>,
}

impl<'a> Compiled<'a> {
    fn new(query: &'a CountQuery) -> Result<Compiled<'a>> {
        query.validate()?;
        let fin = query.field.require_finite()?;
        let polys = query
            .generators
            .iter()
            .map(|g| {
                g.terms()
                    .map(|(e, c)| {
                        let vars = e
                            .iter()
                            .enumerate()
                            .filter(|(_, &k)| k > 0)
                            .map(|(i, &k)| (i, k))
                            .collect();
                        (c.index().unwrap(), vars)
                    })
                    .collect()
            })
            .collect();
        Ok(Compiled {
            fin,
            polys,
            constraints: query.constraints.clone(),
        })
    }

    #[inline]
    fn accepts(&self, pt: &[u32]) -> bool {
        for &(i, c) in &self.constraints {
            let zero = pt[i] == 0;
            if zero != (c == Chart::Zero) {
                return false;
            }
        }
        self.polys.iter().all(|poly| {
            let mut acc = 0u32;
            for (c, vars) in poly {
                let mut t = *c;
                for &(i, k) in vars {
                    let x = pt[i];
                    if x == 0 {
                        t = 0;
                        break;
                    }
                    t = self
                        .fin
                        .mul(t, if k == 1 { x } else { self.fin.pow(x, k as u64) });
                }
                acc = self.fin.add(acc, t);
            }
            acc == 0
        })
    }
}

fn check_budget(q: u64, ambient: usize, budget: u64) -> Result<()> {
    let needed = (q as u128).pow(ambient as u32 + 1);
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Writes the representative with leading index `lead` and block ordinal
/// `idx` into `pt`.
#[inline]
fn fill_point(pt: &mut [u32], lead: usize, mut idx: u64, q: u64) {
    for x in pt[..lead].iter_mut() {
        *x = 0;
    }
    pt[lead] = 1;
    for x in pt[lead + 1..].iter_mut().rev() {
        *x = (idx % q) as u32;
        idx /= q;
    }
}

/// Number of points of `P^n(F_q)` on the locus.
pub fn count_points(query: &CountQuery, budget: u64) -> Result<u64> {
    let compiled = Compiled::new(query)?;
    let q = compiled.fin.q as u64;
    let n = query.ambient;
    check_budget(q, n, budget)?;
    let mut ranges = Vec::new();
    for lead in 0..=n {
        let size = q.pow((n - lead) as u32);
        let mut start = 0;
        while start < size {
            let end = (start + PAR_CHUNK).min(size);
            ranges.push((lead, start, end));
            start = end;
        }
    }
    let count_range = |&(lead, start, end): &(usize, u64, u64)| -> u64 {
        let mut pt = vec![0u32; n + 1];
        (start..end)
            .filter(|&idx| {
                fill_point(&mut pt, lead, idx, q);
                compiled.accepts(&pt)
            })
            .count() as u64
    };
    let total = if ranges.len() > 1 {
        ranges.par_iter().map(count_range).sum()
    } else {
        ranges.iter().map(count_range).sum()
    };
    Ok(total)
}

/// Sequential count, used to cross-check the parallel path.
pub fn count_points_sequential(query: &CountQuery, budget: u64) -> Result<u64> {
    Ok(enumerate_points(query, budget)?.count() as u64)
}

/// Lazily enumerates the points of the locus in canonical order.
pub struct PointIter<'a> {
    compiled: Compiled<'a>,
    field: &'a Field,
    q: u64,
    lead: usize,
    idx: u64,
    buf: Vec<u32>,
}

impl<'a> Iterator for PointIter<'a> {
    type Item = Vec<FieldElem>;

    fn next(&mut self) -> Option<Vec<FieldElem>> {
        let n = self.buf.len() - 1;
        while self.lead <= n {
            let size = self.q.pow((n - self.lead) as u32);
            while self.idx < size {
                let idx = self.idx;
                self.idx += 1;
                fill_point(&mut self.buf, self.lead, idx, self.q);
                if self.compiled.accepts(&self.buf) {
                    return Some(
                        self.buf
                            .iter()
                            .map(|&v| self.field.element(v).unwrap())
                            .collect(),
                    );
                }
            }
            self.lead += 1;
            self.idx = 0;
        }
        None
    }
}

pub fn enumerate_points(query: &CountQuery, budget: u64) -> Result<PointIter<'_>> {
    let compiled = Compiled::new(query)?;
    let q = compiled.fin.q as u64;
    check_budget(q, query.ambient, budget)?;
    Ok(PointIter {
        compiled,
        field: &query.field,
        q,
        lead: 0,
        idx: 0,
        buf: vec![0; query.ambient + 1],
    })
}

/// First point of the locus in canonical order.
pub fn first_point(query: &CountQuery, budget: u64) -> Result<Option<Vec<FieldElem>>> {
    Ok(enumerate_points(query, budget)?.next())
}

/// Primitive integer vectors of height `1..=max_height` in `nvars`
/// coordinates, first nonzero coordinate positive, ordered by height and
/// then lexicographically. These are the candidate rational points.
pub fn height_search(nvars: usize, max_height: u32) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_height as i64).flat_map(move |h| {
        let side = (2 * h + 1) as u64;
        let total = side.pow(nvars as u32);
        (0..total).filter_map(move |mut idx| {
            let mut v = vec![0i64; nvars];
            for x in v.iter_mut().rev() {
                *x = (idx % side) as i64 - h;
                idx /= side;
            }
            let max = v.iter().map(|x| x.abs()).max().unwrap_or(0);
            if max != h {
                return None;
            }
            let lead = v.iter().find(|&&x| x != 0)?;
            if *lead < 0 {
                return None;
            }
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            (g == 1).then_some(v)
        })
    })
}

/// Number of candidates [`height_search`] visits up to `max_height`.
pub fn height_search_cost(nvars: usize, max_height: u32) -> u128 {
    (1..=max_height as u128)
        .map(|h| (2 * h + 1).pow(nvars as u32))
        .sum()
}

/// Integer-scaled copy of a rational form for fast evaluation at integer
/// points. `None` if a coefficient does not fit in `i64` after clearing
/// denominators.
struct IntegerForm {
    terms: Vec<(i128, Vec<u32>)>,
}

impl IntegerForm {
    fn new(g: &HomogPoly) -> Option<IntegerForm> {
        let lcm = g.terms().fold(BigInt::from(1), |acc, (_, c)| {
            acc.lcm(c.as_rational().expect("rational").denom())
        });
        let terms = g
            .terms()
            .map(|(e, c)| {
                let r = c.as_rational().unwrap();
                let v = r.numer() * (&lcm / r.denom());
                Some((i64::try_from(v).ok()? as i128, e.clone()))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntegerForm { terms })
    }

    fn vanishes(&self, pt: &[i64]) -> Option<bool> {
        let mut acc: i128 = 0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (&x, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(x as i128)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc == 0)
    }
}

/// First common zero over Q of the forms among the candidates of
/// [`height_search`], normalized so the first nonzero coordinate is 1.
pub fn first_rational_zero(
    field: &Field,
    nvars: usize,
    forms: &[HomogPoly],
    max_height: u32,
) -> Result<Option<Vec<FieldElem>>> {
    if field.is_finite() {
        return Err(Error::Precondition(
            "rational search over a finite field".into(),
        ));
    }
    let compiled: Vec<Option<IntegerForm>> = forms.iter().map(IntegerForm::new).collect();
    let exact = |g: &HomogPoly, pt: &[FieldElem]| g.evaluate(pt).map(|v| v.is_zero());
    for cand in height_search(nvars, max_height) {
        let mut ok = true;
        for (g, c) in forms.iter().zip(&compiled) {
            let fast = c.as_ref().and_then(|c| c.vanishes(&cand));
            let hit = match fast {
                Some(b) => b,
                None => exact(g, &to_elems(field, &cand))?,
            };
            if !hit {
                ok = false;
                break;
            }
        }
        if ok {
            let mut pt = to_elems(field, &cand);
            crate::linalg::normalize_leading(&mut pt);
            return Ok(Some(pt));
        }
    }
    Ok(None)
}

fn to_elems(field: &Field, v: &[i64]) -> Vec<FieldElem> {
    v.iter().map(|&x| field.from_i64(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn hyp(src: &str, field: &Field, n: usize) -> CountQuery {
        CountQuery::hypersurface(&parse_poly(src, field, n + 1).unwrap())
    }

    #[test]
    fn count_examples() {
        let f3 = f(3);
        assert_eq!(
            count_points(&CountQuery::new(&f3, 2), DEFAULT_BUDGET).unwrap(),
            13
        );
        assert_eq!(count_points(&hyp("x0", &f3, 2), DEFAULT_BUDGET).unwrap(), 4);
        assert_eq!(
            count_points(&hyp("x0^2+x1^2", &f3, 1), DEFAULT_BUDGET).unwrap(),
            0
        );
        let f5 = f(5);
        assert_eq!(
            count_points(&hyp("x0^2+x1^2", &f5, 1), DEFAULT_BUDGET).unwrap(),
            2
        );
    }

    #[test]
    fn minus_one_is_square_iff_q_is_1_mod_4() {
        for p in [3u32, 5, 7, 11, 13] {
            let field = f(p);
            let c = count_points(&hyp("x0^2+x1^2", &field, 1), DEFAULT_BUDGET).unwrap();
            assert_eq!(c, if p % 4 == 1 { 2 } else { 0 }, "p = {p}");
        }
    }

    #[test]
    fn enumerate_examples() {
        let f3 = f(3);
        let q = hyp("x0*x1 - x2*x3", &f3, 3);
        let pts: Vec<_> = enumerate_points(&q, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(pts.len(), 16);
        assert_eq!(pts[0], vec![f3.one(), f3.zero(), f3.zero(), f3.zero()]);

        let empty = CountQuery::new(&f3, 1)
            .with(parse_poly("x0", &f3, 2).unwrap())
            .with(parse_poly("x1", &f3, 2).unwrap());
        assert_eq!(enumerate_points(&empty, DEFAULT_BUDGET).unwrap().count(), 0);

        let cross = hyp("x0*x1", &f3, 2);
        assert_eq!(enumerate_points(&cross, DEFAULT_BUDGET).unwrap().count(), 7);
    }

    #[test]
    fn budget_and_field_errors() {
        let f7 = f(7);
        let q = CountQuery::new(&f7, 4);
        assert!(matches!(
            count_points(&q, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        let rat = CountQuery::new(&Field::rationals(), 2);
        assert_eq!(count_points(&rat, DEFAULT_BUDGET), Err(Error::NotFinite));
    }

    #[test]
    fn extension_field_counts() {
        let f9 = Field::extension(3, 2).unwrap();
        assert_eq!(
            count_points(&CountQuery::new(&f9, 2), DEFAULT_BUDGET).unwrap(),
            91
        );
        // x0^2 + x1^2 splits over F_9
        assert_eq!(
            count_points(&hyp("x0^2+x1^2", &f9, 1), DEFAULT_BUDGET).unwrap(),
            2
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let f7 = f(7);
        let q = hyp("x0^3 + 2*x1*x2*x3 - x4^3 + x0*x1*x4", &f7, 4).chart(2, Chart::NonZero);
        assert_eq!(
            count_points(&q, DEFAULT_BUDGET).unwrap(),
            count_points_sequential(&q, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn height_search_is_primitive_and_ordered() {
        let pts: Vec<_> = height_search(2, 2).collect();
        assert_eq!(pts[0], vec![0, 1]);
        assert!(pts.contains(&vec![1, -2]));
        assert!(!pts.contains(&vec![2, 2]));
        assert!(!pts.contains(&vec![-1, 1]));
        // 4 of height 1, 4 of height 2
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn rational_zero_search() {
        let q = Field::rationals();
        let g = parse_poly("x0^2 + x1^2 - 2*x2^2", &q, 3).unwrap();
        let pt = first_rational_zero(&q, 3, std::slice::from_ref(&g), 3)
            .unwrap()
            .unwrap();
        assert!(g.evaluate(&pt).unwrap().is_zero());
        let anis = parse_poly("x0^2 + x1^2 + x2^2", &q, 3).unwrap();
        assert_eq!(first_rational_zero(&q, 3, &[anis], 4).unwrap(), None);
        let half = parse_poly("1/2*x0 - x1", &q, 2).unwrap();
        let pt = first_rational_zero(&q, 2, &[half], 3).unwrap().unwrap();
        assert_eq!(pt[1].to_string(), "1/2");
    }

    #[test]
    fn projective_counts() {
        assert_eq!(projective_count(3, 3), 40);
        assert_eq!(projective_count(5, 0), 1);
        assert_eq!(projective_count(5, -1), 0);
    }
}
