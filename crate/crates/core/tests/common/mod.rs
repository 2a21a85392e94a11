#![allow(dead_code)]

use k0var::{Field, FieldElem, HomogPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `#V(polys)(F_q)` in `P^n`, counted directly: every nonzero tuple of
/// `F_q^(n+1)` is tested and the total divided by `q - 1`.
pub fn brute_count(field: &Field, n: usize, polys: &[HomogPoly]) -> u64 {
    let elems: Vec<FieldElem> = field.elements().unwrap().collect();
    let q = elems.len();
    let nv = n + 1;
    let mut idx = vec![0usize; nv];
    let mut hits = 0u64;
    loop {
        if idx.iter().any(|&i| i != 0) {
            let pt: Vec<FieldElem> = idx.iter().map(|&i| elems[i].clone()).collect();
            if polys.iter().all(|f| f.evaluate(&pt).unwrap().is_zero()) {
                hits += 1;
            }
        }
        let mut k = 0;
        loop {
            if k == nv {
                assert_eq!(hits % (q as u64 - 1), 0);
                return hits / (q as u64 - 1);
            }
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `(q^(n+1) - 1) / (q - 1)` by summing powers.
pub fn pn_count(q: u64, n: i64) -> u64 {
    (0..=n).map(|i| q.pow(i as u32)).sum()
}

pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in (0..=degree).rev() {
        for mut rest in monomials(nvars - 1, degree - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

pub fn random_elem(field: &Field, rng: &mut ChaCha8Rng) -> FieldElem {
    match field.order() {
        Some(q) => field.element(rng.gen_range(0..q as u32)).unwrap(),
        None => {
            let num = rng.gen_range(-4i64..=4);
            let den = rng.gen_range(1i64..=3);
            field
                .from_i64(num)
                .checked_div(&field.from_i64(den))
                .unwrap()
        }
    }
}

/// Dense random form; each coefficient is zero with probability `sparsity`.
pub fn random_form(
    field: &Field,
    nvars: usize,
    degree: u32,
    sparsity: f64,
    rng: &mut ChaCha8Rng,
) -> HomogPoly {
    let terms: Vec<(Vec<u32>, FieldElem)> = monomials(nvars, degree)
        .into_iter()
        .filter_map(|e| {
            if rng.gen_bool(sparsity) {
                None
            } else {
                Some((e, random_elem(field, rng)))
            }
        })
        .collect();
    HomogPoly::from_terms(field, nvars, degree, terms).unwrap()
}

pub fn random_nonzero_form(
    field: &Field,
    nvars: usize,
    degree: u32,
    sparsity: f64,
    rng: &mut ChaCha8Rng,
) -> HomogPoly {
    loop {
        let f = random_form(field, nvars, degree, sparsity, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn product(forms: &[HomogPoly]) -> HomogPoly {
    let mut f = HomogPoly::constant(&forms[0].field().one(), forms[0].nvars());
    for h in forms {
        f = f.multiply(h).unwrap();
    }
    f
}
