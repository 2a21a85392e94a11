//! Dense univariate polynomials over a prime field, coefficients stored low
//! degree first. Only what modulus construction and irreducibility testing
//! need.

pub(crate) type UniPoly = Vec<u64>;

pub(crate) fn trim(f: &mut UniPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn degree(f: &UniPoly) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn mul(f: &UniPoly, g: &UniPoly, p: u64) -> UniPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(f: &UniPoly, g: &UniPoly, p: u64) -> UniPoly {
    let n = f.len().max(g.len());
    let mut out: UniPoly = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn rem(f: &UniPoly, g: &UniPoly, p: u64) -> UniPoly {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[dg], p);
    let mut r = f.clone();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - dg;
        for (j, &b) in g.iter().enumerate().take(dg + 1) {
            r[shift + j] = (r[shift + j] + p - c * b % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn gcd(f: &UniPoly, g: &UniPoly, p: u64) -> UniPoly {
    let mut a = f.clone();
    let mut b = g.clone();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `base^exp mod modulus`.
pub(crate) fn pow_rem(base: &UniPoly, mut exp: u64, modulus: &UniPoly, p: u64) -> UniPoly {
    let mut acc: UniPoly = vec![1];
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        exp >>= 1;
    }
    acc
}

/// Ben-Or test: `f` of degree m is irreducible iff
/// gcd(f, t^(p^i) - t) = 1 for every i <= m/2.
pub(crate) fn is_irreducible(f: &UniPoly, p: u64) -> bool {
    let m = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let t: UniPoly = vec![0, 1];
    let mut frob = t.clone();
    for _ in 1..=m / 2 {
        frob = pow_rem(&frob, p, f, p);
        let g = gcd(f, &sub(&frob, &t, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
