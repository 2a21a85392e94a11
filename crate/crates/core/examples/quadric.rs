//! Classes of quadrics, checked against point counts.

use k0var::count::{count_points, DEFAULT_BUDGET};
use k0var::strat::{class_of_quadric, verify, Options};
use k0var::{parse_poly, Field, Result};

fn main() -> Result<()> {
    let opts = Options::default();
    let cases = [
        (3, 4, "x0*x1 - x2*x3"),
        (5, 3, "x0^2 + x1^2 + x2^2"),
        (7, 2, "x0^2 + x1^2"),
        (3, 5, "x0*x1 + x2^2 + x3^2"),
    ];
    for (p, nv, src) in cases {
        let field = Field::prime(p)?;
        let f = parse_poly(src, &field, nv)?;
        let r = class_of_quadric(&f, &opts)?;
        let count = count_points(&r.input, DEFAULT_BUDGET)?;
        let ok = verify(&r, DEFAULT_BUDGET)?.passed();
        println!(
            "F_{p}, P^{}: [V({f})] = {}  residue {}  #X = {count}  checks {}",
            nv - 1,
            r.class,
            r.residue,
            if ok { "pass" } else { "FAIL" }
        );
    }

    let q = Field::rationals();
    let f = parse_poly("x0^2 + x1^2 + x2^2", &q, 3)?;
    let r = class_of_quadric(&f, &opts)?;
    println!("over Q: [V({f})] = {}  residue {}", r.class, r.residue);
    Ok(())
}
