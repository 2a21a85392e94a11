//! Cubics with a rational singular point, including the nodal plane cubic.

use k0var::count::{count_points, DEFAULT_BUDGET};
use k0var::strat::{class_of_singular_cubic, find_singular_rational_point, verify, Options};
use k0var::{parse_poly, Field, Result};

fn main() -> Result<()> {
    let opts = Options::default();
    let f3 = Field::prime(3)?;
    let f = parse_poly("x3*(x0*x1 - x2^2) + x0^3", &f3, 4)?;
    let apex: Vec<_> = [0, 0, 0, 1].iter().map(|&c| f3.from_i64(c)).collect();
    let r = class_of_singular_cubic(&f, Some(&apex), &opts)?;
    println!("[V({f})] = {}", r.class);
    println!("#X(F_3) = {}", count_points(&r.input, DEFAULT_BUDGET)?);
    for step in r.trace.steps() {
        println!(
            "{}{}: {}",
            "  ".repeat(step.depth + 1),
            step.rule,
            step.description
        );
    }

    for p in [5, 7] {
        let field = Field::prime(p)?;
        let node = parse_poly("x1^2*x2 - x0^3 - x0^2*x2", &field, 3)?;
        let found = find_singular_rational_point(&node, &opts)?;
        let r = class_of_singular_cubic(&node, None, &opts)?;
        println!(
            "nodal cubic over F_{p}: singular point {:?}, class {}, residue {}, #X = {}, checks {}",
            found
                .point
                .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            r.class,
            r.residue,
            count_points(&r.input, DEFAULT_BUDGET)?,
            verify(&r, DEFAULT_BUDGET)?.passed()
        );
    }
    Ok(())
}
