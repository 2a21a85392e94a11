//! The union of two quadrics in P^4 over F_3.

use k0var::strat::{class_of_two_quadric_union, verify, Options};
use k0var::{parse_poly, Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let q1 = parse_poly("x0*x1 + x2^2 + x3^2 - x4^2", &f3, 5)?;
    let q2 = parse_poly("x0*x2 + x1*x3 + x4^2", &f3, 5)?;
    let r = class_of_two_quadric_union(&q1, &q2, &Options::default())?;
    println!("[X] = {}", r.class);
    println!("residue mod L: {}", r.residue);
    let v = verify(&r, 1 << 24)?;
    for (step, verdict) in r.trace.steps().iter().zip(&v.steps) {
        println!("{}{}: {verdict}", "  ".repeat(step.depth + 1), step.rule);
    }
    println!("master: {}", v.master);
    Ok(())
}
