//! Hyperplane arrangements, computed twice: by the cone decomposition and
//! by inclusion-exclusion over the intersection lattice.

use k0var::strat::{arrangement_inclusion_exclusion, class_of_arrangement, verify, Options};
use k0var::{parse_poly, Field, HomogPoly, Result};

fn forms(srcs: &[&str], field: &Field, nv: usize) -> Result<Vec<HomogPoly>> {
    srcs.iter().map(|s| parse_poly(s, field, nv)).collect()
}

fn main() -> Result<()> {
    let f5 = Field::prime(5)?;
    let hs = forms(&["x0", "x1", "x0 + x1", "x2 - 2*x3"], &f5, 5)?;
    let r = class_of_arrangement(&hs, &Options::default())?;
    println!("class:     {}", r.class);
    println!("lattice:   {}", arrangement_inclusion_exclusion(&hs)?);
    println!("checks:    {}", verify(&r, 1 << 24)?.passed());
    for step in r.trace.steps() {
        println!("  {}: {}", step.rule, step.description);
    }

    let q = Field::rationals();
    let hs = forms(&["x0 - 1/2*x1", "x1 + x2", "x0 + x2"], &q, 4)?;
    let r = class_of_arrangement(&hs, &Options::default())?;
    println!("over Q: {}  residue {}", r.class, r.residue);
    Ok(())
}
