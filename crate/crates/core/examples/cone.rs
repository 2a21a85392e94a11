//! A cone over a plane cubic: [X] = 1 + L*[Z].

use k0var::count::{count_points, CountQuery, DEFAULT_BUDGET};
use k0var::strat::{class_of_cone, verify, Options};
use k0var::{parse_poly, Field, Result};

fn main() -> Result<()> {
    let f5 = Field::prime(5)?;
    let z = parse_poly("x1^2*x2 - x0^3 - x0*x2^2 - x2^3", &f5, 3)?;
    let r = class_of_cone(std::slice::from_ref(&z), &Options::default())?;
    let nz = count_points(&CountQuery::hypersurface(&z), DEFAULT_BUDGET)?;
    let nx = count_points(&r.input, DEFAULT_BUDGET)?;
    println!("[X] = {}", r.class);
    println!("#Z = {nz}, #X = {nx}, 1 + 5*#Z = {}", 1 + 5 * nz);
    println!("checks pass: {}", verify(&r, DEFAULT_BUDGET)?.passed());
    Ok(())
}
