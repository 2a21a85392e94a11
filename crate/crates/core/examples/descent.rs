//! Galois descent of hyperplanes defined over F_9 down to F_3.

use k0var::descent::{
    class_of_descended_arrangement, descend_subspace, frobenius_stability_check, h90_trivialize,
    GaloisContext, Stability,
};
use k0var::strat::{verify, Options};
use k0var::{parse_poly, Error, Result};

fn main() -> Result<()> {
    let ctx = GaloisContext::build(3, 2)?;
    let forms = vec![
        parse_poly("x0 + t*x1", ctx.ext(), 4)?,
        parse_poly("x0 - t*x1", ctx.ext(), 4)?,
    ];
    let Stability::Stable { cocycle, .. } = frobenius_stability_check(&ctx, &forms)? else {
        return Err(Error::Unstable);
    };
    let b = h90_trivialize(&ctx, &cocycle, 0)?;
    println!("alpha_sigma = {:?}", cocycle.generator());
    println!("B = {b:?}");
    let basis = descend_subspace(&ctx, &forms, 0)?;
    let names: Vec<String> = basis.iter().map(|h| h.to_string()).collect();
    println!("descended basis: {}", names.join(", "));

    let r = class_of_descended_arrangement(&ctx, &forms, &Options::default())?;
    println!("[X] = {}", r.class);
    println!("checks pass: {}", verify(&r, 1 << 24)?.passed());

    let lone = [parse_poly("x0 + t*x1", ctx.ext(), 4)?];
    println!(
        "a single conjugate: {:?}",
        descend_subspace(&ctx, &lone, 0).unwrap_err()
    );
    Ok(())
}
