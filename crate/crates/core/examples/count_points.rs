//! Brute-force point counts over finite fields.

use k0var::count::{count_points, projective_count, CountQuery, DEFAULT_BUDGET};
use k0var::{parse_poly, Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let conic = parse_poly("x0^2 + x1^2", &f3, 3)?;
    let q = CountQuery::hypersurface(&conic);
    println!(
        "#{} over F_3 = {}",
        q.describe(),
        count_points(&q, DEFAULT_BUDGET)?
    );

    let f9 = Field::extension(3, 2)?;
    let split = parse_poly("x0^2 + x1^2", &f9, 3)?;
    let q = CountQuery::hypersurface(&split);
    println!(
        "#{} over F_9 = {}",
        q.describe(),
        count_points(&q, DEFAULT_BUDGET)?
    );

    for n in 0..4 {
        println!("#P^{n}(F_5) = {}", projective_count(5, n));
    }
    Ok(())
}
