use freefield::expr::Context;
use freefield::transvect::{fmap, star_k, transvectant};
use freefield::{FreeAlgebraSpec, Result};

/// `[p, q]_{k+1}` on polynomials against `*_k` on states.
fn main() -> Result<()> {
    let ctx = Context::rank(2);
    let alg = FreeAlgebraSpec::beta_gamma(2);
    let p = ctx.poly("x1^2 xp2 - 3*x2 xp1")?;
    let q = ctx.poly("xp1^2 + x2 xp2^2")?;
    for k in -1..=2i64 {
        let t = transvectant(&p, &q, (k + 1) as u32)?;
        let lhs = fmap(&t, &alg)?;
        let rhs = star_k(&fmap(&p, &alg)?, &fmap(&q, &alg)?, k)?;
        println!("[p, q]_{} = {t}", k + 1);
        println!("    matches *_{k}: {}", lhs == rhs);
    }
    Ok(())
}
