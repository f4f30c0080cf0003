//! Singular OPE coefficients of a few standard fields.

use freefield::expr::Context;
use freefield::ope::ope_singular;
use freefield::{FreeAlgebraSpec, Result};

fn show(ctx: &Context, a: &str, b: &str) -> Result<()> {
    let (u, v) = (ctx.state(a)?, ctx.state(b)?);
    println!("{a}(z) {b}(w) ~");
    for (n, coeff) in ope_singular(&u, &v)? {
        println!("    {coeff} / (z-w)^{}", n + 1);
    }
    Ok(())
}

fn main() -> Result<()> {
    let alg = FreeAlgebraSpec::new(1, 1, vec!["3/2".parse()?]).shared();
    let ctx = Context::new(&alg);
    show(&ctx, "beta1", "gamma1")?;
    show(&ctx, "b1", "c1")?;
    show(&ctx, "j1", "j1")?;
    show(&ctx, "Lalpha", "gamma1")?;
    show(&ctx, "L_S[1]", "L_S[1]")?;
    Ok(())
}
