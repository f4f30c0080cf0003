//! Parsing, printing and JSON for states, Weyl elements and polynomials.

use freefield::commutant::DiagonalAction;
use freefield::expr::Context;
use freefield::Result;

fn main() -> Result<()> {
    let act = DiagonalAction::from_ints(&[&[1, -1]])?;
    let ctx = Context::for_action(&act);
    for text in [
        "theta[1]",
        "phi[1] circ 1 phi[1]",
        ":beta1 :beta2 gamma1::",
        "(1/2 - sqrt6) * D^2 gamma2",
        "omega[1,1] circ 1 omega[-1,-1]",
    ] {
        let s = ctx.state(text)?;
        println!("{text:<32} = {s}");
    }
    let s = ctx.state("L_S[2] + omega[1,1]")?;
    println!("{}", serde_json::to_string(&s.to_json_value())?);

    let w = ctx.weyl("(x1 + d2)^2 e1")?;
    println!("weyl: {w}");
    let p = ctx.poly("(x1 - xp2)^3")?;
    println!("poly: {p}");

    if let Err(e) = ctx.state("beta1 + :gamma3 beta1:") {
        println!("error: {e}");
    }
    Ok(())
}
