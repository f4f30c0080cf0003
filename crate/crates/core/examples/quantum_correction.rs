//! Invariant corrections of Wick powers of θ for one βγ pair.
//!
//! The printed cubic correction is checked in two readings of the cube: the
//! Wick power :θθθ: and the flat monomial -:βββγγγ:.

use freefield::commutant::DiagonalAction;
use freefield::expr::Context;
use freefield::selftest::OMEGA_3;
use freefield::Result;

fn main() -> Result<()> {
    let act = DiagonalAction::from_ints(&[&[1]])?;
    let ctx = Context::for_action(&act);
    for k in 2..=4 {
        println!(":theta^{k}: corrected = {}", act.quantum_correct(k)?);
    }

    let omega3 = ctx.state(OMEGA_3)?;
    let wick_cube = ctx.state(":theta[1] theta[1] theta[1]:")?;
    let flat_cube = ctx.state("-1*:beta1 beta1 beta1 gamma1 gamma1 gamma1:")?;
    for (name, cube) in [("Wick cube", wick_cube), ("flat cube", flat_cube)] {
        match act.obstruction(&(&cube + &omega3))? {
            None => println!("{name} + omega_3: invariant"),
            Some((_, n)) => println!("{name} + omega_3: fails at pole order {n}"),
        }
    }
    Ok(())
}
