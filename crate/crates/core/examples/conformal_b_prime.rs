use freefield::commutant::DiagonalAction;
use freefield::ope::verify_virasoro;
use freefield::{Result, Scalar};

fn main() -> Result<()> {
    let act = DiagonalAction::from_ints(&[&[1, -1]])?;
    for lam in [0, 1, 2] {
        let cs = act.conformal_b_prime(&[Scalar::from_int(lam)])?;
        println!("lambda = {lam}: c = {}, Virasoro {}", cs.central_charge, verify_virasoro(&cs.state, &cs.central_charge)?);
        for p in act.primary_report(&cs.state)? {
            println!("    {:<6} weight {}  primary {}  up to central terms {}", p.name, p.weight, p.strict, p.up_to_central);
        }
    }
    Ok(())
}
