use freefield::commutant::{Charge, DiagonalAction};
use freefield::Result;

/// Charge-0 invariants of one βγ pair under θ = -:γβ:, weight by weight.
fn main() -> Result<()> {
    let act = DiagonalAction::from_ints(&[&[1]])?;
    for tw in 0..=8u32 {
        let basis = act.graded_commutant_basis(tw, &Charge::Total(0))?;
        println!("weight {}/2: dimension {}", tw, basis.len());
        for b in basis {
            println!("    {b}");
        }
    }
    Ok(())
}
